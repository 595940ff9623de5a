//! Text formats for TBoxes, ABoxes and ground queries. One statement per
//! line, `#` starts a comment.
//!
//! ```text
//! SubClassOf(Student, Or(Grad, Undergrad))
//! EquivalentClasses(F, Or(FR, FB, FG))
//! SubRole(S, Inv(R))
//! Transitive(R)
//! ```
//!
//! ABox lines are `Pred(a)` or `Pred(a,b)`, optionally ending in `.`.
//! Queries are comma-separated atoms with `?`-prefixed variables.

use thiserror::Error;

use crate::datalog::{ABox, Fact, GroundQuery};
use crate::logic::{name, Atom, Term};
use crate::ontology::{Axiom, Concept, Role, TBox};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor { src, pos: 0, line }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { line: self.line, col: self.src[..self.pos].chars().count() + 1, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let t = self.rest().trim_start();
        let comment = t.starts_with('#');
        self.pos = self.src.len() - t.len();
        if comment {
            self.pos = self.src.len();
        }
    }

    fn at_end(&mut self) -> bool {
        self.ws();
        self.rest().is_empty()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), SyntaxError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        self.ws();
        let r = self.rest();
        let len = r.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(r.len());
        (len > 0).then(|| &r[..len])
    }

    fn ident(&mut self) -> Result<&'a str, SyntaxError> {
        match self.peek_ident() {
            Some(id) => {
                self.pos += id.len();
                Ok(id)
            }
            None => self.err("expected identifier"),
        }
    }

    /// An identifier or a `"quoted"` string.
    fn constant(&mut self) -> Result<String, SyntaxError> {
        if !self.eat("\"") {
            return Ok(self.ident()?.to_string());
        }
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, e)) => out.push(e),
                    None => break,
                },
                c => out.push(c),
            }
        }
        self.pos = self.src.len();
        self.err("unterminated string")
    }

    fn role(&mut self) -> Result<Role, SyntaxError> {
        let id = self.ident()?;
        if id == "Inv" && self.eat("(") {
            let r = self.role()?;
            self.expect(")")?;
            return Ok(r.inv());
        }
        Ok(Role::atomic(id))
    }

    fn concepts(&mut self) -> Result<Vec<Concept>, SyntaxError> {
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            out.push(self.concept()?);
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn concept(&mut self) -> Result<Concept, SyntaxError> {
        self.ws();
        let start = self.pos;
        let id = self.ident()?;
        let call = self.eat("(");
        let c = match (id, call) {
            ("Top", false) => Concept::Top,
            ("Bottom", false) => Concept::Bottom,
            ("And", true) => Concept::And(self.concepts()?),
            ("Or", true) => Concept::Or(self.concepts()?),
            ("Not", true) => {
                let c = self.concept()?;
                self.expect(")")?;
                Concept::negate(c)
            }
            ("Some" | "All", true) => {
                let r = self.role()?;
                self.expect(",")?;
                let c = self.concept()?;
                self.expect(")")?;
                if id == "Some" {
                    Concept::some(r, c)
                } else {
                    Concept::all(r, c)
                }
            }
            ("HasSelf", true) => {
                let r = self.role()?;
                self.expect(")")?;
                Concept::HasSelf(r)
            }
            (_, true) => {
                self.pos = start;
                return self.err(format!("unknown concept constructor '{id}'"));
            }
            (_, false) => Concept::atomic(id),
        };
        Ok(c)
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }
}

fn statements(text: &str) -> impl Iterator<Item = Cursor<'_>> {
    text.lines().enumerate().map(|(i, l)| Cursor::new(l, i + 1)).filter_map(|mut c| (!c.at_end()).then_some(c))
}

pub fn parse_tbox(text: &str) -> Result<TBox, SyntaxError> {
    let mut t = TBox::new();
    for mut c in statements(text) {
        let start = c.pos;
        let kw = c.ident()?;
        c.expect("(")?;
        match kw {
            "SubClassOf" => {
                let l = c.concept()?;
                c.expect(",")?;
                let r = c.concept()?;
                c.expect(")")?;
                t.add(Axiom::SubClass(l, r));
            }
            "EquivalentClasses" => {
                let cs = c.concepts()?;
                if cs.len() < 2 {
                    return c.err("EquivalentClasses needs at least two concepts");
                }
                for w in cs.windows(2) {
                    t.add_equivalence(w[0].clone(), w[1].clone());
                }
            }
            "SubRole" | "SubObjectPropertyOf" => {
                let r = c.role()?;
                c.expect(",")?;
                let s = c.role()?;
                c.expect(")")?;
                t.add(Axiom::SubRole(r, s));
            }
            "Transitive" | "TransitiveObjectProperty" => {
                let r = c.role()?;
                c.expect(")")?;
                t.add(Axiom::Transitive(r));
            }
            _ => {
                c.pos = start;
                return c.err(format!("unknown construct '{kw}'"));
            }
        }
        c.finish()?;
    }
    Ok(t)
}

pub fn parse_abox(text: &str) -> Result<ABox, SyntaxError> {
    let mut a = ABox::new();
    for mut c in statements(text) {
        let pred = c.ident()?.to_string();
        c.expect("(")?;
        let mut args = vec![c.constant()?];
        while c.eat(",") {
            args.push(c.constant()?);
        }
        c.expect(")")?;
        if args.len() > 2 {
            return c.err("ABox facts are unary or binary");
        }
        c.eat(".");
        c.finish()?;
        a.insert(Fact { pred: name(&pred), args: args.iter().map(|s| name(s)).collect() });
    }
    Ok(a)
}

pub fn parse_query(text: &str) -> Result<GroundQuery, SyntaxError> {
    let mut atoms = Vec::new();
    let mut vars: Vec<String> = Vec::new();
    let mut seen_any = false;
    for mut c in statements(text) {
        if seen_any {
            return c.err("a query is a single line");
        }
        seen_any = true;
        loop {
            let pred = c.ident()?.to_string();
            c.expect("(")?;
            let mut args = Vec::new();
            loop {
                if c.eat("?") {
                    let v = c.ident()?.to_string();
                    let id = match vars.iter().position(|x| *x == v) {
                        Some(i) => i,
                        None => {
                            vars.push(v);
                            vars.len() - 1
                        }
                    };
                    args.push(Term::Var(id as u32));
                } else {
                    args.push(Term::Const(name(&c.constant()?)));
                }
                if c.eat(")") {
                    break;
                }
                c.expect(",")?;
            }
            atoms.push(Atom::new(&pred, args));
            if !c.eat(",") {
                break;
            }
        }
        c.eat(".");
        c.finish()?;
    }
    if atoms.is_empty() {
        return Err(SyntaxError { line: 1, col: 1, msg: "empty query".into() });
    }
    Ok(GroundQuery::new(atoms, vars))
}

pub fn print_tbox(t: &TBox) -> String {
    t.to_string()
}

pub fn print_abox(a: &ABox) -> String {
    a.to_string()
}

pub fn print_query(q: &GroundQuery) -> String {
    q.to_string()
}
