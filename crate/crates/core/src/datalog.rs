//! Datalog programs over ABoxes: semi-naive bottom-up evaluation with
//! per-position fact indexes, ground query answering and the role closure
//! `Ξ(A)`.
//!
//! Text format, one statement per line, `#` starts a comment:
//!
//! ```text
//! Grad(X) :- takes(X,Y), GradCo(Y).
//! false :- Undergrad(X), takes(X,Y), GradCo(Y).
//! PHD(a).
//! ```
//!
//! Arguments starting with an upper-case letter or `?` are variables; other
//! identifiers and `"quoted"` strings are constants.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::logic::{name, Atom, Clause, Name, Term};

pub const TOP: &str = "Top";

/// Stand-in individual for an empty domain; domains are never empty.
pub const FRESH: &str = "_c0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatalogError {
    #[error("unsafe rule (head variable not in body): {0}")]
    Unsafe(String),
    #[error("not a datalog clause: {0}")]
    NotDatalog(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
}

/// A ground atom over individuals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub pred: Name,
    pub args: Vec<Name>,
}

impl Fact {
    pub fn new(pred: &str, args: &[&str]) -> Fact {
        Fact { pred: name(pred), args: args.iter().map(|a| name(a)).collect() }
    }

    /// `None` unless the atom is ground and function-free.
    pub fn from_atom(a: &Atom) -> Option<Fact> {
        let args = a
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Fact { pred: a.pred.clone(), args })
    }

    pub fn to_atom(&self) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|c| Term::Const(c.clone())).collect() }
    }

    pub fn is_role_loop(&self) -> bool {
        self.args.len() == 2 && self.args[0] == self.args[1]
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", ConstName(a))?;
        }
        write!(f, ")")
    }
}

/// A finite set of facts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ABox {
    facts: BTreeSet<Fact>,
}

impl ABox {
    pub fn new() -> ABox {
        ABox::default()
    }

    pub fn from_facts(facts: impl IntoIterator<Item = Fact>) -> ABox {
        ABox { facts: facts.into_iter().collect() }
    }

    pub fn insert(&mut self, f: Fact) -> bool {
        self.facts.insert(f)
    }

    pub fn contains(&self, f: &Fact) -> bool {
        self.facts.contains(f)
    }

    pub fn facts(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn individuals(&self) -> BTreeSet<Name> {
        self.facts.iter().flat_map(|f| f.args.iter().cloned()).collect()
    }

    pub fn predicates(&self) -> BTreeSet<(Name, usize)> {
        self.facts.iter().map(|f| (f.pred.clone(), f.args.len())).collect()
    }
}

impl FromIterator<Fact> for ABox {
    fn from_iter<I: IntoIterator<Item = Fact>>(iter: I) -> ABox {
        ABox::from_facts(iter)
    }
}

impl fmt::Display for ABox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in &self.facts {
            writeln!(f, "{fact}")?;
        }
        Ok(())
    }
}

/// A datalog rule; `head == None` encodes `false :- body`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Option<Atom>,
    pub body: Vec<Atom>,
}

impl Rule {
    /// Checks safety and renumbers variables by first occurrence, head first.
    pub fn new(head: Option<Atom>, body: Vec<Atom>) -> Result<Rule, DatalogError> {
        let r = Rule { head, body }.renumbered();
        r.check()?;
        Ok(r)
    }

    fn renumbered(self) -> Rule {
        let mut map: HashMap<u32, u32> = HashMap::new();
        let mut conv = |a: Atom| Atom {
            pred: a.pred,
            args: a
                .args
                .into_iter()
                .map(|t| match t {
                    Term::Var(v) => {
                        let n = map.len() as u32;
                        Term::Var(*map.entry(v).or_insert(n))
                    }
                    t => t,
                })
                .collect(),
        };
        let head = self.head.map(&mut conv);
        let body = self.body.into_iter().map(conv).collect();
        Rule { head, body }
    }

    fn check(&self) -> Result<(), DatalogError> {
        let atoms = self.head.iter().chain(&self.body);
        if atoms.clone().any(Atom::has_function) {
            return Err(DatalogError::NotDatalog(self.to_string()));
        }
        let body_vars: BTreeSet<u32> = self.body.iter().flat_map(Atom::vars).collect();
        if self.head.iter().flat_map(Atom::vars).any(|v| !body_vars.contains(&v)) {
            return Err(DatalogError::Unsafe(self.to_string()));
        }
        Ok(())
    }

    /// A Horn, function-free clause as a rule. Head variables missing from
    /// the body get a `Top` guard.
    pub fn from_clause(c: &Clause) -> Result<Rule, DatalogError> {
        if !c.is_horn() || !c.is_function_free() {
            return Err(DatalogError::NotDatalog(c.to_string()));
        }
        let head = c.positives().next().map(|l| l.atom.clone());
        let mut body: Vec<Atom> = c.negatives().map(|l| l.atom.clone()).collect();
        let bound: BTreeSet<u32> = body.iter().flat_map(Atom::vars).collect();
        let mut free: Vec<u32> = head.iter().flat_map(Atom::vars).filter(|v| !bound.contains(v)).collect();
        free.sort_unstable();
        free.dedup();
        body.extend(free.into_iter().map(|v| Atom::new(TOP, vec![Term::Var(v)])));
        Rule::new(head, body)
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// `R(x,y) → S(x,y)` or `S(y,x)`, or transitivity `R(x,y) ∧ R(y,z) → R(x,z)`.
    pub fn is_role_rule(&self) -> bool {
        let binary = |a: &Atom| a.args.len() == 2 && a.args.iter().all(|t| matches!(t, Term::Var(_)));
        self.head.as_ref().is_some_and(binary) && !self.body.is_empty() && self.body.iter().all(binary)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Some(h) => write!(f, "{}", RuleAtom(h))?,
            None => write!(f, "false")?,
        }
        if !self.body.is_empty() {
            write!(f, " :- ")?;
            for (i, a) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", RuleAtom(a))?;
            }
        }
        write!(f, ".")
    }
}

struct RuleAtom<'a>(&'a Atom);

impl fmt::Display for RuleAtom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.0.pred)?;
        for (i, t) in self.0.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match t {
                Term::Var(v) => write!(f, "X{v}")?,
                Term::Const(c) => write!(f, "{}", ConstName(c))?,
                Term::App(..) => write!(f, "{t}")?,
            }
        }
        write!(f, ")")
    }
}

/// Prints a constant bare when it reads back as one, quoted otherwise.
struct ConstName<'a>(&'a str);

impl fmt::Display for ConstName<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0;
        let bare = s.chars().next().is_some_and(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
            && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if bare {
            write!(f, "{s}")
        } else {
            write!(f, "\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Program {
        let mut p = Program::default();
        for r in rules {
            p.push(r);
        }
        p
    }

    pub fn from_clauses<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Result<Program, DatalogError> {
        Ok(Program::new(clauses.into_iter().map(Rule::from_clause).collect::<Result<Vec<_>, _>>()?))
    }

    pub fn push(&mut self, r: Rule) {
        if !self.rules.contains(&r) {
            self.rules.push(r);
        }
    }

    pub fn extend(&mut self, other: &Program) {
        for r in &other.rules {
            self.push(r.clone());
        }
    }

    pub fn union(&self, other: &Program) -> Program {
        let mut p = self.clone();
        p.extend(other);
        p
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn parse(text: &str) -> Result<Program, DatalogError> {
        let mut p = Program::default();
        for (i, line) in text.lines().enumerate() {
            let mut parser = Parser { src: line, pos: 0, line: i + 1, vars: BTreeMap::new() };
            if let Some(r) = parser.statement()? {
                p.push(r);
            }
        }
        Ok(p)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    vars: BTreeMap<String, u32>,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DatalogError> {
        Err(DatalogError::Syntax { line: self.line, col: self.src[..self.pos].chars().count() + 1, msg: msg.into() })
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        let comment = trimmed.starts_with('#');
        self.pos = self.src.len() - trimmed.len();
        if comment {
            self.pos = self.src.len();
        }
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

    fn ident(&mut self) -> Result<String, DatalogError> {
        self.ws();
        let len = self.rest().find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(self.rest().len());
        if len == 0 {
            return self.err("expected identifier");
        }
        let s = self.rest()[..len].to_string();
        self.pos += len;
        Ok(s)
    }

    fn quoted(&mut self) -> Result<String, DatalogError> {
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

    fn term(&mut self) -> Result<Term, DatalogError> {
        if self.eat("\"") {
            return Ok(Term::Const(name(&self.quoted()?)));
        }
        let var = self.eat("?");
        let id = self.ident()?;
        if var || id.starts_with(|c: char| c.is_uppercase()) {
            let n = self.vars.len() as u32;
            Ok(Term::Var(*self.vars.entry(id).or_insert(n)))
        } else {
            Ok(Term::Const(name(&id)))
        }
    }

    fn atom(&mut self) -> Result<Atom, DatalogError> {
        let pred = self.ident()?;
        let mut args = Vec::new();
        if self.eat("(") && !self.eat(")") {
            loop {
                args.push(self.term()?);
                if self.eat(")") {
                    break;
                }
                if !self.eat(",") {
                    return self.err("expected ',' or ')'");
                }
            }
        }
        Ok(Atom::new(&pred, args))
    }

    fn statement(&mut self) -> Result<Option<Rule>, DatalogError> {
        self.ws();
        if self.rest().is_empty() {
            return Ok(None);
        }
        let head = self.atom()?;
        let head = if &*head.pred == "false" && head.args.is_empty() { None } else { Some(head) };
        let mut body = Vec::new();
        if self.eat(":-") {
            loop {
                body.push(self.atom()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        if !self.eat(".") {
            return self.err("expected '.'");
        }
        self.ws();
        if !self.rest().is_empty() {
            return self.err("trailing input");
        }
        let r = Rule { head, body };
        if r.head.is_none() && r.body.is_empty() {
            return self.err("empty rule");
        }
        r.check()?;
        Ok(Some(r))
    }
}

/// Result of [`evaluate`]: the least fixpoint, or the point where a
/// `false` rule fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub facts: ABox,
    pub inconsistent: bool,
}

impl Evaluation {
    pub fn contains(&self, f: &Fact) -> bool {
        self.facts.contains(f)
    }
}

#[derive(Default)]
struct Relation {
    tuples: Vec<Vec<u32>>,
    set: HashSet<Vec<u32>>,
    /// Per argument position: value -> ascending tuple indices.
    index: Vec<HashMap<u32, Vec<usize>>>,
}

impl Relation {
    fn insert(&mut self, t: Vec<u32>) -> bool {
        if self.set.contains(&t) {
            return false;
        }
        if self.index.len() < t.len() {
            self.index.resize_with(t.len(), HashMap::new);
        }
        let id = self.tuples.len();
        for (i, v) in t.iter().enumerate() {
            self.index[i].entry(*v).or_default().push(id);
        }
        self.set.insert(t.clone());
        self.tuples.push(t);
        true
    }
}

#[derive(Default)]
struct Db {
    consts: Vec<Name>,
    ids: HashMap<Name, u32>,
    rels: HashMap<(Name, usize), Relation>,
}

impl Db {
    fn intern(&mut self, c: &Name) -> u32 {
        if let Some(id) = self.ids.get(c) {
            return *id;
        }
        let id = self.consts.len() as u32;
        self.consts.push(c.clone());
        self.ids.insert(c.clone(), id);
        id
    }

    fn insert(&mut self, pred: &Name, t: Vec<u32>) -> bool {
        self.rels.entry((pred.clone(), t.len())).or_default().insert(t)
    }

    fn len(&self, key: &(Name, usize)) -> usize {
        self.rels.get(key).map_or(0, |r| r.tuples.len())
    }
}

#[derive(Clone, Copy)]
enum Arg {
    Var(usize),
    Const(u32),
}

struct CompiledAtom {
    key: (Name, usize),
    args: Vec<Arg>,
}

struct CompiledRule {
    head: Option<CompiledAtom>,
    body: Vec<CompiledAtom>,
    nvars: usize,
}

fn compile(r: &Rule, db: &mut Db) -> CompiledRule {
    let mut vars: HashMap<u32, usize> = HashMap::new();
    let mut conv = |a: &Atom, db: &mut Db| CompiledAtom {
        key: (a.pred.clone(), a.args.len()),
        args: a
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => {
                    let n = vars.len();
                    Arg::Var(*vars.entry(*v).or_insert(n))
                }
                Term::Const(c) => Arg::Const(db.intern(c)),
                Term::App(..) => unreachable!("rules are function-free"),
            })
            .collect(),
    };
    let body: Vec<CompiledAtom> = r.body.iter().map(|a| conv(a, db)).collect();
    let head = r.head.as_ref().map(|a| conv(a, db));
    CompiledRule { head, body, nvars: vars.len() }
}

/// Tuple index window `[lo, hi)` per body atom.
type Windows = Vec<(usize, usize)>;

fn join(
    db: &Db,
    body: &[CompiledAtom],
    windows: &Windows,
    k: usize,
    binds: &mut Vec<Option<u32>>,
    out: &mut dyn FnMut(&[Option<u32>]) -> bool,
) -> bool {
    if k == body.len() {
        return out(binds);
    }
    let atom = &body[k];
    let (lo, hi) = windows[k];
    let Some(rel) = db.rels.get(&atom.key) else {
        return true;
    };
    let value = |a: &Arg, binds: &[Option<u32>]| match a {
        Arg::Const(c) => Some(*c),
        Arg::Var(v) => binds[*v],
    };
    let probe = atom.args.iter().enumerate().find_map(|(i, a)| value(a, binds).map(|v| (i, v)));
    let ids: Box<dyn Iterator<Item = usize>> = match probe {
        Some((i, v)) => match rel.index.get(i).and_then(|ix| ix.get(&v)) {
            Some(list) => {
                let start = list.partition_point(|id| *id < lo);
                Box::new(list[start..].iter().copied().take_while(move |id| *id < hi))
            }
            None => return true,
        },
        None => Box::new(lo..hi.min(rel.tuples.len())),
    };
    for id in ids {
        let t = &rel.tuples[id];
        let mut newly = Vec::new();
        let mut ok = true;
        for (a, v) in atom.args.iter().zip(t) {
            match a {
                Arg::Const(c) => ok = c == v,
                Arg::Var(x) => match binds[*x] {
                    Some(b) => ok = b == *v,
                    None => {
                        binds[*x] = Some(*v);
                        newly.push(*x);
                    }
                },
            }
            if !ok {
                break;
            }
        }
        let go_on = !ok || join(db, body, windows, k + 1, binds, out);
        for x in newly {
            binds[x] = None;
        }
        if !go_on {
            return false;
        }
    }
    true
}

/// Least fixpoint of `p ∪ a` by semi-naive iteration. When the program uses
/// `Top`, `Top(c)` holds for every individual of `a` and every program
/// constant, or for [`FRESH`] if there are none (its facts are not
/// reported). Stops as soon as a `false` rule fires.
pub fn evaluate(p: &Program, a: &ABox) -> Evaluation {
    let mut db = Db::default();
    for f in a.facts() {
        let t = f.args.iter().map(|c| db.intern(c)).collect();
        db.insert(&f.pred, t);
    }
    let rules: Vec<CompiledRule> = p.rules.iter().map(|r| compile(r, &mut db)).collect();
    let top = name(TOP);
    let fresh = if p.rules.iter().flat_map(|r| &r.body).any(|b| b.pred == top && b.args.len() == 1) {
        let fresh = db.consts.is_empty().then(|| db.intern(&name(FRESH)));
        for c in 0..db.consts.len() as u32 {
            db.insert(&top, vec![c]);
        }
        fresh
    } else {
        None
    };
    let mut inconsistent = false;
    // facts below `old` were present before the previous round
    let mut old: HashMap<(Name, usize), usize> = HashMap::new();
    let mut first = true;
    'rounds: loop {
        let snapshot: HashMap<(Name, usize), usize> =
            db.rels.iter().map(|(k, r)| (k.clone(), r.tuples.len())).collect();
        let mut derived: Vec<(Name, Vec<u32>)> = Vec::new();
        for r in &rules {
            let n = r.body.len();
            // delta position d: atoms before d read old facts, d reads the
            // delta, atoms after d read everything known at round start
            let deltas: Vec<Option<usize>> = if first { vec![None] } else { (0..n).map(Some).collect() };
            for d in deltas {
                let windows: Windows = r
                    .body
                    .iter()
                    .enumerate()
                    .map(|(i, b)| {
                        let cur = snapshot.get(&b.key).copied().unwrap_or(0);
                        let prev = old.get(&b.key).copied().unwrap_or(0);
                        match d {
                            None => (0, cur),
                            Some(d) if i < d => (0, prev),
                            Some(d) if i == d => (prev, cur),
                            Some(_) => (0, cur),
                        }
                    })
                    .collect();
                if windows.iter().any(|(lo, hi)| lo >= hi) {
                    continue;
                }
                let mut binds = vec![None; r.nvars];
                let mut fired = false;
                join(&db, &r.body, &windows, 0, &mut binds, &mut |b| {
                    match &r.head {
                        None => {
                            fired = true;
                            return false;
                        }
                        Some(h) => {
                            let t = h
                                .args
                                .iter()
                                .map(|a| match a {
                                    Arg::Const(c) => *c,
                                    Arg::Var(v) => b[*v].expect("safe rule"),
                                })
                                .collect();
                            derived.push((h.key.0.clone(), t));
                        }
                    }
                    true
                });
                if fired {
                    inconsistent = true;
                    break 'rounds;
                }
            }
        }
        first = false;
        old = snapshot;
        let mut changed = false;
        for (pred, t) in derived {
            changed |= db.insert(&pred, t);
        }
        if !changed {
            break;
        }
    }
    let facts = db
        .rels
        .iter()
        .flat_map(|((pred, _), rel)| {
            let consts = &db.consts;
            rel.tuples.iter().filter(move |t| fresh.is_none_or(|c| !t.contains(&c))).map(move |t| Fact {
                pred: pred.clone(),
                args: t.iter().map(|c| consts[*c as usize].clone()).collect(),
            })
        })
        .collect();
    Evaluation { facts, inconsistent }
}

/// Ξ(A): the closure of `a` under the role rules of `xi`.
pub fn apply_xi(xi: &Program, a: &ABox) -> ABox {
    debug_assert!(xi.rules.iter().all(Rule::is_role_rule), "Ξ holds role rules only");
    evaluate(xi, a).facts
}

/// A conjunction of function-free atoms; every variable is an answer
/// variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundQuery {
    pub atoms: Vec<Atom>,
    /// Variable names, indexed by the variable numbers used in `atoms`.
    pub vars: Vec<String>,
}

impl GroundQuery {
    pub fn new(atoms: Vec<Atom>, vars: Vec<String>) -> GroundQuery {
        GroundQuery { atoms, vars }
    }

    /// A single ground fact as a query without variables.
    pub fn fact(f: &Fact) -> GroundQuery {
        GroundQuery { atoms: vec![f.to_atom()], vars: Vec::new() }
    }

    /// The facts of the query under an answer tuple.
    pub fn instantiate(&self, tuple: &[Name]) -> Vec<Fact> {
        self.atoms
            .iter()
            .map(|a| Fact {
                pred: a.pred.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => tuple[*v as usize].clone(),
                        Term::Const(c) => c.clone(),
                        Term::App(..) => unreachable!("queries are function-free"),
                    })
                    .collect(),
            })
            .collect()
    }
}

impl fmt::Display for GroundQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}(", a.pred)?;
            for (j, t) in a.args.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                match t {
                    Term::Var(v) => write!(f, "?{}", self.vars[*v as usize])?,
                    Term::Const(c) => write!(f, "{}", ConstName(c))?,
                    Term::App(..) => write!(f, "{t}")?,
                }
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Answer tuples, ordered as [`GroundQuery::vars`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnswerSet {
    pub vars: Vec<String>,
    pub tuples: BTreeSet<Vec<Name>>,
    /// The program and ABox are inconsistent; every tuple is an answer.
    pub inconsistent: bool,
}

impl fmt::Display for AnswerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inconsistent {
            writeln!(f, "# warning: inconsistent; all tuples are answers")?;
        }
        for t in &self.tuples {
            let parts: Vec<String> = self.vars.iter().zip(t).map(|(v, c)| format!("?{v}={}", ConstName(c))).collect();
            writeln!(f, "{}", if parts.is_empty() { "true".to_string() } else { parts.join(" ") })?;
        }
        Ok(())
    }
}

/// Every tuple over `domain` for `n` variables.
pub fn all_tuples(domain: &[Name], n: usize) -> Vec<Vec<Name>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                domain.iter().map(move |c| {
                    let mut t = t.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Matches of `q` in a fact set.
pub fn matches(q: &GroundQuery, facts: &ABox) -> BTreeSet<Vec<Name>> {
    let mut db = Db::default();
    for f in facts.facts() {
        let t = f.args.iter().map(|c| db.intern(c)).collect();
        db.insert(&f.pred, t);
    }
    let rule = Rule { head: None, body: q.atoms.clone() };
    let compiled = compile(&rule, &mut db);
    // compiled variable slots follow first occurrence; map back
    let mut slot_of = vec![usize::MAX; q.vars.len()];
    let mut seen = 0;
    for a in &q.atoms {
        for t in &a.args {
            if let Term::Var(v) = t {
                if slot_of[*v as usize] == usize::MAX {
                    slot_of[*v as usize] = seen;
                    seen += 1;
                }
            }
        }
    }
    let windows: Windows = compiled.body.iter().map(|b| (0, db.len(&b.key))).collect();
    let mut out = BTreeSet::new();
    let mut binds = vec![None; compiled.nvars];
    join(&db, &compiled.body, &windows, 0, &mut binds, &mut |b| {
        out.insert(slot_of.iter().map(|s| db.consts[b[*s].expect("bound") as usize].clone()).collect());
        true
    });
    out
}

/// Certain answers of `q` over `p ∪ a`. Under inconsistency every tuple of
/// individuals of `a` is returned and the flag is set.
pub fn answer(q: &GroundQuery, p: &Program, a: &ABox) -> AnswerSet {
    let ev = evaluate(p, a);
    answer_from(q, &ev, a)
}

/// [`answer`] on a finished evaluation.
pub fn answer_from(q: &GroundQuery, ev: &Evaluation, a: &ABox) -> AnswerSet {
    let tuples = if ev.inconsistent {
        let domain: Vec<Name> = a.individuals().into_iter().collect();
        all_tuples(&domain, q.vars.len()).into_iter().collect()
    } else {
        matches(q, &ev.facts)
    };
    AnswerSet { vars: q.vars.clone(), tuples, inconsistent: ev.inconsistent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prog(s: &str) -> Program {
        Program::parse(s).unwrap()
    }

    fn abox(fs: &[(&str, &[&str])]) -> ABox {
        fs.iter().map(|(p, a)| Fact::new(p, a)).collect()
    }

    fn naive(p: &Program, a: &ABox) -> Evaluation {
        // reference: instantiate every rule over the active domain until stable
        let mut facts = a.clone();
        let mut domain: BTreeSet<Name> = a.individuals();
        for r in p.rules() {
            for at in r.head.iter().chain(&r.body) {
                for t in &at.args {
                    if let Term::Const(c) = t {
                        domain.insert(c.clone());
                    }
                }
            }
        }
        let domain: Vec<Name> = domain.into_iter().collect();
        if p.rules().iter().flat_map(|r| &r.body).any(|b| &*b.pred == TOP) {
            for c in &domain {
                facts.insert(Fact { pred: name(TOP), args: vec![c.clone()] });
            }
        }
        loop {
            let mut changed = false;
            for r in p.rules() {
                let n = r.head.iter().chain(&r.body).flat_map(Atom::vars).max().map_or(0, |v| v as usize + 1);
                for tuple in all_tuples(&domain, n) {
                    let inst = |at: &Atom| {
                        GroundQuery { atoms: vec![at.clone()], vars: vec![String::new(); n] }
                            .instantiate(&tuple)
                            .remove(0)
                    };
                    if r.body.iter().all(|b| facts.contains(&inst(b))) {
                        match &r.head {
                            None => return Evaluation { facts, inconsistent: true },
                            Some(h) => changed |= facts.insert(inst(h)),
                        }
                    }
                }
            }
            if !changed {
                return Evaluation { facts, inconsistent: false };
            }
        }
    }

    #[test]
    fn empty_program_returns_abox() {
        let a = abox(&[("A", &["a"]), ("R", &["a", "b"])]);
        let ev = evaluate(&Program::default(), &a);
        assert_eq!(ev.facts, a);
        assert!(!ev.inconsistent);
    }

    #[test]
    fn one_transitivity_step() {
        let p = prog("R(X,Z) :- R(X,Y), R(Y,Z).");
        let ev = evaluate(&p, &abox(&[("R", &["a", "b"]), ("R", &["b", "c"])]));
        assert!(ev.contains(&Fact::new("R", &["a", "c"])));
        assert_eq!(ev.facts.len(), 3);
    }

    #[test]
    fn long_chain_closure() {
        let p = prog("R(X,Z) :- R(X,Y), R(Y,Z).");
        let names: Vec<String> = (0..12).map(|i| format!("c{i}")).collect();
        let a: ABox = names.windows(2).map(|w| Fact::new("R", &[&w[0], &w[1]])).collect();
        assert_eq!(evaluate(&p, &a).facts.len(), 12 * 11 / 2);
    }

    #[test]
    fn xi_closure_of_self_loop_example() {
        let xi = prog("R(X,Y) :- S(X,Y).\nR(Y,X) :- S(X,Y).\nR(X,Z) :- R(X,Y), R(Y,Z).");
        assert!(xi.rules().iter().all(Rule::is_role_rule));
        let a = abox(&[("A", &["a"])]);
        assert_eq!(apply_xi(&xi, &a), a);
        let got = apply_xi(&xi, &abox(&[("S", &["a", "b"])]));
        let want =
            abox(&[("S", &["a", "b"]), ("R", &["a", "b"]), ("R", &["b", "a"]), ("R", &["a", "a"]), ("R", &["b", "b"])]);
        assert_eq!(got, want);
        assert_eq!(apply_xi(&Program::default(), &want), want);
    }

    #[test]
    fn false_rule_flags_inconsistency() {
        let p = prog("false :- Undergrad(X), takes(X,Y), GradCo(Y).\nGradCo(X) :- PHDco(X).");
        let a = abox(&[("Undergrad", &["a"]), ("takes", &["a", "b"]), ("PHDco", &["b"])]);
        assert!(evaluate(&p, &a).inconsistent);
        let q = GroundQuery::new(vec![Atom::new("Grad", vec![Term::Var(0)])], vec!["x".into()]);
        let ans = answer(&q, &p, &a);
        assert!(ans.inconsistent);
        assert_eq!(ans.tuples.len(), 2);
    }

    #[test]
    fn top_guard_reaches_every_individual() {
        let c = Clause::parse("A(?x0)").unwrap();
        let r = Rule::from_clause(&c).unwrap();
        assert_eq!(r.to_string(), "A(X0) :- Top(X0).");
        let ev = evaluate(&Program::new([r]), &abox(&[("R", &["a", "b"])]));
        assert!(ev.contains(&Fact::new("A", &["a"])) && ev.contains(&Fact::new("A", &["b"])));
    }

    #[test]
    fn horn_clause_conversion() {
        let c = Clause::parse("~takes(?x,?y) | ~GradCo(?y) | Grad(?x)").unwrap();
        let r = Rule::from_clause(&c).unwrap();
        assert_eq!(r.body.len(), 2);
        assert_eq!(r.head.unwrap().pred.as_ref(), "Grad");
        assert!(Rule::from_clause(&Clause::parse("A(?x) | B(?x)").unwrap()).is_err());
        assert!(Rule::from_clause(&Clause::parse("~A(?x) | B(f(?x))").unwrap()).is_err());
        let goal = Rule::from_clause(&Clause::parse("~A(?x) | ~B(?x)").unwrap()).unwrap();
        assert_eq!(goal.to_string(), "false :- A(X0), B(X0).");
    }

    #[test]
    fn unsafe_rules_rejected_at_load() {
        assert!(matches!(Program::parse("A(X) :- B(Y)."), Err(DatalogError::Unsafe(_))));
        assert!(matches!(Program::parse("A(X)."), Err(DatalogError::Unsafe(_))));
        assert!(Program::parse("A(a).").is_ok());
    }

    #[test]
    fn syntax_errors_carry_location() {
        match Program::parse("A(a).\nB(X) :- A(X)") {
            Err(DatalogError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 13)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_comments_quotes_and_question_vars() {
        let p = prog("# header\nB(?x) :- A(?x).  # trailing\nA(\"Alice\").\n\nfalse :- B(x0).");
        assert_eq!(p.len(), 3);
        let ev = evaluate(&p, &ABox::new());
        assert!(ev.contains(&Fact::new("B", &["Alice"])));
        assert!(!ev.inconsistent);
        assert_eq!(Program::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn query_answers() {
        let p = prog("Grad(X) :- PHD(X).");
        let a = abox(&[("PHD", &["a"]), ("takes", &["a", "c"]), ("Student", &["b"])]);
        let q = GroundQuery::new(
            vec![Atom::new("Grad", vec![Term::Var(0)]), Atom::new("takes", vec![Term::Var(0), Term::Var(1)])],
            vec!["x".into(), "y".into()],
        );
        let ans = answer(&q, &p, &a);
        assert_eq!(ans.tuples, BTreeSet::from([vec![name("a"), name("c")]]));
        assert_eq!(q.to_string(), "Grad(?x), takes(?x,?y)");
        let none = GroundQuery::new(vec![Atom::new("Grad", vec![Term::Var(0)])], vec!["x".into()]);
        assert!(answer(&none, &p, &abox(&[("Student", &["a"])])).tuples.is_empty());
    }

    fn arb_program() -> impl Strategy<Value = Program> {
        let preds = [("A", 1), ("B", 1), ("C", 1), ("R", 2), ("S", 2)];
        let atom = (0..preds.len(), 0..3u32, 0..3u32).prop_map(move |(p, x, y)| {
            let (n, ar) = preds[p];
            Atom::new(n, if ar == 1 { vec![Term::Var(x)] } else { vec![Term::Var(x), Term::Var(y)] })
        });
        let rule = (proptest::option::weighted(0.9, atom.clone()), proptest::collection::vec(atom, 1..4))
            .prop_filter_map("safe", |(h, b)| Rule::new(h, b).ok());
        proptest::collection::vec(rule, 0..6).prop_map(Program::new)
    }

    fn arb_abox() -> impl Strategy<Value = ABox> {
        let ind = ["a", "b", "c"];
        let fact = (0..5usize, 0..3usize, 0..3usize).prop_map(move |(p, x, y)| match p {
            0 => Fact::new("A", &[ind[x]]),
            1 => Fact::new("B", &[ind[x]]),
            2 => Fact::new("C", &[ind[x]]),
            3 => Fact::new("R", &[ind[x], ind[y]]),
            _ => Fact::new("S", &[ind[x], ind[y]]),
        });
        proptest::collection::vec(fact, 0..7).prop_map(ABox::from_facts)
    }

    proptest! {
        #[test]
        fn semi_naive_matches_naive(p in arb_program(), a in arb_abox()) {
            let got = evaluate(&p, &a);
            let want = naive(&p, &a);
            prop_assert_eq!(got.inconsistent, want.inconsistent);
            if !want.inconsistent {
                prop_assert_eq!(got.facts, want.facts);
            }
        }

        #[test]
        fn evaluation_is_monotone(p in arb_program(), a in arb_abox(), b in arb_abox()) {
            let small = evaluate(&p, &a);
            let big = evaluate(&p, &a.facts().chain(b.facts()).cloned().collect());
            prop_assert!(!small.inconsistent || big.inconsistent);
            if !big.inconsistent {
                prop_assert!(small.facts.facts().all(|f| big.contains(f)));
            }
        }

        #[test]
        fn program_text_round_trip(p in arb_program()) {
            prop_assert_eq!(Program::parse(&p.to_string()).unwrap(), p);
        }
    }
}
