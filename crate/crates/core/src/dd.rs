//! Clausification of normalized ALCHI TBoxes (with Self), saturation under
//! the clause-type discipline, and extraction of the function-free
//! disjunctive program DD(T).

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::logic::{
    condense, factor_with_unifier, name, resolve_with_unifier, theta_subsumes, Atom, Clause, Literal, LogicError, Name,
    Term,
};
use crate::ontology::{NormalAxiom, OntologyError, Role, TBox};
use crate::trace::{Event, Trace};

#[derive(Debug, Error)]
pub enum DdError {
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("transitivity axiom {0} must be eliminated before clausification")]
    Transitive(String),
    #[error("clause does not match any clause type: {0}")]
    Untypable(String),
    #[error("saturation exceeded {0} clauses")]
    Budget(usize),
}

/// A clause with its type tag (1–9) and the positions of its eligible literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedClause {
    pub clause: Clause,
    pub kind: u8,
    pub eligible: Vec<usize>,
}

impl TypedClause {
    pub fn new(clause: Clause) -> Result<TypedClause, DdError> {
        let (kind, eligible) = clause_type(&clause).ok_or_else(|| DdError::Untypable(clause.to_string()))?;
        Ok(TypedClause { clause, kind, eligible })
    }
}

impl fmt::Display for TypedClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.kind, self.clause)
    }
}

fn distinct_vars(c: &Clause) -> Vec<u32> {
    let mut v = c.vars();
    v.sort();
    v.dedup();
    v
}

fn var_of(t: &Term) -> Option<u32> {
    match t {
        Term::Var(v) => Some(*v),
        _ => None,
    }
}

/// Type tag and eligible literal positions of `c`, if it has one of the nine
/// clause shapes.
pub fn clause_type(c: &Clause) -> Option<(u8, Vec<usize>)> {
    let lits = c.literals();
    if lits
        .iter()
        .any(|l| l.atom.arity() == 0 || l.atom.arity() > 2 || !l.atom.args.iter().all(|t| !matches!(t, Term::Const(_))))
    {
        return None;
    }
    let vars = distinct_vars(c);
    let bins: Vec<usize> = (0..lits.len()).filter(|&i| lits[i].atom.arity() == 2).collect();
    let unary_on = |l: &Literal, vs: &[&Term]| l.atom.arity() == 1 && vs.contains(&&l.atom.args[0]);

    if lits.iter().any(|l| l.atom.has_function()) {
        let [x] = vars[..] else { return None };
        let xt = Term::var(x);
        let mut ft: Option<&Term> = None;
        for l in lits {
            for t in &l.atom.args {
                match t {
                    Term::App(_, inner) if **inner == xt => {
                        if ft.is_some_and(|f| f != t) {
                            return None;
                        }
                        ft = Some(t);
                    }
                    Term::Var(_) => {}
                    _ => return None,
                }
            }
        }
        let ft = ft.expect("function term present");
        if bins.is_empty() {
            let eligible = (0..lits.len()).filter(|&i| lits[i].atom.has_function()).collect();
            return Some((6, eligible));
        }
        let [b] = bins[..] else { return None };
        let lit = &lits[b];
        let kind = if lit.atom.args == [xt.clone(), ft.clone()] {
            1
        } else if lit.atom.args == [ft.clone(), xt.clone()] {
            2
        } else {
            return None;
        };
        let rest_ok = lits.iter().enumerate().all(|(i, l)| i == b || (!l.positive && unary_on(l, &[&xt])));
        return (lit.positive && rest_ok).then(|| (kind, vec![b]));
    }

    if bins.is_empty() {
        return (vars.len() <= 1).then(|| (7, (0..lits.len()).collect()));
    }
    if bins.len() == 2 && lits.len() == 2 {
        let (n, p) = if lits[0].positive { (1, 0) } else { (0, 1) };
        if lits[n].positive || !lits[p].positive {
            return None;
        }
        let (na, pa) = (&lits[n].atom.args, &lits[p].atom.args);
        if na[0] == na[1] {
            return None;
        }
        if pa == na {
            return Some((3, vec![n]));
        }
        if pa[0] == na[1] && pa[1] == na[0] {
            return Some((4, vec![n]));
        }
        return None;
    }
    let [b] = bins[..] else { return None };
    let lit = &lits[b];
    let (a0, a1) = (&lit.atom.args[0], &lit.atom.args[1]);
    var_of(a0)?;
    var_of(a1)?;
    let others = lits.iter().enumerate().filter(|(i, _)| *i != b).map(|(_, l)| l);
    if a0 == a1 {
        if lit.positive {
            let ok = others.clone().all(|l| !l.positive && unary_on(l, &[a0]));
            return ok.then(|| (9, vec![b]));
        }
        let ok = lits.len() <= 2 && others.clone().all(|l| l.positive && unary_on(l, &[a0]));
        return ok.then(|| (8, vec![b]));
    }
    if !lit.positive && others.clone().all(|l| unary_on(l, &[a0, a1])) {
        return Some((5, vec![b]));
    }
    None
}

fn skolem(body: &Option<Name>, role: &Role, filler: &Option<Name>) -> String {
    let r = if role.inverse { format!("INV_{}", role.name) } else { role.name.to_string() };
    format!("f__{}__{}__{}", body.as_deref().unwrap_or("Top"), r, filler.as_deref().unwrap_or("Top"))
}

fn unary(p: &Name, t: Term) -> Atom {
    Atom { pred: p.clone(), args: vec![t] }
}

/// Skolemized clauses of a normalized, transitivity-free TBox, in axiom order.
pub fn clausify(t: &TBox) -> Result<Vec<TypedClause>, DdError> {
    let x = Term::var(0);
    let y = Term::var(1);
    let mut out: Vec<TypedClause> = Vec::new();
    let push = |lits: Vec<Literal>, out: &mut Vec<TypedClause>| -> Result<(), DdError> {
        let c = Clause::new(lits)?;
        if !c.is_tautology() && !out.iter().any(|d| d.clause == c) {
            out.push(TypedClause::new(c)?);
        }
        Ok(())
    };
    for ax in t.normal_axioms()? {
        match ax {
            NormalAxiom::Prop { body, head } => {
                let mut lits: Vec<Literal> = body.iter().map(|b| Literal::neg(unary(b, x.clone()))).collect();
                lits.extend(head.iter().map(|h| Literal::pos(unary(h, x.clone()))));
                push(lits, &mut out)?;
            }
            NormalAxiom::ExistsLeft { role, filler, head } => {
                let mut lits = vec![Literal::neg(role.atom(x.clone(), y.clone()))];
                lits.extend(filler.iter().map(|a| Literal::neg(unary(a, y.clone()))));
                lits.extend(head.iter().map(|b| Literal::pos(unary(b, x.clone()))));
                push(lits, &mut out)?;
            }
            NormalAxiom::SelfLeft { role, head } => {
                let mut lits = vec![Literal::neg(role.atom(x.clone(), x.clone()))];
                lits.extend(head.iter().map(|b| Literal::pos(unary(b, x.clone()))));
                push(lits, &mut out)?;
            }
            NormalAxiom::ExistsRight { body, role, filler } => {
                let f = Term::app(&skolem(&body, &role, &filler), x.clone());
                let guard: Vec<Literal> = body.iter().map(|a| Literal::neg(unary(a, x.clone()))).collect();
                let mut lits = guard.clone();
                lits.push(Literal::pos(role.atom(x.clone(), f.clone())));
                push(lits, &mut out)?;
                if let Some(b) = &filler {
                    let mut lits = guard;
                    lits.push(Literal::pos(unary(b, f)));
                    push(lits, &mut out)?;
                }
            }
            NormalAxiom::SelfRight { body, role } => {
                let mut lits: Vec<Literal> = body.iter().map(|a| Literal::neg(unary(a, x.clone()))).collect();
                lits.push(Literal::pos(role.atom(x.clone(), x.clone())));
                push(lits, &mut out)?;
            }
            NormalAxiom::SubRole(r, s) => {
                push(
                    vec![Literal::neg(r.atom(x.clone(), y.clone())), Literal::pos(s.atom(x.clone(), y.clone()))],
                    &mut out,
                )?;
            }
            NormalAxiom::Transitive(r) => return Err(DdError::Transitive(r.to_string())),
        }
    }
    Ok(out)
}

pub const DEFAULT_SATURATION_LIMIT: usize = 200_000;

/// Given-clause saturation with FIFO selection, restricted to eligible
/// literals, with tautology and θ-subsumption deletion (forward and
/// backward). `limit` bounds the number of generated clauses.
pub fn saturate(input: Vec<TypedClause>, limit: usize, trace: &Trace) -> Result<Vec<TypedClause>, DdError> {
    let mut passive: VecDeque<(usize, TypedClause)> = VecDeque::new();
    let mut seen: HashSet<Clause> = HashSet::new();
    let mut next_id = 0usize;
    let record = |id: usize, rule: &str, premises: Vec<usize>, unifier: Option<String>, c: &TypedClause| {
        trace.record(Event {
            stage: "saturate".into(),
            id,
            rule: rule.into(),
            premises,
            unifier,
            conclusion: c.clause.to_string(),
            types: vec![c.kind],
        });
    };
    for c in input {
        if seen.insert(c.clause.clone()) {
            record(next_id, "input", vec![], None, &c);
            passive.push_back((next_id, c));
            next_id += 1;
        }
    }
    let mut active: Vec<(usize, TypedClause, bool)> = Vec::new();
    while let Some((gid, given)) = passive.pop_front() {
        if given.clause.is_tautology()
            || active.iter().any(|(_, a, alive)| *alive && theta_subsumes(&a.clause, &given.clause))
        {
            continue;
        }
        for (aid, a, alive) in active.iter_mut() {
            if *alive && theta_subsumes(&given.clause, &a.clause) {
                *alive = false;
                trace.record(Event {
                    stage: "saturate".into(),
                    id: *aid,
                    rule: "delete".into(),
                    premises: vec![gid],
                    unifier: None,
                    conclusion: a.clause.to_string(),
                    types: vec![a.kind],
                });
            }
        }
        active.push((gid, given.clone(), true));
        let mut derived: Vec<(Vec<usize>, &str, Clause, String)> = Vec::new();
        for (aid, a, alive) in &active {
            if !*alive {
                continue;
            }
            for (p_id, p, n_id, n) in [(gid, &given, *aid, a), (*aid, a, gid, &given)] {
                for &i in &p.eligible {
                    if !p.clause.literals()[i].positive {
                        continue;
                    }
                    for &j in &n.eligible {
                        if n.clause.literals()[j].positive {
                            continue;
                        }
                        if let Some((c, s)) = resolve_with_unifier(&p.clause, i, &n.clause, j)? {
                            derived.push((vec![p_id, n_id], "BR", c, s.to_string()));
                        }
                    }
                }
                if p_id == n_id {
                    break;
                }
            }
        }
        for &i in &given.eligible {
            for &j in &given.eligible {
                if i < j {
                    if let Some((c, s)) = factor_with_unifier(&given.clause, i, j)? {
                        derived.push((vec![gid], "PF", c, s.to_string()));
                    }
                }
            }
        }
        for (premises, rule, c, s) in derived {
            if c.is_tautology() || !seen.insert(c.clone()) {
                continue;
            }
            let tc = TypedClause::new(c)?;
            record(next_id, rule, premises, Some(s), &tc);
            passive.push_back((next_id, tc));
            next_id += 1;
            if next_id > limit {
                return Err(DdError::Budget(limit));
            }
        }
    }
    Ok(active.into_iter().filter(|(_, _, alive)| *alive).map(|(_, c, _)| c).collect())
}

/// A disjunctive program split into the role part and the rest.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DisjunctiveProgram {
    pub mon: Vec<Clause>,
    pub rol: Vec<Clause>,
    pub nearly_monadic: bool,
    pub simple: bool,
}

impl DisjunctiveProgram {
    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>) -> DisjunctiveProgram {
        let mut p = DisjunctiveProgram::default();
        for c in clauses {
            let target = if is_role_rule(&c) { &mut p.rol } else { &mut p.mon };
            if !target.contains(&c) {
                target.push(c);
            }
        }
        let (nm, simple) = classify_program(p.mon.iter().chain(&p.rol));
        p.nearly_monadic = nm;
        p.simple = simple;
        p
    }

    pub fn clauses(&self) -> Vec<Clause> {
        self.mon.iter().chain(&self.rol).cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.mon.len() + self.rol.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of distinct binary predicates.
    pub fn binary_predicates(&self) -> usize {
        self.clauses().iter().flat_map(|c| c.predicates()).filter(|(_, a)| *a == 2).collect::<BTreeSet<_>>().len()
    }
}

impl fmt::Display for DisjunctiveProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.mon.iter().chain(&self.rol) {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// The saturated clauses of types 3, 4, 5, 7, 8 and 9.
pub fn extract_dd(saturated: &[TypedClause]) -> DisjunctiveProgram {
    DisjunctiveProgram::from_clauses(
        saturated.iter().filter(|c| matches!(c.kind, 3 | 4 | 5 | 7 | 8 | 9)).map(|c| c.clause.clone()),
    )
}

/// `R(x,y) → S(x,y)` or `R(x,y) → S(y,x)`.
pub fn is_role_rule(c: &Clause) -> bool {
    let lits = c.literals();
    if lits.len() != 2 {
        return false;
    }
    let (Some(n), Some(p)) = (c.negatives().next(), c.positives().next()) else {
        return false;
    };
    if n.atom.arity() != 2 || p.atom.arity() != 2 || !c.is_function_free() {
        return false;
    }
    let (na, pa) = (&n.atom.args, &p.atom.args);
    na[0] != na[1]
        && var_of(&na[0]).is_some()
        && var_of(&na[1]).is_some()
        && (pa == na || (pa[0] == na[1] && pa[1] == na[0]))
}

fn is_mon_rule(c: &Clause) -> bool {
    c.is_function_free()
        && c.literals().iter().all(|l| matches!(l.atom.arity(), 1 | 2))
        && c.positives().all(|l| {
            let a = &l.atom.args;
            var_of(&a[0]).is_some() && (a.len() == 1 || a[0] == a[1])
        })
}

/// Whether some variable `x` makes `c` a simple rule.
pub fn is_simple_rule(c: &Clause) -> bool {
    let vars = distinct_vars(c);
    if vars.is_empty() {
        return c.literals().iter().all(|l| l.atom.arity() <= 2);
    }
    let mut count = std::collections::HashMap::new();
    for v in c.vars() {
        *count.entry(v).or_insert(0usize) += 1;
    }
    vars.iter().any(|&x| {
        let xt = Term::var(x);
        c.literals().iter().all(|l| {
            let a = &l.atom.args;
            if l.positive {
                match a.len() {
                    1 => a[0] == xt,
                    2 => a[0] == xt && a[1] == xt,
                    _ => false,
                }
            } else {
                match a.len() {
                    1 => a[0] == xt,
                    2 => {
                        let aux = |t: &Term| var_of(t).is_some_and(|v| v != x && count[&v] == 1);
                        (a[0] == xt && (a[1] == xt || aux(&a[1]))) || (a[1] == xt && aux(&a[0]))
                    }
                    _ => false,
                }
            }
        })
    })
}

/// (nearly-monadic, simple) flags of a program.
pub fn classify_program<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> (bool, bool) {
    let mut nearly_monadic = true;
    let mut simple = true;
    for c in clauses {
        if is_role_rule(c) {
            continue;
        }
        if !is_mon_rule(c) {
            nearly_monadic = false;
        }
        if !is_simple_rule(c) {
            simple = false;
        }
    }
    (nearly_monadic, nearly_monadic && simple)
}

/// DD(T) of a normalized, transitivity-free TBox.
pub fn translate(t: &TBox, limit: usize, trace: &Trace) -> Result<DisjunctiveProgram, DdError> {
    let clauses = clausify(t)?;
    let saturated = saturate(clauses, limit, trace)?;
    Ok(extract_dd(&saturated))
}

/// Drops clauses θ-subsumed by another clause (keeping the earlier of two
/// mutually subsuming ones).
pub fn reduce(clauses: Vec<Clause>) -> Vec<Clause> {
    let mut out: Vec<Clause> = Vec::new();
    for c in clauses {
        if c.is_tautology() || out.iter().any(|d| theta_subsumes(d, &c)) {
            continue;
        }
        out.retain(|d| !theta_subsumes(&c, d));
        out.push(c);
    }
    out
}

/// Eliminates each predicate accepted by `fresh`: closes the clauses
/// mentioning it under resolution and factoring on it, then keeps only the
/// conclusions free of it. Predicates occurring with both polarities in one
/// clause, or whose closure exceeds a small bound, are kept.
pub fn unfold_definitional(clauses: &[Clause], fresh: impl Fn(&str) -> bool) -> Vec<Clause> {
    const CLOSURE_LIMIT: usize = 500;
    let mut cur: Vec<Clause> = reduce(clauses.iter().map(condense).collect());
    let preds: BTreeSet<Name> = cur.iter().flat_map(|c| c.predicates()).map(|(p, _)| p).filter(|p| fresh(p)).collect();
    'preds: for p in preds {
        let mentions = |c: &Clause| c.literals().iter().any(|l| l.atom.pred == p);
        let occurs = |c: &Clause, pos: bool| c.literals().iter().any(|l| l.positive == pos && l.atom.pred == p);
        if cur.iter().any(|c| occurs(c, true) && occurs(c, false)) {
            continue;
        }
        let (mut closure, rest): (Vec<Clause>, Vec<Clause>) = cur.iter().cloned().partition(|c| mentions(c));
        let mut i = 0;
        while i < closure.len() {
            let given = closure[i].clone();
            let mut derived = Vec::new();
            for other in &closure[..=i] {
                for (a, b) in [(&given, other), (other, &given)] {
                    for (k, l) in a.literals().iter().enumerate() {
                        if !l.positive || l.atom.pred != p {
                            continue;
                        }
                        for (m, n) in b.literals().iter().enumerate() {
                            if n.positive || n.atom.pred != p {
                                continue;
                            }
                            if let Ok(Some(r)) = crate::logic::resolve(a, k, b, m) {
                                derived.push(r);
                            }
                        }
                    }
                }
            }
            for (k, l) in given.literals().iter().enumerate() {
                for (m, n) in given.literals().iter().enumerate() {
                    if k < m && l.positive && n.positive && l.atom.pred == p && n.atom.pred == p {
                        if let Ok(Some(r)) = crate::logic::factor(&given, k, m) {
                            derived.push(r);
                        }
                    }
                }
            }
            for r in derived {
                let r = condense(&r);
                if r.is_tautology() || closure.iter().any(|d| theta_subsumes(d, &r)) {
                    continue;
                }
                closure.push(r);
                if closure.len() > CLOSURE_LIMIT {
                    continue 'preds;
                }
            }
            i += 1;
        }
        cur = reduce(rest.into_iter().chain(closure.into_iter().filter(|c| !mentions(c))).collect());
    }
    cur
}

pub fn is_fresh_concept(p: &str) -> bool {
    p.strip_prefix('X').is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
}

/// Predicate name helper for tests and fixtures.
pub fn pred(p: &str) -> Name {
    name(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::theta_subsumes;
    use crate::ontology::{normalize, Axiom, Concept};

    fn c(s: &str) -> Clause {
        Clause::parse(s).unwrap()
    }

    fn a(n: &str) -> Concept {
        Concept::atomic(n)
    }

    fn r(n: &str) -> Role {
        Role::atomic(n)
    }

    fn university() -> TBox {
        let takes = r("takes");
        TBox::from_axioms([
            Axiom::SubClass(a("Student"), Concept::Or(vec![a("Grad"), a("Undergrad")])),
            Axiom::SubClass(a("Course"), Concept::Or(vec![a("GradCo"), a("UndergradCo")])),
            Axiom::SubClass(a("PHD"), Concept::some(takes.clone(), a("PHDco"))),
            Axiom::SubClass(a("PHDco"), a("GradCo")),
            Axiom::SubClass(Concept::some(takes.clone(), a("GradCo")), a("Grad")),
            Axiom::SubClass(Concept::And(vec![a("Undergrad"), Concept::some(takes, a("GradCo"))]), Concept::Bottom),
        ])
    }

    /// Same set up to variants.
    fn same_set(got: &[Clause], want: &[Clause]) -> bool {
        got.len() == want.len() && want.iter().all(|w| got.iter().any(|g| g.is_variant(w)))
    }

    #[test]
    fn clause_types_of_the_inventory() {
        let cases = [
            ("~A(?x) | R(?x,f(?x))", 1),
            ("R(?x,f(?x))", 1),
            ("~A(?x) | R(f(?x),?x)", 2),
            ("~R(?x,?y) | S(?x,?y)", 3),
            ("~R(?x,?y) | S(?y,?x)", 4),
            ("~A(?x) | ~R(?x,?y) | ~B(?y) | C(?x) | D(?y)", 5),
            ("~A(?x) | ~B(f(?x)) | C(?x) | D(f(?x))", 6),
            ("~A(?x) | C(?x) | D(?x)", 7),
            ("[]", 7),
            ("~R(?x,?x) | A(?x)", 8),
            ("~A(?x) | R(?x,?x)", 9),
        ];
        for (s, k) in cases {
            assert_eq!(clause_type(&c(s)).map(|t| t.0), Some(k), "{s}");
        }
        for s in ["A(?x) | B(?y)", "~R(?x,?y) | ~S(?y,?z)", "A(f(?x)) | B(g(?x))", "A(a)", "R(?x,f(?y))"] {
            assert_eq!(clause_type(&c(s)), None, "{s}");
        }
    }

    #[test]
    fn eligible_literals() {
        let t = TypedClause::new(c("~A(?x) | R(?x,f(?x))")).unwrap();
        assert!(t.clause.literals()[t.eligible[0]].positive);
        let t = TypedClause::new(c("~A(?x) | ~B(f(?x)) | C(?x) | D(f(?x))")).unwrap();
        assert_eq!(t.eligible.len(), 2);
        let t = TypedClause::new(c("~R(?x,?x) | A(?x)")).unwrap();
        assert_eq!(t.eligible.len(), 1);
        assert!(!t.clause.literals()[t.eligible[0]].positive);
    }

    #[test]
    fn clausify_examples() {
        let t = TBox::from_axioms([Axiom::SubClass(Concept::some(r("takes"), a("GradCo")), a("Grad"))]);
        let cl = clausify(&t).unwrap();
        assert_eq!(cl.len(), 1);
        assert!(cl[0].clause.is_variant(&c("~takes(?x,?y) | ~GradCo(?y) | Grad(?x)")));
        assert_eq!(cl[0].kind, 5);

        let t = TBox::from_axioms([Axiom::SubClass(a("A"), Concept::HasSelf(r("R")))]);
        let cl = clausify(&t).unwrap();
        assert_eq!(cl[0].clause, c("~A(?x) | R(?x,?x)"));
        assert_eq!(cl[0].kind, 9);

        let t = TBox::from_axioms([Axiom::SubClass(a("PHD"), Concept::some(r("takes"), a("PHDco")))]);
        let cl: Vec<Clause> = clausify(&t).unwrap().into_iter().map(|t| t.clause).collect();
        assert_eq!(
            cl,
            vec![c("~PHD(?x) | takes(?x,f__PHD__takes__PHDco(?x))"), c("~PHD(?x) | PHDco(f__PHD__takes__PHDco(?x))")]
        );
    }

    #[test]
    fn clausify_rejects_transitivity_and_unnormalized() {
        let t = TBox::from_axioms([Axiom::Transitive(r("R"))]);
        assert!(matches!(clausify(&t), Err(DdError::Transitive(_))));
        let t = TBox::from_axioms([Axiom::SubClass(a("A"), Concept::negate(a("B")))]);
        assert!(matches!(clausify(&t), Err(DdError::Ontology(_))));
    }

    #[test]
    fn clausify_inverse_roles() {
        let t = TBox::from_axioms([
            Axiom::SubRole(r("R").inv(), r("S")),
            Axiom::SubClass(a("A"), Concept::some(r("R").inv(), Concept::Top)),
        ]);
        let cl = clausify(&t).unwrap();
        assert_eq!(cl[0].kind, 4);
        assert_eq!(cl[1].kind, 2);
    }

    #[test]
    fn saturate_without_inferences() {
        let t = TBox::from_axioms([Axiom::SubClass(a("A"), a("B"))]);
        let s = saturate(clausify(&t).unwrap(), 100, &Trace::off()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].clause, c("~A(?x) | B(?x)"));
    }

    #[test]
    fn saturate_self_through_role_inclusion() {
        let input = vec![
            TypedClause::new(c("~A(?x) | R(?x,?x)")).unwrap(),
            TypedClause::new(c("~R(?x,?y) | S(?x,?y)")).unwrap(),
        ];
        let s = saturate(input, 100, &Trace::off()).unwrap();
        let derived = s.iter().find(|t| t.clause == c("~A(?x) | S(?x,?x)")).expect("derived");
        assert_eq!(derived.kind, 9);
    }

    #[test]
    fn university_dd_contains_table_clauses() {
        let n = normalize(&university());
        let trace = Trace::memory();
        let p = translate(&n, DEFAULT_SATURATION_LIMIT, &trace).unwrap();
        let all = p.clauses();
        let table = [
            "~Student(?x) | Grad(?x) | Undergrad(?x)",
            "~Course(?x) | GradCo(?x) | UndergradCo(?x)",
            "~PHD(?x) | Grad(?x)",
            "~PHDco(?x) | GradCo(?x)",
            "~takes(?x,?y) | ~GradCo(?y) | Grad(?x)",
        ];
        for t in table {
            assert!(all.iter().any(|d| d.is_variant(&c(t))), "missing {t}");
        }
        assert!(p.nearly_monadic);
        assert!(!p.simple);
        assert!(all.iter().all(Clause::is_function_free));
    }

    #[test]
    fn university_dd_after_unfolding() {
        let n = normalize(&university());
        let p = translate(&n, DEFAULT_SATURATION_LIMIT, &Trace::off()).unwrap();
        let unfolded = unfold_definitional(&p.clauses(), is_fresh_concept);
        let want: Vec<Clause> = [
            "~Student(?x) | Grad(?x) | Undergrad(?x)",
            "~Course(?x) | GradCo(?x) | UndergradCo(?x)",
            "~PHD(?x) | Grad(?x)",
            "~PHDco(?x) | GradCo(?x)",
            "~takes(?x,?y) | ~GradCo(?y) | Grad(?x)",
            "~Undergrad(?x) | ~takes(?x,?y) | ~GradCo(?y)",
            // entailed via PHD ⊑ ∃takes.PHDco, PHDco ⊑ GradCo and the disjointness axiom
            "~PHD(?x) | ~Undergrad(?x)",
        ]
        .iter()
        .map(|s| c(s))
        .collect();
        assert!(same_set(&unfolded, &want), "{unfolded:?}");
    }

    #[test]
    fn self_loop_dd_contains_self_clause() {
        let t = TBox::from_axioms([
            Axiom::SubClass(a("A"), Concept::some(r("S"), a("B"))),
            Axiom::SubRole(r("S"), r("R")),
            Axiom::SubRole(r("S"), r("R").inv()),
            Axiom::SubClass(a("A"), Concept::HasSelf(r("R"))),
        ]);
        let p = translate(&t, 1000, &Trace::off()).unwrap();
        assert!(p.clauses().contains(&c("~A(?x) | R(?x,?x)")));
        assert_eq!(p.rol.len(), 2);
        assert!(p.nearly_monadic);
    }

    #[test]
    fn classify_program_examples() {
        assert_eq!(classify_program(&[c("~R(?x,?y) | S(?y,?x)")]), (true, true));
        assert_eq!(classify_program(&[c("~takes(?x,?y) | ~GradCo(?y) | Grad(?x)")]), (true, false));
        assert_eq!(classify_program(&[c("~R(?x,?y) | A(?x)"), c("~A(?x) | B(?x) | R(?x,?x)")]), (true, true));
        assert_eq!(classify_program(&[c("~R(?x,?y) | A(?y)")]), (true, true));
        assert_eq!(classify_program(&[c("~A(?x) | R(?x,?y)")]), (false, false));
        assert_eq!(classify_program(&[c("~R(?x,?y) | ~S(?y,?z) | A(?x)")]), (true, false));
    }

    #[test]
    fn bool_tbox_dd_is_simple() {
        let t = TBox::from_axioms([
            Axiom::SubClass(a("A"), Concept::some(r("R"), Concept::Top)),
            Axiom::SubClass(Concept::some(r("S"), Concept::Top), a("B")),
            Axiom::SubRole(r("R"), r("S")),
            Axiom::SubClass(a("B"), Concept::Or(vec![a("C"), a("D")])),
        ]);
        let p = translate(&t, 1000, &Trace::off()).unwrap();
        assert!(p.nearly_monadic && p.simple, "{p}");
        assert!(p.clauses().iter().any(|d| theta_subsumes(d, &c("~A(?x) | B(?x)"))));
    }

    #[test]
    fn saturation_trace_records_inputs_and_inferences() {
        let n = normalize(&university());
        let trace = Trace::memory();
        translate(&n, DEFAULT_SATURATION_LIMIT, &trace).unwrap();
        let ev = trace.events();
        assert!(ev.iter().any(|e| e.rule == "input"));
        assert!(ev.iter().any(|e| e.rule == "BR" && e.conclusion == "~PHD(?x0) | Grad(?x0)"));
    }

    #[test]
    fn unfold_keeps_recursive_predicates() {
        let cl = vec![c("~R(?x,?y) | ~X1(?y) | X1(?x)"), c("~X1(?x) | B(?x)")];
        assert_eq!(unfold_definitional(&cl, is_fresh_concept).len(), 2);
    }
}
