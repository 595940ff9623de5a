//! First-order clause machinery: terms, atoms, literals, clauses, unification,
//! binary resolution, positive factoring, θ-subsumption and condensation.
//!
//! Clauses are kept in a canonical form: duplicate literals collapse, variables
//! are renumbered `x0, x1, ...` and literals are sorted by
//! `(polarity, predicate, arguments)`. Two clauses that are equal up to
//! variable renaming therefore compare equal.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Interned-ish symbol name shared between terms, atoms and rules.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("term nesting deeper than one function application: {0}")]
    TermTooDeep(String),
    #[error("clause syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(u32),
    Const(Name),
    /// Unary function application; the argument is a variable or constant.
    App(Name, Box<Term>),
}

impl Term {
    pub fn var(v: u32) -> Term {
        Term::Var(v)
    }

    pub fn constant(c: &str) -> Term {
        Term::Const(name(c))
    }

    pub fn app(f: &str, arg: Term) -> Term {
        Term::App(name(f), Box::new(arg))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, t) => 1 + t.depth(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, t) => t.is_ground(),
        }
    }

    fn occurs(&self, v: u32) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::Const(_) => false,
            Term::App(_, t) => t.occurs(v),
        }
    }

    fn collect_vars(&self, out: &mut Vec<u32>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Term::Const(_) => {}
            Term::App(_, t) => t.collect_vars(out),
        }
    }

    fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::Const(_) => self.clone(),
            Term::App(g, t) => Term::App(g.clone(), Box::new(t.map_vars(f))),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?x{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::App(g, t) => write!(f, "{g}({t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: Name,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Atom {
        Atom { pred: name(pred), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for t in &self.args {
            t.collect_vars(&mut out);
        }
        out
    }

    pub fn has_function(&self) -> bool {
        self.args.iter().any(|t| matches!(t, Term::App(..)))
    }

    pub fn apply(&self, s: &Subst) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| s.apply(t)).collect() }
    }

    fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| t.map_vars(f)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// Ordering puts negative literals first, then by predicate and arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal { positive: false, atom }
    }

    pub fn complement(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }

    pub fn apply(&self, s: &Subst) -> Literal {
        Literal { positive: self.positive, atom: self.atom.apply(s) }
    }

    fn map_vars(&self, f: &mut impl FnMut(u32) -> Term) -> Literal {
        Literal { positive: self.positive, atom: self.atom.map_vars(f) }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// Finite map from variables to terms, kept idempotent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subst {
    map: BTreeMap<u32, Term>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn get(&self, v: u32) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(v, t)| *t == Term::Var(*v))
    }

    pub fn bindings(&self) -> impl Iterator<Item = (u32, &Term)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    pub fn insert(&mut self, v: u32, t: Term) {
        self.map.insert(v, t);
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.map.get(v) {
                Some(b) => b.clone(),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::App(f, a) => Term::App(f.clone(), Box::new(self.apply(a))),
        }
    }

    /// Fully dereferences a term through triangular bindings.
    fn resolve(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.map.get(v) {
                Some(b) => self.resolve(b),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::App(f, a) => Term::App(f.clone(), Box::new(self.resolve(a))),
        }
    }

    fn normalized(self) -> Subst {
        let map =
            self.map.keys().map(|v| (*v, self.resolve(&Term::Var(*v)))).filter(|(v, t)| *t != Term::Var(*v)).collect();
        Subst { map }
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "?x{v}->{t}")?;
        }
        write!(f, "}}")
    }
}

fn unify_terms(a: &Term, b: &Term, s: &mut Subst) -> bool {
    let a = s.resolve(a);
    let b = s.resolve(b);
    match (&a, &b) {
        _ if a == b => true,
        (Term::Var(v), t) | (t, Term::Var(v)) => {
            if t.occurs(*v) {
                return false;
            }
            s.map.insert(*v, t.clone());
            true
        }
        (Term::App(f, x), Term::App(g, y)) => f == g && unify_terms(x, y, s),
        _ => false,
    }
}

/// Most general unifier of two atoms, with occurs check.
pub fn unify(a: &Atom, b: &Atom) -> Option<Subst> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return None;
    }
    let mut s = Subst::new();
    for (x, y) in a.args.iter().zip(&b.args) {
        if !unify_terms(x, y, &mut s) {
            return None;
        }
    }
    Some(s.normalized())
}

/// One-way matching: extends `s` so that `pattern·s == target`.
/// Only variables of `pattern` are bound; variables of `target` are rigid.
#[cfg(test)]
fn match_term(pattern: &Term, target: &Term, s: &mut Subst) -> bool {
    match (pattern, target) {
        (Term::Var(v), _) => match s.map.get(v) {
            Some(b) => b == target,
            None => {
                s.map.insert(*v, target.clone());
                true
            }
        },
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::App(f, x), Term::App(g, y)) => f == g && match_term(x, y, s),
        _ => false,
    }
}

/// A clause in canonical form. See the module docs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, rejecting terms nested deeper than `f(t)`.
    pub fn new(lits: Vec<Literal>) -> Result<Clause, LogicError> {
        Ok(Clause::from_raw(lits)?.canonical())
    }

    /// Sorted and duplicate-free but not canonically renamed. Subsumption and
    /// tautology checks work on such clauses; equality does not.
    pub(crate) fn from_raw(mut lits: Vec<Literal>) -> Result<Clause, LogicError> {
        for l in &lits {
            for t in &l.atom.args {
                if t.depth() > 1 {
                    return Err(LogicError::TermTooDeep(l.to_string()));
                }
            }
        }
        lits.sort();
        lits.dedup();
        Ok(Clause { lits })
    }

    pub(crate) fn canonical(self) -> Clause {
        Clause { lits: canonicalize(self.lits) }
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    /// Parses `~A(?x) | R(?x,f(?x))`. `¬` and `∨` are accepted as well,
    /// `[]` denotes the empty clause. Variables carry a leading `?`.
    pub fn parse(text: &str) -> Result<Clause, LogicError> {
        ClauseParser::new(text).parse_clause()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn index_of(&self, lit: &Literal) -> Option<usize> {
        self.lits.iter().position(|l| l == lit)
    }

    pub fn positives(&self) -> impl Iterator<Item = &Literal> {
        self.lits.iter().filter(|l| l.positive)
    }

    pub fn negatives(&self) -> impl Iterator<Item = &Literal> {
        self.lits.iter().filter(|l| !l.positive)
    }

    pub fn is_horn(&self) -> bool {
        self.positives().count() <= 1
    }

    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(|l| l.positive && self.lits.iter().any(|m| !m.positive && m.atom == l.atom))
    }

    pub fn vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for l in &self.lits {
            for t in &l.atom.args {
                t.collect_vars(&mut out);
            }
        }
        out
    }

    pub fn num_vars(&self) -> usize {
        self.vars().len()
    }

    pub fn is_function_free(&self) -> bool {
        self.lits.iter().all(|l| !l.atom.has_function())
    }

    pub fn is_ground(&self) -> bool {
        self.lits.iter().all(|l| l.atom.is_ground())
    }

    pub fn predicates(&self) -> BTreeSet<(Name, usize)> {
        self.lits.iter().map(|l| (l.atom.pred.clone(), l.atom.arity())).collect()
    }

    /// Literals with variables shifted by `offset`, used to rename apart.
    fn shifted(&self, offset: u32) -> Vec<Literal> {
        self.lits.iter().map(|l| l.map_vars(&mut |v| Term::Var(v + offset))).collect()
    }

    fn var_bound(&self) -> u32 {
        self.vars().into_iter().max().map_or(0, |v| v + 1)
    }

    pub fn apply(&self, s: &Subst) -> Result<Clause, LogicError> {
        Clause::new(self.lits.iter().map(|l| l.apply(s)).collect())
    }

    /// Renames variables with an arbitrary injective map and returns the raw
    /// literal list; mainly for tests of canonical renaming.
    pub fn renamed_literals(&self, f: impl Fn(u32) -> u32) -> Vec<Literal> {
        self.lits.iter().map(|l| l.map_vars(&mut |v| Term::Var(f(v)))).collect()
    }

    /// True if the two clauses are equal up to a bijective variable renaming.
    pub fn is_variant(&self, other: &Clause) -> bool {
        self == other || (self.len() == other.len() && subsumes(self, other) && subsumes(other, self))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "[]");
        }
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

// Upper bound on explored tie-breaking leaves during canonicalization.
const CANON_LEAF_LIMIT: usize = 256;

const UNMAPPED: u32 = u32::MAX;

fn render(lit: &Literal, map: &[u32], next: u32) -> (Literal, Vec<(u32, u32)>) {
    let mut local: Vec<(u32, u32)> = Vec::new();
    let mut f = |v: u32| {
        let m = map[v as usize];
        if m != UNMAPPED {
            return Term::Var(m);
        }
        if let Some((_, id)) = local.iter().find(|(k, _)| *k == v) {
            return Term::Var(*id);
        }
        let id = next + local.len() as u32;
        local.push((v, id));
        Term::Var(id)
    };
    let r = lit.map_vars(&mut f);
    (r, local)
}

fn finish_leaf(mut lits: Vec<Literal>) -> Vec<Literal> {
    for _ in 0..8 {
        lits.sort();
        let mut map: HashMap<u32, u32> = HashMap::new();
        let mut next = 0;
        let renamed: Vec<Literal> = lits
            .iter()
            .map(|l| {
                l.map_vars(&mut |v| {
                    Term::Var(*map.entry(v).or_insert_with(|| {
                        next += 1;
                        next - 1
                    }))
                })
            })
            .collect();
        if renamed.windows(2).all(|w| w[0] <= w[1]) {
            return renamed;
        }
        lits = renamed;
    }
    lits.sort();
    lits
}

fn canon_search(
    remaining: &[Literal],
    map: &mut Vec<u32>,
    next: u32,
    acc: &mut Vec<Literal>,
    best: &mut Option<Vec<Literal>>,
    leaves: &mut usize,
) {
    if remaining.is_empty() {
        *leaves += 1;
        let leaf = finish_leaf(acc.clone());
        if best.as_ref().is_none_or(|b| leaf < *b) {
            *best = Some(leaf);
        }
        return;
    }
    let rendered: Vec<(Literal, Vec<(u32, u32)>)> = remaining.iter().map(|l| render(l, map, next)).collect();
    let min = rendered.iter().map(|(r, _)| r).min().cloned().expect("non-empty");
    let mut seen: Vec<&Literal> = Vec::new();
    for (i, (r, local)) in rendered.iter().enumerate() {
        if *r != min || seen.contains(&&remaining[i]) {
            continue;
        }
        seen.push(&remaining[i]);
        if *leaves >= CANON_LEAF_LIMIT && best.is_some() {
            return;
        }
        for (k, v) in local {
            map[*k as usize] = *v;
        }
        let rest: Vec<Literal> =
            remaining.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, l)| l.clone()).collect();
        acc.push(r.clone());
        canon_search(&rest, map, next + local.len() as u32, acc, best, leaves);
        acc.pop();
        for (k, _) in local {
            map[*k as usize] = UNMAPPED;
        }
    }
}

fn canonicalize(mut lits: Vec<Literal>) -> Vec<Literal> {
    lits.sort();
    lits.dedup();
    let width = lits.iter().flat_map(|l| l.atom.vars()).max().map_or(0, |v| v as usize + 1);
    let mut best = None;
    let mut leaves = 0;
    canon_search(&lits, &mut vec![UNMAPPED; width], 0, &mut Vec::new(), &mut best, &mut leaves);
    let mut out = best.unwrap_or_default();
    out.dedup();
    out
}

/// Binary resolution of `c1` (on its positive literal `pos`) with `c2` (on its
/// negative literal `neg`). The premises are renamed apart first. Returns
/// `Ok(None)` when the literals do not unify.
pub fn resolve(c1: &Clause, pos: usize, c2: &Clause, neg: usize) -> Result<Option<Clause>, LogicError> {
    Ok(resolve_with_unifier(c1, pos, c2, neg)?.map(|(c, _)| c))
}

/// [`resolve`], also returning the MGU (over `c1`'s variables and `c2`'s
/// variables shifted past them).
pub fn resolve_with_unifier(
    c1: &Clause,
    pos: usize,
    c2: &Clause,
    neg: usize,
) -> Result<Option<(Clause, Subst)>, LogicError> {
    Ok(resolve_raw(c1, pos, c2, neg)?.map(|(c, s)| (c.canonical(), s)))
}

pub(crate) fn resolve_raw(
    c1: &Clause,
    pos: usize,
    c2: &Clause,
    neg: usize,
) -> Result<Option<(Clause, Subst)>, LogicError> {
    let (Some(a), Some(b)) = (c1.lits.get(pos), c2.lits.get(neg)) else {
        return Ok(None);
    };
    if !a.positive || b.positive {
        return Ok(None);
    }
    let right = c2.shifted(c1.var_bound());
    let Some(s) = unify(&a.atom, &right[neg].atom) else {
        return Ok(None);
    };
    let mut lits: Vec<Literal> = Vec::with_capacity(c1.len() + c2.len() - 2);
    lits.extend(c1.lits.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, l)| l.apply(&s)));
    lits.extend(right.iter().enumerate().filter(|(i, _)| *i != neg).map(|(_, l)| l.apply(&s)));
    Clause::from_raw(lits).map(|c| Some((c, s)))
}

/// Positive factoring on two distinct positive literals of `c`.
pub fn factor(c: &Clause, i: usize, j: usize) -> Result<Option<Clause>, LogicError> {
    Ok(factor_with_unifier(c, i, j)?.map(|(c, _)| c))
}

pub fn factor_with_unifier(c: &Clause, i: usize, j: usize) -> Result<Option<(Clause, Subst)>, LogicError> {
    Ok(factor_raw(c, i, j)?.map(|(c, s)| (c.canonical(), s)))
}

pub(crate) fn factor_raw(c: &Clause, i: usize, j: usize) -> Result<Option<(Clause, Subst)>, LogicError> {
    if i == j {
        return Ok(None);
    }
    let (Some(a), Some(b)) = (c.lits.get(i), c.lits.get(j)) else {
        return Ok(None);
    };
    if !a.positive || !b.positive {
        return Ok(None);
    }
    let Some(s) = unify(&a.atom, &b.atom) else {
        return Ok(None);
    };
    let lits = c.lits.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l.apply(&s)).collect();
    Clause::from_raw(lits).map(|c| Some((c, s)))
}

/// The substitution witnessing `c` subsumes `d`, if any: every literal of
/// `c·σ` occurs in `d`.
pub fn subsumption_witness(c: &Clause, d: &Clause) -> Option<Subst> {
    let binds = witness_binds(&c.lits, &d.lits)?;
    let mut s = Subst::new();
    for (v, t) in binds.iter().enumerate() {
        if let Some(t) = t {
            s.map.insert(v as u32, (*t).clone());
        }
    }
    Some(s)
}

fn witness_binds<'a>(c: &[Literal], d: &'a [Literal]) -> Option<Vec<Option<&'a Term>>> {
    let mut counts: Vec<usize> = Vec::with_capacity(c.len());
    for l in c {
        let n = d.iter().filter(|m| m.positive == l.positive && m.atom.pred == l.atom.pred).count();
        if n == 0 {
            return None;
        }
        counts.push(n);
    }
    // join order: fewest unbound variables first, then fewest candidates
    let vars: Vec<Vec<u32>> = c
        .iter()
        .map(|l| {
            let mut vs = l.atom.vars();
            vs.sort_unstable();
            vs.dedup();
            vs
        })
        .collect();
    let width = vars.iter().filter_map(|vs| vs.last()).max().map_or(0, |v| *v as usize + 1);
    let mut bound = vec![false; width];
    let mut remaining: Vec<usize> = (0..c.len()).collect();
    let mut order: Vec<&Literal> = Vec::with_capacity(c.len());
    while !remaining.is_empty() {
        let (k, _) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &i)| (vars[i].iter().filter(|v| !bound[**v as usize]).count(), counts[i]))
            .expect("non-empty");
        let i = remaining.swap_remove(k);
        for v in &vars[i] {
            bound[*v as usize] = true;
        }
        order.push(&c[i]);
    }
    let cands: Vec<Vec<&Literal>> = order
        .iter()
        .map(|l| d.iter().filter(|m| m.positive == l.positive && m.atom.pred == l.atom.pred).collect())
        .collect();
    let mut m = Matcher { binds: vec![None; width], trail: Vec::new() };
    m.search(&order, &cands, 0).then_some(m.binds)
}

/// One-way matching with bindings indexed by variable and an undo trail.
struct Matcher<'a> {
    binds: Vec<Option<&'a Term>>,
    trail: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn term(&mut self, p: &Term, t: &'a Term) -> bool {
        match (p, t) {
            (Term::Var(v), _) => {
                let v = *v as usize;
                match self.binds[v] {
                    Some(b) => b == t,
                    None => {
                        self.binds[v] = Some(t);
                        self.trail.push(v);
                        true
                    }
                }
            }
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::App(f, x), Term::App(g, y)) => f == g && self.term(x, y),
            _ => false,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail entry");
            self.binds[v] = None;
        }
    }

    fn search(&mut self, pattern: &[&Literal], cands: &[Vec<&'a Literal>], k: usize) -> bool {
        if k == pattern.len() {
            return true;
        }
        for cand in &cands[k] {
            let mark = self.trail.len();
            if pattern[k].atom.args.iter().zip(&cand.atom.args).all(|(p, t)| self.term(p, t))
                && self.search(pattern, cands, k + 1)
            {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// `c` subsumes `d`: some σ maps every literal of `c` into `d`.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    witness_binds(&c.lits, &d.lits).is_some()
}

/// `c` θ-subsumes `d`: `c` subsumes `d` and has no more literals.
pub fn theta_subsumes(c: &Clause, d: &Clause) -> bool {
    c.len() <= d.len() && subsumes(c, d)
}

/// The condensation of `c`: repeatedly drops a literal whenever the clause
/// subsumes the remainder.
pub fn condense(c: &Clause) -> Clause {
    let d = condense_raw(c);
    if d.len() == c.len() {
        d
    } else {
        d.canonical()
    }
}

/// [`condense`] without canonical renaming of the result.
pub(crate) fn condense_raw(c: &Clause) -> Clause {
    let mut cur = c.clone();
    'outer: loop {
        for i in 0..cur.len() {
            let rest =
                Clause { lits: cur.lits.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, l)| l.clone()).collect() };
            if subsumes(&cur, &rest) {
                cur = rest;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Tautology, or θ-subsumed by some clause of `store`.
pub fn is_redundant<'a>(c: &Clause, store: impl IntoIterator<Item = &'a Clause>) -> bool {
    c.is_tautology() || store.into_iter().any(|d| theta_subsumes(d, c))
}

struct ClauseParser<'a> {
    src: &'a str,
    pos: usize,
    vars: HashMap<String, u32>,
}

impl<'a> ClauseParser<'a> {
    fn new(src: &'a str) -> Self {
        ClauseParser { src, pos: 0, vars: HashMap::new() }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LogicError> {
        Err(LogicError::Syntax { col: self.src[..self.pos].chars().count() + 1, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, LogicError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected identifier");
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        if self.eat("?") {
            let v = self.ident()?;
            let n = self.vars.len() as u32;
            return Ok(Term::Var(*self.vars.entry(v).or_insert(n)));
        }
        let id = self.ident()?;
        if self.eat("(") {
            let inner = self.term()?;
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            return Ok(Term::App(name(&id), Box::new(inner)));
        }
        Ok(Term::Const(name(&id)))
    }

    fn literal(&mut self) -> Result<Literal, LogicError> {
        let positive = !(self.eat("~") || self.eat("¬"));
        let pred = self.ident()?;
        let mut args = Vec::new();
        if !self.eat("(") {
            return self.err("expected '('");
        }
        if !self.eat(")") {
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
        Ok(Literal { positive, atom: Atom { pred: name(&pred), args } })
    }

    fn parse_clause(&mut self) -> Result<Clause, LogicError> {
        if self.eat("[]") {
            self.skip_ws();
            if self.pos != self.src.len() {
                return self.err("trailing input");
            }
            return Ok(Clause::empty());
        }
        let mut lits = vec![self.literal()?];
        while self.eat("|") || self.eat("∨") {
            lits.push(self.literal()?);
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("trailing input");
        }
        Clause::new(lits)
    }
}
