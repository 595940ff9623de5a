//! Reference decision procedure for cautious entailment from function-free
//! clause sets and ABoxes: ground over the active constants, then refute
//! the negated goal with a small DPLL search.
//!
//! Grounding only keeps atoms that can possibly be true, i.e. atoms in the
//! least set containing the ABox and closed under "all body atoms possible
//! implies every head atom possible". Any model restricted to that set is
//! again a model, so positive goals are decided the same way.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::datalog::{all_tuples, ABox, AnswerSet, Fact, GroundQuery, FRESH, TOP};
use crate::logic::{name, Clause, Name, Term};

pub const GROUND_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("grounding would produce more than {limit} clauses ({count})")]
    TooLarge { count: usize, limit: usize },
    #[error("clause is not function-free: {0}")]
    NotFunctionFree(String),
}

/// Propositional literal: `2v` is atom `v`, `2v + 1` its negation.
pub type Lit = u32;

fn pos(v: u32) -> Lit {
    2 * v
}

fn neg(v: u32) -> Lit {
    2 * v + 1
}

/// Ground clauses over an atom dictionary.
#[derive(Debug, Clone, Default)]
pub struct GroundClauseSet {
    pub domain: Vec<Name>,
    atoms: Vec<Fact>,
    ids: HashMap<Fact, u32>,
    pub clauses: Vec<Vec<Lit>>,
}

impl GroundClauseSet {
    pub fn atoms(&self) -> &[Fact] {
        &self.atoms
    }

    pub fn atom_id(&self, f: &Fact) -> Option<u32> {
        self.ids.get(f).copied()
    }

    fn intern(&mut self, f: Fact) -> u32 {
        if let Some(id) = self.ids.get(&f) {
            return *id;
        }
        let id = self.atoms.len() as u32;
        self.ids.insert(f.clone(), id);
        self.atoms.push(f);
        id
    }

    fn push(&mut self, mut c: Vec<Lit>) {
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] / 2 == w[1] / 2) {
            return;
        }
        self.clauses.push(c);
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Renders clauses as sets of signed facts, for inspection in tests.
    pub fn render(&self) -> BTreeSet<BTreeSet<(bool, Fact)>> {
        self.clauses
            .iter()
            .map(|c| c.iter().map(|l| (l % 2 == 0, self.atoms[(l / 2) as usize].clone())).collect())
            .collect()
    }
}

fn domain_of(p: &[Clause], a: &ABox, extra: &[Name]) -> Vec<Name> {
    let mut d: BTreeSet<Name> = a.individuals();
    for c in p {
        for l in c.literals() {
            for t in &l.atom.args {
                if let Term::Const(k) = t {
                    d.insert(k.clone());
                }
            }
        }
    }
    d.extend(extra.iter().cloned());
    if d.is_empty() {
        d.insert(name(FRESH));
    }
    d.into_iter().collect()
}

fn check_input(p: &[Clause], domain: usize) -> Result<(), OracleError> {
    let mut count: usize = 0;
    for c in p {
        if !c.is_function_free() {
            return Err(OracleError::NotFunctionFree(c.to_string()));
        }
        let n = domain.checked_pow(c.num_vars() as u32).unwrap_or(usize::MAX);
        count = count.saturating_add(n);
    }
    if count > GROUND_LIMIT {
        return Err(OracleError::TooLarge { count, limit: GROUND_LIMIT });
    }
    Ok(())
}

fn instance(atom: &crate::logic::Atom, tuple: &[Name]) -> Fact {
    Fact {
        pred: atom.pred.clone(),
        args: atom
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => tuple[*v as usize].clone(),
                Term::Const(c) => c.clone(),
                Term::App(..) => unreachable!("checked function-free"),
            })
            .collect(),
    }
}

fn var_count(c: &Clause) -> usize {
    c.vars().into_iter().max().map_or(0, |v| v as usize + 1)
}

fn base_facts(p: &[Clause], a: &ABox, domain: &[Name]) -> Vec<Fact> {
    let mut facts: Vec<Fact> = a.facts().cloned().collect();
    let top = name(TOP);
    if p.iter().flat_map(|c| c.literals()).any(|l| l.atom.pred == top) {
        facts.extend(domain.iter().map(|c| Fact { pred: top.clone(), args: vec![c.clone()] }));
    }
    facts
}

/// All ground instances over the active constants (a fresh one if there
/// are none), ABox facts as units, `Top(c)` units when `Top` occurs.
pub fn ground_unpruned(p: &[Clause], a: &ABox, extra: &[Name]) -> Result<GroundClauseSet, OracleError> {
    let domain = domain_of(p, a, extra);
    check_input(p, domain.len())?;
    let mut g = GroundClauseSet { domain: domain.clone(), ..Default::default() };
    for f in base_facts(p, a, &domain) {
        let id = g.intern(f);
        g.push(vec![pos(id)]);
    }
    for c in p {
        for tuple in all_tuples(&domain, var_count(c)) {
            let lits = c
                .literals()
                .iter()
                .map(|l| {
                    let id = g.intern(instance(&l.atom, &tuple));
                    if l.positive {
                        pos(id)
                    } else {
                        neg(id)
                    }
                })
                .collect();
            g.push(lits);
        }
    }
    Ok(g)
}

/// [`ground_unpruned`] restricted to possibly-true atoms: instances with an
/// impossible body atom are dropped, impossible head atoms are removed.
pub fn ground(p: &[Clause], a: &ABox, extra: &[Name]) -> Result<GroundClauseSet, OracleError> {
    let domain = domain_of(p, a, extra);
    check_input(p, domain.len())?;
    let base = base_facts(p, a, &domain);
    let mut possible: BTreeSet<Fact> = base.iter().cloned().collect();
    let tuples: Vec<Vec<Vec<Name>>> = p.iter().map(|c| all_tuples(&domain, var_count(c))).collect();
    loop {
        let mut changed = false;
        for (c, ts) in p.iter().zip(&tuples) {
            for t in ts {
                if c.negatives().all(|l| possible.contains(&instance(&l.atom, t))) {
                    for l in c.positives() {
                        changed |= possible.insert(instance(&l.atom, t));
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut g = GroundClauseSet { domain, ..Default::default() };
    for f in base {
        let id = g.intern(f);
        g.push(vec![pos(id)]);
    }
    for (c, ts) in p.iter().zip(&tuples) {
        'inst: for t in ts {
            let mut lits = Vec::new();
            for l in c.literals() {
                let f = instance(&l.atom, t);
                let possible = possible.contains(&f);
                match (l.positive, possible) {
                    (false, false) => continue 'inst,
                    (true, false) => {}
                    (true, true) => lits.push(pos(g.intern(f))),
                    (false, true) => lits.push(neg(g.intern(f))),
                }
            }
            g.push(lits);
        }
    }
    Ok(g)
}

/// DPLL with two watched literals and chronological backtracking. Returns
/// a model (indexed by variable) or `None` when unsatisfiable.
pub fn solve(nvars: usize, clauses: &[Vec<Lit>]) -> Option<Vec<bool>> {
    Solver::new(nvars, clauses)?.run()
}

struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    trail: Vec<Lit>,
    head: usize,
    /// (trail length before the decision, decided literal, already flipped)
    decisions: Vec<(usize, Lit, bool)>,
}

impl Solver {
    fn new(nvars: usize, input: &[Vec<Lit>]) -> Option<Solver> {
        let mut s = Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * nvars],
            value: vec![None; nvars],
            trail: Vec::new(),
            head: 0,
            decisions: Vec::new(),
        };
        for c in input {
            match c.len() {
                0 => return None,
                1 => {
                    if !s.assign(c[0]) {
                        return None;
                    }
                }
                _ => {
                    let id = s.clauses.len();
                    s.watches[c[0] as usize].push(id);
                    s.watches[c[1] as usize].push(id);
                    s.clauses.push(c.clone());
                }
            }
        }
        Some(s)
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value[(l / 2) as usize].map(|v| v == l.is_multiple_of(2))
    }

    /// Makes `l` true; false on clash with the current assignment.
    fn assign(&mut self, l: Lit) -> bool {
        match self.lit_value(l) {
            Some(v) => v,
            None => {
                self.value[(l / 2) as usize] = Some(l.is_multiple_of(2));
                self.trail.push(l);
                true
            }
        }
    }

    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let falsified = self.trail[self.head] ^ 1;
            self.head += 1;
            let watching = std::mem::take(&mut self.watches[falsified as usize]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = false;
            for (i, &ci) in watching.iter().enumerate() {
                if conflict {
                    keep.push(ci);
                    continue;
                }
                let c = &mut self.clauses[ci];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let other = c[0];
                if self.value[(other / 2) as usize] == Some(other.is_multiple_of(2)) {
                    keep.push(ci);
                    continue;
                }
                let value = &self.value;
                let replacement = (2..c.len()).find(|&k| value[(c[k] / 2) as usize] != Some(c[k] % 2 == 1));
                match replacement {
                    Some(k) => {
                        c.swap(1, k);
                        let w = c[1];
                        self.watches[w as usize].push(ci);
                    }
                    None => {
                        keep.push(ci);
                        if !self.assign(other) {
                            conflict = true;
                            keep.extend(&watching[i + 1..]);
                            break;
                        }
                    }
                }
            }
            self.watches[falsified as usize] = keep;
            if conflict {
                return false;
            }
        }
        true
    }

    fn backtrack(&mut self) -> bool {
        while let Some((mark, lit, flipped)) = self.decisions.pop() {
            for l in self.trail.drain(mark..) {
                self.value[(l / 2) as usize] = None;
            }
            self.head = mark;
            if !flipped {
                self.decisions.push((mark, lit ^ 1, true));
                self.assign(lit ^ 1);
                return true;
            }
        }
        false
    }

    fn run(mut self) -> Option<Vec<bool>> {
        let mut next = 0;
        loop {
            if !self.propagate() {
                if !self.backtrack() {
                    return None;
                }
                next = 0;
                continue;
            }
            while next < self.value.len() && self.value[next].is_some() {
                next += 1;
            }
            if next == self.value.len() {
                return Some(self.value.iter().map(|v| v.unwrap_or(false)).collect());
            }
            let l = neg(next as u32);
            self.decisions.push((self.trail.len(), l, false));
            self.assign(l);
        }
    }
}

/// Brute-force satisfiability over all assignments; `None` above 20 atoms.
pub fn enumerate_sat(nvars: usize, clauses: &[Vec<Lit>]) -> Option<bool> {
    if nvars > 20 {
        return None;
    }
    Some(
        (0u32..1 << nvars).any(|m| clauses.iter().all(|c| c.iter().any(|l| ((m >> (l / 2)) & 1 == 1) == (l % 2 == 0)))),
    )
}

/// A grounded program and ABox, queried for several goals.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub ground: GroundClauseSet,
    consistent: bool,
}

impl Oracle {
    /// `extra` constants join the domain (e.g. those of later goals).
    pub fn new(p: &[Clause], a: &ABox, extra: &[Name]) -> Result<Oracle, OracleError> {
        let ground = ground(p, a, extra)?;
        let consistent = solve(ground.atoms.len(), &ground.clauses).is_some();
        Ok(Oracle { ground, consistent })
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    /// Every fact of `goal` holds in every model. Goal constants outside the
    /// domain given at construction make the answer unreliable.
    pub fn entails(&self, goal: &[Fact]) -> bool {
        if !self.consistent {
            return true;
        }
        let mut negated = Vec::with_capacity(goal.len());
        for f in goal {
            match self.ground.atom_id(f) {
                Some(id) => negated.push(neg(id)),
                // impossible atoms are false in some model
                None => return false,
            }
        }
        let mut clauses = self.ground.clauses.clone();
        clauses.push(negated);
        solve(self.ground.atoms.len(), &clauses).is_none()
    }

    /// [`Oracle::entails`] decided by model enumeration; `None` above 20
    /// atoms.
    pub fn entails_by_enumeration(&self, goal: &[Fact]) -> Option<bool> {
        let n = self.ground.atoms.len();
        if n > 20 {
            return None;
        }
        let mut clauses = self.ground.clauses.clone();
        let mut negated = Vec::new();
        for f in goal {
            match self.ground.atom_id(f) {
                Some(id) => negated.push(neg(id)),
                None => return Some(!enumerate_sat(n, &clauses)?),
            }
        }
        clauses.push(negated);
        Some(!enumerate_sat(n, &clauses)?)
    }
}

fn goal_constants(goal: &[Fact]) -> Vec<Name> {
    goal.iter().flat_map(|f| f.args.iter().cloned()).collect()
}

/// `p ∪ a ⊨ goal` for a conjunction of ground facts.
pub fn cautious_entails(p: &[Clause], a: &ABox, goal: &[Fact]) -> Result<bool, OracleError> {
    Ok(Oracle::new(p, a, &goal_constants(goal))?.entails(goal))
}

pub fn is_consistent(p: &[Clause], a: &ABox) -> Result<bool, OracleError> {
    Ok(Oracle::new(p, a, &[])?.is_consistent())
}

/// Certain answers by one entailment check per tuple over the individuals
/// of `a`. Inconsistency yields every tuple, flagged.
pub fn certain_answers(p: &[Clause], a: &ABox, q: &GroundQuery) -> Result<AnswerSet, OracleError> {
    let query_consts: Vec<Name> = q
        .atoms
        .iter()
        .flat_map(|at| &at.args)
        .filter_map(|t| match t {
            Term::Const(c) => Some(c.clone()),
            _ => None,
        })
        .collect();
    let oracle = Oracle::new(p, a, &query_consts)?;
    let domain: Vec<Name> = a.individuals().into_iter().collect();
    let tuples = all_tuples(&domain, q.vars.len()).into_iter().filter(|t| oracle.entails(&q.instantiate(t))).collect();
    Ok(AnswerSet { vars: q.vars.clone(), tuples, inconsistent: !oracle.is_consistent() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datalog::{evaluate, Program};
    use proptest::prelude::*;

    fn cs(v: &[&str]) -> Vec<Clause> {
        v.iter().map(|s| Clause::parse(s).unwrap()).collect()
    }

    fn abox(fs: &[(&str, &[&str])]) -> ABox {
        fs.iter().map(|(p, a)| Fact::new(p, a)).collect()
    }

    fn university_dd() -> Vec<Clause> {
        cs(&[
            "~Student(?x) | Grad(?x) | Undergrad(?x)",
            "~Course(?x) | GradCo(?x) | UndergradCo(?x)",
            "~PHD(?x) | Grad(?x)",
            "~PHDco(?x) | GradCo(?x)",
            "~takes(?x,?y) | ~GradCo(?y) | Grad(?x)",
            "~Undergrad(?x) | ~takes(?x,?y) | ~GradCo(?y)",
        ])
    }

    #[test]
    fn ground_disjunction_over_two_individuals() {
        let p = cs(&["G(?x) | B(?x)"]);
        let a = abox(&[("E", &["a", "b"])]);
        let want: BTreeSet<BTreeSet<(bool, Fact)>> = [
            vec![(true, Fact::new("G", &["a"])), (true, Fact::new("B", &["a"]))],
            vec![(true, Fact::new("G", &["b"])), (true, Fact::new("B", &["b"]))],
            vec![(true, Fact::new("E", &["a", "b"]))],
        ]
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
        assert_eq!(ground_unpruned(&p, &a, &[]).unwrap().render(), want);
        assert_eq!(ground(&p, &a, &[]).unwrap().render(), want);
    }

    #[test]
    fn ground_empty_injects_fresh_constant() {
        let g = ground(&[], &ABox::new(), &[]).unwrap();
        assert_eq!(g.domain, vec![name(FRESH)]);
        assert!(g.is_empty());
    }

    #[test]
    fn ground_rejects_huge_and_functional_inputs() {
        let many: ABox = (0..101).map(|i| Fact::new("A", &[&format!("c{i}")])).collect();
        let p = cs(&["~R(?x,?y) | ~R(?y,?z) | R(?x,?z)"]);
        assert!(matches!(ground(&p, &many, &[]), Err(OracleError::TooLarge { .. })));
        assert!(matches!(ground(&cs(&["~A(?x) | R(?x,f(?x))"]), &many, &[]), Err(OracleError::NotFunctionFree(_))));
    }

    #[test]
    fn university_entailments() {
        let dd = university_dd();
        assert!(cautious_entails(&dd, &abox(&[("PHD", &["a"])]), &[Fact::new("Grad", &["a"])]).unwrap());
        let student = abox(&[("Student", &["a"])]);
        assert!(!cautious_entails(&dd, &student, &[Fact::new("Grad", &["a"])]).unwrap());
        // the counter-model picks Undergrad(a)
        assert!(!cautious_entails(&dd, &student, &[Fact::new("Undergrad", &["a"])]).unwrap());
        let o = Oracle::new(&dd, &student, &[]).unwrap();
        let model = solve(o.ground.atoms().len(), &o.ground.clauses).unwrap();
        let id = |f: Fact| o.ground.atom_id(&f).unwrap() as usize;
        assert!(model[id(Fact::new("Grad", &["a"]))] || model[id(Fact::new("Undergrad", &["a"]))]);
        for f in student.facts() {
            assert!(cautious_entails(&dd, &student, std::slice::from_ref(f)).unwrap());
        }
    }

    #[test]
    fn inconsistency_entails_everything() {
        let a = abox(&[("Undergrad", &["a"]), ("takes", &["a", "b"]), ("PHDco", &["b"])]);
        assert!(!is_consistent(&university_dd(), &a).unwrap());
        assert!(cautious_entails(&university_dd(), &a, &[Fact::new("Anything", &["z"])]).unwrap());
    }

    #[test]
    fn unconditional_clause_reaches_goal_constants() {
        let p = cs(&["A(?x)"]);
        assert!(cautious_entails(&p, &ABox::new(), &[Fact::new("A", &["b"])]).unwrap());
    }

    #[test]
    fn certain_answers_per_tuple() {
        let a = abox(&[("PHD", &["a"]), ("Student", &["b"])]);
        let q = GroundQuery::new(vec![crate::logic::Atom::new("Grad", vec![Term::Var(0)])], vec!["x".into()]);
        let ans = certain_answers(&university_dd(), &a, &q).unwrap();
        assert_eq!(ans.tuples, BTreeSet::from([vec![name("a")]]));
        assert!(!ans.inconsistent);
    }

    #[test]
    fn dpll_small_cases() {
        assert!(solve(0, &[]).is_some());
        assert!(solve(1, &[vec![]]).is_none());
        assert!(solve(1, &[vec![pos(0)], vec![neg(0)]]).is_none());
        let m = solve(2, &[vec![pos(0), pos(1)], vec![neg(0)]]).unwrap();
        assert_eq!(m, vec![false, true]);
        // pigeonhole 3 into 2
        let v = |p: u32, h: u32| p * 2 + h;
        let mut php = Vec::new();
        for p in 0..3 {
            php.push(vec![pos(v(p, 0)), pos(v(p, 1))]);
        }
        for h in 0..2 {
            for p in 0..3 {
                for q in p + 1..3 {
                    php.push(vec![neg(v(p, h)), neg(v(q, h))]);
                }
            }
        }
        assert!(solve(6, &php).is_none());
    }

    fn arb_cnf() -> impl Strategy<Value = (usize, Vec<Vec<Lit>>)> {
        (1usize..9).prop_flat_map(|n| {
            let lit = (0..n as u32, any::<bool>()).prop_map(|(v, s)| if s { pos(v) } else { neg(v) });
            (Just(n), proptest::collection::vec(proptest::collection::vec(lit, 1..4), 0..24))
        })
    }

    fn arb_clauses(horn: bool) -> impl Strategy<Value = Vec<Clause>> {
        let preds = [("A", 1), ("B", 1), ("C", 1), ("R", 2)];
        let lit = (0..preds.len(), 0..2u32, 0..2u32, any::<bool>()).prop_map(move |(p, x, y, s)| {
            let (n, ar) = preds[p];
            let args = if ar == 1 { vec![Term::Var(x)] } else { vec![Term::Var(x), Term::Var(y)] };
            crate::logic::Literal { positive: s, atom: crate::logic::Atom::new(n, args) }
        });
        proptest::collection::vec(proptest::collection::vec(lit, 1..4), 0..6).prop_map(move |cs| {
            cs.into_iter().filter_map(|ls| Clause::new(ls).ok()).filter(|c| !horn || c.is_horn()).collect()
        })
    }

    fn arb_abox() -> impl Strategy<Value = ABox> {
        let fact = (0..4usize, 0..2usize, 0..2usize).prop_map(|(p, x, y)| {
            let ind = ["a", "b"];
            match p {
                0 => Fact::new("A", &[ind[x]]),
                1 => Fact::new("B", &[ind[x]]),
                2 => Fact::new("C", &[ind[x]]),
                _ => Fact::new("R", &[ind[x], ind[y]]),
            }
        });
        proptest::collection::vec(fact, 0..4).prop_map(ABox::from_facts)
    }

    fn goals() -> Vec<Fact> {
        let mut g = Vec::new();
        for x in ["a", "b"] {
            for p in ["A", "B", "C"] {
                g.push(Fact::new(p, &[x]));
            }
            g.push(Fact::new("R", &[x, x]));
        }
        g
    }

    proptest! {
        #[test]
        fn dpll_agrees_with_enumeration((n, cnf) in arb_cnf()) {
            let got = solve(n, &cnf);
            prop_assert_eq!(got.is_some(), enumerate_sat(n, &cnf).unwrap());
            if let Some(m) = got {
                prop_assert!(cnf.iter().all(|c| c.iter().any(|l| m[(l / 2) as usize] == (l % 2 == 0))));
            }
        }

        #[test]
        fn pruning_preserves_entailment(p in arb_clauses(false), a in arb_abox()) {
            let pruned = Oracle::new(&p, &a, &[]).unwrap();
            let full = ground_unpruned(&p, &a, &[]).unwrap();
            let full_sat = solve(full.atoms().len(), &full.clauses).is_some();
            prop_assert_eq!(pruned.is_consistent(), full_sat);
            for g in goals() {
                let want = match full.atom_id(&g) {
                    Some(id) => {
                        let mut cl = full.clauses.clone();
                        cl.push(vec![neg(id)]);
                        solve(full.atoms().len(), &cl).is_none()
                    }
                    None => !full_sat,
                };
                prop_assert_eq!(pruned.entails(std::slice::from_ref(&g)), want, "{}", g);
                if let Some(e) = pruned.entails_by_enumeration(std::slice::from_ref(&g)) {
                    prop_assert_eq!(e, want);
                }
            }
        }

        #[test]
        fn agrees_with_datalog_on_horn(p in arb_clauses(true), a in arb_abox()) {
            let prog = Program::from_clauses(&p).unwrap();
            let ev = evaluate(&prog, &a);
            let oracle = Oracle::new(&p, &a, &[]).unwrap();
            prop_assert_eq!(ev.inconsistent, !oracle.is_consistent());
            if !ev.inconsistent {
                for g in goals() {
                    prop_assert_eq!(ev.contains(&g), oracle.entails(std::slice::from_ref(&g)), "{}", g);
                }
            }
        }
    }
}
