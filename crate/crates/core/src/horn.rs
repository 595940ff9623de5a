//! Horn compilation of disjunctive programs: binary resolution and positive
//! factoring with at least one non-Horn premise, keeping only non-redundant
//! consequences, optionally condensed.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dd::{classify_program, DisjunctiveProgram};
use crate::logic::{condense_raw, factor_raw, resolve_raw, theta_subsumes, Clause};
use crate::trace::{Event, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget {
    pub max_iterations: Option<usize>,
    /// Total number of clauses inserted into the stores after the input.
    pub max_clauses: Option<usize>,
    pub wall_clock: Option<Duration>,
}

impl Budget {
    pub fn unbounded() -> Budget {
        Budget::default()
    }

    pub fn clauses(n: usize) -> Budget {
        Budget { max_clauses: Some(n), ..Budget::default() }
    }

    /// Used when the input is not known to be simple and nearly-monadic.
    pub fn default_bounded() -> Budget {
        Budget { max_iterations: None, max_clauses: Some(10_000), wall_clock: Some(Duration::from_secs(60)) }
    }

    pub fn is_unbounded(&self) -> bool {
        self.max_iterations.is_none() && self.max_clauses.is_none() && self.wall_clock.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Terminated,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Stats {
    pub iterations: usize,
    pub derived: usize,
    pub deleted: usize,
    pub max_vars: usize,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub condense: bool,
    pub budget: Budget,
    /// Upper bound on variables per stored clause; violations are reported.
    pub var_bound: Option<usize>,
}

impl Default for Options {
    fn default() -> Options {
        Options { condense: true, budget: Budget::default_bounded(), var_bound: None }
    }
}

#[derive(Debug, Clone)]
pub struct CompilationOutcome {
    pub status: Status,
    pub horn: Vec<Clause>,
    pub nhorn: Vec<Clause>,
    pub stats: Stats,
    /// First stored clause exceeding `Options::var_bound`.
    pub bound_violation: Option<Clause>,
}

#[derive(Debug, Clone)]
struct Entry {
    id: usize,
    clause: Clause,
    alive: bool,
}

/// The evolving pair of Horn and non-Horn stores.
#[derive(Debug, Clone, Default)]
pub struct CompilationState {
    entries: Vec<Entry>,
    pub stats: Stats,
}

/// A candidate consequence and how it was obtained. The clause is not yet
/// canonically renamed.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub clause: Clause,
    pub rule: &'static str,
    pub premises: Vec<usize>,
    pub unifier: String,
}

impl CompilationState {
    /// Stores the non-tautological input clauses, dropping those θ-subsumed
    /// by an earlier one.
    pub fn new(input: &[Clause]) -> CompilationState {
        let mut s = CompilationState::default();
        for c in input {
            if !c.is_tautology() && !s.is_redundant(c) {
                s.delete_subsumed(c, &Trace::off());
                s.push(c.clone());
            }
        }
        s
    }

    fn push(&mut self, c: Clause) -> usize {
        let id = self.entries.len();
        self.stats.max_vars = self.stats.max_vars.max(c.num_vars());
        self.entries.push(Entry { id, clause: c, alive: true });
        id
    }

    fn alive(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.alive)
    }

    pub fn horn(&self) -> Vec<Clause> {
        self.alive().filter(|e| e.clause.is_horn()).map(|e| e.clause.clone()).collect()
    }

    pub fn nhorn(&self) -> Vec<Clause> {
        self.alive().filter(|e| !e.clause.is_horn()).map(|e| e.clause.clone()).collect()
    }

    /// Tautology or θ-subsumed by a stored clause.
    pub fn is_redundant(&self, c: &Clause) -> bool {
        c.is_tautology() || self.alive().any(|e| theta_subsumes(&e.clause, c))
    }

    fn delete_subsumed(&mut self, c: &Clause, trace: &Trace) {
        for e in self.entries.iter_mut().filter(|e| e.alive) {
            if theta_subsumes(c, &e.clause) {
                e.alive = false;
                self.stats.deleted += 1;
                trace.record(Event {
                    stage: "compile".into(),
                    id: e.id,
                    rule: "delete".into(),
                    premises: vec![],
                    unifier: None,
                    conclusion: e.clause.to_string(),
                    types: vec![],
                });
            }
        }
    }

    fn factors(e: &Entry, out: &mut Vec<Candidate>) {
        if e.clause.is_horn() {
            return;
        }
        let lits = e.clause.literals();
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                if lits[i].positive && lits[j].positive && lits[i].atom.pred == lits[j].atom.pred {
                    if let Ok(Some((c, s))) = factor_raw(&e.clause, i, j) {
                        out.push(Candidate { clause: c, rule: "PF", premises: vec![e.id], unifier: s.to_string() });
                    }
                }
            }
        }
    }

    fn resolvents(a: &Entry, b: &Entry, out: &mut Vec<Candidate>) {
        if a.clause.is_horn() && b.clause.is_horn() {
            return;
        }
        let pairs: &[(&Entry, &Entry)] = if a.id == b.id { &[(a, b)] } else { &[(a, b), (b, a)] };
        for (p, n) in pairs {
            for (i, l) in p.clause.literals().iter().enumerate() {
                if !l.positive {
                    continue;
                }
                for (j, m) in n.clause.literals().iter().enumerate() {
                    if m.positive || m.atom.pred != l.atom.pred {
                        continue;
                    }
                    if let Ok(Some((c, s))) = resolve_raw(&p.clause, i, &n.clause, j) {
                        out.push(Candidate {
                            clause: c,
                            rule: "BR",
                            premises: vec![p.id, n.id],
                            unifier: s.to_string(),
                        });
                    }
                }
            }
        }
    }

    /// Factors of non-Horn clauses and resolvents with a non-Horn premise
    /// over all stored clauses. Redundancy is not filtered here.
    pub fn inferences(&self) -> Vec<Candidate> {
        let alive: Vec<&Entry> = self.alive().collect();
        let mut out = Vec::new();
        for (i, a) in alive.iter().enumerate() {
            Self::factors(a, &mut out);
            for b in &alive[i..] {
                Self::resolvents(a, b, &mut out);
            }
        }
        out
    }

    /// Relevant consequences of the current stores.
    pub fn relevant_consequences(&self, condensation: bool) -> Vec<Clause> {
        let mut out: Vec<Clause> = Vec::new();
        for cand in self.inferences() {
            let c = if condensation { condense_raw(&cand.clause) } else { cand.clause };
            if !self.is_redundant(&c) {
                let c = c.canonical();
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }
}

/// Runs the compilation loop on a clause set. Stored clauses are taken as
/// given clauses in the order they were stored; each given clause is
/// combined with itself and all earlier given clauses still stored.
pub fn compile_horn(input: &[Clause], opts: &Options, trace: &Trace) -> CompilationOutcome {
    let start = Instant::now();
    let mut state = CompilationState::new(input);
    for e in &state.entries {
        trace.record(Event {
            stage: "compile".into(),
            id: e.id,
            rule: "input".into(),
            premises: vec![],
            unifier: None,
            conclusion: e.clause.to_string(),
            types: vec![],
        });
    }
    let mut violation =
        state.alive().find(|e| opts.var_bound.is_some_and(|b| e.clause.num_vars() > b)).map(|e| e.clause.clone());
    let over_time = |start: &Instant| opts.budget.wall_clock.is_some_and(|w| start.elapsed() > w);
    let mut next_given = 0usize;
    let mut inserted = 0usize;
    let status = 'outer: loop {
        while next_given < state.entries.len() && !state.entries[next_given].alive {
            next_given += 1;
        }
        if next_given == state.entries.len() {
            break Status::Terminated;
        }
        if opts.budget.max_iterations.is_some_and(|m| state.stats.iterations >= m) || over_time(&start) {
            break Status::BudgetExhausted;
        }
        state.stats.iterations += 1;
        let given = state.entries[next_given].clone();
        let mut candidates = Vec::new();
        CompilationState::factors(&given, &mut candidates);
        for other in state.entries[..=next_given].iter().filter(|e| e.alive) {
            CompilationState::resolvents(&given, other, &mut candidates);
        }
        next_given += 1;
        for cand in candidates {
            let c = if opts.condense { condense_raw(&cand.clause) } else { cand.clause };
            if state.is_redundant(&c) {
                continue;
            }
            let c = c.canonical();
            state.delete_subsumed(&c, trace);
            if violation.is_none() && opts.var_bound.is_some_and(|b| c.num_vars() > b) {
                violation = Some(c.clone());
            }
            trace.record(Event {
                stage: "compile".into(),
                id: state.entries.len(),
                rule: cand.rule.into(),
                premises: cand.premises,
                unifier: Some(cand.unifier),
                conclusion: c.to_string(),
                types: vec![],
            });
            state.push(c);
            state.stats.derived += 1;
            inserted += 1;
            if opts.budget.max_clauses.is_some_and(|m| inserted >= m) || over_time(&start) {
                break 'outer Status::BudgetExhausted;
            }
        }
    };
    trace.flush();
    CompilationOutcome {
        status,
        horn: state.horn(),
        nhorn: state.nhorn(),
        stats: state.stats,
        bound_violation: violation,
    }
}

/// Nearly-monadic and simple: compilation with condensation terminates.
pub fn check_simple_termination(p: &DisjunctiveProgram) -> bool {
    let (nm, simple) = classify_program(p.mon.iter().chain(&p.rol));
    nm && simple
}

/// `2n + 1` for `n` binary predicates.
pub fn variable_bound(p: &DisjunctiveProgram) -> usize {
    2 * p.binary_predicates() + 1
}
