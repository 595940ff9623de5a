//! End-to-end rewriting: normalize, eliminate transitivity, translate to
//! disjunctive datalog, compile to Horn. Also the rewriting bundle on disk
//! and the comparison against the ground oracle.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datalog::{answer_from, evaluate, ABox, AnswerSet, DatalogError, Fact, GroundQuery, Program};
use crate::dd::{
    is_fresh_concept, translate, unfold_definitional, DdError, DisjunctiveProgram, DEFAULT_SATURATION_LIMIT,
};
use crate::horn::{check_simple_termination, compile_horn, variable_bound, Budget, CompilationOutcome, Options};
use crate::horn::{Stats, Status};
use crate::logic::{Clause, Name};
use crate::ontology::{normalize, OntologyError, TBox};
use crate::oracle::{certain_answers, Oracle, OracleError};
use crate::syntax::SyntaxError;
use crate::trace::Trace;
use crate::transitivity::{split_with, TransitivitySplit};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Dd(#[from] DdError),
    #[error(transparent)]
    Datalog(#[from] DatalogError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Program { path: PathBuf, source: DatalogError },
}

#[derive(Debug, Clone)]
pub struct RewriteConfig {
    /// `None`: unbounded if the DD program is simple and nearly-monadic,
    /// [`Budget::default_bounded`] otherwise.
    pub budget: Option<Budget>,
    pub trace: Trace,
    /// Eliminate the normalization names `X1, X2, …` from the DD program.
    pub unfold: bool,
    /// Add the `A ⊑ ∃R.Self` axioms when eliminating transitivity.
    pub with_self: bool,
    pub condense: bool,
    pub saturation_limit: usize,
}

impl Default for RewriteConfig {
    fn default() -> RewriteConfig {
        RewriteConfig {
            budget: None,
            trace: Trace::off(),
            unfold: true,
            with_self: true,
            condense: true,
            saturation_limit: DEFAULT_SATURATION_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub fragment: String,
    pub status: Status,
    pub stats: Stats,
    pub nearly_monadic: bool,
    pub simple: bool,
    pub dd_clauses: usize,
    pub horn_rules: usize,
    pub xi_rules: usize,
    pub budgeted: bool,
    pub var_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_violation: Option<String>,
}

/// P_horn and Ξ as datalog, with metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub horn: Program,
    pub xi: Program,
    pub meta: Metadata,
}

pub const HORN_FILE: &str = "horn.dl";
pub const XI_FILE: &str = "xi.dl";
pub const META_FILE: &str = "meta.json";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.to_path_buf(), source }
}

impl Bundle {
    pub fn program(&self) -> Program {
        self.horn.union(&self.xi)
    }

    pub fn write(&self, dir: &Path) -> Result<(), PipelineError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let horn = dir.join(HORN_FILE);
        fs::write(&horn, self.horn.to_string()).map_err(io_err(&horn))?;
        let xi = dir.join(XI_FILE);
        fs::write(&xi, self.xi.to_string()).map_err(io_err(&xi))?;
        let meta = dir.join(META_FILE);
        let json = serde_json::to_string_pretty(&self.meta)
            .map_err(|source| PipelineError::Json { path: meta.clone(), source })?;
        fs::write(&meta, json + "\n").map_err(io_err(&meta))?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Bundle, PipelineError> {
        let program = |file: &str| -> Result<Program, PipelineError> {
            let path = dir.join(file);
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            Program::parse(&text).map_err(|source| PipelineError::Program { path, source })
        };
        let meta = dir.join(META_FILE);
        let text = fs::read_to_string(&meta).map_err(io_err(&meta))?;
        let meta = serde_json::from_str(&text).map_err(|source| PipelineError::Json { path: meta, source })?;
        Ok(Bundle { horn: program(HORN_FILE)?, xi: program(XI_FILE)?, meta })
    }
}

/// Everything [`rewrite`] computed on the way to the bundle.
#[derive(Debug, Clone)]
pub struct Rewriting {
    pub normalized: TBox,
    pub split: TransitivitySplit,
    /// DD(Ω) as extracted from the saturation.
    pub dd_full: DisjunctiveProgram,
    /// The program handed to Horn compilation.
    pub dd: DisjunctiveProgram,
    pub outcome: CompilationOutcome,
    pub bundle: Bundle,
}

pub fn rewrite(t: &TBox, cfg: &RewriteConfig) -> Result<Rewriting, PipelineError> {
    let normalized = normalize(t);
    let split = split_with(&normalized, cfg.with_self)?;
    let omega = normalize(&split.omega);
    let dd_full = translate(&omega, cfg.saturation_limit, &cfg.trace)?;
    let dd = if cfg.unfold {
        DisjunctiveProgram::from_clauses(unfold_definitional(&dd_full.clauses(), is_fresh_concept))
    } else {
        dd_full.clone()
    };
    let terminates = check_simple_termination(&dd);
    let budget = match cfg.budget {
        Some(b) => b,
        None if terminates => Budget::unbounded(),
        None => Budget::default_bounded(),
    };
    let var_bound = variable_bound(&dd);
    let opts = Options { condense: cfg.condense, budget, var_bound: Some(var_bound) };
    let outcome = compile_horn(&dd.clauses(), &opts, &cfg.trace);
    let horn = Program::from_clauses(&outcome.horn)?;
    let xi = Program::from_clauses(&split.xi)?;
    let meta = Metadata {
        fragment: t.classify_fragment().label().to_string(),
        status: outcome.status,
        stats: outcome.stats,
        nearly_monadic: dd.nearly_monadic,
        simple: dd.simple,
        dd_clauses: dd.len(),
        horn_rules: horn.len(),
        xi_rules: xi.len(),
        budgeted: !budget.is_unbounded(),
        var_bound,
        bound_violation: outcome.bound_violation.as_ref().map(|c| c.to_string()),
    };
    let bundle = Bundle { horn, xi, meta };
    Ok(Rewriting { normalized, split, dd_full, dd, outcome, bundle })
}

/// Certain answers of `q` from the bundle.
pub fn answer(bundle: &Bundle, abox: &ABox, q: &GroundQuery) -> AnswerSet {
    answer_from(q, &evaluate(&bundle.program(), abox), abox)
}

/// Differences between the bundle path and the oracle path.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub bundle_inconsistent: bool,
    pub oracle_inconsistent: bool,
    /// Entailed according to the oracle, not derived from the bundle.
    pub missing: Vec<String>,
    /// Derived from the bundle, not entailed according to the oracle.
    pub extra: Vec<String>,
    pub compared: usize,
}

impl CheckReport {
    pub fn is_clean(&self) -> bool {
        self.bundle_inconsistent == self.oracle_inconsistent && self.missing.is_empty() && self.extra.is_empty()
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "compared: {}", self.compared)?;
        writeln!(f, "inconsistent: bundle={} oracle={}", self.bundle_inconsistent, self.oracle_inconsistent)?;
        for m in &self.missing {
            writeln!(f, "missing: {m}")?;
        }
        for e in &self.extra {
            writeln!(f, "extra: {e}")?;
        }
        write!(f, "{}", if self.is_clean() { "ok" } else { "DIFF" })
    }
}

/// Compares a rewriting with the oracle over DD(Ω) ∪ Ξ.
#[derive(Debug, Clone)]
pub struct Checker {
    pub rewriting: Rewriting,
    oracle_program: Vec<Clause>,
    concepts: Vec<Name>,
    roles: Vec<Name>,
    program: Program,
}

impl Checker {
    pub fn new(t: &TBox, cfg: &RewriteConfig) -> Result<Checker, PipelineError> {
        let rewriting = rewrite(t, cfg)?;
        let mut oracle_program = rewriting.dd_full.clauses();
        oracle_program.extend(rewriting.split.xi.iter().cloned());
        let program = rewriting.bundle.program();
        Ok(Checker {
            rewriting,
            oracle_program,
            concepts: t.atomic_concepts().into_iter().collect(),
            roles: t.atomic_roles().into_iter().collect(),
            program,
        })
    }

    pub fn oracle_program(&self) -> &[Clause] {
        &self.oracle_program
    }

    /// With a query, compares answer sets; without one, every unary fact
    /// over a TBox concept and every binary fact over a TBox role, for the
    /// individuals of `abox`.
    pub fn check(&self, abox: &ABox, query: Option<&GroundQuery>) -> Result<CheckReport, PipelineError> {
        let ev = evaluate(&self.program, abox);
        let mut report = CheckReport { bundle_inconsistent: ev.inconsistent, ..CheckReport::default() };
        if let Some(q) = query {
            let ours = answer_from(q, &ev, abox);
            let theirs = certain_answers(&self.oracle_program, abox, q)?;
            report.oracle_inconsistent = theirs.inconsistent;
            report.compared = ours.tuples.len().max(theirs.tuples.len());
            let show = |t: &Vec<Name>| {
                q.instantiate(t).iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ").to_string()
            };
            report.missing = theirs.tuples.difference(&ours.tuples).map(show).collect();
            report.extra = ours.tuples.difference(&theirs.tuples).map(show).collect();
            return Ok(report);
        }
        let oracle = Oracle::new(&self.oracle_program, abox, &[])?;
        report.oracle_inconsistent = !oracle.is_consistent();
        if report.oracle_inconsistent || report.bundle_inconsistent {
            return Ok(report);
        }
        let individuals: Vec<Name> = abox.individuals().into_iter().collect();
        let mut facts: BTreeSet<Fact> = BTreeSet::new();
        for c in &self.concepts {
            for a in &individuals {
                facts.insert(Fact { pred: c.clone(), args: vec![a.clone()] });
            }
        }
        for r in &self.roles {
            for a in &individuals {
                for b in &individuals {
                    facts.insert(Fact { pred: r.clone(), args: vec![a.clone(), b.clone()] });
                }
            }
        }
        for f in facts {
            report.compared += 1;
            match (ev.contains(&f), oracle.entails(std::slice::from_ref(&f))) {
                (false, true) => report.missing.push(f.to_string()),
                (true, false) => report.extra.push(f.to_string()),
                _ => {}
            }
        }
        Ok(report)
    }
}

/// One-shot [`Checker`].
pub fn oracle_check(t: &TBox, abox: &ABox, query: Option<&GroundQuery>) -> Result<CheckReport, PipelineError> {
    Checker::new(t, &RewriteConfig::default())?.check(abox, query)
}
