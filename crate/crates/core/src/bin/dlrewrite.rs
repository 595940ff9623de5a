use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use dlrewrite::datalog::{evaluate, Program};
use dlrewrite::horn::{Budget, Status};
use dlrewrite::pipeline::{answer, rewrite, Bundle, Checker, PipelineError, RewriteConfig};
use dlrewrite::syntax::{parse_abox, parse_query, parse_tbox};
use dlrewrite::trace::Trace;

const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_DIFF: u8 = 3;

#[derive(Parser)]
#[command(name = "dlrewrite", version, about = "Rewrite SHI ontologies into datalog")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite a TBox into a datalog bundle.
    Rewrite {
        #[arg(long)]
        tbox: PathBuf,
        #[arg(long)]
        budget_clauses: Option<usize>,
        #[arg(long)]
        budget_seconds: Option<f64>,
        /// Write inference steps as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Keep the normalization names in the disjunctive program.
        #[arg(long)]
        no_unfold: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a query from a bundle.
    Answer {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        abox: PathBuf,
        #[arg(long)]
        query: PathBuf,
    },
    /// Compare bundle answers with the ground oracle.
    OracleCheck {
        #[arg(long)]
        tbox: PathBuf,
        #[arg(long)]
        abox: PathBuf,
        #[arg(long)]
        query: Option<PathBuf>,
        /// Bound the Horn compilation instead of using the default.
        #[arg(long)]
        budget_clauses: Option<usize>,
    },
    /// Evaluate a datalog program and print all facts.
    Eval {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        abox: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

fn located<E: Into<PipelineError>>(path: &Path) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{}: {}", path.display(), e.into())
}

fn run(cmd: Cmd) -> Result<u8, String> {
    match cmd {
        Cmd::Rewrite { tbox, budget_clauses, budget_seconds, trace, no_unfold, out } => {
            let t = parse_tbox(&read(&tbox).map_err(|e| e.to_string())?).map_err(located(&tbox))?;
            let budget = (budget_clauses.is_some() || budget_seconds.is_some()).then(|| Budget {
                max_iterations: None,
                max_clauses: budget_clauses,
                wall_clock: budget_seconds.map(Duration::from_secs_f64),
            });
            let trace = match trace {
                Some(p) => {
                    Trace::writer(BufWriter::new(File::create(&p).map_err(|e| format!("{}: {e}", p.display()))?))
                }
                None => Trace::off(),
            };
            let cfg = RewriteConfig { budget, trace, unfold: !no_unfold, ..RewriteConfig::default() };
            let r = rewrite(&t, &cfg).map_err(|e| e.to_string())?;
            r.bundle.write(&out).map_err(|e| e.to_string())?;
            let m = &r.bundle.meta;
            println!(
                "fragment {} | {} Horn rules, {} role rules | {} given clauses, {} derived",
                m.fragment, m.horn_rules, m.xi_rules, m.stats.iterations, m.stats.derived
            );
            Ok(match m.status {
                Status::Terminated => {
                    println!("status: terminated");
                    0
                }
                Status::BudgetExhausted => {
                    println!("status: budget_exhausted");
                    EXIT_BUDGET
                }
            })
        }
        Cmd::Answer { bundle, abox, query } => {
            let b = Bundle::read(&bundle).map_err(|e| e.to_string())?;
            let a = parse_abox(&read(&abox).map_err(|e| e.to_string())?).map_err(located(&abox))?;
            let q = parse_query(&read(&query).map_err(|e| e.to_string())?).map_err(located(&query))?;
            let ans = answer(&b, &a, &q);
            if ans.inconsistent {
                eprintln!("warning: ontology and ABox are inconsistent");
            }
            print!("{ans}");
            Ok(0)
        }
        Cmd::OracleCheck { tbox, abox, query, budget_clauses } => {
            let t = parse_tbox(&read(&tbox).map_err(|e| e.to_string())?).map_err(located(&tbox))?;
            let a = parse_abox(&read(&abox).map_err(|e| e.to_string())?).map_err(located(&abox))?;
            let q = match &query {
                Some(p) => Some(parse_query(&read(p).map_err(|e| e.to_string())?).map_err(located(p))?),
                None => None,
            };
            let cfg = RewriteConfig { budget: budget_clauses.map(Budget::clauses), ..RewriteConfig::default() };
            let checker = Checker::new(&t, &cfg).map_err(|e| e.to_string())?;
            if checker.rewriting.bundle.meta.status == Status::BudgetExhausted {
                eprintln!("warning: compilation hit its budget; the bundle may be incomplete");
            }
            let report = checker.check(&a, q.as_ref()).map_err(|e| e.to_string())?;
            println!("{report}");
            Ok(if report.is_clean() { 0 } else { EXIT_DIFF })
        }
        Cmd::Eval { program, abox } => {
            let p = Program::parse(&read(&program).map_err(|e| e.to_string())?)
                .map_err(|e| format!("{}: {e}", program.display()))?;
            let a = parse_abox(&read(&abox).map_err(|e| e.to_string())?).map_err(located(&abox))?;
            let ev = evaluate(&p, &a);
            if ev.inconsistent {
                eprintln!("warning: a constraint fired; the program and ABox are inconsistent");
            }
            print!("{}", ev.facts);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
