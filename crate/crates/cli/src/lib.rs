//! Batch command-line interface over the exact Rota-Baxter operator
//! machinery: one command per process, JSON in, JSON out.
//!
//! The result document has a deterministic `body` (re-running the same input
//! produces byte-identical bytes) and a `timing_ms` field outside it. Exit
//! status is 0 for true/success verdicts, 1 for false/absent verdicts, and
//! 2 for input errors.

pub mod commands;
pub mod document;

use clap::{Parser, Subcommand};
use commands::{CommandOutcome, GlobalOptions, Verdict};
use serde_json::json;
use std::path::PathBuf;
use std::time::Instant;

/// Environment variable overriding the cochain degree cap.
pub const MAX_DEGREE_ENV: &str = "RBA_MAX_DEGREE";

#[derive(Debug, Parser)]
#[command(
    name = "rba",
    version,
    about = "Exact checks and cohomology for relative Rota-Baxter operators on Leibniz algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input problem document (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,

    /// Write the result document here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Cap on cochain degrees materialised as matrices (env: RBA_MAX_DEGREE).
    #[arg(long, global = true, value_name = "K")]
    pub max_degree: Option<usize>,

    /// Cap on deformation series orders.
    #[arg(long, global = true, value_name = "N")]
    pub order_cap: Option<usize>,

    /// Worker threads for grid search; results are identical for any count.
    #[arg(long, global = true, value_name = "W")]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the Leibniz identity on every basis triple.
    CheckLeibniz,
    /// Verify the representation axioms on every basis pair.
    CheckRep,
    /// Verify the Rota-Baxter equation for a named operator.
    CheckRb {
        #[arg(long)]
        operator: Option<String>,
    },
    /// Emit the quadratic polynomial system equivalent to the equation.
    RbSystem,
    /// Grid-search operators with entries from a finite value set.
    RbSearch {
        /// Comma-separated rational values, e.g. "-1,-1/2,0,1/2,1".
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        /// 1-based "row,col" pairs separated by ';' allowed to vary.
        #[arg(long)]
        free: Option<String>,
        /// Candidate-count ceiling for this run.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Exact cohomology dimensions at one degree.
    Cohomology {
        #[arg(long)]
        operator: Option<String>,
        #[arg(long)]
        degree: usize,
    },
    /// Check the Nijenhuis-element conditions for an element.
    Nijenhuis {
        #[arg(long)]
        operator: Option<String>,
        /// Named element or inline coordinates "1,0,0".
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Check that a direction generates a linear deformation.
    LinearDeform {
        #[arg(long)]
        operator: Option<String>,
        #[arg(long)]
        tau: String,
    },
    /// Check equivalence of deformations: linear directions via a witness
    /// element, or whole series via a named equivalence pair.
    Equivalence {
        #[arg(long)]
        operator: Option<String>,
        #[arg(long, requires = "tau2", requires = "element", conflicts_with_all = ["series1", "series2", "pair"])]
        tau1: Option<String>,
        #[arg(long)]
        tau2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
        /// Target series of the formal variant.
        #[arg(long, requires = "series2", requires = "pair")]
        series1: Option<String>,
        /// Source series of the formal variant.
        #[arg(long)]
        series2: Option<String>,
        /// Named equivalence pair supplying the witness maps.
        #[arg(long)]
        pair: Option<String>,
    },
    /// Compute the obstruction cocycle of an order-n series.
    Obstruction {
        #[arg(long)]
        series: String,
    },
    /// Extend a series order by order up to a target order.
    Extend {
        #[arg(long)]
        series: String,
        #[arg(long)]
        to_order: usize,
    },
    /// One-sided rigidity certificate from Nijenhuis generators.
    Rigidity {
        #[arg(long)]
        operator: Option<String>,
        /// Comma-separated names of extra generator elements.
        #[arg(long)]
        elements: Option<String>,
    },
    /// Maurer-Cartan check: the self-bracket vanishes.
    McCheck {
        #[arg(long)]
        operator: Option<String>,
    },
    /// Cross-validate the coboundary against the graded bracket.
    SignCheck {
        #[arg(long)]
        operator: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
    },
}

fn resolve_globals(cli: &Cli) -> GlobalOptions {
    let env_max_degree = std::env::var(MAX_DEGREE_ENV)
        .ok()
        .and_then(|v| v.parse().ok());
    GlobalOptions {
        max_degree: cli
            .max_degree
            .or(env_max_degree)
            .unwrap_or(rba_core::cohomology::DEFAULT_MAX_DEGREE),
        order_cap: cli
            .order_cap
            .unwrap_or(rba_core::deformation::DEFAULT_ORDER_CAP),
        workers: cli.workers.unwrap_or(1).max(1),
    }
}

fn dispatch(
    cli: &Cli,
    doc: &document::CompiledDocument,
    globals: &GlobalOptions,
) -> Result<CommandOutcome, commands::CommandError> {
    match &cli.command {
        Command::CheckLeibniz => commands::check_leibniz(doc),
        Command::CheckRep => commands::check_rep(doc),
        Command::CheckRb { operator } => commands::check_rb(doc, operator.as_deref()),
        Command::RbSystem => commands::rb_system(doc),
        Command::RbSearch {
            values,
            free,
            budget,
        } => commands::rb_search(doc, values, free.as_deref(), *budget, globals),
        Command::Cohomology { operator, degree } => {
            commands::cohomology_cmd(doc, operator.as_deref(), *degree, globals)
        }
        Command::Nijenhuis { operator, element } => {
            commands::nijenhuis(doc, operator.as_deref(), element)
        }
        Command::LinearDeform { operator, tau } => {
            commands::linear_deform(doc, operator.as_deref(), tau)
        }
        Command::Equivalence {
            operator,
            tau1,
            tau2,
            element,
            series1,
            series2,
            pair,
        } => match (tau1, series1) {
            (Some(tau1), None) => commands::equivalence(
                doc,
                operator.as_deref(),
                tau1,
                tau2.as_deref().expect("clap enforces --tau2"),
                element.as_deref().expect("clap enforces --element"),
            ),
            (None, Some(series1)) => commands::formal_equivalence(
                doc,
                series1,
                series2.as_deref().expect("clap enforces --series2"),
                pair.as_deref().expect("clap enforces --pair"),
            ),
            _ => Err(commands::CommandError::Core(
                "equivalence needs either --tau1/--tau2/--element or --series1/--series2/--pair"
                    .into(),
            )),
        },
        Command::Obstruction { series } => commands::obstruction(doc, series),
        Command::Extend { series, to_order } => commands::extend(doc, series, *to_order, globals),
        Command::Rigidity { operator, elements } => {
            commands::rigidity(doc, operator.as_deref(), elements.as_deref(), globals)
        }
        Command::McCheck { operator } => commands::mc_check(doc, operator.as_deref()),
        Command::SignCheck { operator, degree } => {
            commands::sign_check(doc, operator.as_deref(), *degree, globals)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn error_document(errors: &[document::SchemaError]) -> String {
    let mut doc = serde_json::to_string_pretty(&json!({ "errors": errors })).expect("serializable");
    doc.push('\n');
    doc
}

/// Runs one command end to end. Returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let started = Instant::now();
    let Some(input) = &cli.input else {
        eprintln!("error: --input <FILE> is required");
        return 2;
    };
    let text = match std::fs::read_to_string(input) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", input.display());
            return 2;
        }
    };
    let doc = match document::parse_document(&text) {
        Ok(doc) => doc,
        Err(errors) => {
            let _ = emit(cli, &error_document(&errors));
            return 2;
        }
    };
    let globals = resolve_globals(cli);
    match dispatch(cli, &doc, &globals) {
        Ok(outcome) => {
            let body = json!({
                "command": outcome.command,
                "args": outcome.args,
                "verdict": matches!(outcome.verdict, Verdict::Pass),
                "result": outcome.result,
            });
            let document = json!({
                "body": body,
                "timing_ms": started.elapsed().as_millis().to_string(),
            });
            let mut text = serde_json::to_string_pretty(&document).expect("serializable");
            text.push('\n');
            if let Err(err) = emit(cli, &text) {
                eprintln!("error: cannot write output: {err}");
                return 2;
            }
            match outcome.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
            }
        }
        Err(err) => {
            let _ = emit(
                cli,
                &error_document(&[document::SchemaError {
                    path: "args".into(),
                    message: err.to_string(),
                }]),
            );
            2
        }
    }
}
