mod commands;
mod input;
mod suite;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use groupoidlab::calgebra::{ACCUMULATED_TOL, STRUCTURAL_TOL};

use commands::Outcome;
use input::{read_value, InputError, InputResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Exact checks on finite groupoid models.
#[derive(Parser, Debug)]
#[command(name = "groupoidlab", version)]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Properties, local-local compactness and closed Hausdorff core of a space.
    SpaceCheck { file: PathBuf },
    /// Continuity, openness, quotient and local-homeomorphism tests for a map.
    MapClassify { file: PathBuf },
    /// The relation groupoid of a quotient map and its orbit space.
    BuildRpsi { file: PathBuf },
    /// Fell test for a principal groupoid, given explicitly or as `{"psi": map}`.
    FellCheck { file: PathBuf },
    /// Graph-algebra Fell criterion for a finite or periodic graph.
    GraphFell { file: PathBuf },
    /// Cocycle identity, normalisation and extension associativity.
    CocycleVerify { file: PathBuf },
    /// Decide whether a Čech 2-cocycle is a coboundary.
    CechCert { file: PathBuf },
    /// Twisted convolution algebra axioms, norms and blocks.
    AlgebraVerify { file: PathBuf },
    /// The doubled interval model.
    ModelDoubled {
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 2)]
        sheets: usize,
    },
    /// The cover algebra of a Čech twist and its doubled-cover comparison.
    ModelRt { file: PathBuf },
    /// Slice map from the extension algebra onto the conjugate twist.
    AppendixA {
        file: PathBuf,
        /// Compare against the original twist instead (fault injection).
        #[arg(long)]
        drop_conjugation: bool,
    },
    /// Run every bundled regression model.
    RegressionSuite {
        /// Perturb the suite cocycle so the associativity entries fail.
        #[arg(long)]
        inject_cocycle_fault: bool,
        /// List entry names without running them.
        #[arg(long)]
        list: bool,
    },
}

fn path_arg(p: &Path) -> Value {
    json!(p.display().to_string())
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::SpaceCheck { .. } => "space-check",
            Command::MapClassify { .. } => "map-classify",
            Command::BuildRpsi { .. } => "build-rpsi",
            Command::FellCheck { .. } => "fell-check",
            Command::GraphFell { .. } => "graph-fell",
            Command::CocycleVerify { .. } => "cocycle-verify",
            Command::CechCert { .. } => "cech-cert",
            Command::AlgebraVerify { .. } => "algebra-verify",
            Command::ModelDoubled { .. } => "model-doubled",
            Command::ModelRt { .. } => "model-rt",
            Command::AppendixA { .. } => "appendix-a",
            Command::RegressionSuite { .. } => "regression-suite",
        }
    }

    fn args(&self) -> Value {
        match self {
            Command::SpaceCheck { file }
            | Command::MapClassify { file }
            | Command::BuildRpsi { file }
            | Command::FellCheck { file }
            | Command::GraphFell { file }
            | Command::CocycleVerify { file }
            | Command::CechCert { file }
            | Command::AlgebraVerify { file }
            | Command::ModelRt { file } => json!({ "file": path_arg(file) }),
            Command::ModelDoubled { levels, sheets } => json!({ "levels": levels, "sheets": sheets }),
            Command::AppendixA { file, drop_conjugation } => {
                json!({ "file": path_arg(file), "drop_conjugation": drop_conjugation })
            }
            Command::RegressionSuite { inject_cocycle_fault, list } => {
                json!({ "inject_cocycle_fault": inject_cocycle_fault, "list": list })
            }
        }
    }

    fn run(&self) -> InputResult<Outcome> {
        match self {
            Command::SpaceCheck { file } => commands::space_check(&read_value(file)?),
            Command::MapClassify { file } => commands::map_classify(&read_value(file)?),
            Command::BuildRpsi { file } => commands::build_rpsi(&read_value(file)?),
            Command::FellCheck { file } => commands::fell(&read_value(file)?),
            Command::GraphFell { file } => commands::graph_fell(&read_value(file)?),
            Command::CocycleVerify { file } => commands::cocycle_verify(&read_value(file)?),
            Command::CechCert { file } => commands::cech_cert(&read_value(file)?),
            Command::AlgebraVerify { file } => commands::algebra_verify(&read_value(file)?),
            Command::ModelDoubled { levels, sheets } => commands::model_doubled(*levels, *sheets),
            Command::ModelRt { file } => commands::model_rt(&read_value(file)?),
            Command::AppendixA { file, drop_conjugation } => commands::appendix_a(&read_value(file)?, *drop_conjugation),
            Command::RegressionSuite { list: true, .. } => {
                let names: Vec<&str> = suite::ENTRIES.iter().map(|(name, _)| *name).collect();
                Ok(Outcome { report: json!({ "entries": names }), healthy: true })
            }
            Command::RegressionSuite { inject_cocycle_fault, .. } => {
                let entries = suite::run(*inject_cocycle_fault);
                let healthy = entries.iter().all(|e| e.passed);
                Ok(Outcome { report: suite::report(&entries), healthy })
            }
        }
    }
}

fn input_failure(e: &InputError) -> ExitCode {
    let body = json!({ "error": { "message": e.message, "pointer": e.pointer } });
    eprintln!("{}", serde_json::to_string_pretty(&body).expect("serialisable"));
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = match cli.command.run() {
        Ok(o) => o,
        Err(e) => return input_failure(&e),
    };
    let envelope = json!({
        "schema_version": SCHEMA_VERSION,
        "command": { "name": cli.command.name(), "args": cli.command.args() },
        "report": outcome.report,
        "checks_passed": outcome.healthy,
        "tolerances": { "structural": STRUCTURAL_TOL, "accumulated": ACCUMULATED_TOL },
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
    });
    let text = serde_json::to_string_pretty(&envelope).expect("serialisable") + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return input_failure(&InputError::new(format!("cannot write {}: {e}", path.display())));
            }
        }
        None => print!("{text}"),
    }
    if outcome.healthy {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
