use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{self, Outcome, SearchArgs};
use crate::config::{parse_tolerance, RunConfig};
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_USAGE};
use crate::io::{to_json, write_file};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_N: usize = 3;
const DEFAULT_BUDGET: usize = 500;

#[derive(Debug, Parser)]
#[command(name = "cstar-norms", version, about = "Evaluate and certify M-norms and L-norms on complex matrices")]
pub struct Cli {
    /// Master seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Matrix dimension
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Tuple length
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Optimizer budget (evaluations or moves)
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Write the JSON record here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance override, e.g. `--tol defect=1e-6`
    #[arg(long = "tol", global = true, value_parser = parse_tolerance)]
    pub tol: Vec<(String, f64)>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a norm on a matrix file
    Norm { norm: String, matrix: PathBuf },
    /// Lower bound for the dual norm of a matrix
    Dual { norm: String, matrix: PathBuf },
    /// Search for a violation of the M or L inequality (exit 3 if found)
    Certify {
        norm: String,
        property: String,
        n: Option<usize>,
        k: Option<usize>,
        budget: Option<usize>,
        seed: Option<u64>,
    },
    /// Violation search with an optional CSV trace of the defects
    Search {
        norm: String,
        property: String,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Lower bound for the least L-norm above a base norm
    Umin { norm: String, matrix: PathBuf },
    /// Membership of a matrix in the block LMI set of phi, psi
    Lmi { phi: String, psi: String, matrix: PathBuf },
    /// Run the verification suite
    Suite { config: Option<PathBuf> },
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let n = cli.n.unwrap_or(DEFAULT_N);
    if !cli.tol.is_empty() && !matches!(cli.command, Command::Suite { .. }) {
        return Err(CliError::Usage("--tol only applies to `suite`".into()));
    }
    match &cli.command {
        Command::Norm { norm, matrix } => commands::cmd_norm(norm, matrix),
        Command::Dual { norm, matrix } => commands::cmd_dual(norm, matrix, cli.budget.unwrap_or(64), seed),
        Command::Certify {
            norm,
            property,
            n: pn,
            k: pk,
            budget: pb,
            seed: ps,
        } => {
            let n = pn.unwrap_or(n);
            commands::cmd_certify(&SearchArgs {
                norm,
                property,
                n,
                k: pk.or(cli.k).unwrap_or(n),
                budget: pb.unwrap_or(budget),
                seed: ps.unwrap_or(seed),
            })
        }
        Command::Search { norm, property, trace } => commands::cmd_search(
            &SearchArgs {
                norm,
                property,
                n,
                k: cli.k.unwrap_or(n),
                budget,
                seed,
            },
            trace.as_deref(),
        ),
        Command::Umin { norm, matrix } => commands::cmd_umin(norm, matrix, budget, seed),
        Command::Lmi { phi, psi, matrix } => commands::cmd_lmi(phi, psi, matrix, cli.budget.unwrap_or(2000), seed),
        Command::Suite { config } => {
            let mut cfg = match config {
                Some(path) => RunConfig::load(path)?,
                None => RunConfig::default(),
            };
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(v) = cli.n {
                cfg.n = v;
            }
            if let Some(b) = cli.budget {
                cfg.budget = b;
            }
            for (name, value) in &cli.tol {
                cfg.tolerances.insert(name.clone(), *value);
            }
            commands::cmd_suite(&cfg)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            let text = to_json(&outcome.json);
            match cli.out.as_ref().or(outcome.output_path.as_ref()) {
                Some(path) => {
                    if let Err(e) = write_file(path, &text) {
                        eprintln!("error: {e}");
                        return e.exit_code();
                    }
                }
                None => print!("{text}"),
            }
            eprintln!("{}", outcome.summary);
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
