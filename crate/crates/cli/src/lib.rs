//! `geoflow`: exact orbit counting for the type-1 geodesic flow on the
//! PGL_3(F_q[t]) quotient of the building, driven from the command line.

use std::fmt;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use geoflow_core::exec::{with_threads, Exec};
use geoflow_core::Error;

pub mod commands;
pub mod config;
pub mod validate;

pub use config::{CommonArgs, Flow, Format, Kind, Method, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(msg: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: msg.to_string(),
        }
    }

    pub fn core(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::Validation(_) | Error::NoPlateau(_) | Error::Unreachable(_) => EXIT_MISMATCH,
            _ => EXIT_INVALID,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

const LONG_ABOUT: &str = "\
Exact orbit counts for the type-1 geodesic flow on PGL_3(F_q[t])\\B and its tree analogue.

Quotient edges e(k,l) have half-integer indices; every machine-readable format
writes them doubled as integers k2 = 2k, l2 = 2l (so e(1/2,0) is {k2: 1, l2: 0}).
Counts are arbitrary precision and appear in JSON as decimal strings.

Exit codes: 0 success, 1 validation mismatch, 2 invalid input, 3 oracle budget refusal.";

#[derive(Debug, Parser)]
#[command(name = "geoflow", version, about = "Exact periodic-orbit counting for the type-1 geodesic flow", long_about = LONG_ABOUT)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print g_n, f_n or the terminal edge profile for n = period, 2 period, ...
    Count(CommonArgs),
    /// Cross-check oracle, DP, closed forms, weight census and N-table
    Validate(ValidateArgs),
    /// Entropy, first-return growth and the SPR verdict
    Entropy(CommonArgs),
    /// Export the weighted quotient graph (default DOT)
    Graph(CommonArgs),
    /// Dump the weight table, optionally the oracle-measured census
    Weights(WeightsArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Perturb one fold-rule weight before checking: K2,L2:K2,L2:W
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Emit the transition census measured in the building
    #[arg(long)]
    pub from_oracle: bool,
}

/// Exec mode for a configured thread count.
pub fn exec_for(cfg: &RunConfig) -> Exec {
    if cfg.threads > 1 {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}

/// Text and exit code of a finished command.
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Outcome {
            code: EXIT_OK,
            text,
        }
    }
}

type Job = Box<dyn FnOnce(&RunConfig) -> Result<Outcome, CliError> + Send>;

fn dispatch(command: Command) -> Result<Outcome, CliError> {
    let (cfg, job): (RunConfig, Job) = match command {
        Command::Count(a) => (
            a.resolve(Format::Human)?,
            Box::new(|c| commands::count(c).map(Outcome::ok)),
        ),
        Command::Entropy(a) => (
            a.resolve(Format::Human)?,
            Box::new(|c| commands::entropy(c).map(Outcome::ok)),
        ),
        Command::Graph(a) => (
            a.resolve(Format::Dot)?,
            Box::new(|c| commands::graph(c).map(Outcome::ok)),
        ),
        Command::Weights(w) => {
            let from_oracle = w.from_oracle;
            (
                w.common.resolve(Format::Human)?,
                Box::new(move |c| commands::weights(c, from_oracle).map(Outcome::ok)),
            )
        }
        Command::Validate(v) => {
            let fault = v
                .inject_fault
                .as_deref()
                .map(validate::Fault::parse)
                .transpose()?;
            (
                v.common.resolve(Format::Human)?,
                Box::new(move |c| validate::cmd_validate(c, fault)),
            )
        }
    };
    let threads = cfg.threads;
    with_threads(threads, move || job(&cfg))
}

/// Parses `args` (including the program name), runs the command and writes
/// its output; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}
