//! Command-line front end for `cubicalforms`.
//!
//! Parsing is done with clap; [`run`] dispatches a parsed [`Cli`] and
//! returns the rendered output together with its status. Nothing here
//! touches the process: `main` owns stdout, files and exit codes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
pub mod golden;
pub mod verify;

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code when a computed value disagrees with its expected value.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit code for invalid arguments.
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CUBICALFORMS_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_MISMATCH,
        }
    }
}

/// Map any core error into a computation failure.
pub(crate) fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

/// Rendered output of a command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    /// `Some(first offending term)` when a check failed.
    pub mismatch: Option<String>,
}

impl Outcome {
    pub fn ok(body: String) -> Self {
        Outcome { body, mismatch: None }
    }

    pub fn exit_code(&self) -> i32 {
        if self.mismatch.is_some() {
            EXIT_MISMATCH
        } else {
            EXIT_OK
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    AsciiChart,
}

#[derive(Debug, Parser)]
#[command(
    name = "cubicalforms",
    version,
    about = "Exact formal group, cubical structure and theta computations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Formal group of a Weierstrass curve.
    Weierstrass {
        #[command(subcommand)]
        cmd: WeierstrassCmd,
    },
    /// The cubical structure r_U.
    Cubical {
        #[command(subcommand)]
        cmd: CubicalCmd,
    },
    /// The involution g on the Gamma_1(3) curve and derived series.
    Involution {
        #[command(subcommand)]
        cmd: InvolutionCmd,
    },
    /// Theta function and level-3 characters.
    Qchar {
        #[command(subcommand)]
        cmd: QcharCmd,
    },
    /// Borel spectral sequence pages.
    Ssq {
        #[command(subcommand)]
        cmd: SsqCmd,
    },
    /// Recompute every pinned value and compare against the golden files.
    Verify {
        #[arg(long, value_enum, default_value = "paper")]
        suite: Suite,
        /// Include wall-clock times in the report.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Every pinned closed-form value and identity.
    Paper,
}

/// Curve selection, truncation and coefficient ideal.
#[derive(Clone, Debug, Default, Args)]
pub struct CurveArgs {
    /// Truncation order: terms of total degree >= N are dropped.
    #[arg(long, value_name = "N")]
    pub order: Option<u32>,
    /// Use the Gamma_1(3) curve (a2 = a4 = a6 = 0).
    #[arg(long)]
    pub gamma13: bool,
    /// Reduce coefficients modulo an ideal, e.g. `2,a1,a2`.
    #[arg(long = "mod", value_name = "p,v1,v2,...")]
    pub modulus: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum WeierstrassCmd {
    /// Formal group law F(x0, x1).
    Fgl(CurveArgs),
    /// z = -1/Y as a series in x = X/Y.
    Zseries(CurveArgs),
    /// Formal inverse [-1](x).
    Inverse(CurveArgs),
    /// The n-series [n](x).
    Nseries {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[command(flatten)]
        curve: CurveArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum CubicalCmd {
    /// The series r_U in x0, x1, x2.
    #[command(name = "rU")]
    RU(CurveArgs),
    /// Mod (2, a1, a2) pipeline on the Gamma_1(3) curve.
    #[command(name = "appendixB")]
    AppendixB {
        #[arg(long, value_name = "N", default_value_t = 4)]
        order: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum InvolutionCmd {
    /// The series g(x).
    G {
        #[arg(long, value_name = "N", default_value_t = 6)]
        order: u32,
        #[arg(long = "mod", value_name = "p,v1,v2,...")]
        modulus: Option<String>,
    },
    /// Composition, multiplicative-sequence and invariance identities.
    Check {
        #[arg(long, value_name = "N", default_value_t = 10)]
        order: u32,
    },
    /// prod_k (1 - t x_k iota(x_k)).
    Pontryagin {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, value_name = "N", default_value_t = 2)]
        t_order: u32,
        #[command(flatten)]
        curve: CurveArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PhiForm {
    Product,
    Exp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShiftArg {
    None,
    MinusOmega,
}

/// Orders of a (x, q) expansion; both are exclusive bounds.
#[derive(Clone, Debug, Args)]
pub struct QOrders {
    #[arg(long, value_name = "N", default_value_t = 10)]
    pub x_order: u32,
    #[arg(long, value_name = "N", default_value_t = 6)]
    pub q_order: u32,
}

#[derive(Debug, Subcommand)]
pub enum QcharCmd {
    /// Theta function Phi(tau, x).
    Phi {
        #[command(flatten)]
        orders: QOrders,
        #[arg(long, value_enum, default_value = "product")]
        form: PhiForm,
        #[arg(long, value_enum, default_value = "none")]
        shift: ShiftArg,
    },
    /// psi(z) = Phi(-omega) / Phi(z - omega).
    Psi {
        #[command(flatten)]
        orders: QOrders,
    },
    /// Level-3 genus x(z).
    Genus {
        #[command(flatten)]
        orders: QOrders,
    },
    /// prod_i 1/psi(x_i) over m roots.
    Character {
        #[arg(long, default_value_t = 1)]
        roots: usize,
        #[command(flatten)]
        orders: QOrders,
    },
}

/// Computation window for the spectral sequence.
#[derive(Clone, Debug, Args)]
pub struct WindowArgs {
    #[arg(long, default_value_t = 48)]
    pub kmax: u32,
    #[arg(long, default_value_t = 16)]
    pub filtration_max: u32,
    #[arg(long, default_value_t = 8)]
    pub u2_max: u32,
}

#[derive(Debug, Subcommand)]
pub enum SsqCmd {
    /// The E-infinity chart of the window.
    Chart {
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Generators of one page (1, 2, 4 or 8 for E-infinity).
    Page {
        #[arg(long, default_value_t = 2)]
        page: u32,
        /// Only list cells of integral degree.
        #[arg(long)]
        integral: bool,
        #[command(flatten)]
        window: WindowArgs,
    },
}

/// Run a parsed command. Output is a pure function of the arguments.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if cli.format == Format::AsciiChart && !matches!(cli.command, Command::Ssq { cmd: SsqCmd::Chart { .. } })
    {
        return Err(CliError::Usage("--format ascii-chart only applies to `ssq chart`".into()));
    }
    match &cli.command {
        Command::Weierstrass { cmd } => commands::weierstrass(cmd, cli.format),
        Command::Cubical { cmd } => commands::cubical(cmd, cli.format),
        Command::Involution { cmd } => commands::involution(cmd, cli.format),
        Command::Qchar { cmd } => commands::qchar(cmd, cli.format),
        Command::Ssq { cmd } => commands::ssq(cmd, cli.format),
        Command::Verify { suite: Suite::Paper, timings } => {
            let report = verify::run_pinned_suite();
            let body = match cli.format {
                Format::Json => verify::to_json(&report, *timings),
                _ => verify::to_text(&report, *timings),
            };
            Ok(Outcome { body, mismatch: report.first_failure() })
        }
    }
}

/// Parse the value of `CUBICALFORMS_THREADS`; `None` when unset.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, CliError> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
    }
}
