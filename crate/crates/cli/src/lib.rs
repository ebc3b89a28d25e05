//! Command-line front end for the partial search toolkit.
//!
//! Every command produces one [`Report`], rendered as text, JSON or CSV to
//! stdout or to `--output`. Exit status is 0 on success, 1 for invalid or
//! infeasible input and 2 when an internal check fails.

pub mod commands;
pub mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use partial_search_core::{Backend, ThetaMode, DEFAULT_DENSE_CAP};

pub use report::{Cell, Format, Report, Table};

#[derive(Debug, Parser)]
#[command(
    name = "partial-search",
    version,
    about = "Partial quantum database search experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the three-step partial search and report block probabilities
    Simulate(SimulateArgs),
    /// Run plain amplitude amplification for a number of steps
    Grover(GroverArgs),
    /// Find the cost-minimizing epsilon for one K
    Optimize(OptimizeArgs),
    /// Upper and lower bound coefficients for several K
    Table(TableArgs),
    /// Classical randomized and deterministic baselines
    Classical(ClassicalArgs),
    /// Lower bounds, reduction totals and the erring-search bound
    Bounds(BoundsArgs),
    /// Amplitude snapshots and lemma diagnostics
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Dense,
    Reduced,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Dense => Backend::Dense,
            BackendArg::Reduced => Backend::Reduced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThetaArg {
    Asymptotic,
    Exact,
}

impl From<ThetaArg> for ThetaMode {
    fn from(t: ThetaArg) -> Self {
        match t {
            ThetaArg::Asymptotic => ThetaMode::Asymptotic,
            ThetaArg::Exact => ThetaMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, value_enum, default_value_t = BackendArg::Reduced)]
    pub backend: BackendArg,
    /// Largest N the dense backend may allocate
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    pub dense_cap: u64,
    /// Marked address; drawn from --seed when omitted
    #[arg(long)]
    pub target: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1 << 16)]
    pub n: u64,
    #[arg(long, default_value_t = 4)]
    pub k: u64,
    /// Step-1 shortfall; the optimizer's choice when omitted
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = ThetaArg::Asymptotic)]
    pub theta_mode: ThetaArg,
    #[arg(long, default_value_t = partial_search_core::analysis::DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GroverArgs {
    #[arg(long, default_value_t = 1 << 10)]
    pub n: u64,
    /// Blocks used for the reported block probabilities
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// Number of iterations; round((π/4)√N) when omitted
    #[arg(long)]
    pub steps: Option<u64>,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long, default_value_t = 4)]
    pub k: u64,
    #[arg(long, default_value_t = partial_search_core::analysis::DEFAULT_TOL)]
    pub tol: f64,
    /// Samples of the cost curve over [0, 1]
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Comma-separated block counts
    #[arg(long, default_value = "2,3,4,5,8,32")]
    pub k: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ClassicalArgs {
    #[arg(long, default_value_t = 1200)]
    pub n: u64,
    #[arg(long, default_value_t = 3)]
    pub k: u64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 4)]
    pub k: u64,
    #[arg(long, default_value_t = 1 << 16)]
    pub n: u64,
    /// Error probability for the erring-search bound
    #[arg(long, default_value_t = 0.01)]
    pub err: f64,
    /// Constant hidden in the erring-search bound
    #[arg(long, default_value_t = 1.0)]
    pub hidden_const: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoKind {
    /// Twelve items, three blocks, two queries
    Fig1,
    /// Amplitudes after each step of the full algorithm
    Steps,
    /// Hybrid-argument lemma checks on full search
    Lemmas,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[arg(long, value_enum, default_value_t = DemoKind::Fig1)]
    pub which: DemoKind,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub target: Option<u64>,
    /// Distributions sampled by the concavity check
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    pub dense_cap: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Simulate(a) => &a.out,
            Command::Grover(a) => &a.out,
            Command::Optimize(a) => &a.out,
            Command::Table(a) => &a.out,
            Command::Classical(a) => &a.out,
            Command::Bounds(a) => &a.out,
            Command::Demo(a) => &a.out,
        }
    }
}

/// Failure classes, each mapped to an exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad or infeasible input (exit 1).
    Input(String),
    /// An internal consistency check failed (exit 2).
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Internal(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<partial_search_core::Error> for Failure {
    fn from(e: partial_search_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Parses `argv` (program name first), runs the command and writes the
/// report. Returns the process exit status.
pub fn run<I, S>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let command_line = std::iter::once(report::TOOL.to_owned())
        .chain(
            argv.iter()
                .skip(1)
                .map(|a| a.to_string_lossy().into_owned()),
        )
        .collect::<Vec<_>>()
        .join(" ");
    match execute(&cli.command, command_line) {
        Ok(bytes) => match write_output(cli.command.output(), &bytes) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

/// Runs `command` and renders its report in the requested format.
pub fn execute(command: &Command, command_line: String) -> Result<Vec<u8>, Failure> {
    let report = commands::dispatch(command, command_line)?;
    Ok(report.render(command.output().format))
}

fn write_output(out: &OutputArgs, bytes: &[u8]) -> Result<(), String> {
    use std::io::Write;
    match &out.output {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}
