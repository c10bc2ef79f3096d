use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "pqsvt", version, about = "Piecewise-QSVT state preparation: plan, simulate, cost")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a target into aligned power-of-two segments and fit each one.
    Segment(SegmentArgs),
    /// Solve phases, simulate the circuit and report fidelity and AA rounds.
    Prepare(PrepareArgs),
    /// Toffoli and qubit counts from the closed-form cost model.
    Cost(CostArgs),
    /// QPE window tails, ancilla sweeps and window preparation costs.
    Window(WindowArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct TargetArgs {
    /// power:<alpha>, log, bspline:<m>, kaiser:<beta> or custom:<csv file>
    #[arg(long)]
    pub target: Option<String>,
    /// Target spec as JSON, e.g. {"kind": "power", "alpha": 0.5, "n": 8}.
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Largest-block-first search from the right edge.
    Greedy,
    /// Fixed dyadic cascade (power and log targets).
    Dyadic,
    /// Exact piecewise coefficients (B-spline targets).
    Exact,
}

#[derive(Args)]
pub struct SegmentArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Qubit count. Ignored with --spec.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    /// Per-segment L∞ tolerance for the greedy search.
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "greedy")]
    pub method: Method,
    /// Write the plan JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
pub struct PrepareArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long)]
    pub n: Option<u32>,
    /// Use this plan JSON instead of fitting one.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Default: exact for bspline, dyadic for power and log, greedy otherwise.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
    /// Prior state to start from instead of the uniform superposition (target descriptor syntax).
    #[arg(long)]
    pub prior: Option<String>,
    /// Phase solver residual tolerance.
    #[arg(long, default_value_t = 1e-7)]
    pub tau: f64,
    /// Seed for the solver's random restarts.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub plan_out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub phases_out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostFormat {
    /// Piecewise QSVT Toffolis, one line per parameter combination.
    Number,
    Csv,
    Json,
}

#[derive(Args)]
pub struct CostArgs {
    /// Polynomial degree; comma-separated lists sweep.
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<u64>,
    /// Segment count.
    #[arg(long = "S", value_delimiter = ',', required = true)]
    pub s: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lmax: Vec<u64>,
    /// Bits of rotation precision, log2(1/eps).
    #[arg(long, value_delimiter = ',', required = true)]
    pub logeps: Vec<u64>,
    /// Qubit count; needed for qubit and with-AA totals.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    pub aa: u64,
    /// general, uniform or unique:<k>
    #[arg(long, default_value = "general")]
    pub variant: String,
    #[arg(long, value_enum, default_value = "number")]
    pub format: CostFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct WindowArgs {
    /// Reproduce a figure sweep: 6 (extra ancillas vs tail) or 7 (preparation cost).
    #[arg(long, conflicts_with = "window")]
    pub fig: Option<u32>,
    /// Defaults: 10 for figure 6, 25 for figure 7.
    #[arg(long)]
    pub base_qubits: Option<u32>,
    /// Tail targets for figure 6.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Vec<f64>,
    /// Largest extra-ancilla count for figure 7.
    #[arg(long, default_value_t = 6)]
    pub max_extra: u32,
    /// Single tail report: rect, kaiser:<beta> or bspline:<m>.
    #[arg(long, required_unless_present = "fig", requires_all = ["l", "confidence"])]
    pub window: Option<String>,
    /// QPE register size.
    #[arg(long)]
    pub l: Option<u32>,
    /// Eigenphase offset in grid units.
    #[arg(long, default_value_t = 0.0)]
    pub energy: f64,
    /// Half-width of the accepted interval, in grid units.
    #[arg(long)]
    pub confidence: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::init_threads().and_then(|()| match cli.command {
        Command::Segment(a) => commands::segment(&a),
        Command::Prepare(a) => commands::prepare(&a),
        Command::Cost(a) => commands::cost(&a),
        Command::Window(a) => commands::window(&a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
