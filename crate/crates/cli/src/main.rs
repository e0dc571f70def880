mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

/// Lattice sampling, bounded-distance decoding and shortest-vector experiments.
#[derive(Parser, Debug)]
#[command(name = "latticebdd", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Basis file: `n` on the first line, then one basis vector per line. Defaults to Z^4.
    #[arg(long, global = true)]
    basis: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Data output path (batch, oracle or CSV, depending on the command).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Node budget for lattice enumeration.
    #[arg(long, global = true, default_value_t = latticebdd::lattice::DEFAULT_NODE_BUDGET)]
    budget_nodes: u64,
    /// Smaller problem sizes and sample caps.
    #[arg(long, global = true)]
    quick: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw from the discrete Gaussian on the basis lattice.
    Sample(SampleArgs),
    /// Draw at or above the 1/3-smoothing parameter via random dense superlattices.
    SampleSmoothing(SmoothingArgs),
    /// One combining round over a stored batch.
    Combine(CombineArgs),
    /// Narrow a wide seed batch to width `s` through repeated combining.
    Pipeline(PipelineArgs),
    /// Build or query a dual-Gaussian decoder.
    #[command(subcommand)]
    Bdd(BddCommand),
    /// Shortest-vector solvers.
    #[command(subcommand)]
    Svp(SvpCommand),
    /// Asymptotic cost exponents.
    #[command(subcommand)]
    Cost(CostCommand),
    /// Run property suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    s: f64,
    #[arg(long)]
    count: usize,
    #[arg(long, value_enum, default_value_t = Sampler::Exact)]
    sampler: Sampler,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Sampler {
    Exact,
    Klein,
}

#[derive(Args, Debug)]
struct SmoothingArgs {
    #[arg(long)]
    s: f64,
    #[arg(long)]
    count: usize,
    /// log2 of the superlattice index; defaults to ceil(n/2)+4 clamped below n.
    #[arg(long)]
    index_log: Option<usize>,
}

#[derive(Args, Debug)]
struct CombineArgs {
    /// Input batch file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long, default_value_t = 1)]
    c: u32,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Override the tuple size 8d (experiments only).
    #[arg(long)]
    tuple_size: Option<usize>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long)]
    q: u32,
    /// Target width.
    #[arg(long)]
    s: f64,
    #[arg(long)]
    count: usize,
    /// Seed width the pipeline must start from; defaults to the Klein threshold.
    #[arg(long)]
    start_width: Option<f64>,
    /// Check `q·o = Σx − v` on every emitted point.
    #[arg(long)]
    audit: bool,
}

#[derive(Subcommand, Debug)]
enum BddCommand {
    /// Sample the dual and store the decoder.
    Build(BddBuildArgs),
    /// Decode targets with a stored decoder.
    Query(BddQueryArgs),
}

#[derive(Args, Debug)]
struct BddBuildArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = Source::Smoothing)]
    source: Source,
    /// Modulus for `--source pipeline`.
    #[arg(long, default_value_t = 4)]
    pipeline_q: u32,
    /// Constant `c` in the sample count `c·n·log2(1/ε)/√ε`.
    #[arg(long, default_value_t = latticebdd::bdd::DEFAULT_SAMPLE_CONSTANT)]
    c: f64,
    #[arg(long)]
    max_samples: Option<usize>,
    /// Slack subtracted inside the decoding radius.
    #[arg(long, default_value_t = 0.0)]
    conservative: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Source {
    Smoothing,
    Exact,
    Pipeline,
}

#[derive(Args, Debug)]
struct BddQueryArgs {
    /// Stored decoder.
    #[arg(long)]
    oracle: PathBuf,
    /// Comma-separated ambient coordinates; rationals like `1/3` are accepted. Repeatable.
    #[arg(long, required = true)]
    target: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum SvpCommand {
    /// Full `(10q)^n` grid with a `0.1/q` decoder.
    Tradeoff(TradeoffArgs),
    /// `3^n` grid with the shifted-minimum key and quantum query accounting.
    Minfind(MinfindArgs),
    /// Random spherical caps with `2^n` grids.
    Caps(CapsArgs),
}

#[derive(Args, Debug, Clone)]
struct OracleArgs {
    #[arg(long, value_enum, default_value_t = OracleKind::Dgs)]
    oracle: OracleKind,
    /// Cap on dual samples for the dual-Gaussian decoder.
    #[arg(long)]
    max_samples: Option<usize>,
    /// Skip the enumeration reference that fills `success`.
    #[arg(long)]
    no_validate: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OracleKind {
    Exact,
    Dgs,
}

#[derive(Args, Debug)]
struct TradeoffArgs {
    #[arg(long)]
    q: u32,
    /// Query this many random grid points instead of the whole grid.
    #[arg(long)]
    sampled: Option<usize>,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args, Debug)]
struct MinfindArgs {
    #[arg(long)]
    report_quantum: bool,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args, Debug)]
struct CapsArgs {
    #[arg(long, default_value_t = 0.4097)]
    alpha: f64,
    /// Targets per radius guess.
    #[arg(long, default_value_t = 20)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = Policy::Alpha)]
    cap_radius_policy: Policy,
    /// Stop once a shortest vector is seen.
    #[arg(long)]
    stop_at_lambda1: bool,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Policy {
    Alpha,
    Optimal,
}

#[derive(Subcommand, Debug)]
enum CostCommand {
    /// Emit `b,c` rows over the kissing-exponent grid.
    Curve(CurveArgs),
    /// Optimised exponent at one kissing exponent.
    Point(PointArgs),
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// One of cap-small-eps, cap-large-eps, minfind with a -classical or -quantum suffix.
    #[arg(long)]
    variant: String,
    #[arg(long, value_enum, default_value_t = Policy::Optimal)]
    policy: Policy,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long)]
    variant: String,
    #[arg(long)]
    b: f64,
    #[arg(long, value_enum, default_value_t = Policy::Optimal)]
    policy: Policy,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// lattice, gauss, combiner, smoothing, bdd, svp, cost or all.
    suite: String,
    /// Rank for the combiner distribution check.
    #[arg(long)]
    n: Option<usize>,
    /// Modulus for the combiner distribution check.
    #[arg(long)]
    q: Option<u32>,
    /// Per-suite wall-clock budget; overruns are logged, not aborted.
    #[arg(long, default_value_t = 600)]
    suite_budget_secs: u64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LATTICEBDD_LOG")).init();
    let cli = Cli::parse();
    let mut report = Report::new(&cli.global);
    if let Some(w) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build_global()
        {
            log::warn!("worker pool: {e}");
        }
    }
    latticebdd::lattice::set_node_budget(cli.global.budget_nodes);
    let outcome = commands::run(&cli.global, cli.command, &mut report);
    let code = match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report.line("error", &[("message", format!("{e:#}"))]);
            eprintln!("latticebdd: {e:#}");
            ExitCode::FAILURE
        }
    };
    report.finish();
    code
}
