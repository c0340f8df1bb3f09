//! `heatgraph`: run the denoising benchmark, the bound checks, or inspect a
//! graph's spectrum.
//!
//! Exit codes: 0 on success, 1 when an image or a property fails, 2 on a
//! configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use heatgraph::bench::pipeline::{run_pipeline, ForwardModel, Method, PipelineConfig};
use heatgraph::bench::properties::{run_property_suite_with, Scale, DEFAULT_TRIALS};
use heatgraph::bench::tables::emit_tables;
use heatgraph::diffusion::select_m_eps;
use heatgraph::graph::{grid_graph, GridSpec, SimpleGraph};
use heatgraph::spectral::{eigendecompose_dense, eigendecompose_grid, EigenBasis};

#[derive(Parser)]
#[command(name = "heatgraph", version, about = "Backward heat diffusion on graphs with spectral cut-off")]
struct Cli {
    /// More log output (-v info, -vv debug). Logging is configured only
    /// through this flag.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Blur noisy images with heat flow and reconstruct them.
    Pipeline(PipelineArgs),
    /// Check the error bounds of the cut-off reconstruction on random data.
    Proptest(ProptestArgs),
    /// Print the Laplacian eigenvalues as CSV.
    Spectrum(GraphArgs),
    /// Print graph and spectrum statistics.
    Info(InfoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Naive,
    Cutoff,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ForwardArg {
    Euler,
    Spectral,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Small,
    Medium,
}

#[derive(Args)]
struct PipelineArgs {
    /// Input PGM files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Working grid, `ROWSxCOLS` or `N` for a square.
    #[arg(long, default_value = "128x128")]
    grid: GridSpec,
    /// Standard deviation of the added noise, in grey levels.
    #[arg(long, default_value_t = 20.0)]
    sigma_noise: f64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Terminal time T.
    #[arg(long = "t-final", visible_alias = "T", default_value_t = 0.5)]
    t_final: f64,
    /// Explicit Euler step.
    #[arg(long, default_value_t = 0.03)]
    courant: f64,
    /// Noise seed; image `i` uses `seed XOR i`.
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "both")]
    method: MethodArg,
    #[arg(long, default_value = "results")]
    output_dir: PathBuf,
    /// How the blurred image is produced. `spectral` is exact.
    #[arg(long, value_enum, default_value = "euler")]
    forward: ForwardArg,
    /// Each backward solve is timed this many times and the fastest is kept.
    #[arg(long, default_value_t = 5)]
    timing_repeats: usize,
}

#[derive(Args)]
struct ProptestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "small")]
    scale: ScaleArg,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
}

#[derive(Args)]
struct GraphArgs {
    /// Grid graph, `ROWSxCOLS` or `N`.
    #[arg(long, conflicts_with = "edge_list", required_unless_present = "edge_list")]
    grid: Option<GridSpec>,
    /// Edge-list file: `n m` on the first line, then one `i j` per edge.
    #[arg(long)]
    edge_list: Option<PathBuf>,
    /// Use the dense solver even for grids.
    #[arg(long)]
    dense: bool,
}

#[derive(Args)]
struct InfoArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long = "t-final", visible_alias = "T", default_value_t = 0.5)]
    t_final: f64,
}

/// Errors that mean "the invocation was wrong" rather than "the work failed".
struct ConfigError(anyhow::Error);

fn config<T>(r: anyhow::Result<T>) -> Result<T, ConfigError> {
    r.map_err(ConfigError)
}

fn load_graph(args: &GraphArgs) -> anyhow::Result<(SimpleGraph, EigenBasis)> {
    match (&args.grid, &args.edge_list) {
        (Some(spec), _) => {
            let graph = grid_graph(*spec);
            let basis = if args.dense {
                eigendecompose_dense(&graph.laplacian())?
            } else {
                eigendecompose_grid(*spec)
            };
            Ok((graph, basis))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let graph = SimpleGraph::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?;
            let basis = eigendecompose_dense(&graph.laplacian())?;
            Ok((graph, basis))
        }
        (None, None) => bail!("one of --grid or --edge-list is required"),
    }
}

fn pipeline(args: PipelineArgs) -> Result<ExitCode, ConfigError> {
    let mut cfg = PipelineConfig::new(args.inputs, args.seed, args.output_dir);
    cfg.grid = args.grid;
    cfg.sigma_noise = args.sigma_noise;
    cfg.epsilon = args.epsilon;
    cfg.gamma = args.gamma;
    cfg.t_final = args.t_final;
    cfg.courant = args.courant;
    cfg.timing_repeats = args.timing_repeats;
    cfg.method = match args.method {
        MethodArg::Naive => Method::Naive,
        MethodArg::Cutoff => Method::Cutoff,
        MethodArg::Both => Method::Both,
    };
    cfg.forward = match args.forward {
        ForwardArg::Euler => ForwardModel::Euler,
        ForwardArg::Spectral => ForwardModel::Spectral,
    };
    let report = config(run_pipeline(&cfg).context("pipeline configuration"))?;
    for (input, why) in &report.failures {
        eprintln!("error: {input}: {why}");
    }
    if !report.records.is_empty() {
        let tables = emit_tables(&report.records).expect("records are non-empty");
        print!("{}", tables.text);
        println!(
            "basis setup {:.3} s; results in {}",
            report.basis_setup_secs,
            cfg.output_dir.display()
        );
    }
    Ok(if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn proptest(args: ProptestArgs) -> Result<ExitCode, ConfigError> {
    if args.trials == 0 {
        return Err(ConfigError(anyhow::anyhow!("--trials must be at least 1")));
    }
    let scale = match args.scale {
        ScaleArg::Small => Scale::Small,
        ScaleArg::Medium => Scale::Medium,
    };
    let report = run_property_suite_with(args.seed, scale, args.trials);
    print!("{report}");
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn spectrum(args: GraphArgs) -> Result<ExitCode, ConfigError> {
    let (_, basis) = config(load_graph(&args))?;
    print!("{}", basis.spectrum_csv());
    Ok(ExitCode::SUCCESS)
}

fn info(args: InfoArgs) -> Result<ExitCode, ConfigError> {
    let (graph, basis) = config(load_graph(&args.graph))?;
    let params = config(select_m_eps(args.epsilon, args.gamma, args.t_final, basis.lambda_max()).map_err(Into::into))?;
    let lap = graph.laplacian();
    println!("vertices        {}", graph.vertex_count());
    println!("edges           {}", graph.edge_count());
    println!("max degree      {}", lap.max_degree());
    println!("basis           {:?}", basis.source());
    println!("lambda_min      {:.12}", basis.eigenvalues()[0]);
    println!("lambda_max      {:.12}", basis.lambda_max());
    println!("trace           {}", lap.trace());
    println!(
        "M_eps           {:.12}{}",
        params.m_eps,
        if params.capped { " (capped at lambda_max)" } else { "" }
    );
    println!("admissible      {} of {}", basis.count_admissible(params.m_eps), basis.dim());
    for w in graph.validation_warnings() {
        println!("warning         {w}");
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    let result = match cli.command {
        Command::Pipeline(a) => pipeline(a),
        Command::Proptest(a) => proptest(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Info(a) => info(a),
    };
    result.unwrap_or_else(|ConfigError(e)| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
