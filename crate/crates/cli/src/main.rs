mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_ascent::analysis::{bound_report, write_bound_report, DEFAULT_ORACLE_CAP};
use graph_ascent::bench::{
    plot_svg, read_results_csv, run_bench, summarize, write_results_csv, write_summary_csv, ExperimentConfig,
    GraphSpec, WalkerSpec,
};
use graph_ascent::graph::{load_graph, save_graph};
use graph_ascent::spectral::{
    coherence_profile, read_function_csv, synth_perturbed, write_function_csv, PositivityMargin, SpectralBasis,
};
use graph_ascent::walkers::{run_walk, write_trace_csv, RecordPolicy};
use graph_ascent::{Graph, GraphFunction, WalkKernel};

use config::BenchFile;

static INTERRUPTED: AtomicBool = AtomicBool::new(false);

#[derive(Parser)]
#[command(name = "graph-ascent", version, about = "Random-walk search for the maximum of smooth graph functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    GenerateGraph {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Synthesize a random k-smooth function on a graph.
    SynthFunction {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Standard deviation of per-vertex noise added before the lift.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Absolute positivity margin (default: 1e-3 of the range).
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the hitting-time experiment and write results and summary CSVs.
    Bench(BenchArgs),
    /// Report convergence and hitting-time bounds for one walker.
    Bounds {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[command(flatten)]
        walker: WalkerArgs,
        /// Times at which to report the TV bound.
        #[arg(long, value_delimiter = ',', default_values_t = [0, 10, 100])]
        tv_times: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        #[arg(long, default_value = "instance")]
        instance_id: String,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Plot a results CSV as one SVG per graph family.
    Plot {
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a single walk and dump its trace.
    Walk {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        function: PathBuf,
        #[command(flatten)]
        walker: WalkerArgs,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Grid,
    Er,
    Ba,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability for ER graphs (default 1.1 ln(n)/n).
    #[arg(long)]
    p: Option<f64>,
    /// Edges per new vertex for BA graphs.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    graph_seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WalkerName {
    Vanilla,
    Exponential,
    Laplacian,
    LaplacianEps,
}

#[derive(Args)]
struct WalkerArgs {
    #[arg(long, value_enum)]
    walker: WalkerName,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Smoothness for the Laplacian walkers (default: from the function file's graph basis).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// `key = value` settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphArgs,
    /// Edge-list file to use instead of a generated graph.
    #[arg(long)]
    graph_file: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    gammas: Option<Vec<f64>>,
    /// Also run the Laplacian walker with ε fitted to each function.
    #[arg(long)]
    eps_variant: bool,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    functions: Option<usize>,
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Count a hit at the top q fraction of vertices instead of the maximum.
    #[arg(long)]
    target_quantile: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Record wall time per run (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::GenerateGraph { graph, out } => generate_graph(&graph, &BenchFile::default(), &out),
        Command::SynthFunction { graph, k, seed, noise, margin, out } => {
            let g = read_graph(&graph)?;
            let basis = SpectralBasis::of_graph(&g)?;
            let margin = margin.map_or(PositivityMargin::default(), PositivityMargin::Absolute);
            let f = synth_perturbed(&basis, k, seed, noise, margin)?;
            write_function_csv(&f, create(&out)?)?;
            println!("wrote {} values, max {:.6} at {:?}", f.len(), f.max(), f.argmax_set());
            Ok(())
        }
        Command::Bench(args) => bench(args),
        Command::Bounds { graph, function, walker, tv_times, oracle_cap, instance_id, out } => {
            let g = read_graph(&graph)?;
            let f = read_function(&function)?;
            let basis = needs_basis(&walker).then(|| SpectralBasis::of_graph(&g)).transpose()?;
            let kernel = build_kernel(&g, &f, &walker, basis.as_ref())?;
            let report = bound_report(&kernel, g.diameter()?, &instance_id, &tv_times, oracle_cap)?;
            match out {
                Some(path) => write_bound_report(&report, create(&path)?)?,
                None => write_bound_report(&report, io::stdout().lock())?,
            }
            Ok(())
        }
        Command::Plot { results, out_dir } => {
            let rows = read_results_csv(File::open(&results).with_context(|| format!("opening {}", results.display()))?)?;
            fs::create_dir_all(&out_dir)?;
            for (family, svg) in plot_svg(&summarize(&rows)) {
                let path = out_dir.join(format!("{family}.svg"));
                fs::write(&path, svg)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Walk { graph, function, walker, steps, seed, out } => {
            let g = read_graph(&graph)?;
            let f = read_function(&function)?;
            let basis = needs_basis(&walker).then(|| SpectralBasis::of_graph(&g)).transpose()?;
            let kernel = build_kernel(&g, &f, &walker, basis.as_ref())?;
            let trace = run_walk(&kernel, steps, seed, RecordPolicy::Full);
            match out {
                Some(path) => write_trace_csv(&trace, f.values(), create(&path)?)?,
                None => write_trace_csv(&trace, f.values(), io::stdout().lock())?,
            }
            match trace.t_hit.steps() {
                Some(t) => eprintln!("start {} hit the maximum at step {t}", trace.start),
                None => eprintln!("start {} did not reach the maximum in {steps} steps", trace.start),
            }
            Ok(())
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(load_graph(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn read_function(path: &Path) -> Result<GraphFunction> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_function_csv(file).with_context(|| format!("parsing {}", path.display()))?)
}

fn needs_basis(w: &WalkerArgs) -> bool {
    matches!(w.walker, WalkerName::Laplacian | WalkerName::LaplacianEps)
}

fn build_kernel<'a>(
    g: &'a Graph,
    f: &'a GraphFunction,
    w: &WalkerArgs,
    basis: Option<&SpectralBasis>,
) -> Result<WalkKernel<'a>> {
    let coherence = || -> Result<_> {
        let k = w.k.or_else(|| f.meta().map(|m| m.k)).context("--k is required for Laplacian walkers")?;
        Ok(coherence_profile(basis.expect("basis computed for Laplacian walkers"), k)?)
    };
    Ok(match w.walker {
        WalkerName::Vanilla => WalkKernel::vanilla(g, f)?,
        WalkerName::Exponential => WalkKernel::exponential(g, f, w.gamma)?,
        WalkerName::Laplacian => WalkKernel::laplacian(g, f, &coherence()?)?,
        WalkerName::LaplacianEps => WalkKernel::laplacian_eps(g, f, &coherence()?, w.eps)?,
    })
}

fn graph_spec(a: &GraphArgs, file: &BenchFile) -> Result<GraphSpec> {
    let family = match a.family {
        Some(f) => f,
        None => match file.family.as_deref() {
            Some("grid") => Family::Grid,
            Some("er") => Family::Er,
            Some("ba") => Family::Ba,
            Some(other) => bail!("unknown graph family '{other}' (expected grid, er or ba)"),
            None => bail!("--family is required"),
        },
    };
    let seed = a.graph_seed.or(file.graph_seed).unwrap_or(0);
    Ok(match family {
        Family::Grid => GraphSpec::Grid {
            rows: a.rows.or(file.rows).context("grid needs --rows")?,
            cols: a.cols.or(file.cols).context("grid needs --cols")?,
        },
        Family::Er => GraphSpec::ErdosRenyi { n: a.n.or(file.n).context("er needs --n")?, p: a.p.or(file.p), seed },
        Family::Ba => GraphSpec::BarabasiAlbert {
            n: a.n.or(file.n).context("ba needs --n")?,
            m: a.m.or(file.m).context("ba needs --m")?,
            seed,
        },
    })
}

fn generate_graph(args: &GraphArgs, file: &BenchFile, out: &Path) -> Result<()> {
    let spec = graph_spec(args, file)?;
    let g = spec.build()?;
    fs::write(out, save_graph(&g)).with_context(|| format!("writing {}", out.display()))?;
    println!("n={} edges={} diameter={}", g.n(), g.edge_count(), g.diameter()?);
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => BenchFile::load(path)?,
        None => BenchFile::default(),
    };
    let spec = match args.graph_file.clone().or(file.graph_file.clone()) {
        Some(path) if args.graph.family.is_none() => GraphSpec::File { path },
        _ => graph_spec(&args.graph, &file)?,
    };
    let ks = args.ks.clone().or(file.ks.clone()).context("--ks is required")?;
    let mut cfg = ExperimentConfig::new(spec, ks);
    let gammas = args.gammas.clone().or(file.gammas.clone()).unwrap_or_else(|| vec![0.0, 1.0]);
    cfg.walkers = std::iter::once(WalkerSpec::Vanilla)
        .chain(gammas.into_iter().map(|gamma| WalkerSpec::Exponential { gamma }))
        .chain(std::iter::once(WalkerSpec::Laplacian))
        .collect();
    if args.eps_variant || file.eps_variant.unwrap_or(false) {
        cfg.walkers.push(WalkerSpec::LaplacianEps);
    }
    cfg.trials = args.trials.or(file.trials).unwrap_or(cfg.trials);
    cfg.functions = args.functions.or(file.functions).unwrap_or(cfg.functions);
    cfg.cap = args.cap.or(file.cap).unwrap_or(cfg.cap);
    cfg.master_seed = args.seed.or(file.seed).unwrap_or(cfg.master_seed);
    cfg.noise = args.noise.or(file.noise).unwrap_or(cfg.noise);
    cfg.target_quantile = args.target_quantile.or(file.target_quantile);
    cfg.threads = args.threads.or(file.threads).unwrap_or(0);
    cfg.timing = args.timing || file.timing.unwrap_or(false);
    cfg.validate()?;
    let out_dir = args.out_dir.clone().or(file.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));

    let graph = cfg.graph.build()?;
    eprintln!("graph {}: n={} edges={}", cfg.graph.family(), graph.n(), graph.edge_count());
    ctrlc::set_handler(|| INTERRUPTED.store(true, Ordering::Relaxed)).context("installing interrupt handler")?;
    let out = run_bench(&cfg, &graph, &INTERRUPTED)?;

    fs::create_dir_all(&out_dir)?;
    let results_path = out_dir.join("results.csv");
    let mut w = create(&results_path)?;
    write_results_csv(&out.rows, &mut w)?;
    w.flush()?;
    let summary = summarize(&out.rows);
    let mut w = create(&out_dir.join("summary.csv"))?;
    write_summary_csv(&summary, &mut w)?;
    w.flush()?;

    println!("{:<6} {:>4} {:<18} {:>10} {:>8} {:>8}", "family", "k", "walker", "mean", "median", "capped");
    for s in &summary {
        println!(
            "{:<6} {:>4} {:<18} {:>10.1} {:>8.1} {:>7.1}%",
            s.family,
            s.k,
            s.label(),
            s.mean,
            s.median,
            100.0 * s.cap_rate
        );
    }
    eprintln!("wrote {} rows to {}", out.rows.len(), results_path.display());
    if out.interrupted {
        eprintln!("interrupted: results are partial");
        std::process::exit(130);
    }
    Ok(())
}
