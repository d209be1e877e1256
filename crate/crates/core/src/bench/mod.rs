//! Hitting-time experiments: sweep smoothness `k`, synthesize random smooth
//! functions, and race the walkers to the maximum.

mod plot;
mod results;

use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{barabasi_albert, er_connectivity_p, erdos_renyi, grid_graph, load_graph, Graph};
use crate::seed::derive_seed;
use crate::spectral::{coherence_profile, decompose, synth_perturbed, PositivityMargin, SpectralBasis};
use crate::walkers::{run_walk_to, RecordPolicy, WalkKernel};

pub use plot::plot_svg;
pub use results::{read_results_csv, summarize, write_results_csv, write_summary_csv, ResultRow, SummaryRow};

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Grid { rows: usize, cols: usize },
    /// `p = None` resolves to `1.1 ln(n) / n`.
    ErdosRenyi { n: usize, p: Option<f64>, seed: u64 },
    BarabasiAlbert { n: usize, m: usize, seed: u64 },
    File { path: PathBuf },
}

impl GraphSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GraphSpec::Grid { .. } => "grid",
            GraphSpec::ErdosRenyi { .. } => "er",
            GraphSpec::BarabasiAlbert { .. } => "ba",
            GraphSpec::File { .. } => "file",
        }
    }

    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Grid { rows, cols } => grid_graph(*rows, *cols),
            GraphSpec::ErdosRenyi { n, p, seed } => erdos_renyi(*n, p.unwrap_or_else(|| er_connectivity_p(*n)), *seed),
            GraphSpec::BarabasiAlbert { n, m, seed } => barabasi_albert(*n, *m, *seed),
            GraphSpec::File { path } => load_graph(&std::fs::read_to_string(path)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkerSpec {
    Vanilla,
    Exponential { gamma: f64 },
    /// Coherence proposal with the true smoothness `k`.
    Laplacian,
    /// Coherence proposal with `(c + ε)²` weights, `ε` fitted per function.
    LaplacianEps,
}

impl WalkerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            WalkerSpec::Vanilla => "vanilla",
            WalkerSpec::Exponential { .. } => "exponential",
            WalkerSpec::Laplacian => "laplacian",
            WalkerSpec::LaplacianEps => "laplacian_eps",
        }
    }

    /// Vanilla, exponential with `γ = 0` and `γ = 1`, Laplacian.
    pub fn defaults() -> Vec<WalkerSpec> {
        vec![
            WalkerSpec::Vanilla,
            WalkerSpec::Exponential { gamma: 0.0 },
            WalkerSpec::Exponential { gamma: 1.0 },
            WalkerSpec::Laplacian,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub ks: Vec<usize>,
    pub walkers: Vec<WalkerSpec>,
    pub trials: usize,
    pub functions: usize,
    pub cap: u64,
    pub master_seed: u64,
    /// Per-vertex noise added to synthesized functions; 0 keeps them exactly smooth.
    pub noise: f64,
    pub margin: PositivityMargin,
    /// Count a hit on reaching the top `q` fraction of vertices instead of the maximum.
    pub target_quantile: Option<f64>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    /// Record wall time per run. Off by default so output is reproducible.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(graph: GraphSpec, ks: Vec<usize>) -> Self {
        Self {
            graph,
            ks,
            walkers: WalkerSpec::defaults(),
            trials: 100,
            functions: 10,
            cap: 10_000,
            master_seed: 0,
            noise: 0.0,
            margin: PositivityMargin::default(),
            target_quantile: None,
            threads: 0,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.ks.is_empty() || self.ks.contains(&0) {
            return bad(format!("k list must be non-empty with k >= 1, got {:?}", self.ks));
        }
        if self.walkers.is_empty() {
            return bad("no walkers selected".into());
        }
        if self.trials == 0 || self.functions == 0 || self.cap == 0 {
            return bad("trials, functions and cap must all be >= 1".into());
        }
        if let Some(q) = self.target_quantile {
            if !(q > 0.0 && q <= 1.0) {
                return bad(format!("target quantile must lie in (0, 1], got {q}"));
            }
        }
        for w in &self.walkers {
            if let WalkerSpec::Exponential { gamma } = w {
                if !(gamma.is_finite() && *gamma >= 0.0) {
                    return bad(format!("gamma must be finite and >= 0, got {gamma}"));
                }
            }
        }
        Ok(())
    }

    /// Seed of the coefficient stream for function `func_idx` at smoothness `k`.
    pub fn function_seed(&self, k: usize, func_idx: usize) -> u64 {
        derive_seed(self.master_seed, &[k as u64, func_idx as u64])
    }

    /// Walk seed for a trial; every walker uses the same one.
    pub fn trial_seed(&self, k: usize, func_idx: usize, trial_idx: usize) -> u64 {
        derive_seed(self.master_seed, &[k as u64, func_idx as u64, trial_idx as u64])
    }
}

/// Rows produced by [`run_bench`]; `interrupted` is set when the cancel flag
/// stopped the run early, in which case only completed tasks are present.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutput {
    pub rows: Vec<ResultRow>,
    pub interrupted: bool,
}

struct Instance<'g> {
    kernels: Vec<WalkKernel<'g>>,
    threshold: f64,
}

/// Run every walker on every (k, function, trial) of the config.
///
/// Work is spread over (function, trial) pairs; rows are sorted by
/// (k, walker, function, trial) so output does not depend on scheduling.
pub fn run_bench(cfg: &ExperimentConfig, graph: &Graph, cancel: &AtomicBool) -> Result<BenchOutput> {
    cfg.validate()?;
    if let Some(&k) = cfg.ks.iter().find(|&&k| k > graph.n()) {
        return Err(Error::InvalidArgument(format!("k={k} exceeds n={}", graph.n())));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(cfg, graph, cancel))
}

fn run_in_pool(cfg: &ExperimentConfig, graph: &Graph, cancel: &AtomicBool) -> Result<BenchOutput> {
    let basis = SpectralBasis::of_graph(graph)?;
    let family = cfg.graph.family();
    let mut keyed = Vec::new();
    let mut interrupted = false;

    for (k_idx, &k) in cfg.ks.iter().enumerate() {
        if cancel.load(Ordering::Relaxed) {
            interrupted = true;
            break;
        }
        let coherence = coherence_profile(&basis, k)?;
        let functions = (0..cfg.functions)
            .map(|fi| synth_perturbed(&basis, k, cfg.function_seed(k, fi), cfg.noise, cfg.margin))
            .collect::<Result<Vec<_>>>()?;
        let eps = functions
            .iter()
            .map(|f| match cfg.walkers.contains(&WalkerSpec::LaplacianEps) {
                true => decompose(f, &basis, k).map(|d| d.eps_min),
                false => Ok(0.0),
            })
            .collect::<Result<Vec<_>>>()?;
        let instances = functions
            .iter()
            .zip(&eps)
            .map(|(f, &eps)| {
                let kernels = cfg
                    .walkers
                    .iter()
                    .map(|w| match *w {
                        WalkerSpec::Vanilla => WalkKernel::vanilla(graph, f),
                        WalkerSpec::Exponential { gamma } => WalkKernel::exponential(graph, f, gamma),
                        WalkerSpec::Laplacian => WalkKernel::laplacian(graph, f, &coherence),
                        WalkerSpec::LaplacianEps => WalkKernel::laplacian_eps(graph, f, &coherence, eps),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let threshold = cfg.target_quantile.map_or(f.max(), |q| f.upper_quantile(q));
                Ok(Instance { kernels, threshold })
            })
            .collect::<Result<Vec<_>>>()?;

        let tasks: Vec<(usize, usize)> =
            (0..cfg.functions).flat_map(|fi| (0..cfg.trials).map(move |ti| (fi, ti))).collect();
        let done: Vec<Option<Vec<((usize, usize, usize, usize), ResultRow)>>> = tasks
            .par_iter()
            .map(|&(fi, ti)| {
                if cancel.load(Ordering::Relaxed) {
                    return None;
                }
                let inst = &instances[fi];
                let seed = cfg.trial_seed(k, fi, ti);
                let rows = cfg
                    .walkers
                    .iter()
                    .zip(&inst.kernels)
                    .enumerate()
                    .map(|(wi, (w, kernel))| {
                        let started = cfg.timing.then(Instant::now);
                        let trace = run_walk_to(kernel, cfg.cap, seed, RecordPolicy::UntilHit, inst.threshold);
                        let wall_ns = started.map_or(0, |s| s.elapsed().as_nanos() as u64);
                        let param = match *w {
                            WalkerSpec::Exponential { gamma } => format!("{gamma}"),
                            WalkerSpec::LaplacianEps => format!("{:e}", eps[fi]),
                            _ => String::new(),
                        };
                        let row = ResultRow {
                            family: family.to_string(),
                            n: graph.n(),
                            k,
                            algorithm: w.name().to_string(),
                            param,
                            func_idx: fi,
                            trial_idx: ti,
                            seed,
                            t_hit: trace.t_hit.steps().unwrap_or(cfg.cap),
                            capped: trace.t_hit.steps().is_none(),
                            wall_ns,
                        };
                        ((k_idx, wi, fi, ti), row)
                    })
                    .collect();
                Some(rows)
            })
            .collect();
        for chunk in done {
            match chunk {
                Some(rows) => keyed.extend(rows),
                None => interrupted = true,
            }
        }
    }

    keyed.sort_by_key(|(key, _)| *key);
    Ok(BenchOutput { rows: keyed.into_iter().map(|(_, r)| r).collect(), interrupted })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(ks: Vec<usize>) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(GraphSpec::Grid { rows: 8, cols: 8 }, ks);
        cfg.trials = 1;
        cfg.functions = 1;
        cfg
    }

    #[test]
    fn one_row_per_walker() {
        let cfg = small(vec![5]);
        let g = cfg.graph.build().unwrap();
        let out = run_bench(&cfg, &g, &AtomicBool::new(false)).unwrap();
        assert!(!out.interrupted);
        let algs: Vec<_> = out.rows.iter().map(|r| (r.algorithm.as_str(), r.param.as_str())).collect();
        assert_eq!(algs, [("vanilla", ""), ("exponential", "0"), ("exponential", "1"), ("laplacian", "")]);
        assert!(out.rows.iter().all(|r| r.seed == out.rows[0].seed && r.wall_ns == 0));
    }

    #[test]
    fn row_count_and_order() {
        let mut cfg = small(vec![3, 2]);
        cfg.trials = 4;
        cfg.functions = 3;
        cfg.walkers.push(WalkerSpec::LaplacianEps);
        let g = cfg.graph.build().unwrap();
        let out = run_bench(&cfg, &g, &AtomicBool::new(false)).unwrap();
        assert_eq!(out.rows.len(), 5 * 2 * 3 * 4);
        assert_eq!(out.rows[0].k, 3);
        assert_eq!((out.rows[1].func_idx, out.rows[1].trial_idx), (0, 1));
        assert_eq!(out.rows.last().unwrap().algorithm, "laplacian_eps");
    }

    #[test]
    fn constant_function_hits_at_start() {
        let cfg = small(vec![1]);
        let g = cfg.graph.build().unwrap();
        let out = run_bench(&cfg, &g, &AtomicBool::new(false)).unwrap();
        assert!(out.rows.iter().all(|r| r.t_hit == 0 && !r.capped));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let mut cfg = small(vec![4, 9]);
        cfg.trials = 6;
        cfg.functions = 2;
        cfg.cap = 500;
        let g = cfg.graph.build().unwrap();
        cfg.threads = 1;
        let one = run_bench(&cfg, &g, &AtomicBool::new(false)).unwrap();
        cfg.threads = 4;
        let many = run_bench(&cfg, &g, &AtomicBool::new(false)).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn cancelled_run_is_marked() {
        let cfg = small(vec![5]);
        let g = cfg.graph.build().unwrap();
        let out = run_bench(&cfg, &g, &AtomicBool::new(true)).unwrap();
        assert!(out.interrupted);
        assert!(out.rows.is_empty());
    }

    #[test]
    fn capped_rows_carry_the_cap() {
        let mut cfg = small(vec![12]);
        cfg.cap = 1;
        cfg.trials = 5;
        let g = cfg.graph.build().unwrap();
        let out = run_bench(&cfg, &g, &AtomicBool::new(false)).unwrap();
        assert!(out.rows.iter().any(|r| r.capped));
        for r in &out.rows {
            assert!(r.t_hit <= 1);
            if r.capped {
                assert_eq!(r.t_hit, 1);
            }
        }
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = small(vec![]);
        assert!(cfg.validate().is_err());
        cfg.ks = vec![2];
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.target_quantile = Some(0.0);
        assert!(cfg.validate().is_err());
        cfg.target_quantile = Some(0.01);
        assert!(cfg.validate().is_ok());
        cfg.ks = vec![65];
        let g = cfg.graph.build().unwrap();
        assert!(run_bench(&cfg, &g, &AtomicBool::new(false)).is_err());
    }

    #[test]
    fn seeds_are_distinct_per_trial() {
        let cfg = small(vec![5]);
        assert_ne!(cfg.trial_seed(5, 0, 0), cfg.trial_seed(5, 0, 1));
        assert_ne!(cfg.trial_seed(5, 0, 0), cfg.trial_seed(5, 1, 0));
        assert_ne!(cfg.function_seed(5, 0), cfg.trial_seed(5, 0, 0));
    }
}
