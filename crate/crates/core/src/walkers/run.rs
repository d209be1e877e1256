use std::io::Write;

use rand::Rng as _;

use super::kernel::{SparseRow, WalkKernel};
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// What a walk keeps while it runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordPolicy {
    /// Keep every visited vertex and run all `cap` steps.
    Full,
    /// Keep only the running trackers; run all `cap` steps.
    CountersOnly,
    /// Keep only the running trackers and stop at the first hit.
    UntilHit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitTime {
    Hit(u64),
    /// No hit within the step cap.
    Capped,
}

impl HitTime {
    pub fn steps(self) -> Option<u64> {
        match self {
            HitTime::Hit(t) => Some(t),
            HitTime::Capped => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace {
    pub seed: u64,
    pub start: usize,
    /// `v_0, v_1, …` under [`RecordPolicy::Full`].
    pub path: Option<Vec<usize>>,
    pub i_max: usize,
    pub f_max: f64,
    pub t_hit: HitTime,
    /// Transitions actually performed.
    pub steps: u64,
    pub cap: u64,
    /// Value a visited vertex must reach to count as a hit.
    pub threshold: f64,
}

/// Run a walk for up to `cap` steps, counting a hit at the first vertex
/// attaining the global maximum of the kernel's function.
pub fn run_walk(kernel: &WalkKernel<'_>, cap: u64, seed: u64, policy: RecordPolicy) -> WalkTrace {
    run_walk_to(kernel, cap, seed, policy, kernel.function().max())
}

/// Like [`run_walk`], with an explicit hit threshold: the walk hits at the
/// first `t` with `f(v_t) >= threshold`.
///
/// The start vertex is uniform over V; each transition consumes one uniform
/// draw from the same stream.
pub fn run_walk_to(kernel: &WalkKernel<'_>, cap: u64, seed: u64, policy: RecordPolicy, threshold: f64) -> WalkTrace {
    let f = kernel.function().values();
    let n = f.len();
    let mut rng = rng_from_seed(seed);
    let start = rng.random_range(0..n);

    let mut path = (policy == RecordPolicy::Full).then(|| {
        let mut p = Vec::with_capacity(cap.min(1 << 24) as usize + 1);
        p.push(start);
        p
    });
    let mut current = start;
    let mut i_max = start;
    let mut f_max = f[start];
    let mut t_hit = if f[start] >= threshold { HitTime::Hit(0) } else { HitTime::Capped };
    let mut steps = 0;
    let mut row = SparseRow::default();

    if !(policy == RecordPolicy::UntilHit && t_hit != HitTime::Capped) {
        for t in 1..=cap {
            kernel.fill_row(current, &mut row);
            current = row.sample(rng.random::<f64>());
            steps = t;
            if let Some(p) = path.as_mut() {
                p.push(current);
            }
            if f[current] > f_max {
                f_max = f[current];
                i_max = current;
            }
            if t_hit == HitTime::Capped && f[current] >= threshold {
                t_hit = HitTime::Hit(t);
                if policy == RecordPolicy::UntilHit {
                    break;
                }
            }
        }
    }

    WalkTrace { seed, start, path, i_max, f_max, t_hit, steps, cap, threshold }
}

/// Fraction of steps `burn_in + 1 ..= steps` spent at each vertex.
pub fn occupation_distribution(kernel: &WalkKernel<'_>, steps: u64, burn_in: u64, seed: u64) -> Result<Vec<f64>> {
    if steps <= burn_in {
        return Err(Error::InvalidArgument(format!("steps ({steps}) must exceed burn-in ({burn_in})")));
    }
    let n = kernel.graph().n();
    let mut rng = rng_from_seed(seed);
    let mut current = rng.random_range(0..n);
    let mut counts = vec![0u64; n];
    let mut row = SparseRow::default();
    for t in 1..=steps {
        kernel.fill_row(current, &mut row);
        current = row.sample(rng.random::<f64>());
        if t > burn_in {
            counts[current] += 1;
        }
    }
    let total = (steps - burn_in) as f64;
    Ok(counts.into_iter().map(|c| c as f64 / total).collect())
}

/// `½ Σ |a_i − b_i|`.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Dump a full trace as `step,vertex,f_value,is_new_max` CSV.
///
/// Step 0 always counts as a new maximum, as the running tracker starts there.
pub fn write_trace_csv<W: Write>(trace: &WalkTrace, f: &[f64], out: W) -> Result<()> {
    let path = trace
        .path
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("trace was recorded without its path".into()))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "vertex", "f_value", "is_new_max"])?;
    let mut best = f64::NEG_INFINITY;
    for (step, &v) in path.iter().enumerate() {
        let new_max = f[v] > best;
        if new_max {
            best = f[v];
        }
        w.write_record([step.to_string(), v.to_string(), format!("{:.16e}", f[v]), new_max.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{grid_graph, Graph};
    use crate::spectral::GraphFunction;

    fn func(v: &[f64]) -> GraphFunction {
        GraphFunction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_steps_keeps_start() {
        let g = grid_graph(3, 3).unwrap();
        let f = func(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let k = WalkKernel::vanilla(&g, &f).unwrap();
        let tr = run_walk(&k, 0, 5, RecordPolicy::Full);
        assert_eq!(tr.path.as_deref(), Some(&[tr.start][..]));
        assert_eq!(tr.i_max, tr.start);
        assert_eq!(tr.steps, 0);
    }

    #[test]
    fn constant_function_hits_immediately() {
        let g = grid_graph(4, 4).unwrap();
        let f = func(&[2.0; 16]);
        let k = WalkKernel::exponential(&g, &f, 1.0).unwrap();
        for seed in 0..20 {
            assert_eq!(run_walk(&k, 100, seed, RecordPolicy::UntilHit).t_hit, HitTime::Hit(0));
        }
    }

    #[test]
    fn two_vertex_forced_move() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let f = func(&[1.0, 2.0]);
        let k = WalkKernel::vanilla(&g, &f).unwrap();
        for seed in 0..50 {
            let tr = run_walk(&k, 10, seed, RecordPolicy::UntilHit);
            let want = if tr.start == 1 { 0 } else { 1 };
            assert_eq!(tr.t_hit, HitTime::Hit(want));
        }
    }

    #[test]
    fn trackers_follow_path() {
        let g = grid_graph(5, 5).unwrap();
        let f = func(&(0..25).map(|i| ((i * 7) % 25) as f64).collect::<Vec<_>>());
        let k = WalkKernel::exponential(&g, &f, 0.3).unwrap();
        let tr = run_walk(&k, 200, 11, RecordPolicy::Full);
        let path = tr.path.as_ref().unwrap();
        assert_eq!(path.len(), 201);
        let best = path.iter().map(|&v| f.get(v)).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(tr.f_max, best);
        assert_eq!(f.get(tr.i_max), best);
        for w in path.windows(2) {
            assert!(w[0] == w[1] || g.has_edge(w[0], w[1]));
        }
        match tr.t_hit {
            HitTime::Hit(t) => {
                assert_eq!(f.get(path[t as usize]), f.max());
                assert!(path[..t as usize].iter().all(|&v| f.get(v) < f.max()));
            }
            HitTime::Capped => assert!(path.iter().all(|&v| f.get(v) < f.max())),
        }
        // Counters-only and until-hit runs agree on the hit time.
        let c = run_walk(&k, 200, 11, RecordPolicy::CountersOnly);
        let u = run_walk(&k, 200, 11, RecordPolicy::UntilHit);
        assert_eq!(c.t_hit, tr.t_hit);
        assert_eq!(u.t_hit, tr.t_hit);
        assert_eq!(c.f_max, tr.f_max);
    }

    #[test]
    fn capped_when_never_reaching_max() {
        let g = grid_graph(1, 30).unwrap();
        let mut v = vec![0.0; 30];
        v[29] = 1.0;
        let f = func(&v);
        let k = WalkKernel::vanilla(&g, &f).unwrap();
        let tr = (0..100).map(|s| run_walk(&k, 3, s, RecordPolicy::UntilHit)).find(|t| t.start < 20).unwrap();
        assert_eq!(tr.t_hit, HitTime::Capped);
        assert_eq!(tr.steps, 3);
    }

    #[test]
    fn two_vertex_occupation_is_balanced() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let f = func(&[1.0, 1.0]);
        let k = WalkKernel::vanilla(&g, &f).unwrap();
        let occ = occupation_distribution(&k, 10_001, 1, 3).unwrap();
        assert!((occ[0] - 0.5).abs() < 0.02);
        assert!(occupation_distribution(&k, 5, 5, 3).is_err());
    }

    #[test]
    fn trace_csv_layout() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let f = func(&[1.0, 2.0, 3.0]);
        let k = WalkKernel::vanilla(&g, &f).unwrap();
        let tr = run_walk(&k, 4, 1, RecordPolicy::Full);
        let mut buf = Vec::new();
        write_trace_csv(&tr, f.values(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "step,vertex,f_value,is_new_max");
        assert_eq!(lines.len(), 6);
        assert!(lines[1].ends_with(",true"));
        let no_path = run_walk(&k, 4, 1, RecordPolicy::CountersOnly);
        assert!(write_trace_csv(&no_path, f.values(), Vec::new()).is_err());
    }

    #[test]
    fn total_variation_basics() {
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
    }
}
