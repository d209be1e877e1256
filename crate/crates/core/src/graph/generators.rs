//! Generators for the three experimental graph families.

use rand::Rng as _;

use super::Graph;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from_seed};

/// Consecutive disconnected Erdős–Rényi draws tolerated before giving up.
pub const ER_MAX_ATTEMPTS: usize = 10_000;

/// 4-connected `rows × cols` lattice; vertex `(r, c)` has index `r * cols + c`.
pub fn grid_graph(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!("grid dimensions must be positive, got {rows}x{cols}")));
    }
    if rows * cols < 2 {
        return Err(Error::InvalidArgument("grid needs at least two vertices".into()));
    }
    let n = rows * cols;
    let mut adj = vec![Vec::with_capacity(4); n];
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if r > 0 {
                adj[v].push(v - cols);
            }
            if c > 0 {
                adj[v].push(v - 1);
            }
            if c + 1 < cols {
                adj[v].push(v + 1);
            }
            if r + 1 < rows {
                adj[v].push(v + cols);
            }
        }
    }
    Ok(Graph::from_sorted_lists(adj))
}

/// Edge probability `1.1 ln(n) / n` used for the Erdős–Rényi experiments.
pub fn er_connectivity_p(n: usize) -> f64 {
    1.1 * (n as f64).ln() / n as f64
}

/// G(n, p), redrawn until connected.
///
/// Attempt `a` draws from its own stream seeded by `derive_seed(seed, [a])`,
/// so the first connected draw is a pure function of `(n, p, seed)`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Erdős–Rényi needs n >= 2, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("edge probability must lie in (0, 1], got {p}")));
    }
    for attempt in 0..ER_MAX_ATTEMPTS {
        let mut rng = rng_from_seed(derive_seed(seed, &[attempt as u64]));
        let mut adj = vec![Vec::new(); n];
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(p) {
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
        }
        // Lists are built in ascending order for both endpoints.
        let g = Graph::from_sorted_lists(adj);
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailure { attempts: ER_MAX_ATTEMPTS })
}

/// Barabási–Albert preferential attachment.
///
/// Starts from the complete graph on `m` vertices. Every later vertex attaches
/// `m` distinct edges, each target drawn with probability proportional to its
/// current degree; repeated targets are rejected and redrawn. When all existing
/// degrees are zero (only possible for `m = 1` at the second vertex) the target
/// is drawn uniformly.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 {
        return Err(Error::InvalidArgument("attachment count m must be >= 1".into()));
    }
    if n <= m {
        return Err(Error::InvalidArgument(format!("Barabási–Albert needs n > m, got n={n}, m={m}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    // Each vertex appears here once per incident edge end.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * (m * (m - 1) / 2 + m * (n - m)));
    for u in 0..m {
        for v in (u + 1)..m {
            adj[u].push(v);
            adj[v].push(u);
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for v in m..n {
        chosen.clear();
        while chosen.len() < m {
            let t = if endpoints.is_empty() {
                rng.random_range(0..v)
            } else {
                endpoints[rng.random_range(0..endpoints.len())]
            };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            adj[v].push(t);
            adj[t].push(v);
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(Graph::from_sorted_lists(adj))
}
