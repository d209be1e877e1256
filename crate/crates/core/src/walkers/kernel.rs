use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{CoherenceProfile, GraphFunction};
use crate::target::{exponential_density, squared_density, TargetDensity};

/// Beyond this `|γ Δf|` the exponential acceptance is evaluated in log space.
pub const LOG_SPACE_THRESHOLD: f64 = 500.0;

/// One row of a transition kernel: neighbor entries in ascending vertex
/// order followed by the self-transition entry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseRow {
    pub(crate) entries: Vec<(usize, f64)>,
}

impl SparseRow {
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    /// Probability of moving to `j`; zero outside the support.
    pub fn prob(&self, j: usize) -> f64 {
        self.entries.iter().find(|(v, _)| *v == j).map_or(0.0, |(_, p)| *p)
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// Pick an entry with a uniform draw `u ∈ [0, 1)`.
    pub fn sample(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for &(v, p) in &self.entries {
            acc += p;
            if u < acc {
                return v;
            }
        }
        // Only reachable when rounding leaves the total just below `u`.
        self.entries.iter().rev().find(|(_, p)| *p > 0.0).map(|(v, _)| *v).expect("row has positive mass")
    }

    fn clear(&mut self) {
        self.entries.clear();
    }

    fn push_self(&mut self, i: usize) {
        let moved: f64 = self.entries.iter().map(|(_, p)| p).sum();
        self.entries.push((i, (1.0 - moved).max(0.0)));
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// `P = D⁻¹W`.
    Vanilla,
    /// Metropolis–Hastings on `p ∝ exp(γ f)` with proposal `D⁻¹W`.
    Exponential { gamma: f64 },
    /// Metropolis–Hastings on `p ∝ f²` with coherence-weighted proposal.
    Laplacian { k: usize },
    /// As `Laplacian`, with proposal weights `(c_j + ε)²`.
    LaplacianEps { k: usize, eps: f64 },
}

impl KernelKind {
    pub fn is_metropolis(&self) -> bool {
        !matches!(self, KernelKind::Vanilla)
    }
}

/// A local transition rule bound to a graph and function.
///
/// Rows are evaluated on demand from the current vertex and its neighbors.
/// For the Laplacian kinds the per-vertex proposal weights and their
/// neighborhood sums are computed once at construction.
#[derive(Debug, Clone)]
pub struct WalkKernel<'a> {
    graph: &'a Graph,
    function: &'a GraphFunction,
    kind: KernelKind,
    target: Option<TargetDensity>,
    /// Proposal weight per vertex (`c²` or `(c + ε)²`), Laplacian kinds only.
    weights: Vec<f64>,
    /// `S_i = Σ_{j ∈ N(i)} weights[j]`.
    neighbor_sums: Vec<f64>,
}

impl<'a> WalkKernel<'a> {
    pub fn vanilla(graph: &'a Graph, function: &'a GraphFunction) -> Result<Self> {
        check_sizes(graph, function)?;
        Ok(Self { graph, function, kind: KernelKind::Vanilla, target: None, weights: Vec::new(), neighbor_sums: Vec::new() })
    }

    pub fn exponential(graph: &'a Graph, function: &'a GraphFunction, gamma: f64) -> Result<Self> {
        check_sizes(graph, function)?;
        let target = exponential_density(function, gamma)?;
        Ok(Self {
            graph,
            function,
            kind: KernelKind::Exponential { gamma },
            target: Some(target),
            weights: Vec::new(),
            neighbor_sums: Vec::new(),
        })
    }

    pub fn laplacian(graph: &'a Graph, function: &'a GraphFunction, coherence: &CoherenceProfile) -> Result<Self> {
        Self::laplacian_weighted(graph, function, coherence, 0.0, KernelKind::Laplacian { k: coherence.k() })
    }

    pub fn laplacian_eps(
        graph: &'a Graph,
        function: &'a GraphFunction,
        coherence: &CoherenceProfile,
        eps: f64,
    ) -> Result<Self> {
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be finite and >= 0, got {eps}")));
        }
        Self::laplacian_weighted(graph, function, coherence, eps, KernelKind::LaplacianEps { k: coherence.k(), eps })
    }

    fn laplacian_weighted(
        graph: &'a Graph,
        function: &'a GraphFunction,
        coherence: &CoherenceProfile,
        eps: f64,
        kind: KernelKind,
    ) -> Result<Self> {
        check_sizes(graph, function)?;
        if coherence.values().len() != graph.n() {
            return Err(Error::InvalidArgument("coherence profile size does not match graph".into()));
        }
        let target = squared_density(function)?;
        let weights = proposal_weights(coherence, eps);
        if let Some(vertex) = weights.iter().position(|&w| w <= 0.0) {
            return Err(Error::DegenerateCoherence { vertex });
        }
        let neighbor_sums = (0..graph.n()).map(|i| neighbor_sum(graph, &weights, i)).collect();
        Ok(Self { graph, function, kind, target: Some(target), weights, neighbor_sums })
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    pub fn function(&self) -> &'a GraphFunction {
        self.function
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Stationary density for Metropolis–Hastings kinds.
    pub fn target(&self) -> Option<&TargetDensity> {
        self.target.as_ref()
    }

    /// Stationary distribution: the target for MH kinds, degree-proportional
    /// for the vanilla walk.
    pub fn stationary(&self) -> Vec<f64> {
        match &self.target {
            Some(t) => t.probs().to_vec(),
            None => degree_distribution(self.graph),
        }
    }

    /// Proposal row `Q'` at `i` for the Laplacian kinds (`None` otherwise).
    pub fn proposal_row(&self, i: usize) -> Option<SparseRow> {
        if self.weights.is_empty() {
            return None;
        }
        let s = self.neighbor_sums[i];
        let mut row = SparseRow { entries: self.graph.neighbors(i).iter().map(|&j| (j, self.weights[j] / s)).collect() };
        row.entries.push((i, 0.0));
        Some(row)
    }

    pub fn row(&self, i: usize) -> SparseRow {
        let mut row = SparseRow::default();
        self.fill_row(i, &mut row);
        row
    }

    /// Overwrite `row` with the transition row at `i`.
    pub fn fill_row(&self, i: usize, row: &mut SparseRow) {
        row.clear();
        let f = self.function.values();
        match self.kind {
            KernelKind::Vanilla => fill_vanilla(self.graph, i, row),
            KernelKind::Exponential { gamma } => fill_exponential(self.graph, f, gamma, i, row),
            KernelKind::Laplacian { .. } | KernelKind::LaplacianEps { .. } => {
                fill_laplacian(self.graph, f, &self.weights, |j| self.neighbor_sums[j], i, row)
            }
        }
    }
}

fn check_sizes(graph: &Graph, function: &GraphFunction) -> Result<()> {
    if graph.n() != function.len() {
        return Err(Error::InvalidArgument(format!(
            "function has {} values, graph has {} vertices",
            function.len(),
            graph.n()
        )));
    }
    Ok(())
}

fn check_vertex(g: &Graph, i: usize) -> Result<()> {
    if i >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: i, n: g.n() });
    }
    Ok(())
}

pub fn degree_distribution(g: &Graph) -> Vec<f64> {
    let total = 2.0 * g.edge_count() as f64;
    (0..g.n()).map(|i| g.degree(i) as f64 / total).collect()
}

fn proposal_weights(coherence: &CoherenceProfile, eps: f64) -> Vec<f64> {
    coherence.values().iter().map(|&c| (c + eps) * (c + eps)).collect()
}

fn neighbor_sum(g: &Graph, weights: &[f64], i: usize) -> f64 {
    g.neighbors(i).iter().map(|&j| weights[j]).sum()
}

fn fill_vanilla(g: &Graph, i: usize, row: &mut SparseRow) {
    let p = 1.0 / g.degree(i) as f64;
    row.entries.extend(g.neighbors(i).iter().map(|&j| (j, p)));
    row.push_self(i);
}

fn fill_exponential(g: &Graph, f: &[f64], gamma: f64, i: usize, row: &mut SparseRow) {
    let di = g.degree(i) as f64;
    for &j in g.neighbors(i) {
        let dj = g.degree(j) as f64;
        let exponent = gamma * (f[j] - f[i]);
        // (1/d_i) min(1, e^{γ(f_j − f_i)} d_i/d_j) = min(1/d_i, e^{γ(f_j − f_i)}/d_j)
        let p = if exponent.abs() <= LOG_SPACE_THRESHOLD {
            (1.0 / di).min(exponent.exp() / dj)
        } else {
            (-di.ln()).min(exponent - dj.ln()).exp()
        };
        row.entries.push((j, p));
    }
    row.push_self(i);
}

/// Metropolis–Hastings row for `p ∝ f²` with proposal `Q'_ij = w_j / S_i`.
///
/// `P_ij = Q'_ij min(1, f_j² Q'_ji / (f_i² Q'_ij)) = min(w_j / S_i, f_j² w_i / (f_i² S_j))`.
fn fill_laplacian(g: &Graph, f: &[f64], weights: &[f64], sum: impl Fn(usize) -> f64, i: usize, row: &mut SparseRow) {
    let si = sum(i);
    let fi2 = f[i] * f[i];
    for &j in g.neighbors(i) {
        let forward = weights[j] / si;
        let backward = f[j] * f[j] * weights[i] / (fi2 * sum(j));
        row.entries.push((j, forward.min(backward)));
    }
    row.push_self(i);
}

/// `P_ij = 1/d_i` on neighbors.
pub fn vanilla_row(g: &Graph, i: usize) -> Result<SparseRow> {
    check_vertex(g, i)?;
    let mut row = SparseRow::default();
    fill_vanilla(g, i, &mut row);
    Ok(row)
}

/// Exponentially weighted Metropolis–Hastings row at `i`.
pub fn exponential_row(g: &Graph, f: &GraphFunction, gamma: f64, i: usize) -> Result<SparseRow> {
    check_sizes(g, f)?;
    check_vertex(g, i)?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be finite and >= 0, got {gamma}")));
    }
    let mut row = SparseRow::default();
    fill_exponential(g, f.values(), gamma, i, &mut row);
    Ok(row)
}

/// Coherence-weighted proposal `Q'_ij = c_j² / Σ_{l ∈ N(i)} c_l²`.
pub fn laplacian_proposal_row(g: &Graph, coherence: &CoherenceProfile, i: usize) -> Result<SparseRow> {
    check_vertex(g, i)?;
    let weights = proposal_weights(coherence, 0.0);
    let s = neighbor_sum(g, &weights, i);
    if s <= 0.0 {
        return Err(Error::DegenerateProposal { vertex: i });
    }
    let mut row = SparseRow { entries: g.neighbors(i).iter().map(|&j| (j, weights[j] / s)).collect() };
    row.entries.push((i, 0.0));
    Ok(row)
}

/// Laplacian-walk Metropolis–Hastings row at `i`.
pub fn laplacian_row(g: &Graph, f: &GraphFunction, coherence: &CoherenceProfile, i: usize) -> Result<SparseRow> {
    laplacian_eps_row(g, f, coherence, 0.0, i)
}

/// Laplacian-walk row with proposal weights `(c_j + ε)²`.
pub fn laplacian_eps_row(
    g: &Graph,
    f: &GraphFunction,
    coherence: &CoherenceProfile,
    eps: f64,
    i: usize,
) -> Result<SparseRow> {
    check_sizes(g, f)?;
    check_vertex(g, i)?;
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be finite and >= 0, got {eps}")));
    }
    if let Some((v, x)) = f.values().iter().enumerate().find(|(_, x)| **x <= 0.0) {
        return Err(Error::InvalidArgument(format!("squared density needs f > 0; vertex {v} has f = {x}")));
    }
    let weights = proposal_weights(coherence, eps);
    for &v in std::iter::once(&i).chain(g.neighbors(i)) {
        if weights[v] <= 0.0 {
            return Err(Error::DegenerateCoherence { vertex: v });
        }
    }
    let mut row = SparseRow::default();
    fill_laplacian(g, f.values(), &weights, |j| neighbor_sum(g, &weights, j), i, &mut row);
    Ok(row)
}
