//! Laplacian spectra, band-limited (k-smooth) graph functions and local
//! cumulative coherence.
//!
//! A function is k-smooth when it lies in the span of the first `k`
//! Laplacian eigenvectors `U_k`. The local cumulative coherence of order `k`
//! at vertex `i` is the norm of row `i` of `U_k`: the share of the impulse
//! at `i` that survives projection onto the lowest `k` graph frequencies.

use std::io::{Read, Write};

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{symmetric_eigen, DenseMatrix};
use crate::seed::rng_from_seed;

/// Entries at or below this magnitude are skipped when fixing eigenvector signs.
pub const SIGN_TOLERANCE: f64 = 1e-12;

/// `L = D - W` as a dense matrix.
pub fn laplacian(g: &Graph) -> DenseMatrix {
    let n = g.n();
    let mut l = DenseMatrix::zeros(n, n);
    for i in 0..n {
        l[(i, i)] = g.degree(i) as f64;
        for &j in g.neighbors(i) {
            l[(i, j)] = -1.0;
        }
    }
    l
}

/// Sorted Laplacian eigenpairs.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    eigenvalues: Vec<f64>,
    /// Row-major `n × n`; column `m` is `u_{m+1}`, so row `i` of the first
    /// `k` columns is `U_kᵀ δ_i`.
    eigenvectors: DenseMatrix,
}

/// Eigendecompose a symmetric matrix (normally a Laplacian).
///
/// Eigenvalues ascend; each eigenvector is flipped so its first coordinate
/// larger than [`SIGN_TOLERANCE`] in magnitude is positive.
pub fn eigendecompose(l: &DenseMatrix) -> Result<SpectralBasis> {
    if l.rows() != l.cols() {
        return Err(Error::InvalidArgument("Laplacian must be square".into()));
    }
    let asym = l.max_abs_asymmetry();
    if asym > 1e-12 {
        return Err(Error::InvalidArgument(format!("matrix is not symmetric (max deviation {asym:e})")));
    }
    let eig = symmetric_eigen(l)?;
    let n = l.rows();
    let mut vectors = eig.vectors;
    for m in 0..n {
        let lead = (0..n).map(|i| vectors[(i, m)]).find(|x| x.abs() > SIGN_TOLERANCE);
        if lead.is_some_and(|x| x < 0.0) {
            for i in 0..n {
                vectors[(i, m)] = -vectors[(i, m)];
            }
        }
    }
    Ok(SpectralBasis { eigenvalues: eig.values, eigenvectors: vectors })
}

impl SpectralBasis {
    /// Basis of the graph Laplacian. On a connected graph the null vector is
    /// set to exactly `1/√n`, so 1-smooth functions are exactly constant.
    pub fn of_graph(g: &Graph) -> Result<Self> {
        let mut basis = eigendecompose(&laplacian(g))?;
        let n = g.n();
        if n > 0 && g.is_connected() {
            let u = 1.0 / (n as f64).sqrt();
            for i in 0..n {
                basis.eigenvectors[(i, 0)] = u;
            }
        }
        Ok(basis)
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DenseMatrix {
        &self.eigenvectors
    }

    /// The `m`-th eigenvector (0-based).
    pub fn eigenvector(&self, m: usize) -> Vec<f64> {
        self.eigenvectors.column(m)
    }

    /// `U_kᵀ δ_i`: the first `k` coordinates of row `i`.
    pub fn band_row(&self, i: usize, k: usize) -> &[f64] {
        &self.eigenvectors.row(i)[..k]
    }

    fn check_order(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n() {
            return Err(Error::InvalidArgument(format!("order k={k} outside 1..={}", self.n())));
        }
        Ok(())
    }

    /// `U_k α`.
    pub fn synthesize(&self, alpha: &[f64]) -> Result<Vec<f64>> {
        self.check_order(alpha.len())?;
        let k = alpha.len();
        Ok((0..self.n()).map(|i| dot(self.band_row(i, k), alpha)).collect())
    }

    /// `U_kᵀ f`.
    pub fn analyze(&self, f: &[f64], k: usize) -> Result<Vec<f64>> {
        self.check_order(k)?;
        if f.len() != self.n() {
            return Err(Error::InvalidArgument(format!("function has {} values, graph has {}", f.len(), self.n())));
        }
        let mut coeffs = vec![0.0; k];
        for (i, &fi) in f.iter().enumerate() {
            for (c, &u) in coeffs.iter_mut().zip(self.band_row(i, k)) {
                *c += u * fi;
            }
        }
        Ok(coeffs)
    }

    /// Whether `λ_k = λ_{k+1}` within `tol`, i.e. the band edge cuts through
    /// an eigenspace and `U_k` is one of many valid choices.
    pub fn band_edge_degenerate(&self, k: usize, tol: f64) -> bool {
        k >= 1 && k < self.n() && (self.eigenvalues[k] - self.eigenvalues[k - 1]).abs() <= tol
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Local cumulative coherence of order `k` at every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceProfile {
    k: usize,
    values: Vec<f64>,
}

impl CoherenceProfile {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Build from explicit values, e.g. a precomputed or approximate profile.
    pub fn from_values(k: usize, values: Vec<f64>) -> Result<Self> {
        if let Some((i, c)) = values.iter().enumerate().find(|(_, c)| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::InvalidArgument(format!("coherence at vertex {i} is {c}")));
        }
        Ok(Self { k, values })
    }
}

pub fn coherence_profile(basis: &SpectralBasis, k: usize) -> Result<CoherenceProfile> {
    basis.check_order(k)?;
    let values = (0..basis.n())
        .map(|i| {
            let row = basis.band_row(i, k);
            // Rounding can push a full-basis row norm a hair above one.
            dot(row, row).sqrt().min(1.0)
        })
        .collect();
    Ok(CoherenceProfile { k, values })
}

/// Provenance of a synthesized smooth function.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessMeta {
    pub k: usize,
    /// Standard-normal coefficients before the lift.
    pub alpha: Vec<f64>,
    /// Constant added to every vertex by the lift.
    pub shift: f64,
    /// Seed of the coefficient stream.
    pub seed: u64,
    /// `(λ_k, λ_{k+1})`; the latter is `None` when `k = n`.
    pub band_edge: (f64, Option<f64>),
    /// Set when `λ_k = λ_{k+1}`: the pinned `U_k` is then one choice among many.
    pub band_edge_degenerate: bool,
    /// Standard deviation of off-band noise added before the lift, if any.
    pub noise: Option<f64>,
}

/// Real values on the vertices of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFunction {
    values: Vec<f64>,
    meta: Option<SmoothnessMeta>,
}

impl GraphFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("graph function needs at least one value".into()));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("value at vertex {i} is not finite ({v})")));
        }
        Ok(Self { values, meta: None })
    }

    pub fn with_meta(mut self, meta: SmoothnessMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> Option<&SmoothnessMeta> {
        self.meta.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Vertices attaining the maximum value.
    pub fn argmax_set(&self) -> Vec<usize> {
        let top = self.max();
        (0..self.len()).filter(|&i| self.values[i] == top).collect()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Smallest value `v` such that at least `ceil(q * n)` vertices satisfy
    /// `f >= v`. `q` close to zero gives the maximum.
    pub fn upper_quantile(&self, q: f64) -> f64 {
        let mut sorted = self.values.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let count = ((q * self.len() as f64).ceil() as usize).clamp(1, self.len());
        sorted[count - 1]
    }
}

/// Positivity margin applied by the lift `f ← f − min f + margin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PositivityMargin {
    Absolute(f64),
    /// Fraction of the pre-lift range `max f − min f`. A range that is zero
    /// up to rounding (below `1e-12 · max |f|`) uses a unit scale instead.
    RangeFraction(f64),
}

impl Default for PositivityMargin {
    fn default() -> Self {
        PositivityMargin::RangeFraction(1e-3)
    }
}

impl PositivityMargin {
    fn resolve(self, raw: &[f64]) -> Result<f64> {
        let margin = match self {
            PositivityMargin::Absolute(m) => m,
            PositivityMargin::RangeFraction(frac) => {
                let (lo, hi) = raw.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
                let range = hi - lo;
                let magnitude = lo.abs().max(hi.abs());
                frac * if range > 1e-12 * magnitude { range } else { 1.0 }
            }
        };
        if !(margin.is_finite() && margin >= 0.0) {
            return Err(Error::InvalidArgument(format!("positivity margin must be finite and >= 0, got {margin}")));
        }
        Ok(margin)
    }
}

/// Random exactly-k-smooth function `U_k α`, `α ~ N(0, I_k)`, lifted so its
/// minimum equals the positivity margin.
pub fn synth_smooth(basis: &SpectralBasis, k: usize, seed: u64, margin: PositivityMargin) -> Result<GraphFunction> {
    synth_perturbed(basis, k, seed, 0.0, margin)
}

/// Like [`synth_smooth`], plus i.i.d. `N(0, noise²)` per-vertex noise added
/// before the lift, giving an approximately k-smooth function. Noise draws
/// come after the coefficient draws on the same stream, so `noise = 0`
/// reproduces [`synth_smooth`] exactly.
pub fn synth_perturbed(
    basis: &SpectralBasis,
    k: usize,
    seed: u64,
    noise: f64,
    margin: PositivityMargin,
) -> Result<GraphFunction> {
    basis.check_order(k)?;
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(Error::InvalidArgument(format!("noise level must be finite and >= 0, got {noise}")));
    }
    let mut rng = rng_from_seed(seed);
    let alpha: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut raw = basis.synthesize(&alpha)?;
    if noise > 0.0 {
        for v in &mut raw {
            let z: f64 = StandardNormal.sample(&mut rng);
            *v += noise * z;
        }
    }
    let margin = margin.resolve(&raw)?;
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = margin - min;
    let values: Vec<f64> = raw.iter().map(|v| v + shift).collect();
    let n = basis.n();
    let meta = SmoothnessMeta {
        k,
        alpha,
        shift,
        seed,
        band_edge: (basis.eigenvalues[k - 1], (k < n).then(|| basis.eigenvalues[k])),
        band_edge_degenerate: basis.band_edge_degenerate(k, 1e-9),
        noise: (noise > 0.0).then_some(noise),
    };
    Ok(GraphFunction::new(values)?.with_meta(meta))
}

/// Split of a function into its band-limited part and residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `U_k U_kᵀ f`.
    pub smooth: Vec<f64>,
    /// `f − smooth`.
    pub residual: Vec<f64>,
    /// Smallest ε with `|residual_i| <= ε ‖smooth‖₂` at every vertex.
    pub eps_min: f64,
}

pub fn decompose(f: &GraphFunction, basis: &SpectralBasis, k: usize) -> Result<Decomposition> {
    let coeffs = basis.analyze(f.values(), k)?;
    let smooth_norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let f_norm = f.norm_sq().sqrt();
    if smooth_norm <= 1e-14 * f_norm.max(f64::MIN_POSITIVE) {
        return Err(Error::Degenerate(format!("function has no component in the lowest {k} modes")));
    }
    let smooth = basis.synthesize(&coeffs)?;
    let residual: Vec<f64> = f.values().iter().zip(&smooth).map(|(a, b)| a - b).collect();
    let eps_min = residual.iter().fold(0.0_f64, |m, r| m.max(r.abs())) / smooth_norm;
    Ok(Decomposition { smooth, residual, eps_min })
}

/// `fᵀ L f` evaluated edge by edge.
pub fn dirichlet_energy(g: &Graph, f: &[f64]) -> f64 {
    g.edges().map(|(u, v)| (f[u] - f[v]).powi(2)).sum()
}

#[derive(Debug, Serialize, Deserialize)]
struct FunctionRecord {
    node: usize,
    value: String,
}

/// Write `node,value` CSV with 17 significant digits.
pub fn write_function_csv<W: Write>(f: &GraphFunction, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (node, v) in f.values().iter().enumerate() {
        w.serialize(FunctionRecord { node, value: format!("{v:.16e}") })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_function_csv<R: Read>(input: R) -> Result<GraphFunction> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["node", "value"] {
        return Err(Error::Parse { line: 1, message: format!("expected header node,value, got {headers:?}") });
    }
    let mut values = Vec::new();
    for (idx, rec) in rdr.deserialize::<FunctionRecord>().enumerate() {
        let rec = rec?;
        let line = idx + 2;
        if rec.node != idx {
            return Err(Error::Parse { line, message: format!("expected node {idx}, got {}", rec.node) });
        }
        let v = rec
            .value
            .trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse { line, message: format!("bad value {:?}: {e}", rec.value) })?;
        values.push(v);
    }
    GraphFunction::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid_graph;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn laplacian_of_path() {
        let l = laplacian(&path3());
        assert_eq!(l.as_slice(), &[1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        let k2 = laplacian(&Graph::from_edges(2, &[(0, 1)]).unwrap());
        assert_eq!(k2.as_slice(), &[1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn first_eigenvector_is_positive_constant() {
        let g = grid_graph(3, 4).unwrap();
        let b = SpectralBasis::of_graph(&g).unwrap();
        assert!(b.eigenvalues()[0].abs() < 1e-8);
        let expect = 1.0 / (g.n() as f64).sqrt();
        for x in b.eigenvector(0) {
            assert!((x - expect).abs() < 1e-8);
        }
    }

    #[test]
    fn sign_convention_holds() {
        let b = SpectralBasis::of_graph(&grid_graph(4, 4).unwrap()).unwrap();
        for m in 0..b.n() {
            let lead = b.eigenvector(m).into_iter().find(|x| x.abs() > SIGN_TOLERANCE).unwrap();
            assert!(lead > 0.0);
        }
    }

    #[test]
    fn path3_coherence_order_two() {
        let b = SpectralBasis::of_graph(&path3()).unwrap();
        let c = coherence_profile(&b, 2).unwrap();
        let want = [(5.0_f64 / 6.0).sqrt(), (1.0_f64 / 3.0).sqrt(), (5.0_f64 / 6.0).sqrt()];
        for (got, want) in c.values().iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn coherence_extremes() {
        let g = grid_graph(2, 2).unwrap();
        let b = SpectralBasis::of_graph(&g).unwrap();
        assert!(coherence_profile(&b, 1).unwrap().values().iter().all(|c| (c - 0.5).abs() < 1e-12));
        assert!(coherence_profile(&b, 4).unwrap().values().iter().all(|c| (c - 1.0).abs() < 1e-12));
        assert!(coherence_profile(&b, 0).is_err());
        assert!(coherence_profile(&b, 5).is_err());
    }

    #[test]
    fn k1_synthesis_is_constant_margin() {
        let b = SpectralBasis::of_graph(&grid_graph(3, 3).unwrap()).unwrap();
        let f = synth_smooth(&b, 1, 4, PositivityMargin::Absolute(0.25)).unwrap();
        assert!(f.values().iter().all(|&v| (v - 0.25).abs() < 1e-12));
        // Zero range falls back to a unit scale.
        let g = synth_smooth(&b, 1, 4, PositivityMargin::default()).unwrap();
        assert!(g.values().iter().all(|&v| (v - 1e-3).abs() < 1e-12));
    }

    #[test]
    fn synthesis_is_smooth_and_lifted() {
        let b = SpectralBasis::of_graph(&grid_graph(5, 5).unwrap()).unwrap();
        let f = synth_smooth(&b, 6, 99, PositivityMargin::Absolute(0.1)).unwrap();
        assert!((f.min() - 0.1).abs() < 1e-12);
        let d = decompose(&f, &b, 6).unwrap();
        let rnorm = d.residual.iter().map(|r| r * r).sum::<f64>().sqrt();
        assert!(rnorm <= 1e-8 * f.norm_sq().sqrt());
        assert!(d.eps_min < 1e-10);
        let meta = f.meta().unwrap();
        assert_eq!(meta.k, 6);
        assert_eq!(meta.alpha.len(), 6);
        assert_eq!(f, synth_smooth(&b, 6, 99, PositivityMargin::Absolute(0.1)).unwrap());
    }

    #[test]
    fn decompose_off_band_eigenvector_is_degenerate() {
        let b = SpectralBasis::of_graph(&grid_graph(3, 3).unwrap()).unwrap();
        let f = GraphFunction::new(b.eigenvector(4)).unwrap();
        assert!(matches!(decompose(&f, &b, 3), Err(Error::Degenerate(_))));
    }

    #[test]
    fn decompose_small_perturbation() {
        let b = SpectralBasis::of_graph(&grid_graph(3, 4).unwrap()).unwrap();
        let alpha = [1.5, -0.5, 2.0];
        let c = 0.01;
        let u4 = b.eigenvector(3);
        let mut f = b.synthesize(&alpha).unwrap();
        for (v, u) in f.iter_mut().zip(&u4) {
            *v += c * u;
        }
        let d = decompose(&GraphFunction::new(f).unwrap(), &b, 3).unwrap();
        let alpha_norm = alpha.iter().map(|a| a * a).sum::<f64>().sqrt();
        let want = c * u4.iter().fold(0.0_f64, |m, x| m.max(x.abs())) / alpha_norm;
        assert!((d.eps_min - want).abs() < 1e-12, "{} vs {want}", d.eps_min);
    }

    #[test]
    fn function_csv_round_trip() {
        let f = GraphFunction::new(vec![0.1, -2.5e-7, std::f64::consts::PI, 1e300]).unwrap();
        let mut buf = Vec::new();
        write_function_csv(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("node,value\n0,1.0000000000000001e-1\n"), "{text}");
        assert_eq!(read_function_csv(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn function_csv_rejects_gaps() {
        let text = "node,value\n0,1.0\n2,3.0\n";
        assert!(matches!(read_function_csv(text.as_bytes()), Err(Error::Parse { line: 3, .. })));
        assert!(read_function_csv("id,value\n0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn quantile_and_argmax() {
        let f = GraphFunction::new(vec![1.0, 5.0, 3.0, 5.0]).unwrap();
        assert_eq!(f.argmax_set(), vec![1, 3]);
        assert_eq!(f.upper_quantile(0.0), 5.0);
        assert_eq!(f.upper_quantile(0.75), 3.0);
        assert!(GraphFunction::new(vec![f64::NAN]).is_err());
    }
}
