use crate::error::{Error, Result};
use crate::linalg::{solve, DenseMatrix};
use crate::walkers::{total_variation, WalkKernel};

/// Largest graph the dense oracles accept by default.
pub const DEFAULT_ORACLE_CAP: usize = 256;

/// Materialize the full transition matrix, with the default size cap.
pub fn dense_kernel(kernel: &WalkKernel<'_>) -> Result<DenseMatrix> {
    dense_kernel_capped(kernel, DEFAULT_ORACLE_CAP)
}

pub fn dense_kernel_capped(kernel: &WalkKernel<'_>, cap: usize) -> Result<DenseMatrix> {
    let n = kernel.graph().n();
    if n > cap {
        return Err(Error::OracleTooLarge { n, cap });
    }
    let mut p = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for &(j, w) in kernel.row(i).entries() {
            p[(i, j)] += w;
        }
    }
    Ok(p)
}

/// Stationary vector of an irreducible chain, from `π(P − I) = 0`, `Σπ = 1`.
pub fn stationary_distribution(p: &DenseMatrix) -> Result<Vec<f64>> {
    let n = p.rows();
    let mut a = p.transpose();
    for i in 0..n {
        a[(i, i)] -= 1.0;
    }
    a.row_mut(n - 1).fill(1.0);
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    solve(&a, &b)
}

/// `max_i ‖P^t_{i·} − π‖_TV` for `t = 0..=t_max`.
pub fn exact_tv_curve(p: &DenseMatrix, pi: &[f64], t_max: usize) -> Vec<f64> {
    let n = p.rows();
    let mut power = DenseMatrix::identity(n);
    let mut curve = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            power = power.matmul(p);
        }
        curve.push((0..n).map(|i| total_variation(power.row(i), pi)).fold(0.0, f64::max));
    }
    curve
}

/// Exact first and second moments of the hitting time of a vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingTimes {
    /// `E_i T` per start vertex; zero on the target.
    pub per_start: Vec<f64>,
    /// `E_i T²` per start vertex.
    pub second_moment: Vec<f64>,
    /// Expectation under a uniformly random start.
    pub uniform_mean: f64,
    /// Variance of `T` under a uniformly random start.
    pub uniform_variance: f64,
    pub max_over_starts: f64,
}

/// Solve `h_i = 1 + Σ_j P_ij h_j` off the target (`h = 0` on it), and the
/// matching second-moment system `s_i = 1 + Σ_j P_ij (2 h_j + s_j)`.
pub fn exact_expected_hitting(p: &DenseMatrix, target: &[usize]) -> Result<HittingTimes> {
    let n = p.rows();
    if target.is_empty() {
        return Err(Error::InvalidArgument("hitting target is empty".into()));
    }
    let mut in_target = vec![false; n];
    for &v in target {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        in_target[v] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&i| !in_target[i]).collect();
    let m = free.len();
    let mut per_start = vec![0.0; n];
    let mut second_moment = vec![0.0; n];
    if m > 0 {
        let mut a = DenseMatrix::zeros(m, m);
        for (r, &i) in free.iter().enumerate() {
            for (c, &j) in free.iter().enumerate() {
                a[(r, c)] = if r == c { 1.0 } else { 0.0 } - p[(i, j)];
            }
        }
        let h = solve(&a, &vec![1.0; m])?;
        for (r, &i) in free.iter().enumerate() {
            per_start[i] = h[r];
        }
        let rhs: Vec<f64> = free
            .iter()
            .map(|&i| 1.0 + 2.0 * free.iter().map(|&j| p[(i, j)] * per_start[j]).sum::<f64>())
            .collect();
        let s = solve(&a, &rhs)?;
        for (r, &i) in free.iter().enumerate() {
            second_moment[i] = s[r];
        }
    }
    let uniform_mean = per_start.iter().sum::<f64>() / n as f64;
    let uniform_second = second_moment.iter().sum::<f64>() / n as f64;
    let max_over_starts = per_start.iter().copied().fold(0.0, f64::max);
    Ok(HittingTimes {
        per_start,
        second_moment,
        uniform_mean,
        uniform_variance: (uniform_second - uniform_mean * uniform_mean).max(0.0),
        max_over_starts,
    })
}
