use crate::error::{Error, Result};
use crate::walkers::{KernelKind, WalkKernel};

/// Which walk family a set of bound inputs describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundFamily {
    Exponential,
    Laplacian,
}

/// Graph and function parameters that enter the convergence and hitting
/// bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    pub family: BoundFamily,
    /// Graph diameter.
    pub r: usize,
    pub d_max: usize,
    /// `min_i p_f(i)`.
    pub delta_f: f64,
    /// `max_i p_f(i)`.
    pub big_delta_f: f64,
    pub gamma: f64,
    pub f_max: f64,
    pub f_min: f64,
    /// Dominance constant; `d_max Δ_f` for the exponential walk.
    pub m: f64,
    /// `‖f‖²`.
    pub norm_sq: f64,
    pub n: usize,
    /// Smoothness used by the Laplacian proposal; 0 for the exponential walk.
    pub k: usize,
    pub eps: f64,
}

impl BoundInputs {
    /// Collect the inputs for a Metropolis–Hastings kernel on a graph of
    /// diameter `r`.
    pub fn from_kernel(kernel: &WalkKernel<'_>, r: usize) -> Result<Self> {
        let g = kernel.graph();
        let f = kernel.function();
        let target = kernel
            .target()
            .ok_or_else(|| Error::InvalidArgument("bounds apply to Metropolis-Hastings kernels only".into()))?;
        let (family, gamma, k, eps) = match kernel.kind() {
            KernelKind::Exponential { gamma } => (BoundFamily::Exponential, gamma, 0, 0.0),
            KernelKind::Laplacian { k } => (BoundFamily::Laplacian, 0.0, k, 0.0),
            KernelKind::LaplacianEps { k, eps } => (BoundFamily::Laplacian, 0.0, k, eps),
            KernelKind::Vanilla => unreachable!("vanilla kernels carry no target"),
        };
        let n = g.n();
        let m = match family {
            BoundFamily::Exponential => g.d_max() as f64 * target.big_delta(),
            BoundFamily::Laplacian => dominance_m(k, n, eps),
        };
        let inp = Self {
            family,
            r,
            d_max: g.d_max(),
            delta_f: target.delta(),
            big_delta_f: target.big_delta(),
            gamma,
            f_max: f.max(),
            f_min: f.min(),
            m,
            norm_sq: f.norm_sq(),
            n,
            k,
            eps,
        };
        inp.validate()?;
        Ok(inp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 1 {
            return Err(Error::InvalidArgument("diameter must be at least 1".into()));
        }
        if !(self.delta_f > 0.0 && self.delta_f <= self.big_delta_f && self.big_delta_f < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < delta_f <= Delta_f < 1, got {} and {}",
                self.delta_f, self.big_delta_f
            )));
        }
        if self.family == BoundFamily::Laplacian && self.m < self.k as f64 {
            return Err(Error::InvalidArgument(format!("M = {} is below k = {}", self.m, self.k)));
        }
        Ok(())
    }

    pub fn theta(&self) -> f64 {
        match self.family {
            BoundFamily::Exponential => theta_exponential(self),
            BoundFamily::Laplacian => theta_laplacian(self),
        }
    }

    pub fn tv_bound(&self, t: u64) -> f64 {
        geometric_envelope(self.theta(), self.r, t)
    }

    /// Bound on the expected hitting time of the maximum (`t*_hit`).
    pub fn hitting_bound(&self) -> Result<f64> {
        match self.family {
            BoundFamily::Exponential => Ok(hitting_bound_exponential(self)),
            BoundFamily::Laplacian => hitting_bound_laplacian(self),
        }
    }
}

fn clamp_theta(raw: f64) -> f64 {
    raw.max(0.0)
}

fn geometric_envelope(theta: f64, r: usize, t: u64) -> f64 {
    let s = t / r as u64;
    theta.powf(s as f64)
}

/// `max(0, 1 − δ_f^{r−1} / (d_max Δ_f)^r)`.
pub fn theta_exponential(inp: &BoundInputs) -> f64 {
    let r = inp.r as i32;
    clamp_theta(1.0 - inp.delta_f.powi(r - 1) / (inp.d_max as f64 * inp.big_delta_f).powi(r))
}

/// `max(0, 1 − δ_f^{r−1} / M^r)`.
pub fn theta_laplacian(inp: &BoundInputs) -> f64 {
    let r = inp.r as i32;
    clamp_theta(1.0 - inp.delta_f.powi(r - 1) / inp.m.powi(r))
}

/// `θ^⌊t/r⌋` for the exponential walk.
pub fn tv_bound_exponential(inp: &BoundInputs, t: u64) -> f64 {
    geometric_envelope(theta_exponential(inp), inp.r, t)
}

/// `θ^⌊t/r⌋` for the Laplacian walk.
pub fn tv_bound_laplacian(inp: &BoundInputs, t: u64) -> f64 {
    geometric_envelope(theta_laplacian(inp), inp.r, t)
}

/// `d_max^r e^{γ (r−1)(f_max − f_min)}`.
pub fn hitting_bound_exponential(inp: &BoundInputs) -> f64 {
    let r = inp.r as f64;
    (r * (inp.d_max as f64).ln() + inp.gamma * (r - 1.0) * (inp.f_max - inp.f_min)).exp()
}

/// `(M ‖f‖²)^r / (f_max² f_min^{2(r−1)})`.
pub fn hitting_bound_laplacian(inp: &BoundInputs) -> Result<f64> {
    if inp.f_min <= 0.0 {
        return Err(Error::InvalidArgument(format!("Laplacian hitting bound needs f > 0, f_min = {}", inp.f_min)));
    }
    let r = inp.r as f64;
    let log = r * (inp.m * inp.norm_sq).ln() - 2.0 * inp.f_max.ln() - 2.0 * (r - 1.0) * inp.f_min.ln();
    Ok(log.exp())
}

/// `min(1, (t*/s)^⌊t/s⌋)`: tail bound on `P[T_hit > t]`.
pub fn highprob_hitting_bound(t_star: f64, s: f64, t: f64) -> Result<f64> {
    if !(s > 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("need s > 0 and t >= 0, got s = {s}, t = {t}")));
    }
    let blocks = (t / s).floor();
    Ok((t_star / s).powf(blocks).min(1.0))
}

/// `k` for exactly smooth functions, `k + 2k√n ε + n ε²` otherwise.
pub fn dominance_m(k: usize, n: usize, eps: f64) -> f64 {
    let (k, n) = (k as f64, n as f64);
    if eps == 0.0 {
        k
    } else {
        k + 2.0 * k * n.sqrt() * eps + n * eps * eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::spectral::{CoherenceProfile, GraphFunction};

    fn inputs(family: BoundFamily, r: usize, d_max: usize, delta: f64, big: f64) -> BoundInputs {
        BoundInputs {
            family,
            r,
            d_max,
            delta_f: delta,
            big_delta_f: big,
            gamma: 0.0,
            f_max: 1.0,
            f_min: 1.0,
            m: d_max as f64 * big,
            norm_sq: 1.0,
            n: 3,
            k: 0,
            eps: 0.0,
        }
    }

    #[test]
    fn path3_uniform_theta() {
        let inp = inputs(BoundFamily::Exponential, 2, 2, 1.0 / 3.0, 1.0 / 3.0);
        assert!((theta_exponential(&inp) - 0.25).abs() < 1e-15);
        assert!((tv_bound_exponential(&inp, 4) - 0.0625).abs() < 1e-15);
        assert_eq!(tv_bound_exponential(&inp, 1), 1.0);
        assert_eq!(tv_bound_exponential(&inp, 0), 1.0);
    }

    #[test]
    fn k2_theta_clamps() {
        let inp = inputs(BoundFamily::Exponential, 1, 1, 0.5, 0.5);
        assert_eq!(theta_exponential(&inp), 0.0);
        assert_eq!(tv_bound_exponential(&inp, 0), 1.0);
        assert_eq!(tv_bound_exponential(&inp, 1), 0.0);
        assert_eq!(tv_bound_exponential(&inp, 7), 0.0);
    }

    #[test]
    fn unit_envelope_theta() {
        let inp = inputs(BoundFamily::Exponential, 3, 4, 0.25, 0.25);
        assert!((theta_exponential(&inp) - (1.0 - 0.25_f64.powi(2))).abs() < 1e-15);
    }

    #[test]
    fn k2_laplacian_anchor() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let f = GraphFunction::new(vec![1.0, 2.0]).unwrap();
        let c = CoherenceProfile::from_values(2, vec![1.0, 1.0]).unwrap();
        let kernel = WalkKernel::laplacian(&g, &f, &c).unwrap();
        let inp = BoundInputs::from_kernel(&kernel, 1).unwrap();
        assert!((inp.delta_f - 0.2).abs() < 1e-15);
        assert_eq!(inp.m, 2.0);
        assert!((theta_laplacian(&inp) - 0.5).abs() < 1e-15);
        assert!((tv_bound_laplacian(&inp, 3) - 0.125).abs() < 1e-15);
        assert!((hitting_bound_laplacian(&inp).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn laplacian_theta_clamps_when_envelope_is_loose() {
        let mut inp = inputs(BoundFamily::Laplacian, 1, 1, 0.5, 0.5);
        inp.m = 0.5;
        assert_eq!(theta_laplacian(&inp), 0.0);
        inp.m = 1.0;
        inp.r = 3;
        // t < r leaves the bound at 1 whatever θ is.
        assert_eq!(tv_bound_laplacian(&inp, 2), 1.0);
    }

    #[test]
    fn exponential_hitting_anchor() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let f = GraphFunction::new(vec![1.0, 2.0, 3.0]).unwrap();
        let kernel = WalkKernel::exponential(&g, &f, 1.0).unwrap();
        let inp = BoundInputs::from_kernel(&kernel, 2).unwrap();
        let want = 4.0 * 2.0_f64.exp();
        assert!((hitting_bound_exponential(&inp) - want).abs() < 1e-12);
        assert!((want - 29.556).abs() < 1e-3);
        assert_eq!(inp.hitting_bound().unwrap(), hitting_bound_exponential(&inp));
    }

    #[test]
    fn exponential_hitting_special_cases() {
        let mut inp = inputs(BoundFamily::Exponential, 1, 9, 0.1, 0.1);
        inp.gamma = 3.0;
        inp.f_max = 5.0;
        inp.f_min = -2.0;
        assert!((hitting_bound_exponential(&inp) - 9.0).abs() < 1e-12);
        inp.r = 4;
        inp.gamma = 0.0;
        assert!((hitting_bound_exponential(&inp) - 9.0_f64.powi(4)).abs() < 1e-8);
    }

    #[test]
    fn laplacian_hitting_special_cases() {
        let mut inp = inputs(BoundFamily::Laplacian, 1, 4, 0.2, 0.2);
        inp.m = 1.0;
        inp.k = 1;
        inp.f_max = 0.7;
        inp.f_min = 0.7;
        inp.norm_sq = 5.0 * 0.49;
        assert!((hitting_bound_laplacian(&inp).unwrap() - 5.0).abs() < 1e-12);
        inp.f_min = 0.0;
        assert!(hitting_bound_laplacian(&inp).is_err());
    }

    #[test]
    fn highprob_cases() {
        assert!((highprob_hitting_bound(10.0, 20.0, 40.0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(highprob_hitting_bound(10.0, 20.0, 19.0).unwrap(), 1.0);
        assert_eq!(highprob_hitting_bound(10.0, 5.0, 1000.0).unwrap(), 1.0);
        assert!(highprob_hitting_bound(10.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn dominance_cases() {
        assert_eq!(dominance_m(10, 1024, 0.0), 10.0);
        assert!((dominance_m(10, 1024, 0.01) - 16.5024).abs() < 1e-12);
        assert_eq!(dominance_m(1, 1, 0.0), 1.0);
    }

    #[test]
    fn vanilla_has_no_bound_inputs() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let f = GraphFunction::new(vec![1.0, 2.0]).unwrap();
        let kernel = WalkKernel::vanilla(&g, &f).unwrap();
        assert!(BoundInputs::from_kernel(&kernel, 1).is_err());
    }
}
