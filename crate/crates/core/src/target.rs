//! Target densities encoding a graph function.

use crate::error::{Error, Result};
use crate::spectral::GraphFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityForm {
    /// `p ∝ exp(γ f)`.
    Exponential { gamma: f64 },
    /// `p ∝ f²`.
    Squared,
}

/// A strictly positive probability vector over the vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetDensity {
    probs: Vec<f64>,
    delta: f64,
    big_delta: f64,
    form: DensityForm,
}

impl TargetDensity {
    fn from_weights(weights: Vec<f64>, form: DensityForm) -> Self {
        let total: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.into_iter().map(|w| w / total).collect();
        let delta = probs.iter().copied().fold(f64::INFINITY, f64::min);
        let big_delta = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { probs, delta, big_delta, form }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// `δ_f = min_i p(i)`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `Δ_f = max_i p(i)`.
    pub fn big_delta(&self) -> f64 {
        self.big_delta
    }

    pub fn form(&self) -> DensityForm {
        self.form
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// `p(i) = exp(γ f_i) / Σ_j exp(γ f_j)`, evaluated after subtracting `max f`.
pub fn exponential_density(f: &GraphFunction, gamma: f64) -> Result<TargetDensity> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be finite and >= 0, got {gamma}")));
    }
    let top = f.max();
    let weights = f.values().iter().map(|&v| (gamma * (v - top)).exp()).collect();
    let density = TargetDensity::from_weights(weights, DensityForm::Exponential { gamma });
    if density.delta <= 0.0 {
        return Err(Error::Degenerate(format!("exp(gamma f) underflows to zero at gamma={gamma}")));
    }
    Ok(density)
}

/// `p(i) = f_i² / ‖f‖²`; every `f_i` must be strictly positive.
pub fn squared_density(f: &GraphFunction) -> Result<TargetDensity> {
    if let Some((i, v)) = f.values().iter().enumerate().find(|(_, v)| **v <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "squared density needs f > 0 everywhere; vertex {i} has f = {v}"
        )));
    }
    let weights = f.values().iter().map(|v| v * v).collect();
    Ok(TargetDensity::from_weights(weights, DensityForm::Squared))
}
