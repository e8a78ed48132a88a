//! Noise sampling and reconstruction error bounds under noisy measurements.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_len, domain, Result};
use crate::partition::Partition;
use crate::sampling::{equivalent_noise_sigma, EquivalentNoise, LocalWeights, NoiseModel};
use crate::spectral::GraphSignal;

/// Draws `n(v) ~ N(0, σ²(v))` independently per vertex.
pub fn sample_noise<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> GraphSignal {
    GraphSignal::from(
        model
            .sigma()
            .iter()
            .map(|&s| s * rng.sample::<f64, _>(StandardNormal))
            .collect::<Vec<_>>(),
    )
}

/// `ñ = Σ_i √|N_i| · |n_i|` for realized measurement noises `n_i`.
pub fn n_tilde(p: &Partition, measurement_noise: &[f64]) -> Result<f64> {
    check_len(p.len(), measurement_noise.len())?;
    Ok(p.sets()
        .iter()
        .zip(measurement_noise)
        .map(|(s, n)| (s.len() as f64).sqrt() * n.abs())
        .sum())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(domain(format!("error bounds need 0 <= gamma < 1, got {gamma}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    Realized,
    Expected,
    ExpectedIid,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ErrorBoundReport {
    pub gamma: f64,
    /// `ñ` for realized bounds, its expectation otherwise.
    pub n_tilde: f64,
    /// Bound on `‖f⁽ᵏ⁾ − f‖` (or its expectation) at the requested iteration.
    pub bound_at_k: f64,
    /// Limit of `bound_at_k` as `k → ∞`.
    pub asymptotic_bound: f64,
    pub variant: BoundVariant,
}

/// Bound on `‖f⁽ᵏ⁾ − f‖` for one noise realization:
/// `ñ/(1−γ) + γ^{k+1}(‖f‖ + ‖n‖)`.
pub fn realized_bound(
    gamma: f64,
    p: &Partition,
    measurement_noise: &[f64],
    norm_f: f64,
    norm_n: f64,
    k: usize,
) -> Result<ErrorBoundReport> {
    check_gamma(gamma)?;
    let nt = n_tilde(p, measurement_noise)?;
    let asymptotic = nt / (1.0 - gamma);
    Ok(ErrorBoundReport {
        gamma,
        n_tilde: nt,
        bound_at_k: asymptotic + gamma.powi(k as i32 + 1) * (norm_f + norm_n),
        asymptotic_bound: asymptotic,
        variant: BoundVariant::Realized,
    })
}

/// Bound on `E‖f⁽ᵏ⁾ − f‖`: `(1/(1−γ))·√(2/π)·Σ_i √|N_i|·σ_i + γ^{k+1}(‖f‖ + E‖n‖)`,
/// where `E‖n‖` is replaced by its upper bound `√(Σσ²)`.
///
/// With `iid_shortcut` the leading term uses `|I|σ√(2/π)/(1−γ)`, which is exact
/// only for equal vertex variances and uniform weights; both are checked.
pub fn expected_bound(
    gamma: f64,
    p: &Partition,
    w: &LocalWeights,
    noise: &NoiseModel,
    norm_f: f64,
    k: usize,
    iid_shortcut: bool,
) -> Result<ErrorBoundReport> {
    check_gamma(gamma)?;
    check_len(p.len(), w.len())?;
    let eq = equivalent_noise_sigma(w, noise)?;
    let (expected_nt, variant) = if iid_shortcut {
        let sigma = noise.sigma().first().copied().unwrap_or(0.0);
        if noise.sigma().iter().any(|&s| s != sigma) {
            return Err(domain("the iid shortcut needs equal vertex variances"));
        }
        if !w.is_uniform(p) {
            return Err(domain("the iid shortcut needs uniform weights"));
        }
        (p.len() as f64 * sigma * (2.0 / PI).sqrt(), BoundVariant::ExpectedIid)
    } else {
        (expected_n_tilde(p, &eq)?, BoundVariant::Expected)
    };
    let asymptotic = expected_nt / (1.0 - gamma);
    Ok(ErrorBoundReport {
        gamma,
        n_tilde: expected_nt,
        bound_at_k: asymptotic + gamma.powi(k as i32 + 1) * (norm_f + noise.rms_norm()),
        asymptotic_bound: asymptotic,
        variant,
    })
}

/// `E ñ = √(2/π) Σ_i √|N_i| σ_i`.
pub fn expected_n_tilde(p: &Partition, eq: &[EquivalentNoise]) -> Result<f64> {
    check_len(p.len(), eq.len())?;
    Ok(p.sets().iter().zip(eq).map(|(s, e)| (s.len() as f64).sqrt() * e.mean_abs).sum())
}

/// Large-`|I|` normal approximation of `Σ_i |n_i|` for iid `n_i ~ N(0, σ²)`:
/// returns (mean, variance) = `(|I|σ√(2/π), |I|σ²(1 − 2/π))`.
pub fn abs_sum_clt(count: usize, sigma: f64) -> (f64, f64) {
    let m = count as f64;
    (m * sigma * (2.0 / PI).sqrt(), m * sigma * sigma * (1.0 - 2.0 / PI))
}
