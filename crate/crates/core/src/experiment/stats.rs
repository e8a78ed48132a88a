use rand::Rng;

use crate::error::{domain, Result};
use crate::spectral::GraphSignal;

/// `‖estimate − truth‖ / ‖truth‖`.
pub fn relative_error(estimate: &GraphSignal, truth: &GraphSignal) -> Result<f64> {
    crate::error::check_len(truth.len(), estimate.len())?;
    let norm = truth.norm();
    if norm == 0.0 {
        return Err(domain("relative error against a zero signal is undefined"));
    }
    Ok(estimate.distance(truth) / norm)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (`n − 1` denominator); zero for fewer than two samples.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Percentile bootstrap confidence interval for the mean of `xs`.
pub fn bootstrap_mean_ci<R: Rng + ?Sized>(xs: &[f64], level: f64, resamples: usize, rng: &mut R) -> Result<(f64, f64)> {
    if xs.is_empty() {
        return Err(domain("bootstrap needs at least one sample"));
    }
    if !(level > 0.0 && level < 1.0) || resamples == 0 {
        return Err(domain("bootstrap needs 0 < level < 1 and at least one resample"));
    }
    let n = xs.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| xs[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    let at = |q: f64| means[((q * resamples as f64).floor() as usize).min(resamples - 1)];
    Ok((at(tail), at(1.0 - tail)))
}
