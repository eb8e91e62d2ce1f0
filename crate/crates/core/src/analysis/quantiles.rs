//! Monte Carlo fidelity quantiles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::QutritState;
use crate::tomography::{exposure_for_events, mle_reconstruct, simulate_counts};

use super::fidelity::fidelity;

pub const MIN_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityQuantiles {
    pub events: f64,
    pub trials: usize,
    pub q05: f64,
    pub q95: f64,
    pub median: f64,
}

/// Linear interpolation between order statistics at 1-based rank
/// `p·(n−1) + 1`.
pub fn quantile(sorted: &[f64], p: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptySeries);
    }
    let h = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    Ok(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// Fidelity of each trial's reconstruction to `target`. Trial `t` uses seed
/// `seed + t`; `events` is the expected count per protocol row on average.
pub fn fidelity_trials(target: &QutritState<f64>, events: f64, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let rho = target.density();
    let exposure = exposure_for_events(&rho, events)?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let counts = simulate_counts(&rho, exposure, seed.wrapping_add(t))?;
            Ok(fidelity(target, &mle_reconstruct(&counts)?.rho))
        })
        .collect()
}

pub fn summarize(fidelities: &[f64], events: f64) -> Result<FidelityQuantiles> {
    let mut sorted = fidelities.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(FidelityQuantiles {
        events,
        trials: sorted.len(),
        q05: quantile(&sorted, 0.05)?,
        q95: quantile(&sorted, 0.95)?,
        median: quantile(&sorted, 0.5)?,
    })
}

pub fn fidelity_quantiles(
    target: &QutritState<f64>,
    events: f64,
    trials: usize,
    seed: u64,
) -> Result<FidelityQuantiles> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials {
            min: MIN_TRIALS,
            got: trials,
        });
    }
    summarize(&fidelity_trials(target, events, trials, seed)?, events)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_rule() {
        let xs: Vec<f64> = (1..=21).map(f64::from).collect();
        assert_eq!(quantile(&xs, 0.05).unwrap(), 2.0);
        assert_eq!(quantile(&xs, 0.5).unwrap(), 11.0);
        assert_eq!(quantile(&xs, 0.95).unwrap(), 20.0);
        let ys = [0.0, 10.0];
        assert!((quantile(&ys, 0.05).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(quantile(&[3.0], 0.95).unwrap(), 3.0);
        assert_eq!(quantile(&[], 0.5), Err(Error::EmptySeries));
    }

    #[test]
    fn too_few_trials() {
        let psi = QutritState::<f64>::basis(0);
        assert_eq!(
            fidelity_quantiles(&psi, 500.0, 10, 0),
            Err(Error::TooFewTrials { min: 100, got: 10 })
        );
    }
}
