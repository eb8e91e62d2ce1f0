//! Phase scans of the coincidence rate and their visibility.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix3;
use crate::sampling::poisson_count;
use crate::scalar::Real;
use crate::state::PreparationConfig;

use super::FilterSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweptPhase {
    Phi12,
    Phi13,
}

/// Preparation family with one relative phase left free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSweep<T> {
    pub base: PreparationConfig<T>,
    pub swept: SweptPhase,
}

impl<T: Real> PhaseSweep<T> {
    pub fn new(base: PreparationConfig<T>, swept: SweptPhase) -> Self {
        PhaseSweep { base, swept }
    }

    pub fn at(&self, phase: T) -> PreparationConfig<T> {
        let mut cfg = self.base;
        match self.swept {
            SweptPhase::Phi12 => cfg.phi12 = phase,
            SweptPhase::Phi13 => cfg.phi13 = phase,
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint<T> {
    pub phase: T,
    pub rate: T,
}

pub fn phase_scan<T: Real>(
    sweep: &PhaseSweep<T>,
    settings: &FilterSettings<T>,
    grid: &[T],
) -> Result<Vec<ScanPoint<T>>> {
    phase_scan_through(sweep, &Matrix3::identity(), settings, grid)
}

/// Scan with a fixed transformer between preparation and filters.
pub fn phase_scan_through<T: Real>(
    sweep: &PhaseSweep<T>,
    transformer: &Matrix3<T>,
    settings: &FilterSettings<T>,
    grid: &[T],
) -> Result<Vec<ScanPoint<T>>> {
    if grid.is_empty() {
        return Err(Error::EmptySeries);
    }
    let d = settings.detection_vector();
    grid.par_iter()
        .map(|&phase| {
            let psi = sweep.at(phase).state()?.transform(transformer);
            Ok(ScanPoint {
                phase,
                rate: d.rate_pure(&psi),
            })
        })
        .collect()
}

/// Poisson counts for each scan point: mean `exposure·rate + background`.
/// Point `k` draws from stream `k` of `seed`.
pub fn noisy_counts(points: &[ScanPoint<f64>], exposure: f64, background: f64, seed: u64) -> Vec<u64> {
    points
        .par_iter()
        .enumerate()
        .map(|(k, p)| poisson_count(exposure * p.rate.max(0.0) + background, seed, k as u64))
        .collect()
}

/// `(max − min)/(max + min)`.
pub fn visibility<T: Real>(series: &[T]) -> Result<T> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let max = series.iter().copied().fold(T::neg_infinity(), T::max);
    let min = series.iter().copied().fold(T::infinity(), T::min);
    if !(max > T::zero()) {
        return Err(Error::NoPositiveValue);
    }
    Ok((max - min) / (max + min))
}
