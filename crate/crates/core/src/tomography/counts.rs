use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bench::Convention;
use crate::error::{Error, Result};
use crate::sampling::poisson_count;
use crate::state::DensityMatrix3;

use super::protocol::{expected_rates, expected_rates_with, linear_inversion, protocol};

pub const ROWS: usize = 9;

/// Coincidence counts of one run of the nine-row protocol.
///
/// `exposure` converts rates to expected counts: row `ν` has mean
/// `exposure·rate_ν + background`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRecord {
    pub counts: [u64; ROWS],
    pub exposure: f64,
    pub seed: u64,
    pub background: f64,
}

impl CountRecord {
    pub fn new(counts: [u64; ROWS], exposure: f64, seed: u64, background: f64) -> Result<Self> {
        let rec = CountRecord {
            counts,
            exposure,
            seed,
            background,
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.exposure >= 0.0 && self.exposure.is_finite()) {
            return Err(Error::InvalidExposure(self.exposure));
        }
        if !(self.background >= 0.0 && self.background.is_finite()) {
            return Err(Error::InvalidBackground(self.background));
        }
        Ok(())
    }

    pub fn observed(&self) -> [f64; ROWS] {
        self.counts.map(|k| k as f64)
    }

    /// Background-subtracted counts divided by exposure.
    pub fn observed_rates(&self) -> Result<[f64; ROWS]> {
        if !(self.exposure > 0.0) {
            return Err(Error::InvalidExposure(self.exposure));
        }
        Ok(self.counts.map(|k| (k as f64 - self.background) / self.exposure))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Linear-inversion estimate; may be unphysical.
    pub fn linear_estimate(&self) -> Result<DensityMatrix3<f64>> {
        linear_inversion(&self.observed_rates()?)
    }
}

/// Options that change how counts are generated, not how they are analyzed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    /// Accidental coincidences per row, added to the mean.
    pub background: f64,
    /// Optical convention of the simulated instrument.
    pub convention: Convention,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            background: 0.0,
            convention: Convention::FROZEN,
        }
    }
}

/// Independent Poisson counts per row. Row `ν` (0-based) draws from stream
/// `ν` of `seed`.
pub fn simulate_counts(rho: &DensityMatrix3<f64>, exposure: f64, seed: u64) -> Result<CountRecord> {
    simulate_counts_with(rho, exposure, seed, &SimulationOptions::default())
}

pub fn simulate_counts_with(
    rho: &DensityMatrix3<f64>,
    exposure: f64,
    seed: u64,
    opts: &SimulationOptions,
) -> Result<CountRecord> {
    let rec = CountRecord {
        counts: [0; ROWS],
        exposure,
        seed,
        background: opts.background,
    };
    rec.validate()?;
    let rates = expected_rates_with(rho, &opts.convention);
    let counts = std::array::from_fn(|k| {
        let mean = exposure * rates[k].max(0.0) + opts.background;
        poisson_count(mean, seed, k as u64)
    });
    Ok(CountRecord { counts, ..rec })
}

/// Exposure at which the average row collects `events` counts.
pub fn exposure_for_events(rho: &DensityMatrix3<f64>, events: f64) -> Result<f64> {
    let rates = expected_rates(rho);
    let mean = rates.iter().map(|r| r.max(0.0)).sum::<f64>() / ROWS as f64;
    let exposure = events / mean;
    if !(exposure > 0.0 && exposure.is_finite()) {
        return Err(Error::InvalidExposure(exposure));
    }
    Ok(exposure)
}

#[derive(Serialize, Deserialize)]
struct RowJson {
    nu: usize,
    counts: u64,
    settings_deg: [f64; 4],
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    rows: Vec<RowJson>,
    exposure: f64,
    seed: u64,
    #[serde(default)]
    background: f64,
}

impl Serialize for CountRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = protocol::<f64>()
            .iter()
            .zip(self.counts)
            .map(|(row, counts)| RowJson {
                nu: row.index,
                counts,
                settings_deg: row.angles_deg,
            })
            .collect();
        RecordJson {
            rows,
            exposure: self.exposure,
            seed: self.seed,
            background: self.background,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CountRecord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = RecordJson::deserialize(d)?;
        if json.rows.len() != ROWS {
            return Err(D::Error::custom(Error::RowCount {
                expected: ROWS,
                got: json.rows.len(),
            }));
        }
        let proto = protocol::<f64>();
        let mut counts = [None; ROWS];
        for row in &json.rows {
            if !(1..=ROWS).contains(&row.nu) {
                return Err(D::Error::custom(format!("row nu={} outside 1..=9", row.nu)));
            }
            let expect = proto[row.nu - 1].angles_deg;
            if expect.iter().zip(&row.settings_deg).any(|(a, b)| (a - b).abs() > 1e-9) {
                return Err(D::Error::custom(format!(
                    "row nu={} settings {:?} differ from protocol {:?}",
                    row.nu, row.settings_deg, expect
                )));
            }
            if counts[row.nu - 1].replace(row.counts).is_some() {
                return Err(D::Error::custom(format!("row nu={} listed twice", row.nu)));
            }
        }
        let counts = counts.map(|c| c.expect("nine distinct rows"));
        CountRecord::new(counts, json.exposure, json.seed, json.background).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::StateLabel;

    fn beta2() -> DensityMatrix3<f64> {
        "beta2".parse::<StateLabel>().unwrap().state::<f64>().density()
    }

    #[test]
    fn zero_exposure_gives_zero_counts() {
        let rec = simulate_counts(&beta2(), 0.0, 3).unwrap();
        assert_eq!(rec.counts, [0; ROWS]);
    }

    #[test]
    fn negative_exposure_rejected() {
        assert!(matches!(simulate_counts(&beta2(), -1.0, 3), Err(Error::InvalidExposure(_))));
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = simulate_counts(&beta2(), 4000.0, 11).unwrap();
        let b = simulate_counts(&beta2(), 4000.0, 11).unwrap();
        assert_eq!(a, b);
        let c = simulate_counts(&beta2(), 4000.0, 12).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let rec = simulate_counts(&beta2(), 4000.0, 5).unwrap();
        let text = serde_json::to_string(&rec).unwrap();
        assert!(text.contains("\"settings_deg\":[0.0,45.0,0.0,-45.0]"));
        let back: CountRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);

        let short = text.replacen("{\"nu\":9", "{\"nu\":8", 1);
        assert!(serde_json::from_str::<CountRecord>(&short).is_err());
        let neg = text.replace("\"exposure\":4000.0", "\"exposure\":-4.0");
        assert!(serde_json::from_str::<CountRecord>(&neg).is_err());
    }

    #[test]
    fn exposure_for_events_sets_mean_row_count() {
        let rho = beta2();
        let n = exposure_for_events(&rho, 500.0).unwrap();
        let mean = expected_rates(&rho).iter().map(|r| r * n).sum::<f64>() / 9.0;
        assert!((mean - 500.0).abs() < 1e-9);
    }
}
