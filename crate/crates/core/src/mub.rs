//! The twelve-state sequence: four mutually unbiased qutrit bases.
//!
//! Basis 0 is `{|2,0⟩, |1,1⟩, |0,2⟩}`. The other three use equal magnitudes
//! `1/√3` and phases from `{0, ±120°}`:
//!
//! | basis | α            | β              | γ              |
//! |-------|--------------|----------------|----------------|
//! | ′     | (0, 0, 0)    | (0, 120, −120) | (0, −120, 120) |
//! | ″     | (120, 0, 0)  | (0, 120, 0)    | (0, 0, 120)    |
//! | ‴     | (−120, 0, 0) | (0, −120, 0)   | (0, 0, −120)   |
//!
//! Basis ′ carries Fourier phases `j·(0, 1, −1)·120°` for the `j`-th state;
//! bases ″ and ‴ put a single `±120°` on component `j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};
use crate::state::QutritState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Letter {
    Alpha,
    Beta,
    Gamma,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::Alpha, Letter::Beta, Letter::Gamma];

    pub fn index(self) -> usize {
        self as usize
    }

    fn name(self) -> &'static str {
        match self {
            Letter::Alpha => "alpha",
            Letter::Beta => "beta",
            Letter::Gamma => "gamma",
        }
    }
}

/// `alpha0` … `gamma3`: the letter picks the state within a basis, the prime
/// count picks the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateLabel {
    pub letter: Letter,
    pub primes: u8,
}

impl StateLabel {
    pub fn new(letter: Letter, primes: u8) -> Self {
        assert!(primes < 4, "prime count must be 0..=3");
        StateLabel { letter, primes }
    }

    pub fn all() -> impl Iterator<Item = StateLabel> {
        (0..4u8).flat_map(|p| Letter::ALL.into_iter().map(move |l| StateLabel::new(l, p)))
    }

    /// Relative phases `(φ1, φ2, φ3)` in degrees.
    pub fn phases_deg(&self) -> [f64; 3] {
        let j = self.letter.index();
        match self.primes {
            0 => [0.0; 3],
            1 => {
                let step = 120.0 * j as f64;
                [0.0, wrap_deg(step), wrap_deg(-step)]
            }
            2 | 3 => {
                let mut ph = [0.0; 3];
                ph[j] = if self.primes == 2 { 120.0 } else { -120.0 };
                ph
            }
            _ => unreachable!(),
        }
    }

    pub fn magnitudes(&self) -> [f64; 3] {
        if self.primes == 0 {
            let mut m = [0.0; 3];
            m[self.letter.index()] = 1.0;
            m
        } else {
            [1.0 / 3f64.sqrt(); 3]
        }
    }

    pub fn state<T: Real>(&self) -> QutritState<T> {
        let mags = self.magnitudes().map(T::lit);
        let phases = self.phases_deg().map(|p| T::lit(p).to_radians());
        QutritState::from_polar(mags, phases).expect("table magnitudes are nonzero")
    }
}

fn wrap_deg(x: f64) -> f64 {
    let r = (x + 180.0).rem_euclid(360.0) - 180.0;
    if r == -180.0 {
        180.0
    } else {
        r
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.name(), self.primes)
    }
}

/// Accepts `beta2`, `beta''`, `beta″`, `β″` and similar spellings.
impl FromStr for StateLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_lowercase();
        let (letter, rest) = [
            ("alpha", Letter::Alpha),
            ("beta", Letter::Beta),
            ("gamma", Letter::Gamma),
            ("α", Letter::Alpha),
            ("β", Letter::Beta),
            ("γ", Letter::Gamma),
            ("a", Letter::Alpha),
            ("b", Letter::Beta),
            ("g", Letter::Gamma),
        ]
        .iter()
        .find_map(|(p, l)| t.strip_prefix(p).map(|r| (*l, r)))
        .ok_or_else(|| Error::UnknownLabel(s.to_string()))?;
        let primes = match rest {
            "" | "0" => 0,
            "1" | "'" | "′" => 1,
            "2" | "''" | "″" | "′′" => 2,
            "3" | "'''" | "‴" | "′′′" => 3,
            _ => return Err(Error::UnknownLabel(s.to_string())),
        };
        Ok(StateLabel::new(letter, primes))
    }
}

impl Serialize for StateLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StateLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct LabeledState<T> {
    pub label: StateLabel,
    pub state: QutritState<T>,
}

/// The twelve labeled states, ordered basis by basis (α, β, γ within each).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct StateTable<T> {
    pub states: Vec<LabeledState<T>>,
}

impl<T: Real> StateTable<T> {
    pub fn get(&self, label: StateLabel) -> &QutritState<T> {
        &self
            .states
            .iter()
            .find(|s| s.label == label)
            .expect("table holds every label")
            .state
    }

    pub fn bases(&self) -> [Basis3<T>; 4] {
        std::array::from_fn(|b| Basis3 {
            label: b,
            states: std::array::from_fn(|j| *self.get(StateLabel::new(Letter::ALL[j], b as u8))),
        })
    }
}

pub fn twelve_states<T: Real>() -> StateTable<T> {
    StateTable {
        states: StateLabel::all()
            .map(|label| LabeledState {
                label,
                state: label.state(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Basis3<T> {
    pub label: usize,
    pub states: [QutritState<T>; 3],
}

impl<T: Real> Basis3<T> {
    /// Largest `| |⟨i|j⟩|² − δᵢⱼ |` over the basis.
    pub fn orthonormality_deviation(&self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((self.states[i].overlap(&self.states[j]) - target).abs());
            }
        }
        worst
    }
}

pub fn bases<T: Real>() -> [Basis3<T>; 4] {
    twelve_states().bases()
}

/// Canonical prime-dimension construction: the computational basis plus
/// `vₖⱼ[n] = ω^{k·n² + j·n}/√3`, `ω = e^{2πi/3}`, for `k = 0, 1, 2`.
pub fn fourier_bases<T: Real>() -> [Basis3<T>; 4] {
    let third = T::lit(2.0) * T::PI() / T::lit(3.0);
    std::array::from_fn(|b| {
        let states = std::array::from_fn(|j| {
            if b == 0 {
                return QutritState::basis(j);
            }
            let k = b - 1;
            let amps = std::array::from_fn(|n| cis(third * T::lit(((k * n * n + j * n) % 3) as f64)));
            QutritState::from_amplitudes(amps).normalize().expect("unit-modulus amplitudes")
        });
        Basis3 { label: b, states }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairOverlap<T> {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub overlap: T,
}

/// Every pairwise squared overlap of four bases and how far each strays
/// from its ideal value (0 within a basis, 1/3 across bases).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnbiasednessReport<T> {
    /// 12 entries: three distinct pairs per basis.
    pub within: Vec<PairOverlap<T>>,
    /// 54 entries: nine pairs for each of the six basis pairs.
    pub cross: Vec<PairOverlap<T>>,
    pub max_within_deviation: T,
    pub max_cross_deviation: T,
    pub max_norm_deviation: T,
    /// Bases that are not orthonormal within tolerance.
    pub malformed_bases: Vec<usize>,
    pub tolerance: T,
}

impl<T: Real> UnbiasednessReport<T> {
    pub fn passes(&self) -> bool {
        self.malformed_bases.is_empty()
            && self.max_within_deviation <= self.tolerance
            && self.max_cross_deviation <= self.tolerance
            && self.max_norm_deviation <= self.tolerance
    }

    /// Fails with the first malformed basis, if any.
    pub fn check(&self) -> Result<()> {
        if let Some(&basis) = self.malformed_bases.first() {
            let deviation = self.max_within_deviation.max(self.max_norm_deviation).as_f64();
            return Err(Error::MalformedBasis { basis, deviation });
        }
        Ok(())
    }
}

pub fn unbiasedness_report<T: Real>(bases: &[Basis3<T>]) -> UnbiasednessReport<T> {
    let tolerance = T::exact_tol();
    let third = T::one() / T::lit(3.0);
    let mut within = Vec::new();
    let mut cross = Vec::new();
    let mut max_within_deviation = T::zero();
    let mut max_cross_deviation = T::zero();
    let mut max_norm_deviation = T::zero();
    let mut malformed_bases = Vec::new();

    for (a, ba) in bases.iter().enumerate() {
        let mut basis_worst = T::zero();
        for i in 0..3 {
            let n = (ba.states[i].norm_sqr() - T::one()).abs();
            max_norm_deviation = max_norm_deviation.max(n);
            basis_worst = basis_worst.max(n);
            for j in (i + 1)..3 {
                let overlap = ba.states[i].overlap(&ba.states[j]);
                within.push(PairOverlap {
                    first: (a, i),
                    second: (a, j),
                    overlap,
                });
                max_within_deviation = max_within_deviation.max(overlap);
                basis_worst = basis_worst.max(overlap);
            }
        }
        if !(basis_worst <= tolerance) {
            malformed_bases.push(a);
        }
        for (b, bb) in bases.iter().enumerate().skip(a + 1) {
            for i in 0..3 {
                for j in 0..3 {
                    let overlap = ba.states[i].overlap(&bb.states[j]);
                    cross.push(PairOverlap {
                        first: (a, i),
                        second: (b, j),
                        overlap,
                    });
                    max_cross_deviation = max_cross_deviation.max((overlap - third).abs());
                }
            }
        }
    }

    UnbiasednessReport {
        within,
        cross,
        max_within_deviation,
        max_cross_deviation,
        max_norm_deviation,
        malformed_bases,
        tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cis, re};

    fn deg(x: f64) -> f64 {
        x.to_radians()
    }

    #[test]
    fn alpha_is_two_zero() {
        let t = twelve_states::<f64>();
        assert_eq!(*t.get("alpha".parse().unwrap()), QutritState::basis(0));
    }

    #[test]
    fn beta_prime_row() {
        let s: QutritState<f64> = "beta'".parse::<StateLabel>().unwrap().state();
        let expect = QutritState::new(re(1.0), cis(deg(120.0)), cis(deg(-120.0))).normalize().unwrap();
        for k in 0..3 {
            assert!((s.amplitudes()[k] - expect.amplitudes()[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn gamma_double_prime_row() {
        let s: QutritState<f64> = "gamma2".parse::<StateLabel>().unwrap().state();
        let expect = QutritState::new(re(1.0), re(1.0), cis(deg(120.0))).normalize().unwrap();
        for k in 0..3 {
            assert!((s.amplitudes()[k] - expect.amplitudes()[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn first_basis_is_computational() {
        let b = bases::<f64>();
        assert_eq!(b.len(), 4);
        for j in 0..3 {
            assert_eq!(b[0].states[j], QutritState::basis(j));
        }
        assert!(b[2].states[0].overlap(&b[2].states[1]) < 1e-15);
    }

    #[test]
    fn table_is_unbiased() {
        let r = unbiasedness_report(&bases::<f64>());
        assert_eq!(r.within.len(), 12);
        assert_eq!(r.cross.len(), 54);
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn fourier_construction_is_unbiased() {
        assert!(unbiasedness_report(&fourier_bases::<f64>()).passes());
    }

    #[test]
    fn computational_basis_against_itself() {
        let b0 = bases::<f64>()[0];
        let r = unbiasedness_report(&[b0, b0]);
        for p in &r.cross {
            let expect = if p.first.1 == p.second.1 { 1.0 } else { 0.0 };
            assert_eq!(p.overlap, expect);
        }
        assert!(r.malformed_bases.is_empty());
        assert!(!r.passes());
    }

    #[test]
    fn perturbed_state_is_flagged() {
        let mut b = bases::<f64>();
        let mut amps = b[1].states[1].amplitudes();
        amps[0] = amps[0] * 1.01;
        b[1].states[1] = QutritState::from_amplitudes(amps).normalize().unwrap();
        let r = unbiasedness_report(&b);
        assert!(!r.passes());
        assert!(r.max_within_deviation > 1e-5 || r.max_cross_deviation > 1e-3);
        assert_eq!(r.malformed_bases, vec![1]);
        assert!(matches!(r.check(), Err(Error::MalformedBasis { basis: 1, .. })));
    }

    #[test]
    fn label_spellings() {
        for (s, want) in [
            ("beta2", "beta2"),
            ("beta''", "beta2"),
            ("β″", "beta2"),
            ("alpha'''", "alpha3"),
            ("gamma", "gamma0"),
            ("γ′", "gamma1"),
        ] {
            assert_eq!(s.parse::<StateLabel>().unwrap().to_string(), want);
        }
        assert!("delta1".parse::<StateLabel>().is_err());
        assert!("beta4".parse::<StateLabel>().is_err());
    }
}
