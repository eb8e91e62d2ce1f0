//! Fourth-order moments and the nine-setting measurement protocol.
//!
//! The coherency matrix of a biphoton holds the moments
//!
//! ```text
//! A = ⟨a†²a²⟩   B = ⟨b†²b²⟩   C = ⟨a†b†ab⟩
//! D = ⟨a†²ab⟩   E = ⟨a†²b²⟩   F = ⟨a†b†b²⟩
//! ```
//!
//! with `a`, `b` the horizontal and vertical mode operators. For a density
//! matrix in the `|2,0⟩, |1,1⟩, |0,2⟩` basis these are `A = 2ρ₁₁`,
//! `B = 2ρ₃₃`, `C = ρ₂₂`, `D = √2·ρ₂₁`, `E = 2ρ₃₁`, `F = √2·ρ₃₂`.

use serde::{Deserialize, Serialize};

use crate::bench::{coincidence_rate_with, Convention, FilterSettings};
use crate::error::Result;
use crate::linalg::{condition_number, RealLu};
use crate::scalar::{c, sqrt2, Real, C};
use crate::state::DensityMatrix3;

/// Moments `A, B, C` (real) and `D, E, F` (complex).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: C<T>,
    pub e: C<T>,
    pub f: C<T>,
}

impl<T: Real> MomentSet<T> {
    pub fn from_density(rho: &DensityMatrix3<T>) -> Self {
        let two = T::lit(2.0);
        let r2 = sqrt2::<T>();
        MomentSet {
            a: rho.entry(0, 0).re * two,
            b: rho.entry(2, 2).re * two,
            c: rho.entry(1, 1).re,
            d: rho.entry(1, 0) * r2,
            e: rho.entry(2, 0) * two,
            f: rho.entry(2, 1) * r2,
        }
    }

    /// `(A, B, C, Re D, Im D, Re E, Im E, Re F, Im F)`.
    pub fn to_vector(&self) -> [T; 9] {
        [
            self.a, self.b, self.c, self.d.re, self.d.im, self.e.re, self.e.im, self.f.re, self.f.im,
        ]
    }

    pub fn from_vector(v: &[T; 9]) -> Self {
        MomentSet {
            a: v[0],
            b: v[1],
            c: v[2],
            d: c(v[3], v[4]),
            e: c(v[5], v[6]),
            f: c(v[7], v[8]),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let (x, y) = (self.to_vector(), other.to_vector());
        x.iter().zip(&y).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }
}

/// One line of the protocol: plate angles (degrees) and the linear
/// combination of moments its coincidence rate measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRow<T> {
    /// 1-based row number.
    pub index: usize,
    /// `[χ_s, θ_s, χ_i, θ_i]`; `s` is the transmitted arm.
    pub angles_deg: [T; 4],
    /// Coefficients over `(A, B, C, Re D, Im D, Re E, Im E, Re F, Im F)`.
    pub combination: [T; 9],
}

impl<T: Real> ProtocolRow<T> {
    pub fn settings(&self) -> FilterSettings<T> {
        FilterSettings::from_degrees(self.angles_deg)
    }

    pub fn evaluate(&self, m: &MomentSet<T>) -> T {
        let v = m.to_vector();
        self.combination.iter().zip(&v).fold(T::zero(), |s, (k, x)| s + *k * *x)
    }
}

const ROWS: [([f64; 4], [f64; 9]); 9] = {
    const Q: f64 = 0.25;
    const E: f64 = 0.125;
    const S: f64 = 0.0625;
    [
        // A/4
        ([0.0, 45.0, 0.0, -45.0], [Q, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        // C/4
        ([0.0, 45.0, 0.0, 0.0], [0.0, 0.0, Q, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        // B/4
        ([0.0, 0.0, 0.0, 0.0], [0.0, Q, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        // (B + C + 2 Im F)/8
        ([45.0, 0.0, 0.0, 0.0], [0.0, E, E, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0 * E]),
        // (B + C − 2 Re F)/8
        ([45.0, 22.5, 0.0, 0.0], [0.0, E, E, 0.0, 0.0, 0.0, 0.0, -2.0 * E, 0.0]),
        // (A + C − 2 Re D)/8
        ([45.0, 22.5, 0.0, -45.0], [E, 0.0, E, -2.0 * E, 0.0, 0.0, 0.0, 0.0, 0.0]),
        // (A + C + 2 Im D)/8
        ([45.0, 0.0, 0.0, -45.0], [E, 0.0, E, 0.0, 2.0 * E, 0.0, 0.0, 0.0, 0.0]),
        // (A + B − 2 Im E)/16
        ([-45.0, 11.25, -45.0, 11.25], [S, S, 0.0, 0.0, 0.0, 0.0, -2.0 * S, 0.0, 0.0]),
        // (A + B − 2 Re E)/16
        ([45.0, 22.5, -45.0, 22.5], [S, S, 0.0, 0.0, 0.0, -2.0 * S, 0.0, 0.0, 0.0]),
    ]
};

pub fn protocol<T: Real>() -> [ProtocolRow<T>; 9] {
    std::array::from_fn(|k| ProtocolRow {
        index: k + 1,
        angles_deg: ROWS[k].0.map(T::lit),
        combination: ROWS[k].1.map(T::lit),
    })
}

/// The 9×9 matrix mapping moment vectors to rates.
pub fn protocol_matrix<T: Real>() -> [[T; 9]; 9] {
    protocol::<T>().map(|row| row.combination)
}

pub fn protocol_condition_number<T: Real>() -> T {
    condition_number(&protocol_matrix::<T>()).expect("protocol system is invertible")
}

/// Coincidence rate of each row for `rho`, from the optical model.
pub fn expected_rates<T: Real>(rho: &DensityMatrix3<T>) -> [T; 9] {
    expected_rates_with(rho, &Convention::FROZEN)
}

pub fn expected_rates_with<T: Real>(rho: &DensityMatrix3<T>, conv: &Convention) -> [T; 9] {
    protocol::<T>().map(|row| coincidence_rate_with(rho, &row.settings(), conv))
}

/// Solves the protocol system for the moments.
pub fn moments_from_rates<T: Real>(rates: &[T; 9]) -> MomentSet<T> {
    let lu = RealLu::new(protocol_matrix::<T>()).expect("protocol system is invertible");
    MomentSet::from_vector(&lu.solve(rates))
}

/// Assembles `ρ₁₁ = A/2, ρ₂₂ = C, ρ₃₃ = B/2, ρ₁₂ = D*/√2, ρ₁₃ = E*/2,
/// ρ₂₃ = F*/√2` and divides by the trace.
pub fn rho_from_moments<T: Real>(m: &MomentSet<T>) -> Result<DensityMatrix3<T>> {
    let two = T::lit(2.0);
    let r2 = sqrt2::<T>();
    DensityMatrix3::from_upper(
        [m.a / two, m.c, m.b / two],
        m.d.conj() / r2,
        m.e.conj() / two,
        m.f.conj() / r2,
    )
    .normalized()
}

/// Linear inversion: rates → moments → trace-normalized matrix. The result
/// is Hermitian but may have negative eigenvalues.
pub fn linear_inversion<T: Real>(rates: &[T; 9]) -> Result<DensityMatrix3<T>> {
    rho_from_moments(&moments_from_rates(rates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::re;
    use crate::state::QutritState;

    const TOL: f64 = 1e-12;

    #[test]
    fn protocol_rows() {
        let p = protocol::<f64>();
        assert_eq!(p[0].angles_deg, [0.0, 45.0, 0.0, -45.0]);
        assert_eq!(p[0].combination[0], 0.25);
        assert_eq!(p[2].angles_deg, [0.0; 4]);
        assert_eq!(p[2].combination[1], 0.25);
        assert_eq!(p[8].angles_deg, [45.0, 22.5, -45.0, 22.5]);
        assert_eq!(p[8].index, 9);
    }

    #[test]
    fn system_is_well_conditioned() {
        let k = protocol_condition_number::<f64>();
        assert!(k.is_finite() && k < 100.0, "{k}");
    }

    #[test]
    fn zero_rates_give_zero_moments() {
        let m = moments_from_rates(&[0.0f64; 9]);
        assert_eq!(m.to_vector(), [0.0; 9]);
        assert_eq!(rho_from_moments(&m).unwrap_err(), Error::ZeroTrace);
    }

    #[test]
    fn one_one_moments_and_matrix() {
        let rho = QutritState::<f64>::basis(1).density();
        let m = moments_from_rates(&expected_rates(&rho));
        let want = MomentSet {
            a: 0.0,
            b: 0.0,
            c: 1.0,
            d: re(0.0),
            e: re(0.0),
            f: re(0.0),
        };
        assert!(m.max_abs_diff(&want) < TOL);
        assert!(rho_from_moments(&m).unwrap().max_abs_diff(&rho) < TOL);
    }

    #[test]
    fn moments_of_pure_state_match_closed_form() {
        let s = QutritState::new(c(0.3f64, 0.2), c(-0.5, 0.1), c(0.4, -0.6)).normalize().unwrap();
        let m = MomentSet::from_density(&s.density());
        let [c1, c2, c3] = s.amplitudes();
        let r2 = 2f64.sqrt();
        assert!((m.a - 2.0 * c1.norm_sqr()).abs() < TOL);
        assert!((m.b - 2.0 * c3.norm_sqr()).abs() < TOL);
        assert!((m.c - c2.norm_sqr()).abs() < TOL);
        assert!((m.d - c1.conj() * c2 * r2).norm() < TOL);
        assert!((m.e - c1.conj() * c3 * 2.0).norm() < TOL);
        assert!((m.f - c2.conj() * c3 * r2).norm() < TOL);
    }
}
