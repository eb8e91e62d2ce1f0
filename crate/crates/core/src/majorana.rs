//! Factorization of a biphoton qutrit into two single-photon polarizations.
//!
//! A photon with polarization angles `(θ, φ)` on the Poincaré sphere has Jones
//! vector `(cos θ/2, e^{iφ} sin θ/2)` in the H/V basis. Two such photons in one
//! spatial mode form the qutrit
//!
//! ```text
//! (√2·eₓe′ₓ, eₓe′ᵧ + eᵧe′ₓ, √2·eᵧe′ᵧ) / norm
//! ```
//!
//! Going the other way, the ratios `t = eᵧ/eₓ` of the two photons are the
//! roots of `c1·t² − √2·c2·t + c3 = 0`.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::{cis, re, sqrt2, Real, C};
use crate::state::QutritState;

/// Jones vector `(eₓ, eᵧ)` in the horizontal/vertical basis.
pub type JonesVector<T> = [C<T>; 2];

/// A point on the Poincaré sphere, in radians.
///
/// Canonical form: `theta ∈ [0, π]`, `phi ∈ [0, 2π)`, and `phi = 0` at the
/// poles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonPolarization<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> PhotonPolarization<T> {
    pub fn new(theta: T, phi: T) -> Self {
        PhotonPolarization { theta, phi }.canonical()
    }

    pub fn horizontal() -> Self {
        PhotonPolarization {
            theta: T::zero(),
            phi: T::zero(),
        }
    }

    pub fn vertical() -> Self {
        PhotonPolarization {
            theta: T::PI(),
            phi: T::zero(),
        }
    }

    /// Linear polarization at `angle` from horizontal.
    pub fn linear(angle: T) -> Self {
        Self::from_jones(&[re(angle.cos()), re(angle.sin())])
    }

    pub fn jones(&self) -> JonesVector<T> {
        let half = self.theta / T::lit(2.0);
        [re(half.cos()), cis(self.phi) * half.sin()]
    }

    /// Polarization of a Jones vector; global phase and norm are discarded.
    pub fn from_jones(e: &JonesVector<T>) -> Self {
        let (mx, my) = (e[0].norm(), e[1].norm());
        let theta = T::lit(2.0) * my.atan2(mx);
        let phi = if mx == T::zero() || my == T::zero() {
            T::zero()
        } else {
            (e[1] * e[0].conj()).arg()
        };
        PhotonPolarization { theta, phi }.canonical()
    }

    /// Ratio `t = tan(θ/2)·e^{iφ}`; `None` for vertical polarization.
    pub fn stereographic(&self) -> Option<C<T>> {
        let e = self.jones();
        (e[0].norm() > T::zero()).then(|| e[1] / e[0])
    }

    fn from_ratio(t: Option<C<T>>) -> Self {
        match t {
            None => Self::vertical(),
            Some(t) if !t.re.is_finite() || !t.im.is_finite() => Self::vertical(),
            Some(t) => PhotonPolarization {
                theta: T::lit(2.0) * t.norm().atan(),
                phi: t.arg(),
            }
            .canonical(),
        }
    }

    fn canonical(self) -> Self {
        let pole_tol = T::lit(1e-15);
        let two_pi = T::lit(2.0 * PI);
        let theta = self.theta.max(T::zero()).min(T::PI());
        if theta <= pole_tol || (T::PI() - theta) <= pole_tol {
            let theta = if theta <= pole_tol { T::zero() } else { T::PI() };
            return PhotonPolarization {
                theta,
                phi: T::zero(),
            };
        }
        let mut phi = self.phi % two_pi;
        if phi < T::zero() {
            phi = phi + two_pi;
        }
        if phi >= two_pi {
            phi = phi - two_pi;
        }
        PhotonPolarization { theta, phi }
    }

    /// `|⟨self|other⟩|²` between the single-photon states.
    pub fn overlap(&self, other: &Self) -> T {
        let (a, b) = (self.jones(), other.jones());
        (a[0].conj() * b[0] + a[1].conj() * b[1]).norm_sqr()
    }
}

/// Unordered pair of photon polarizations.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhotonPair<T> {
    pub first: PhotonPolarization<T>,
    pub second: PhotonPolarization<T>,
}

impl<T: Real> PhotonPair<T> {
    pub fn new(first: PhotonPolarization<T>, second: PhotonPolarization<T>) -> Self {
        PhotonPair { first, second }
    }

    pub fn swapped(&self) -> Self {
        PhotonPair {
            first: self.second,
            second: self.first,
        }
    }

    pub fn state(&self) -> QutritState<T> {
        pair_to_state(self)
    }
}

impl<T: PartialEq> PartialEq for PhotonPair<T> {
    fn eq(&self, other: &Self) -> bool {
        (self.first == other.first && self.second == other.second)
            || (self.first == other.second && self.second == other.first)
    }
}

/// Unnormalized two-photon amplitudes of `a†(e)·a†(e′)|vac⟩`.
pub fn two_photon_amplitudes<T: Real>(e: &JonesVector<T>, f: &JonesVector<T>) -> [C<T>; 3] {
    let r2 = sqrt2::<T>();
    [
        e[0] * f[0] * r2,
        e[0] * f[1] + e[1] * f[0],
        e[1] * f[1] * r2,
    ]
}

pub fn pair_to_state<T: Real>(pair: &PhotonPair<T>) -> QutritState<T> {
    let amps = two_photon_amplitudes(&pair.first.jones(), &pair.second.jones());
    // norm² = 1 + |⟨e|e′⟩|² ≥ 1, never degenerate
    QutritState::from_amplitudes(amps)
        .normalize()
        .expect("two-photon amplitudes have norm at least one")
}

/// Inverse of [`pair_to_state`], up to the global phase of the state.
///
/// A root at infinity (`c1 = 0`) is a vertically polarized photon. The
/// quadratic is solved with the larger-magnitude root first and the second
/// from the product of roots, so near-double roots keep full precision.
pub fn state_to_pair<T: Real>(state: &QutritState<T>) -> PhotonPair<T> {
    let [c1, c2, c3] = state.amplitudes();
    let scale = state.norm_sqr().sqrt();
    let negligible = |z: C<T>| z.norm() <= scale * T::lit(1e-15);

    let (t1, t2) = if negligible(c1) {
        // degree drops to 1: −√2·c2·t + c3 = 0, other root at infinity
        if negligible(c2) {
            (None, None)
        } else {
            (None, Some(c3 / (c2 * sqrt2::<T>())))
        }
    } else {
        let b = -(c2 * sqrt2::<T>());
        let disc = b * b - c1 * c3 * T::lit(4.0);
        let root = disc.sqrt();
        let sign = if (b.conj() * root).re >= T::zero() {
            T::one()
        } else {
            -T::one()
        };
        let q = -(b + root * sign) / T::lit(2.0);
        if q.is_zero() {
            (Some(C::zero()), Some(C::zero()))
        } else {
            (Some(q / c1), Some(c3 / q))
        }
    };
    PhotonPair {
        first: PhotonPolarization::from_ratio(t1),
        second: PhotonPolarization::from_ratio(t2),
    }
}
