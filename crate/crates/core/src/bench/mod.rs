//! Jones-calculus model of the Brown–Twiss polarization filters.
//!
//! Each arm behind the 50/50 beamsplitter holds a quarter-wave plate at `χ`,
//! then a half-wave plate at `θ`, then an analyzer transmitting V. An arm
//! passes with certainty exactly one input polarization, its detection mode
//! `e = Q(χ)†·H(θ)†·|V⟩`. The reflected arm sees the mirror image of the
//! lab frame, so its mode is `diag(1, −1)·Q(χ)†·H(θ)†·|V⟩`.
//!
//! With modes `e` (transmitted) and `e′` (reflected), the coincidence rate
//! per incoming pair is `¼·⟨d|ρ|d⟩` where `d` is the unnormalized
//! two-photon vector of `(e, e′)`. The ¼ is the beamsplitter's chance of
//! sending one photon to each arm, times the combinatorics of the pair.

mod jones;
mod lift;
mod scan;

pub use jones::{jones_matrix, rotation, Handedness, Waveplate};
pub use lift::lift_to_qutrit;
pub use scan::{
    noisy_counts, phase_scan, phase_scan_through, visibility, PhaseSweep, ScanPoint, SweptPhase,
};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{norm_sqr, Matrix2, Matrix3};
use crate::majorana::{state_to_pair, two_photon_amplitudes, JonesVector, PhotonPolarization};
use crate::scalar::{re, Real, C};
use crate::state::{DensityMatrix3, QutritState};

/// Order in which light meets the two plates of an arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementOrder {
    QuarterThenHalf,
    HalfThenQuarter,
}

/// Sign and geometry choices the optical model depends on.
///
/// [`Convention::FROZEN`] is the only one of the eight combinations under
/// which every row of the nine-setting protocol reproduces its moment
/// combination exactly, imaginary-part signs included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convention {
    pub handedness: Handedness,
    /// Reflected arm sees `y → −y`.
    pub mirror_reflected: bool,
    pub order: ElementOrder,
}

impl Convention {
    pub const FROZEN: Convention = Convention {
        handedness: Handedness::Negative,
        mirror_reflected: true,
        order: ElementOrder::QuarterThenHalf,
    };

    pub fn all() -> [Convention; 8] {
        let mut out = [Self::FROZEN; 8];
        let mut k = 0;
        for handedness in [Handedness::Positive, Handedness::Negative] {
            for mirror_reflected in [false, true] {
                for order in [ElementOrder::QuarterThenHalf, ElementOrder::HalfThenQuarter] {
                    out[k] = Convention {
                        handedness,
                        mirror_reflected,
                        order,
                    };
                    k += 1;
                }
            }
        }
        out
    }
}

impl Default for Convention {
    fn default() -> Self {
        Self::FROZEN
    }
}

/// The beamsplitter output an arm sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Port {
    Transmitted,
    Reflected,
}

/// Plate angles of one arm, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmFilter<T> {
    /// Quarter-wave plate.
    pub chi: T,
    /// Half-wave plate.
    pub theta: T,
}

impl<T: Real> ArmFilter<T> {
    pub fn new(chi: T, theta: T) -> Self {
        ArmFilter { chi, theta }
    }

    pub fn from_degrees(chi: T, theta: T) -> Self {
        ArmFilter::new(chi.to_radians(), theta.to_radians())
    }

    pub fn to_degrees(&self) -> [T; 2] {
        [self.chi.to_degrees(), self.theta.to_degrees()]
    }
}

/// Both arms of the Brown–Twiss scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSettings<T> {
    pub transmitted: ArmFilter<T>,
    pub reflected: ArmFilter<T>,
}

impl<T: Real> FilterSettings<T> {
    pub fn new(transmitted: ArmFilter<T>, reflected: ArmFilter<T>) -> Self {
        FilterSettings {
            transmitted,
            reflected,
        }
    }

    /// `[χ₁, θ₁, χ₂, θ₂]` in degrees.
    pub fn from_degrees(angles: [T; 4]) -> Self {
        FilterSettings::new(
            ArmFilter::from_degrees(angles[0], angles[1]),
            ArmFilter::from_degrees(angles[2], angles[3]),
        )
    }

    pub fn to_degrees(&self) -> [T; 4] {
        let [a, b] = self.transmitted.to_degrees();
        let [c, d] = self.reflected.to_degrees();
        [a, b, c, d]
    }

    pub fn detection_vector(&self) -> DetectionVector<T> {
        self.detection_vector_with(&Convention::FROZEN)
    }

    pub fn detection_vector_with(&self, conv: &Convention) -> DetectionVector<T> {
        let e = detection_mode_with(&self.transmitted, Port::Transmitted, conv);
        let f = detection_mode_with(&self.reflected, Port::Reflected, conv);
        detection_vector(&e, &f)
    }
}

/// Unnormalized two-photon projector of a filter pair,
/// `(√2·eₓe′ₓ, eₓe′ᵧ + eᵧe′ₓ, √2·eᵧe′ᵧ)` with `‖d‖² = 1 + |⟨e|e′⟩|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionVector<T>(pub [C<T>; 3]);

impl<T: Real> DetectionVector<T> {
    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.0)
    }

    /// `¼·⟨d|ρ|d⟩`.
    pub fn rate(&self, rho: &DensityMatrix3<T>) -> T {
        rho.matrix().expectation(&self.0) / T::lit(4.0)
    }

    /// `¼·|⟨d|ψ⟩|²`.
    pub fn rate_pure(&self, psi: &QutritState<T>) -> T {
        let amp = self.0.iter().zip(psi.amplitudes()).fold(C::<T>::zero(), |acc, (d, c)| acc + d.conj() * c);
        amp.norm_sqr() / T::lit(4.0)
    }
}

/// Mode passed with unit probability by one arm.
pub fn detection_mode<T: Real>(arm: &ArmFilter<T>, port: Port) -> JonesVector<T> {
    detection_mode_with(arm, port, &Convention::FROZEN)
}

pub fn detection_mode_with<T: Real>(arm: &ArmFilter<T>, port: Port, conv: &Convention) -> JonesVector<T> {
    let q = Waveplate::quarter_wave(arm.chi).jones_with(conv.handedness);
    let h = Waveplate::half_wave(arm.theta).jones_with(conv.handedness);
    let vertical = [C::zero(), re(T::one())];
    let back: Matrix2<T> = match conv.order {
        ElementOrder::QuarterThenHalf => q.adjoint() * h.adjoint(),
        ElementOrder::HalfThenQuarter => h.adjoint() * q.adjoint(),
    };
    let mut e = back.apply(&vertical);
    if port == Port::Reflected && conv.mirror_reflected {
        e[1] = -e[1];
    }
    e
}

pub fn detection_vector<T: Real>(e: &JonesVector<T>, f: &JonesVector<T>) -> DetectionVector<T> {
    DetectionVector(two_photon_amplitudes(e, f))
}

pub fn coincidence_rate<T: Real>(rho: &DensityMatrix3<T>, settings: &FilterSettings<T>) -> T {
    settings.detection_vector().rate(rho)
}

pub fn coincidence_rate_with<T: Real>(
    rho: &DensityMatrix3<T>,
    settings: &FilterSettings<T>,
    conv: &Convention,
) -> T {
    settings.detection_vector_with(conv).rate(rho)
}

/// Same as [`coincidence_rate`] for a raw matrix, which must be Hermitian.
pub fn coincidence_rate_matrix<T: Real>(m: &Matrix3<T>, settings: &FilterSettings<T>) -> Result<T> {
    let rho = DensityMatrix3::new(*m)?;
    Ok(coincidence_rate(&rho, settings))
}

/// Plate angles making one arm pass `mode`.
///
/// The quarter-wave plate is aligned with an axis of the polarization
/// ellipse, which turns it linear; the half-wave plate then rotates that line
/// onto V. Returned angles are in `(−π/4, π/4]`.
pub fn arm_for_mode<T: Real>(mode: &JonesVector<T>, port: Port) -> ArmFilter<T> {
    let mut e = *mode;
    if port == Port::Reflected && Convention::FROZEN.mirror_reflected {
        e[1] = -e[1];
    }
    let two = T::lit(2.0);
    let s1 = e[0].norm_sqr() - e[1].norm_sqr();
    let s2 = two * (e[0].conj() * e[1]).re;
    let chi = wrap_quarter_turn(s2.atan2(s1) / two);

    let f = Waveplate::quarter_wave(chi).jones().apply(&e);
    let lead = if f[0].norm() >= f[1].norm() { f[0] } else { f[1] };
    let unphase = lead.conj() / lead.norm();
    let (fx, fy) = ((f[0] * unphase).re, (f[1] * unphase).re);
    let beta = fy.atan2(fx);
    let theta = wrap_quarter_turn((beta + T::FRAC_PI_2()) / two);
    ArmFilter { chi, theta }
}

/// Reduces an angle modulo π/2 into `(−π/4, π/4]`.
fn wrap_quarter_turn<T: Real>(a: T) -> T {
    let q = T::FRAC_PI_2();
    let mut r = a - (a / q).round() * q;
    let eps = T::lit(1e-13);
    if r <= -T::FRAC_PI_4() + eps {
        r = r + q;
    }
    if (r - T::FRAC_PI_4()).abs() < eps {
        r = T::FRAC_PI_4();
    }
    r
}

/// Settings that project onto `target`: the first Majorana photon goes to
/// the transmitted arm, the second to the reflected arm.
pub fn tune_filters<T: Real>(target: &QutritState<T>) -> FilterSettings<T> {
    let pair = state_to_pair(target);
    FilterSettings {
        transmitted: arm_for_mode(&pair.first.jones(), Port::Transmitted),
        reflected: arm_for_mode(&pair.second.jones(), Port::Reflected),
    }
}

/// Largest rate any state can produce under `settings`: `¼·‖d‖²`.
pub fn peak_rate<T: Real>(settings: &FilterSettings<T>) -> T {
    settings.detection_vector().norm_sqr() / T::lit(4.0)
}

pub fn detection_polarization<T: Real>(arm: &ArmFilter<T>, port: Port) -> PhotonPolarization<T> {
    PhotonPolarization::from_jones(&detection_mode(arm, port))
}
