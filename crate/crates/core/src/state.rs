//! Pure qutrit states, 3×3 density matrices and the preparation parameters
//! that map onto them.
//!
//! The ordered basis is `|2,0⟩, |1,1⟩, |0,2⟩`: photon numbers in the
//! horizontal and vertical polarization modes. Conventions used throughout
//! the crate:
//!
//! * `⟨a|b⟩ = Σ conj(aᵢ)·bᵢ`
//! * `ρᵢⱼ = cᵢ·conj(cⱼ)` for a pure state

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{inner, norm_sqr, outer, Matrix3};
use crate::scalar::{c, cis, re, Real, C};

/// Three complex amplitudes over `|2,0⟩, |1,1⟩, |0,2⟩`.
///
/// A value may be unnormalized; [`QutritState::normalize`] produces the unit
/// vector. Constructors that build physical states always normalize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritState<T> {
    amps: [C<T>; 3],
}

impl<T: Real> QutritState<T> {
    /// Raw amplitudes, not normalized.
    pub fn new(c1: C<T>, c2: C<T>, c3: C<T>) -> Self {
        QutritState { amps: [c1, c2, c3] }
    }

    pub fn from_amplitudes(amps: [C<T>; 3]) -> Self {
        QutritState { amps }
    }

    /// Normalized state from magnitudes and phases (radians).
    pub fn from_polar(magnitudes: [T; 3], phases: [T; 3]) -> Result<Self> {
        let amps = std::array::from_fn(|i| cis(phases[i]) * magnitudes[i]);
        QutritState { amps }.normalize()
    }

    /// Basis state `|2,0⟩`, `|1,1⟩` or `|0,2⟩` for `index` 0, 1, 2.
    pub fn basis(index: usize) -> Self {
        let mut amps = [C::zero(); 3];
        amps[index] = re(T::one());
        QutritState { amps }
    }

    pub fn amplitudes(&self) -> [C<T>; 3] {
        self.amps
    }

    pub fn c1(&self) -> C<T> {
        self.amps[0]
    }

    pub fn c2(&self) -> C<T> {
        self.amps[1]
    }

    pub fn c3(&self) -> C<T> {
        self.amps[2]
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amps)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs() <= T::exact_tol()
    }

    /// Unit-norm state with the same direction. The global phase is kept.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::DegenerateState);
        }
        Ok(QutritState {
            amps: self.amps.map(|a| a / n),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C<T> {
        inner(&self.amps, &other.amps)
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    pub fn with_global_phase(&self, phase: T) -> Self {
        let p = cis(phase);
        QutritState {
            amps: self.amps.map(|a| a * p),
        }
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix3<T> {
        DensityMatrix3 {
            m: outer(&self.amps, &self.amps),
        }
    }

    /// Applies a 3×3 operator to the amplitudes.
    pub fn transform(&self, op: &Matrix3<T>) -> Self {
        QutritState {
            amps: op.apply(&self.amps),
        }
    }

    /// Multiplies by the phase that makes the first non-negligible amplitude
    /// real and positive. Used to compare states up to global phase.
    pub fn phase_canonical(&self) -> Self {
        let lead = self
            .amps
            .iter()
            .copied()
            .max_by(|a, b| a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap())
            .unwrap();
        if lead.norm() == T::zero() {
            return *self;
        }
        let p = lead.conj() / lead.norm();
        QutritState {
            amps: self.amps.map(|a| a * p),
        }
    }
}

/// Free functions mirroring the method forms.
pub fn normalize<T: Real>(state: &QutritState<T>) -> Result<QutritState<T>> {
    state.normalize()
}

pub fn inner_product<T: Real>(a: &QutritState<T>, b: &QutritState<T>) -> C<T> {
    a.inner(b)
}

pub fn density_from_pure<T: Real>(state: &QutritState<T>) -> DensityMatrix3<T> {
    state.density()
}

/// Hermitian 3×3 operator on the qutrit space.
///
/// Construction rejects non-Hermitian input. Trace one is not enforced: raw
/// reconstructions may be scaled, and [`DensityMatrix3::normalized`] divides
/// by the trace. Positivity is not enforced either, since linear inversion
/// of noisy data can yield small negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix3<T> {
    m: Matrix3<T>,
}

impl<T: Real> DensityMatrix3<T> {
    pub fn new(m: Matrix3<T>) -> Result<Self> {
        let deviation = m.hermitian_deviation();
        if !(deviation <= T::exact_tol()) {
            return Err(Error::NotHermitian {
                deviation: deviation.as_f64(),
            });
        }
        Ok(DensityMatrix3 { m })
    }

    /// Builds from the upper triangle; the lower triangle is its conjugate
    /// and the diagonal's imaginary parts are discarded.
    pub fn from_upper(diag: [T; 3], r12: C<T>, r13: C<T>, r23: C<T>) -> Self {
        let m = Matrix3::from_rows([
            [re(diag[0]), r12, r13],
            [r12.conj(), re(diag[1]), r23],
            [r13.conj(), r23.conj(), re(diag[2])],
        ]);
        DensityMatrix3 { m }
    }

    /// `I/3`.
    pub fn maximally_mixed() -> Self {
        let third = re(T::one() / T::lit(3.0));
        DensityMatrix3 {
            m: Matrix3::diagonal([third; 3]),
        }
    }

    /// Convex combination `Σ wᵢ|ψᵢ⟩⟨ψᵢ|`, normalized by `Σ wᵢ`.
    pub fn mixture(parts: &[(T, QutritState<T>)]) -> Result<Self> {
        let mut m = Matrix3::zeros();
        for (w, psi) in parts {
            m = m.add(&psi.density().m.scale(re(*w)));
        }
        DensityMatrix3 { m }.normalized()
    }

    pub fn matrix(&self) -> &Matrix3<T> {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> C<T> {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> T {
        self.m.trace().re
    }

    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if tr.abs() <= T::min_positive_value() || !tr.is_finite() {
            return Err(Error::ZeroTrace);
        }
        Ok(DensityMatrix3 {
            m: self.m.scale(re(T::one() / tr)),
        })
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &QutritState<T>) -> T {
        self.m.expectation(&psi.amplitudes())
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Matrix3<T>) -> Self {
        DensityMatrix3 {
            m: *u * self.m * u.adjoint(),
        }
    }

    /// Minimum eigenvalue at least `-1e-10` (the iterative tolerance).
    pub fn is_physical(&self) -> bool {
        let min = crate::analysis::eigenvalues(self)[2];
        min >= -T::iterative_tol()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.m.max_abs_diff(&other.m)
    }

    /// Lossless `f32`/`f64` conversion path.
    pub fn cast<U: Real>(&self) -> DensityMatrix3<U> {
        let mut m = Matrix3::<U>::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let z = self.m[(i, j)];
                m[(i, j)] = c(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()));
            }
        }
        DensityMatrix3 { m }
    }
}

/// Weights and relative phases set on the preparation interferometer.
///
/// Produces `(r1, r2·e^{iφ12}, r3·e^{iφ13})` normalized; the phases are
/// `φ12 = φ2 − φ1` and `φ13 = φ3 − φ1`, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreparationConfig<T> {
    pub weights: [T; 3],
    pub phi12: T,
    pub phi13: T,
}

impl<T: Real> PreparationConfig<T> {
    pub fn new(weights: [T; 3], phi12: T, phi13: T) -> Self {
        PreparationConfig {
            weights,
            phi12,
            phi13,
        }
    }

    /// Equal weights, the setting used for every non-trivial state of the
    /// twelve-state sequence.
    pub fn balanced(phi12: T, phi13: T) -> Self {
        Self::new([T::one(); 3], phi12, phi13)
    }

    pub fn state(&self) -> Result<QutritState<T>> {
        from_preparation(self)
    }
}

pub fn from_preparation<T: Real>(config: &PreparationConfig<T>) -> Result<QutritState<T>> {
    let [r1, r2, r3] = config.weights;
    let valid = config.weights.iter().all(|w| w.is_finite() && *w >= T::zero());
    if !valid || (r1 + r2 + r3) <= T::zero() {
        return Err(Error::InvalidWeights);
    }
    QutritState::new(re(r1), cis(config.phi12) * r2, cis(config.phi13) * r3).normalize()
}

// JSON forms: {"re":[..], "im":[..]}, row-major for matrices.

#[derive(Serialize, Deserialize)]
struct ReIm<V> {
    re: V,
    im: V,
}

impl<T: Real + Serialize> Serialize for QutritState<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReIm {
            re: self.amps.map(|a| a.re),
            im: self.amps.map(|a| a.im),
        }
        .serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for QutritState<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ReIm { re, im } = ReIm::<[T; 3]>::deserialize(d)?;
        Ok(QutritState {
            amps: std::array::from_fn(|i| c(re[i], im[i])),
        })
    }
}

impl<T: Real + Serialize> Serialize for DensityMatrix3<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let flat: [C<T>; 9] = std::array::from_fn(|k| self.m[(k / 3, k % 3)]);
        ReIm {
            re: flat.map(|z| z.re),
            im: flat.map(|z| z.im),
        }
        .serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for DensityMatrix3<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ReIm { re, im } = ReIm::<[T; 9]>::deserialize(d)?;
        let mut m = Matrix3::zeros();
        for k in 0..9 {
            m[(k / 3, k % 3)] = c(re[k], im[k]);
        }
        DensityMatrix3::new(m).map_err(serde::de::Error::custom)
    }
}
