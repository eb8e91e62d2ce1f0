//! Waveplate Jones matrices.

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix2;
use crate::scalar::{cis, re, Real};

/// Handedness sign `s` in the retarder phase `diag(1, e^{i·s·δ})`.
///
/// Together with the arm geometry in [`super::Convention`] this fixes the
/// signs of the imaginary moment terms the nine-row protocol measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Handedness {
    /// Slow axis acquires `e^{+iδ}`.
    Positive,
    /// Slow axis acquires `e^{-iδ}`.
    Negative,
}

impl Handedness {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Handedness::Positive => T::one(),
            Handedness::Negative => -T::one(),
        }
    }
}

/// Linear retarder with optic axis at `angle` from horizontal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waveplate<T> {
    pub retardance: T,
    pub angle: T,
}

impl<T: Real> Waveplate<T> {
    pub fn new(retardance: T, angle: T) -> Self {
        Waveplate { retardance, angle }
    }

    pub fn half_wave(angle: T) -> Self {
        Waveplate::new(T::PI(), angle)
    }

    pub fn quarter_wave(angle: T) -> Self {
        Waveplate::new(T::FRAC_PI_2(), angle)
    }

    /// Jones matrix under the frozen handedness.
    pub fn jones(&self) -> Matrix2<T> {
        self.jones_with(super::Convention::FROZEN.handedness)
    }

    /// `R(angle)·diag(1, e^{i·s·δ})·R(−angle)`.
    pub fn jones_with(&self, handedness: Handedness) -> Matrix2<T> {
        let phase = cis(handedness.sign::<T>() * self.retardance);
        rotation(self.angle) * Matrix2::diagonal([re(T::one()), phase]) * rotation(-self.angle)
    }
}

pub fn jones_matrix<T: Real>(plate: &Waveplate<T>) -> Matrix2<T> {
    plate.jones()
}

/// Active rotation `[[cos, −sin], [sin, cos]]`.
pub fn rotation<T: Real>(angle: T) -> Matrix2<T> {
    let (s, c) = angle.sin_cos();
    Matrix2::from_rows([[re(c), re(-s)], [re(s), re(c)]])
}
