//! Symmetric square of a single-photon unitary.
//!
//! A 2×2 unitary `U` acting on both photons of a pair acts on the qutrit
//! amplitudes `(c1, c2, c3)` through
//!
//! ```text
//! ⎡ u₀₀²       √2·u₀₀u₀₁          u₀₁²     ⎤
//! ⎢ √2·u₀₀u₁₀  u₀₀u₁₁ + u₀₁u₁₀    √2·u₀₁u₁₁ ⎥
//! ⎣ u₁₀²       √2·u₁₀u₁₁          u₁₁²     ⎦
//! ```
//!
//! so that `lift(U)·pair(e, e′) = pair(Ue, Ue′)`.

use crate::error::{Error, Result};
use crate::linalg::{Matrix2, Matrix3};
use crate::scalar::{sqrt2, Real};

pub fn lift_to_qutrit<T: Real>(u: &Matrix2<T>) -> Result<Matrix3<T>> {
    let deviation = u.unitary_deviation();
    if !(deviation <= T::exact_tol()) {
        return Err(Error::NotUnitary {
            deviation: deviation.as_f64(),
        });
    }
    let r2 = sqrt2::<T>();
    let (a, b, c, d) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    Ok(Matrix3::from_rows([
        [a * a, a * b * r2, b * b],
        [a * c * r2, a * d + b * c, b * d * r2],
        [c * c, c * d * r2, d * d],
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::Waveplate;
    use crate::scalar::{c, re};
    use crate::state::QutritState;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn identity_lifts_to_identity() {
        let l = lift_to_qutrit(&Matrix2::<f64>::identity()).unwrap();
        assert!(l.max_abs_diff(&Matrix3::identity()) < 1e-15);
    }

    #[test]
    fn half_wave_45_swaps_outer_amplitudes() {
        let l = lift_to_qutrit(&Waveplate::half_wave(FRAC_PI_4).jones()).unwrap();
        let s = QutritState::new(c(0.3, 0.1), c(0.5, -0.2), c(-0.4, 0.6));
        let out = s.transform(&l);
        assert!((out.c1().norm() - s.c3().norm()).abs() < 1e-14);
        assert!((out.c3().norm() - s.c1().norm()).abs() < 1e-14);
        assert!((out.c2().norm() - s.c2().norm()).abs() < 1e-14);
        assert!(l.unitary_deviation() < 1e-14);
    }

    #[test]
    fn non_unitary_rejected() {
        let mut m = Matrix2::<f64>::identity();
        m[(0, 0)] = re(1.1);
        assert!(matches!(lift_to_qutrit(&m), Err(Error::NotUnitary { .. })));
    }
}
