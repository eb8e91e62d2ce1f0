//! Cyclic Jacobi eigensolver for 3×3 Hermitian matrices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix3;
use crate::scalar::{c, re, Real, C};
use crate::state::{DensityMatrix3, QutritState};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in descending order with matching unit eigenvectors.
///
/// Each eigenvector has its largest-magnitude component real and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenSystem3<T> {
    pub values: [T; 3],
    pub vectors: [[C<T>; 3]; 3],
}

impl<T: Real> EigenSystem3<T> {
    pub fn state(&self, k: usize) -> QutritState<T> {
        QutritState::from_amplitudes(self.vectors[k])
    }

    pub fn sum(&self) -> T {
        self.values[0] + self.values[1] + self.values[2]
    }

    /// `‖Mv − λv‖` for pair `k`.
    pub fn residual(&self, m: &Matrix3<T>, k: usize) -> T {
        let v = self.vectors[k];
        let mv = m.apply(&v);
        (0..3)
            .map(|i| (mv[i] - v[i] * self.values[k]).norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }
}

pub fn eigendecompose<T: Real>(rho: &DensityMatrix3<T>) -> EigenSystem3<T> {
    jacobi(rho.matrix())
}

/// As [`eigendecompose`], for a raw matrix that must be Hermitian.
pub fn eigendecompose_matrix<T: Real>(m: &Matrix3<T>) -> Result<EigenSystem3<T>> {
    let deviation = m.hermitian_deviation();
    if !(deviation <= T::exact_tol()) {
        return Err(Error::NotHermitian {
            deviation: deviation.as_f64(),
        });
    }
    Ok(jacobi(m))
}

pub fn eigenvalues<T: Real>(rho: &DensityMatrix3<T>) -> [T; 3] {
    eigendecompose(rho).values
}

fn off_diagonal<T: Real>(a: &Matrix3<T>) -> T {
    let mut s = T::zero();
    for p in 0..3 {
        for q in 0..3 {
            if p != q {
                s = s + a[(p, q)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi<T: Real>(m: &Matrix3<T>) -> EigenSystem3<T> {
    let mut a = *m;
    let mut v = Matrix3::<T>::identity();
    let scale = m.norm_sqr().sqrt();
    let tol = T::epsilon() * T::lit(50.0) * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= tol {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            let r = apq.norm();
            if r <= T::min_positive_value() {
                continue;
            }
            // unit phase making a_pq real, then a real rotation zeroing it
            let phase = apq.conj() / r;
            let theta = (a[(q, q)].re - a[(p, p)].re) / (T::lit(2.0) * r);
            let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
            let cs = T::one() / (t * t + T::one()).sqrt();
            let sn = t * cs;
            let mut g = Matrix3::<T>::identity();
            g[(p, p)] = re(cs);
            g[(p, q)] = re(sn);
            g[(q, p)] = phase * (-sn);
            g[(q, q)] = phase * cs;
            a = g.adjoint() * a * g;
            v = v * g;
        }
    }

    let mut pairs: [(T, [C<T>; 3]); 3] = std::array::from_fn(|k| {
        let col = [v[(0, k)], v[(1, k)], v[(2, k)]];
        (a[(k, k)].re, fix_phase(col))
    });
    let tie = T::exact_tol() * scale.max(T::one());
    pairs.sort_by(|x, y| {
        if (x.0 - y.0).abs() <= tie {
            lead(&x.1).cmp(&lead(&y.1))
        } else {
            y.0.partial_cmp(&x.0).expect("finite eigenvalues")
        }
    });
    EigenSystem3 {
        values: pairs.map(|p| p.0),
        vectors: pairs.map(|p| p.1),
    }
}

fn lead<T: Real>(v: &[C<T>; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if v[i].norm() > v[best].norm() + T::exact_tol() {
            best = i;
        }
    }
    best
}

fn fix_phase<T: Real>(v: [C<T>; 3]) -> [C<T>; 3] {
    let n = v.iter().fold(T::zero(), |s, x| s + x.norm_sqr()).sqrt();
    let k = lead(&v);
    let ph = v[k].conj() / v[k].norm();
    let out = v.map(|x| x * ph / n);
    let mut out = out;
    out[k] = c(out[k].norm(), T::zero());
    out
}
