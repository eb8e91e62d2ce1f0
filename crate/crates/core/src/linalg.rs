//! Fixed-size dense complex matrices and a small real linear solver.
//!
//! Everything here is sized at compile time: 2×2 Jones matrices, 3×3 qutrit
//! operators and the 9×9 protocol system. No heap allocation.

use std::ops::{Index, IndexMut, Mul};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Dense `N×N` complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMatrix<T, const N: usize>(pub [[C<T>; N]; N]);

pub type Matrix2<T> = CMatrix<T, 2>;
pub type Matrix3<T> = CMatrix<T, 3>;

impl<T: Real, const N: usize> CMatrix<T, N> {
    pub fn zeros() -> Self {
        CMatrix([[C::zero(); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = C::one();
        }
        m
    }

    pub fn from_rows(rows: [[C<T>; N]; N]) -> Self {
        CMatrix(rows)
    }

    pub fn diagonal(d: [C<T>; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = d[i];
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = *z * s);
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = m.0[i][j] + other.0[i][j];
            }
        }
        m
    }

    pub fn apply(&self, v: &[C<T>; N]) -> [C<T>; N] {
        let mut out = [C::zero(); N];
        for i in 0..N {
            out[i] = (0..N).fold(C::zero(), |acc, j| acc + self.0[i][j] * v[j]);
        }
        out
    }

    pub fn trace(&self) -> C<T> {
        (0..N).fold(C::zero(), |acc, i| acc + self.0[i][i])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    /// `max |M - M†|` entrywise.
    pub fn hermitian_deviation(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |M†M - I|` entrywise.
    pub fn unitary_deviation(&self) -> T {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    /// Frobenius norm squared.
    pub fn norm_sqr(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// `⟨v|M|v⟩` for Hermitian `M` (real part).
    pub fn expectation(&self, v: &[C<T>; N]) -> T {
        let mv = self.apply(v);
        (0..N).fold(C::zero(), |acc, i| acc + v[i].conj() * mv[i]).re
    }
}

impl<T: Real, const N: usize> Mul for CMatrix<T, N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = (0..N).fold(C::zero(), |acc, k| acc + self.0[i][k] * rhs.0[k][j]);
            }
        }
        m
    }
}

impl<T, const N: usize> Index<(usize, usize)> for CMatrix<T, N> {
    type Output = C<T>;

    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.0[i][j]
    }
}

impl<T, const N: usize> IndexMut<(usize, usize)> for CMatrix<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.0[i][j]
    }
}

pub fn inner<T: Real, const N: usize>(a: &[C<T>; N], b: &[C<T>; N]) -> C<T> {
    a.iter().zip(b).fold(C::zero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn norm_sqr<T: Real, const N: usize>(v: &[C<T>; N]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

/// Outer product `|a⟩⟨b|`.
pub fn outer<T: Real, const N: usize>(a: &[C<T>; N], b: &[C<T>; N]) -> CMatrix<T, N> {
    let mut m = CMatrix::zeros();
    for i in 0..N {
        for j in 0..N {
            m.0[i][j] = a[i] * b[j].conj();
        }
    }
    m
}

/// LU factorization of a real `N×N` matrix with partial pivoting.
#[derive(Debug, Clone)]
pub struct RealLu<T, const N: usize> {
    lu: [[T; N]; N],
    perm: [usize; N],
}

impl<T: Real, const N: usize> RealLu<T, N> {
    pub fn new(mut a: [[T; N]; N]) -> Result<Self> {
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        let scale = a.iter().flatten().fold(T::zero(), |m, x| m.max(x.abs()));
        let tiny = scale * T::epsilon() * T::lit(N as f64);
        for k in 0..N {
            let pivot = (k..N)
                .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
                .unwrap();
            if a[pivot][k].abs() <= tiny {
                return Err(Error::Singular);
            }
            a.swap(k, pivot);
            perm.swap(k, pivot);
            for i in (k + 1)..N {
                let f = a[i][k] / a[k][k];
                a[i][k] = f;
                for j in (k + 1)..N {
                    a[i][j] = a[i][j] - f * a[k][j];
                }
            }
        }
        Ok(RealLu { lu: a, perm })
    }

    pub fn solve(&self, b: &[T; N]) -> [T; N] {
        let mut x = [T::zero(); N];
        for i in 0..N {
            x[i] = b[self.perm[i]];
        }
        for i in 0..N {
            for j in 0..i {
                x[i] = x[i] - self.lu[i][j] * x[j];
            }
        }
        for i in (0..N).rev() {
            for j in (i + 1)..N {
                x[i] = x[i] - self.lu[i][j] * x[j];
            }
            x[i] = x[i] / self.lu[i][i];
        }
        x
    }

    pub fn inverse(&self) -> [[T; N]; N] {
        let mut inv = [[T::zero(); N]; N];
        for j in 0..N {
            let mut e = [T::zero(); N];
            e[j] = T::one();
            let col = self.solve(&e);
            for i in 0..N {
                inv[i][j] = col[i];
            }
        }
        inv
    }
}

/// Induced 1-norm (maximum absolute column sum).
pub fn one_norm<T: Real, const N: usize>(a: &[[T; N]; N]) -> T {
    (0..N)
        .map(|j| (0..N).fold(T::zero(), |s, i| s + a[i][j].abs()))
        .fold(T::zero(), T::max)
}

/// 1-norm condition number `‖A‖₁·‖A⁻¹‖₁`.
pub fn condition_number<T: Real, const N: usize>(a: &[[T; N]; N]) -> Result<T> {
    let lu = RealLu::new(*a)?;
    Ok(one_norm(a) * one_norm(&lu.inverse()))
}
