//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the algebra is generic over: `f32` or `f64`.
///
/// Each type carries its own tolerances. `f64` uses 1e-12 for exact algebra
/// and 1e-10 for iterative results; `f32` is scaled to its own epsilon.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for results of closed-form algebra.
    const EXACT_TOL: f64;
    /// Tolerance for results of iterative procedures.
    const ITERATIVE_TOL: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn exact_tol() -> Self {
        Self::lit(Self::EXACT_TOL)
    }

    #[inline]
    fn iterative_tol() -> Self {
        Self::lit(Self::ITERATIVE_TOL)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f64 {
    const EXACT_TOL: f64 = 1e-12;
    const ITERATIVE_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const EXACT_TOL: f64 = 1e-5;
    const ITERATIVE_TOL: f64 = 1e-4;
}

pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{i·phase}`.
#[inline]
pub fn cis<T: Real>(phase: T) -> C<T> {
    Complex::new(phase.cos(), phase.sin())
}

#[inline]
pub(crate) fn sqrt2<T: Real>() -> T {
    T::SQRT_2()
}
