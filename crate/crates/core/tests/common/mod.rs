#![allow(dead_code)]

pub mod fock;

use biqutrit::linalg::Matrix2;
use biqutrit::{DensityMatrix3, QutritState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    r.sample(StandardNormal)
}

pub fn random_state(r: &mut ChaCha8Rng) -> QutritState<f64> {
    let amps = std::array::from_fn(|_| Complex64::new(gaussian(r), gaussian(r)));
    QutritState::from_amplitudes(amps).normalize().unwrap()
}

/// Random density matrix of rank up to three.
pub fn random_density(r: &mut ChaCha8Rng) -> DensityMatrix3<f64> {
    let w: [f64; 3] = std::array::from_fn(|_| r.random::<f64>());
    let parts: Vec<_> = w.iter().map(|&x| (x, random_state(r))).collect();
    DensityMatrix3::mixture(&parts).unwrap()
}

/// Haar-like random 2×2 unitary from Euler angles and a global phase.
pub fn random_unitary(r: &mut ChaCha8Rng) -> Matrix2<f64> {
    let tau = std::f64::consts::TAU;
    let (a, b, g, d) = (
        r.random::<f64>() * tau,
        r.random::<f64>() * tau,
        r.random::<f64>() * tau,
        r.random::<f64>() * tau,
    );
    let th: f64 = r.random::<f64>().sqrt().asin();
    let e = |x: f64| Complex64::from_polar(1.0, x);
    Matrix2::from_rows([
        [e(a + b) * th.cos(), e(a + g) * th.sin()],
        [-e(a - g) * th.sin(), e(a - b) * th.cos()],
    ])
    .scale(e(d))
}

/// Reconstructed β″ matrix with one negative eigenvalue.
pub fn reference_beta2_matrix() -> DensityMatrix3<f64> {
    let c = Complex64::new;
    DensityMatrix3::from_upper([0.355, 0.340, 0.305], c(-0.054, -0.210), c(0.315, -0.010), c(-0.106, 0.262))
}
