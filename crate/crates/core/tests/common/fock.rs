//! Two-mode Fock-space reference for the fourth-order moments.
//!
//! Each mode is truncated at two photons, which is exact for normally
//! ordered products of at most two annihilators acting on two-photon states.

use biqutrit::DensityMatrix3;
use num_complex::Complex64;

const D: usize = 3;
const N: usize = D * D;
type Op = [[Complex64; N]; N];

fn idx(na: usize, nb: usize) -> usize {
    na * D + nb
}

fn zero() -> Op {
    [[Complex64::new(0.0, 0.0); N]; N]
}

fn annihilate(mode_a: bool) -> Op {
    let mut op = zero();
    for na in 0..D {
        for nb in 0..D {
            let (n, from) = if mode_a { (na, idx(na, nb)) } else { (nb, idx(na, nb)) };
            if n == 0 {
                continue;
            }
            let to = if mode_a { idx(na - 1, nb) } else { idx(na, nb - 1) };
            op[to][from] = Complex64::new((n as f64).sqrt(), 0.0);
        }
    }
    op
}

fn mul(x: &Op, y: &Op) -> Op {
    let mut out = zero();
    for i in 0..N {
        for k in 0..N {
            if x[i][k].norm() == 0.0 {
                continue;
            }
            for j in 0..N {
                out[i][j] += x[i][k] * y[k][j];
            }
        }
    }
    out
}

fn dagger(x: &Op) -> Op {
    let mut out = zero();
    for i in 0..N {
        for j in 0..N {
            out[i][j] = x[j][i].conj();
        }
    }
    out
}

fn embed(rho: &DensityMatrix3<f64>) -> Op {
    let map = [idx(2, 0), idx(1, 1), idx(0, 2)];
    let mut out = zero();
    for i in 0..3 {
        for j in 0..3 {
            out[map[i]][map[j]] = rho.entry(i, j);
        }
    }
    out
}

fn expect(rho: &Op, op: &Op) -> Complex64 {
    let p = mul(rho, op);
    (0..N).map(|i| p[i][i]).sum()
}

/// `(A, B, C, D, E, F)` as operator expectations.
pub fn moments(rho: &DensityMatrix3<f64>) -> [Complex64; 6] {
    let a = annihilate(true);
    let b = annihilate(false);
    let ad = dagger(&a);
    let bd = dagger(&b);
    let r = embed(rho);
    let a2 = mul(&a, &a);
    let b2 = mul(&b, &b);
    let ab = mul(&a, &b);
    let ad2 = mul(&ad, &ad);
    let bd2 = mul(&bd, &bd);
    let adbd = mul(&ad, &bd);
    [
        expect(&r, &mul(&ad2, &a2)),
        expect(&r, &mul(&bd2, &b2)),
        expect(&r, &mul(&adbd, &ab)),
        expect(&r, &mul(&ad2, &ab)),
        expect(&r, &mul(&ad2, &b2)),
        expect(&r, &mul(&adbd, &b2)),
    ]
}

/// Moments laid out as `(A, B, C, Re D, Im D, Re E, Im E, Re F, Im F)`.
pub fn moment_vector(rho: &DensityMatrix3<f64>) -> [f64; 9] {
    let m = moments(rho);
    [m[0].re, m[1].re, m[2].re, m[3].re, m[3].im, m[4].re, m[4].im, m[5].re, m[5].im]
}
