//! Poisson maximum-likelihood reconstruction.
//!
//! The density matrix is parametrized as `ρ = T†T / tr(T†T)` with `T` lower
//! triangular (real diagonal), so every iterate is positive semidefinite with
//! unit trace. The log-likelihood is maximized by BFGS over the nine real
//! parameters of `T`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::eigendecompose;
use crate::error::{Error, Result};
use crate::linalg::Matrix3;
use crate::state::DensityMatrix3;

use super::counts::{CountRecord, ROWS};
use super::protocol::{linear_inversion, protocol};

const FLOOR: f64 = 1e-300;
const PARAMS: usize = 9;
type Params = [f64; PARAMS];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MleOptions {
    pub max_iterations: usize,
    /// Log-likelihood gain below which an iteration counts as stalled.
    pub tolerance: f64,
    /// Consecutive stalled iterations that end the search.
    pub patience: usize,
    /// Weight of `I/3` mixed into the starting estimate.
    pub start_mixing: f64,
}

impl Default for MleOptions {
    fn default() -> Self {
        MleOptions {
            max_iterations: 10_000,
            tolerance: 1e-10,
            patience: 3,
            start_mixing: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MleFit {
    pub rho: DensityMatrix3<f64>,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Log-likelihood of the positivity-projected linear estimate.
    pub start_log_likelihood: f64,
}

/// `Σ k ln λ − λ` with `λ = exposure·rate + background`, dropping `ln k!`.
pub fn log_likelihood(rho: &DensityMatrix3<f64>, counts: &CountRecord) -> f64 {
    let obj = Objective::new(&counts.observed(), counts.exposure, counts.background);
    obj.centered(rho) + obj.saturated()
}

pub fn mle_reconstruct(counts: &CountRecord) -> Result<MleFit> {
    mle_reconstruct_with(counts, &MleOptions::default())
}

pub fn mle_reconstruct_with(counts: &CountRecord, opts: &MleOptions) -> Result<MleFit> {
    counts.validate()?;
    mle_fit(&counts.observed(), counts.exposure, counts.background, opts)
}

/// Fit to real-valued observations. Noiseless expected counts are accepted,
/// which makes exact-recovery checks possible.
pub fn mle_fit(observed: &[f64; ROWS], exposure: f64, background: f64, opts: &MleOptions) -> Result<MleFit> {
    if !(exposure > 0.0 && exposure.is_finite()) {
        return Err(Error::InvalidExposure(exposure));
    }
    if !(background >= 0.0 && background.is_finite()) {
        return Err(Error::InvalidBackground(background));
    }
    let obj = Objective::new(observed, exposure, background);

    let rates = observed.map(|k| (k - background) / exposure);
    let projected = linear_inversion(&rates).ok().and_then(|r| project_to_physical(&r).ok());
    let start = projected.as_ref().map_or(f64::NEG_INFINITY, |r| obj.centered(r));

    let mut starts = vec![DensityMatrix3::maximally_mixed()];
    if let Some(p) = &projected {
        starts.insert(0, mix(p, opts.start_mixing));
    }

    let mut best: Option<(f64, MleFit)> = None;
    for init in starts {
        let x0 = params_from_factor(&lower_factor(&init)?);
        let (x, iterations, converged) = bfgs(&obj, x0, opts);
        let rho = density_from_params(&x);
        let value = obj.centered(&rho);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            let fit = MleFit {
                rho,
                log_likelihood: 0.0,
                iterations,
                converged,
                start_log_likelihood: start + obj.saturated(),
            };
            best = Some((value, fit));
        }
    }
    let (mut value, mut fit) = best.expect("at least one start");
    if let Some(p) = projected {
        if value < start {
            fit.rho = p;
            value = start;
        }
    }
    fit.log_likelihood = value + obj.saturated();
    Ok(fit)
}

/// Clips negative eigenvalues to zero and renormalizes.
pub fn project_to_physical(rho: &DensityMatrix3<f64>) -> Result<DensityMatrix3<f64>> {
    let sys = eigendecompose(rho);
    let mut m = Matrix3::zeros();
    for (lambda, v) in sys.values.iter().zip(&sys.vectors) {
        if *lambda > 0.0 {
            m = m.add(&crate::linalg::outer(v, v).scale(Complex64::new(*lambda, 0.0)));
        }
    }
    DensityMatrix3::from_upper(
        [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re],
        m[(0, 1)],
        m[(0, 2)],
        m[(1, 2)],
    )
    .normalized()
    .map_err(|_| Error::NoPositiveValue)
}

fn mix(rho: &DensityMatrix3<f64>, eps: f64) -> DensityMatrix3<f64> {
    let m = rho
        .matrix()
        .scale(Complex64::new(1.0 - eps, 0.0))
        .add(&DensityMatrix3::maximally_mixed().matrix().scale(Complex64::new(eps, 0.0)));
    DensityMatrix3::from_upper([m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re], m[(0, 1)], m[(0, 2)], m[(1, 2)])
}

/// Lower-triangular `T` with `T†T = ρ`, from the Cholesky factor of the
/// index-reversed matrix. Requires `ρ` positive definite.
fn lower_factor(rho: &DensityMatrix3<f64>) -> Result<Matrix3<f64>> {
    let r = |i: usize, j: usize| rho.entry(2 - i, 2 - j);
    let mut l = Matrix3::<f64>::zeros();
    for j in 0..3 {
        let mut d = r(j, j).re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::Singular);
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in j + 1..3 {
            let mut s = r(i, j);
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    let mut t = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            t[(i, j)] = l[(2 - j, 2 - i)].conj();
        }
    }
    Ok(t)
}

fn params_from_factor(t: &Matrix3<f64>) -> Params {
    let p = [
        t[(0, 0)].re,
        t[(1, 0)].re,
        t[(1, 0)].im,
        t[(1, 1)].re,
        t[(2, 0)].re,
        t[(2, 0)].im,
        t[(2, 1)].re,
        t[(2, 1)].im,
        t[(2, 2)].re,
    ];
    let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    p.map(|x| x / n)
}

fn factor(x: &Params) -> Matrix3<f64> {
    let z = Complex64::new(0.0, 0.0);
    Matrix3::from_rows([
        [Complex64::new(x[0], 0.0), z, z],
        [Complex64::new(x[1], x[2]), Complex64::new(x[3], 0.0), z],
        [Complex64::new(x[4], x[5]), Complex64::new(x[6], x[7]), Complex64::new(x[8], 0.0)],
    ])
}

fn density_from_params(x: &Params) -> DensityMatrix3<f64> {
    let t = factor(x);
    let m = t.adjoint() * t;
    let s = m.trace().re;
    DensityMatrix3::from_upper(
        [m[(0, 0)].re / s, m[(1, 1)].re / s, m[(2, 2)].re / s],
        m[(0, 1)] / s,
        m[(0, 2)] / s,
        m[(1, 2)] / s,
    )
}

struct Objective {
    k: [f64; ROWS],
    exposure: f64,
    background: f64,
    d: [[Complex64; 3]; ROWS],
}

impl Objective {
    fn new(k: &[f64; ROWS], exposure: f64, background: f64) -> Self {
        Objective {
            k: *k,
            exposure,
            background,
            d: protocol::<f64>().map(|row| row.settings().detection_vector().0),
        }
    }

    /// Row term minus its saturated value `k ln k − k`. Stays near zero at
    /// the optimum, so large counts do not drown the gains in round-off.
    fn term(&self, nu: usize, rate: f64) -> f64 {
        let lambda = (self.exposure * rate + self.background).max(FLOOR);
        let k = self.k[nu];
        if k > 0.0 {
            let x = (lambda - k) / k;
            k * (x.ln_1p() - x)
        } else {
            -lambda
        }
    }

    fn saturated(&self) -> f64 {
        self.k.iter().filter(|&&k| k > 0.0).map(|k| k * k.ln() - k).sum()
    }

    fn centered(&self, rho: &DensityMatrix3<f64>) -> f64 {
        (0..ROWS)
            .map(|nu| self.term(nu, rho.matrix().expectation(&self.d[nu]) / 4.0))
            .sum()
    }

    /// Negative log-likelihood and its gradient in the parameters.
    fn cost(&self, x: &Params) -> (f64, Params) {
        let t = factor(x);
        let s = t.norm_sqr();
        let mut ll = 0.0;
        let mut g = Matrix3::<f64>::zeros();
        for nu in 0..ROWS {
            let y = t.apply(&self.d[nu]);
            let q: f64 = y.iter().map(|v| v.norm_sqr()).sum();
            let rate = q / (4.0 * s);
            ll += self.term(nu, rate);
            let lambda = (self.exposure * rate + self.background).max(FLOOR);
            let w = (self.k[nu] / lambda - 1.0) * self.exposure;
            for i in 0..3 {
                for j in 0..3 {
                    let dq = y[i] * self.d[nu][j].conj() * 2.0;
                    let ds = t[(i, j)] * 2.0;
                    g[(i, j)] += (dq / (4.0 * s) - ds * (q / (4.0 * s * s))) * w;
                }
            }
        }
        let grad = [
            g[(0, 0)].re,
            g[(1, 0)].re,
            g[(1, 0)].im,
            g[(1, 1)].re,
            g[(2, 0)].re,
            g[(2, 0)].im,
            g[(2, 1)].re,
            g[(2, 1)].im,
            g[(2, 2)].re,
        ];
        (-ll, grad.map(|v| -v))
    }
}

fn dot(a: &Params, b: &Params) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity() -> [Params; PARAMS] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

/// Returns the final parameters, iterations used, and whether the stall
/// criterion was met within the budget.
fn bfgs(obj: &Objective, mut x: Params, opts: &MleOptions) -> (Params, usize, bool) {
    let (mut f, mut g) = obj.cost(&x);
    let mut h = identity();
    let mut fresh = true;
    let mut stalled = 0;
    for iter in 1..=opts.max_iterations {
        let mut p: Params = std::array::from_fn(|i| -dot(&h[i], &g));
        let mut slope = dot(&g, &p);
        if !(slope < 0.0) {
            h = identity();
            fresh = true;
            p = g.map(|v| -v);
            slope = -dot(&g, &g);
        }
        if slope == 0.0 {
            return (x, iter, true);
        }

        let mut alpha = 1.0;
        let accepted = loop {
            let trial: Params = std::array::from_fn(|i| x[i] + alpha * p[i]);
            let (ft, gt) = obj.cost(&trial);
            if ft.is_finite() && ft <= f + 1e-4 * alpha * slope {
                break Some((trial, ft, gt));
            }
            alpha *= 0.5;
            if alpha < 1e-20 {
                break None;
            }
        };
        let Some((xn, fn_, gn)) = accepted else {
            if fresh {
                return (x, iter, true);
            }
            h = identity();
            fresh = true;
            continue;
        };

        let s: Params = std::array::from_fn(|i| xn[i] - x[i]);
        let yv: Params = std::array::from_fn(|i| gn[i] - g[i]);
        let sy = dot(&s, &yv);
        if sy > 1e-300 {
            if fresh {
                let scale = sy / dot(&yv, &yv);
                h = identity().map(|r| r.map(|v| v * scale));
            }
            let rho = 1.0 / sy;
            let hy: Params = std::array::from_fn(|i| dot(&h[i], &yv));
            let yhy = dot(&yv, &hy);
            for i in 0..PARAMS {
                for j in 0..PARAMS {
                    h[i][j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
            fresh = false;
        }

        let gain = f - fn_;
        x = xn;
        f = fn_;
        g = gn;

        let n = dot(&x, &x).sqrt();
        if !(0.5..=2.0).contains(&n) {
            x = x.map(|v| v / n);
            (f, g) = obj.cost(&x);
            h = identity();
            fresh = true;
        }

        if gain < opts.tolerance {
            stalled += 1;
            if stalled >= opts.patience {
                return (x, iter, true);
            }
        } else {
            stalled = 0;
        }
    }
    (x, opts.max_iterations, false)
}
