mod common;

use biqutrit::analysis::{eigendecompose, fidelity, principal_component, purity};
use biqutrit::bench::{
    coincidence_rate, coincidence_rate_with, lift_to_qutrit, phase_scan_through, visibility, Convention,
    FilterSettings, PhaseSweep, SweptPhase, Waveplate,
};
use biqutrit::mub::StateLabel;
use biqutrit::tomography::{expected_rates, protocol};
use biqutrit::{PreparationConfig, QutritState};
use common::fock::moment_vector;
use common::{reference_beta2_matrix, random_density, random_state, rng};
use num_complex::Complex64;

fn label(s: &str) -> QutritState<f64> {
    s.parse::<StateLabel>().unwrap().state()
}

fn table_deviation(conv: &Convention, states: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let rows = protocol::<f64>();
    let mut worst = 0.0f64;
    for _ in 0..states {
        let rho = random_state(&mut r).density();
        let m = moment_vector(&rho);
        for row in &rows {
            let table: f64 = row.combination.iter().zip(&m).map(|(k, x)| k * x).sum();
            let optics = coincidence_rate_with(&rho, &row.settings(), conv);
            worst = worst.max((table - optics).abs());
        }
    }
    worst
}

#[test]
fn optical_model_reproduces_table_rows() {
    assert!(table_deviation(&Convention::FROZEN, 1000, 1) < 1e-12);
}

#[test]
fn only_the_frozen_convention_reproduces_the_table() {
    let matching: Vec<_> = Convention::all()
        .into_iter()
        .filter(|c| table_deviation(c, 50, 2) < 1e-12)
        .collect();
    assert_eq!(matching, vec![Convention::FROZEN]);
}

#[test]
fn mixed_states_follow_the_table_too() {
    let mut r = rng(3);
    for _ in 0..200 {
        let rho = random_density(&mut r);
        let m = moment_vector(&rho);
        for (row, rate) in protocol::<f64>().iter().zip(expected_rates(&rho)) {
            let table: f64 = row.combination.iter().zip(&m).map(|(k, x)| k * x).sum();
            assert!((table - rate).abs() < 1e-12);
        }
    }
}

#[test]
fn quoted_analyzer_angles_null_the_partners() {
    // plate angles quoted for the α‴ orthogonality scan
    let settings = FilterSettings::from_degrees([28.3, -33.5, -24.0, -2.0]);
    let on = coincidence_rate(&label("alpha3").density(), &settings);
    let off_b = coincidence_rate(&label("beta3").density(), &settings);
    let off_g = coincidence_rate(&label("gamma3").density(), &settings);
    assert!(on > 0.25, "{on}");
    assert!(off_b < 1e-3 && off_g < 1e-3, "{off_b} {off_g}");
}

#[test]
fn reference_matrix_spectrum() {
    let rho = reference_beta2_matrix();
    let sys = eigendecompose(&rho);
    let expect = [0.877, 0.136, -0.013];
    for k in 0..3 {
        assert!((sys.values[k] - expect[k]).abs() < 2e-3, "{:?}", sys.values);
    }
    assert!((sys.sum() - 1.0).abs() < 1e-6);
    assert!((purity(&rho) - 0.788).abs() < 5e-3);
    let sq: f64 = sys.values.iter().map(|x| x * x).sum();
    assert!((purity(&rho) - sq).abs() < 1e-10);
}

#[test]
fn reference_matrix_principal_component() {
    let rho = reference_beta2_matrix();
    let (x, w) = principal_component(&rho).unwrap();
    assert!((w - 0.877).abs() < 2e-3);
    // reference vector, real first component; its last imaginary part reads
    // -0.071, but the matrix eigenvector and the quoted fidelity both give -0.007
    let listed = [
        Complex64::new(0.587, 0.0),
        Complex64::new(-0.173, 0.521),
        Complex64::new(0.594, -0.0071),
    ];
    let a = x.amplitudes();
    let ph = a[0].conj() / a[0].norm();
    for k in 0..3 {
        assert!((a[k] * ph - listed[k]).norm() < 0.01, "{k}: {}", a[k] * ph);
    }
    let as_listed = QutritState::new(listed[0], listed[1], Complex64::new(0.594, -0.071));
    let f_listed = fidelity(&label("beta2"), &as_listed.normalize().unwrap().density());
    assert!((f_listed - 0.9903).abs() > 1e-3, "{f_listed}");
    let f = fidelity(&label("beta2"), &x.density());
    assert!((f - 0.99).abs() < 0.01, "{f}");
    assert!((f - 0.9903).abs() < 1e-3, "{f}");
}

/// Two-photon amplitudes of `U⊗U` acting on the symmetric subspace,
/// computed in the four-dimensional tensor basis `HH, HV, VH, VV`.
fn tensor_transform(u: &biqutrit::linalg::Matrix2<f64>, c: [Complex64; 3]) -> [Complex64; 3] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let v = [c[0], c[1] * r, c[1] * r, c[2]];
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, x) in v.iter().enumerate() {
            *o += u[(i / 2, j / 2)] * u[(i % 2, j % 2)] * x;
        }
    }
    [out[0], (out[1] + out[2]) * r, out[3]]
}

#[test]
fn lift_matches_tensor_product() {
    let mut r = rng(4);
    for _ in 0..200 {
        let u = common::random_unitary(&mut r);
        let l = lift_to_qutrit(&u).unwrap();
        let psi = random_state(&mut r);
        let got = l.apply(&psi.amplitudes());
        let want = tensor_transform(&u, psi.amplitudes());
        for k in 0..3 {
            assert!((got[k] - want[k]).norm() < 1e-12);
        }
    }
}

#[test]
fn quarter_wave_transformer_matches_reference_output() {
    let u = Waveplate::quarter_wave(20f64.to_radians()).jones();
    let l = lift_to_qutrit(&u).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // reference rows: (coefficient of e^{iφ12}, constant), first row first
    let listed = [
        (Complex64::new(-0.25, 0.32), Complex64::new(-0.15, 0.0)),
        (Complex64::new(0.0, 0.41), Complex64::new(0.25, 0.32)),
        (Complex64::new(0.25, 0.32), Complex64::new(0.15, -0.54)),
    ];
    // listed order runs |0,2⟩, |1,1⟩, |2,0⟩
    for (k, (phase_coef, constant)) in listed.iter().enumerate() {
        let row = 2 - k;
        assert!(((l[(row, 1)] * r).norm() - phase_coef.norm()).abs() < 0.01);
        assert!(((l[(row, 0)] * r).norm() - constant.norm()).abs() < 0.01);
    }

    // listed first component by itself
    let grid: Vec<f64> = (0..720).map(|k| k as f64 * std::f64::consts::TAU / 720.0).collect();
    let series: Vec<f64> = grid
        .iter()
        .map(|p| (listed[0].0 * Complex64::from_polar(1.0, *p) + listed[0].1).norm_sqr())
        .collect();
    assert!((visibility(&series).unwrap() - 0.64).abs() < 0.015);

    let sweep = PhaseSweep::new(PreparationConfig::new([1.0, 1.0, 0.0], 0.0, 0.0), SweptPhase::Phi12);
    let vv = FilterSettings::from_degrees([0.0; 4]);
    let pts = phase_scan_through(&sweep, &l, &vv, &grid).unwrap();
    let rates: Vec<f64> = pts.iter().map(|p| p.rate).collect();
    assert!((visibility(&rates).unwrap() - 0.64).abs() < 0.01);
}
