use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use biqutrit::analysis::{eigendecompose, fidelity, fidelity_quantiles, fidelity_trials, purity, summarize};
use biqutrit::bench::{
    arm_for_mode, lift_to_qutrit, noisy_counts, phase_scan_through, visibility, FilterSettings, PhaseSweep, Port,
    SweptPhase, Waveplate,
};
use biqutrit::linalg::Matrix3;
use biqutrit::majorana::PhotonPolarization;
use biqutrit::mub::{twelve_states, unbiasedness_report, Basis3};
use biqutrit::tomography::{
    exposure_for_events, expected_rates_with, linear_inversion, log_likelihood, mle_reconstruct_with, protocol, MleOptions,
    simulate_counts_with, CountRecord, SimulationOptions,
};
use biqutrit::{DensityMatrix3, PreparationConfig, QutritState};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::run::RunDir;
use crate::scenario::{Scenario, StateSpec};
use crate::{Common, Failure, Method, ScanKind};

type Outcome = Result<PathBuf, Failure>;

/// Shortest round-trip text; scientific notation for very small or large
/// magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn load(common: &Common) -> anyhow::Result<Scenario> {
    match &common.config {
        Some(p) => Scenario::load(p),
        None => Ok(Scenario {
            state: None,
            events: None,
            exposure: None,
            trials: None,
            seed: None,
            background: None,
            convention: None,
        }),
    }
}

fn open(common: &Common, command: &str, scenario: serde_json::Value) -> anyhow::Result<RunDir> {
    RunDir::open(common.out.as_deref(), &common.out_root, command, scenario, common.force)
}

pub fn mub(common: &Common, basis: Option<usize>, corrupt: bool) -> Outcome {
    let mut table = twelve_states::<f64>();
    if corrupt {
        let s = &mut table.states[4].state;
        let [a, b, c] = s.amplitudes();
        *s = QutritState::new(a, b * Complex64::from_polar(1.0, 0.3), c);
    }
    let all = table.bases();
    let chosen: Vec<Basis3<f64>> = match basis {
        Some(b) if b < 4 => vec![all[b]],
        Some(b) => return Err(anyhow!("basis must be 0..=3, got {b}").into()),
        None => all.to_vec(),
    };
    let states: Vec<_> = table
        .states
        .iter()
        .filter(|s| basis.is_none_or(|b| s.label.primes as usize == b))
        .collect();
    let report = unbiasedness_report(&chosen);

    let mut run = open(common, "mub", json!({ "basis": basis, "corrupt": corrupt }))?;
    run.claim(&["states.json", "unbiasedness.json"])?;
    run.write_json("states.json", &states)?;
    run.write_json("unbiasedness.json", &report)?;
    let dir = run.finish()?;
    if !report.passes() {
        return Err(Failure::Check(format!(
            "bases {:?} malformed; max within {:e}, max cross deviation {:e}",
            report.malformed_bases, report.max_within_deviation, report.max_cross_deviation
        )));
    }
    Ok(dir)
}

pub fn simulate(
    common: &Common,
    state: Option<String>,
    events: Option<f64>,
    seed: Option<u64>,
    background: Option<f64>,
) -> Outcome {
    let mut sc = load(common)?;
    if let Some(s) = state {
        sc.state = Some(StateSpec::Label(s));
    }
    sc.events = events.or(sc.events);
    sc.seed = seed.or(sc.seed);
    sc.background = background.or(sc.background);

    let spec = sc.state("beta2");
    let rho = spec.resolve()?.density();
    let exposure = match sc.exposure {
        Some(n) if n > 0.0 && n.is_finite() => n,
        Some(n) => return Err(anyhow!("exposure must be positive, got {n}").into()),
        None => exposure_for_events(&rho, sc.events(500.0)?)?,
    };
    let opts = SimulationOptions {
        background: sc.background()?,
        convention: sc.convention.unwrap_or_default(),
    };
    let counts = simulate_counts_with(&rho, exposure, sc.seed(), &opts)?;

    let rates = expected_rates_with(&rho, &opts.convention);
    let mut csv = String::from("nu,chi_s_deg,theta_s_deg,chi_i_deg,theta_i_deg,rate,expected_counts\n");
    for (row, rate) in protocol::<f64>().iter().zip(rates) {
        let [a, b, c, d] = row.angles_deg;
        let mean = exposure * rate.max(0.0) + opts.background;
        writeln!(csv, "{},{a},{b},{c},{d},{},{}", row.index, num(rate), num(mean)).unwrap();
    }

    let mut run = open(common, "simulate", serde_json::to_value(&sc).map_err(anyhow::Error::from)?)?;
    run.claim(&["counts.json", "expected_rates.csv"])?;
    run.write_json("counts.json", &counts)?;
    run.write("expected_rates.csv", csv.as_bytes())?;
    Ok(run.finish()?)
}

#[derive(Serialize)]
struct Reconstruction {
    method: Method,
    density_matrix: DensityMatrix3<f64>,
    eigenvalues: [f64; 3],
    eigenvectors: [QutritState<f64>; 3],
    purity: f64,
    physical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
    log_likelihood: f64,
    iterations: usize,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fidelity: Option<f64>,
}

pub fn reconstruct(
    common: &Common,
    path: &Path,
    method: Method,
    target: Option<String>,
    max_iterations: usize,
) -> Outcome {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let counts: CountRecord =
        serde_json::from_str(&text).with_context(|| format!("parsing counts {}", path.display()))?;
    if !(counts.exposure > 0.0) {
        return Err(anyhow!("exposure must be positive, got {}", counts.exposure).into());
    }
    let target_state = target.as_ref().map(|t| StateSpec::Label(t.clone()).resolve()).transpose()?;

    let (rho, ll, iterations, converged) = match method {
        Method::Linear => {
            let rho = linear_inversion(&counts.observed_rates()?)?;
            (rho, log_likelihood(&rho, &counts), 0, true)
        }
        Method::Mle => {
            let opts = MleOptions {
                max_iterations,
                ..MleOptions::default()
            };
            let fit = mle_reconstruct_with(&counts, &opts)?;
            (fit.rho, fit.log_likelihood, fit.iterations, fit.converged)
        }
    };
    let sys = eigendecompose(&rho);
    let physical = rho.is_physical();
    let out = Reconstruction {
        method,
        density_matrix: rho,
        eigenvalues: sys.values,
        eigenvectors: [0, 1, 2].map(|k| sys.state(k)),
        purity: purity(&rho),
        physical,
        warning: (!physical).then(|| format!("negative eigenvalue {:.6}", sys.values[2])),
        log_likelihood: ll,
        iterations,
        converged,
        target: target.as_ref().map(|t| StateSpec::Label(t.clone()).name()),
        fidelity: target_state.map(|t| fidelity(&t, &rho)),
    };

    let scenario = json!({
        "counts_sha256": crate::run::sha256_hex(text.as_bytes()),
        "method": method,
        "target": target,
        "max_iterations": max_iterations,
    });
    let mut run = open(common, "reconstruct", scenario)?;
    run.claim(&["reconstruction.json"])?;
    run.write_json("reconstruction.json", &out)?;
    let dir = run.finish()?;
    if !converged {
        return Err(Failure::NoConvergence(format!(
            "stopped after {iterations} iterations; best iterate written to {}",
            dir.display()
        )));
    }
    Ok(dir)
}

pub struct ScanArgs {
    pub kind: ScanKind,
    pub state: Option<String>,
    pub points: usize,
    pub events: Option<f64>,
    pub seed: Option<u64>,
    pub background: Option<f64>,
    pub phi13_deg: f64,
    pub plate_deg: f64,
    pub deg_per_volt: f64,
}

#[derive(Serialize)]
struct ScanSummary {
    kind: ScanKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<String>,
    swept: SweptPhase,
    points: usize,
    settings_deg: [f64; 4],
    visibility: f64,
    min_phase_rad: f64,
    min_rate: f64,
    max_phase_rad: f64,
    max_rate: f64,
    deg_per_volt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    events: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    noisy_visibility: Option<f64>,
}

fn settings_deg(s: &FilterSettings<f64>) -> [f64; 4] {
    let [a, b] = s.transmitted.to_degrees();
    let [c, d] = s.reflected.to_degrees();
    [a, b, c, d]
}

pub fn scan(common: &Common, args: ScanArgs) -> Outcome {
    let mut sc = load(common)?;
    if let Some(s) = &args.state {
        sc.state = Some(StateSpec::Label(s.clone()));
    }
    sc.events = args.events.or(sc.events);
    sc.seed = args.seed.or(sc.seed);
    sc.background = args.background.or(sc.background);
    if args.points == 0 {
        return Err(anyhow!("phase grid is empty; --points must be at least 1").into());
    }
    if !(args.deg_per_volt.is_finite() && args.deg_per_volt != 0.0) {
        return Err(anyhow!("--deg-per-volt must be finite and nonzero").into());
    }

    let (sweep, transformer, settings, state_name) = match args.kind {
        ScanKind::StInterference => {
            let d45 = PhotonPolarization::linear(std::f64::consts::FRAC_PI_4).jones();
            let settings =
                FilterSettings::new(arm_for_mode(&d45, Port::Transmitted), arm_for_mode(&d45, Port::Reflected));
            let base = PreparationConfig::new([1.0, 0.0, 1.0], 0.0, 0.0);
            (PhaseSweep::new(base, SweptPhase::Phi13), Matrix3::identity(), settings, None)
        }
        ScanKind::Waveplate => {
            let plate = Waveplate::quarter_wave(args.plate_deg.to_radians()).jones();
            let base = PreparationConfig::new([1.0, 1.0, 0.0], 0.0, 0.0);
            let vv = FilterSettings::from_degrees([0.0; 4]);
            (PhaseSweep::new(base, SweptPhase::Phi12), lift_to_qutrit(&plate)?, vv, None)
        }
        ScanKind::Orthogonality => {
            let spec = sc.state("alpha3");
            let (weights, _) = spec.preparation()?;
            let base = PreparationConfig::new(weights, 0.0, args.phi13_deg.to_radians());
            let settings = biqutrit::bench::tune_filters(&spec.resolve()?);
            (PhaseSweep::new(base, SweptPhase::Phi12), Matrix3::identity(), settings, Some(spec.name()))
        }
    };

    let grid: Vec<f64> = if args.points == 1 {
        vec![0.0]
    } else {
        let step = std::f64::consts::TAU / (args.points - 1) as f64;
        (0..args.points).map(|k| -std::f64::consts::PI + step * k as f64).collect()
    };
    let pts = phase_scan_through(&sweep, &transformer, &settings, &grid)?;
    let rates: Vec<f64> = pts.iter().map(|p| p.rate).collect();
    let vis = visibility(&rates)?;
    let argmin = (0..pts.len()).min_by(|&a, &b| rates[a].total_cmp(&rates[b])).unwrap();
    let argmax = (0..pts.len()).max_by(|&a, &b| rates[a].total_cmp(&rates[b])).unwrap();

    let mut csv = String::from("phase_rad,rate\n");
    for p in &pts {
        writeln!(csv, "{},{}", num(p.phase), num(p.rate)).unwrap();
    }

    let mut noisy = None;
    if let Some(events) = sc.events {
        if !(events > 0.0 && events.is_finite()) {
            return Err(anyhow!("events must be positive, got {events}").into());
        }
        let exposure = events / rates[argmax];
        let counts = noisy_counts(&pts, exposure, sc.background()?, sc.seed());
        let series: Vec<f64> = counts.iter().map(|&k| k as f64).collect();
        let mut ccsv = String::from("phase_rad,volts,counts\n");
        for (p, k) in pts.iter().zip(&counts) {
            writeln!(ccsv, "{},{},{k}", num(p.phase), num(p.phase.to_degrees() / args.deg_per_volt)).unwrap();
        }
        noisy = Some((ccsv, visibility(&series)?));
    }

    let summary = ScanSummary {
        kind: args.kind,
        state: state_name,
        swept: sweep.swept,
        points: pts.len(),
        settings_deg: settings_deg(&settings),
        visibility: vis,
        min_phase_rad: pts[argmin].phase,
        min_rate: rates[argmin],
        max_phase_rad: pts[argmax].phase,
        max_rate: rates[argmax],
        deg_per_volt: args.deg_per_volt,
        events: sc.events,
        noisy_visibility: noisy.as_ref().map(|n| n.1),
    };

    let scenario = json!({
        "kind": args.kind,
        "scenario": sc,
        "points": args.points,
        "phi13_deg": args.phi13_deg,
        "plate_deg": args.plate_deg,
        "deg_per_volt": args.deg_per_volt,
    });
    let mut run = open(common, "scan", scenario)?;
    run.claim(&["scan.csv", "scan.json", "scan_counts.csv"])?;
    run.write("scan.csv", csv.as_bytes())?;
    if let Some((ccsv, _)) = &noisy {
        run.write("scan_counts.csv", ccsv.as_bytes())?;
    }
    run.write_json("scan.json", &summary)?;
    Ok(run.finish()?)
}

#[derive(Serialize)]
struct QuantileReport {
    target: String,
    events: f64,
    trials: usize,
    q05: f64,
    q95: f64,
    median: f64,
}

pub fn quantiles(
    common: &Common,
    state: Option<String>,
    events: Option<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
) -> Outcome {
    let mut sc = load(common)?;
    if let Some(s) = state {
        sc.state = Some(StateSpec::Label(s));
    }
    sc.events = events.or(sc.events);
    sc.trials = trials.or(sc.trials);
    sc.seed = seed.or(sc.seed);
    if sc.exposure.is_some() {
        return Err(anyhow!("quantile runs take `events`, not `exposure`").into());
    }
    let spec = sc.state("beta2");
    let target = spec.resolve()?;
    let events = sc.events(500.0)?;
    let trials = sc.trials.unwrap_or(1000);
    let seed = sc.seed();

    // validates the trial count before the heavy work
    if trials < biqutrit::analysis::MIN_TRIALS {
        fidelity_quantiles(&target, events, trials, seed)?;
    }
    let fids = fidelity_trials(&target, events, trials, seed)?;
    let q = summarize(&fids, events)?;

    let mut csv = String::from("trial,seed,fidelity\n");
    for (t, f) in fids.iter().enumerate() {
        writeln!(csv, "{t},{},{}", seed.wrapping_add(t as u64), num(*f)).unwrap();
    }
    let report = QuantileReport {
        target: spec.name(),
        events,
        trials,
        q05: q.q05,
        q95: q.q95,
        median: q.median,
    };

    let mut run = open(common, "quantiles", serde_json::to_value(&sc).map_err(anyhow::Error::from)?)?;
    run.claim(&["quantiles.json", "fidelities.csv"])?;
    run.write_json("quantiles.json", &report)?;
    run.write("fidelities.csv", csv.as_bytes())?;
    Ok(run.finish()?)
}
