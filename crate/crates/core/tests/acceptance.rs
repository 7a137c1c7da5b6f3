//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; a FAIL also fails the test.

use std::f64::consts::{LN_2, PI};
use std::path::PathBuf;
use std::time::Instant;

use mpemba::analysis::{detect_crossings, fit_power_law, Series};
use mpemba::config::{Model, QuenchConfig, SweepGrid};
use mpemba::hydro::{analytic_correlator, run_ensemble, HydroConfig};
use mpemba::initial_states::{floquet_initial, FLOQUET_A_GRID};
use mpemba::models::{
    dense_mfi_hamiltonian, dense_step_oracle, expm_hermitian, floquet_step, matvec,
    mfi_trotter_step, total_magnetization, FloquetParams, MfiParams, StepModel,
};
use mpemba::observables::WitnessSample;
use mpemba::rng::gaussian;
use mpemba::run::{analyze_files, run_quench, run_sweep, AnalyzeOptions};
use mpemba::statevector::QuantumState;
use num_complex::Complex64;

fn criterion(number: u32, name: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("ACCEPTANCE {number} {name}: PASS ({detail})"),
        Err(detail) => {
            println!("ACCEPTANCE {number} {name}: FAIL ({detail})");
            panic!("acceptance criterion {number} ({name}) failed: {detail}");
        }
    }
}

fn random_state(n: usize, seed: u64) -> QuantumState {
    let dim = 1usize << n;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|i| Complex64::new(gaussian(seed, 90, i as u64, 0), gaussian(seed, 90, i as u64, 1)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    QuantumState::from_amplitudes(n, amps).unwrap()
}

fn max_amp_diff(a: &QuantumState, b: &QuantumState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn witness_series(samples: &[WitnessSample], pick: impl Fn(&WitnessSample) -> f64) -> Series {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.t > 0.0)
        .map(|s| (s.t, pick(s)))
        .collect();
    Series::new(
        "w",
        pts.iter().map(|p| p.0).collect(),
        pts.iter().map(|p| p.1).collect(),
    )
    .unwrap()
}

#[test]
fn criterion_01_conservation() {
    let outcome = (|| -> Result<String, String> {
        let start = Instant::now();
        // Floquet: N=12, 1e4 periods, <Q> and all sector probabilities
        let mut st =
            QuantumState::new_product_state(&floquet_initial(12, 0.5).unwrap()).unwrap();
        let p = FloquetParams::default();
        let probs0 = st.sector_probabilities();
        let (q0, _) = total_magnetization(&st);
        let mut worst = 0.0f64;
        for step in 1..=10_000usize {
            floquet_step(&mut st, &p).unwrap();
            if step % 2000 == 0 || step == 10_000 {
                let probs = st.sector_probabilities();
                for (a, b) in probs.iter().zip(&probs0) {
                    worst = worst.max((a - b).abs());
                }
                let (q, _) = total_magnetization(&st);
                worst = worst.max((q - q0).abs());
            }
        }
        if worst >= 1e-9 {
            return Err(format!("Floquet conservation drift {worst:.3e} >= 1e-9"));
        }

        // MFI: energy drift at t=50 scales as dt^2 within [3.8, 4.2]
        let mut drifts = Vec::new();
        for dt in [0.05, 0.025] {
            let cfg = QuenchConfig {
                model: Model::Mfi,
                n_sites: 10,
                a: None,
                theta: Some(PI / 2.0),
                mfi: MfiParams {
                    dt,
                    ..MfiParams::default()
                },
                t_max: 50.0,
                sample_every: Some((0.5 / dt).round() as usize),
                ..QuenchConfig::default()
            };
            let samples = run_quench(&cfg).unwrap();
            let e0 = samples[0].q_mean;
            let drift = samples
                .iter()
                .map(|s| (s.q_mean - e0).abs())
                .fold(0.0f64, f64::max);
            drifts.push(drift);
        }
        let ratio = drifts[0] / drifts[1];
        if !(3.8..=4.2).contains(&ratio) {
            return Err(format!("MFI drift ratio {ratio:.3} outside [3.8, 4.2]"));
        }
        Ok(format!(
            "Floquet drift {worst:.2e}, MFI dt^2 ratio {ratio:.3}, {:.1}s",
            start.elapsed().as_secs_f64()
        ))
    })();
    criterion(1, "conservation", outcome);
}

#[test]
fn criterion_02_oracle_equivalence() {
    let outcome = (|| -> Result<String, String> {
        // Floquet: one stepped period vs the dense exponential product
        let p = FloquetParams::default();
        let model = StepModel::Floquet(p);
        let mut worst = 0.0f64;
        for k in 0..20u64 {
            let n = 4 + 2 * (k as usize % 2); // N in {4, 6}
            let mut st = random_state(n, 300 + k);
            let expected = dense_step_oracle(&st, &model).unwrap();
            floquet_step(&mut st, &p).unwrap();
            worst = worst.max(max_amp_diff(&st, &expected));
        }
        if worst >= 1e-10 {
            return Err(format!("Floquet oracle deviation {worst:.3e} >= 1e-10"));
        }

        // MFI: error vs exp(-iHt) must shrink ~4x when dt halves
        let mut bad_ratio = None;
        let mut worst_err = 0.0f64;
        for k in 0..20u64 {
            let st0 = random_state(6, 400 + k);
            let mut errs = Vec::new();
            for dt in [0.05, 0.025] {
                let p = MfiParams {
                    dt,
                    ..MfiParams::default()
                };
                let mut st = st0.clone();
                for _ in 0..(1.0 / dt).round() as usize {
                    mfi_trotter_step(&mut st, &p).unwrap();
                }
                let h = dense_mfi_hamiltonian(6, &p);
                let u = expm_hermitian(&h, 1 << 6, 1.0).unwrap();
                let exact =
                    QuantumState::from_amplitudes(6, matvec(&u, st0.amplitudes())).unwrap();
                errs.push(max_amp_diff(&st, &exact));
            }
            worst_err = worst_err.max(errs[0]);
            let ratio = errs[0] / errs[1];
            if !(3.5..=4.5).contains(&ratio) {
                bad_ratio = Some(ratio);
            }
        }
        if let Some(r) = bad_ratio {
            return Err(format!("MFI Trotter ratio {r:.3} outside [3.5, 4.5]"));
        }
        Ok(format!(
            "Floquet max dev {worst:.2e}, MFI second-order scaling holds (max err {worst_err:.2e})"
        ))
    })();
    criterion(2, "oracle_equivalence", outcome);
}

#[test]
fn criterion_03_witness_fixed_points() {
    let outcome = (|| -> Result<String, String> {
        let mut worst = 0.0f64;
        for l in [2usize, 3] {
            let cfg = QuenchConfig {
                n_sites: 8,
                l,
                t_max: 0.0,
                ..QuenchConfig::default()
            };
            let s = &run_quench(&cfg).unwrap()[0];
            let d_exact = 1.0 - 0.5f64.powi(l as i32);
            // binomial weight distribution of the +-state subsystem
            let mut shannon = 0.0;
            for w in 0..=l {
                let mut c = 1.0f64;
                for i in 0..w {
                    c = c * (l - i) as f64 / (i + 1) as f64;
                }
                let p = c * 0.5f64.powi(l as i32);
                shannon -= p * p.ln();
            }
            worst = worst
                .max((s.trace_distance - d_exact).abs())
                .max((s.entropy_deficit - l as f64 * LN_2).abs())
                .max((s.asymmetry - shannon).abs());
            if l == 2 {
                worst = worst.max((s.asymmetry - 1.5 * LN_2).abs());
            }
        }
        if worst >= 1e-10 {
            return Err(format!("fixed-point deviation {worst:.3e} >= 1e-10"));
        }
        Ok(format!("max deviation {worst:.2e}"))
    })();
    criterion(3, "witness_fixed_points", outcome);
}

#[test]
fn criterion_04_fluctuation_matching() {
    let outcome = (|| -> Result<String, String> {
        let n = 12usize;
        let mut worst = 0.0f64;
        for a in FLOQUET_A_GRID {
            let st = QuantumState::new_product_state(&floquet_initial(n, a).unwrap()).unwrap();
            let (_, q2) = total_magnetization(&st);
            worst = worst.max((q2 - n as f64 * (1.0 - a * a)).abs());
        }
        if worst >= 1e-12 {
            return Err(format!("<Q^2> deviation {worst:.3e} >= 1e-12"));
        }
        // a = 0 matches the infinite-temperature value Tr Q^2 / 2^N = N
        let st = QuantumState::new_product_state(&floquet_initial(n, 0.0).unwrap()).unwrap();
        let (_, q2) = total_magnetization(&st);
        let err = (q2 - n as f64).abs();
        if err >= 1e-12 {
            return Err(format!("a=0 <Q^2> = {q2}, expected {n}"));
        }
        Ok(format!("max deviation {worst:.2e}, a=0 matches N"))
    })();
    criterion(4, "fluctuation_matching", outcome);
}

#[test]
fn criterion_05_hydro_exponents() {
    let outcome = (|| -> Result<String, String> {
        let start = Instant::now();
        // mismatched initial variance: -1/2 tail
        let cfg_half = HydroConfig {
            chi0: 4.0,
            seed: 11,
            ..HydroConfig::default()
        };
        // matched variance with gradient correction: -3/2 tail
        let cfg_32 = HydroConfig {
            chi0: 1.0,
            grad_amp: 10.0,
            seed: 12,
            ..HydroConfig::default()
        };
        let mut detail = String::new();
        for (cfg, window, want, tol) in [
            (&cfg_half, (10.0, 100.0), -0.5, 0.1),
            (&cfg_32, (5.0, 50.0), -1.5, 0.25),
        ] {
            let series = run_ensemble(cfg).unwrap();
            let (times, values) = series.var_excess_series();
            let pts: Vec<(f64, f64)> = times
                .iter()
                .zip(&values)
                .filter(|(t, _)| **t > 0.0)
                .map(|(t, v)| (*t, *v))
                .collect();
            let s = Series::new(
                "var_excess",
                pts.iter().map(|p| p.0).collect(),
                pts.iter().map(|p| p.1).collect(),
            )
            .unwrap();
            let fit = fit_power_law(&s, window.0, window.1).map_err(|e| e.to_string())?;
            if (fit.exponent - want).abs() > tol {
                return Err(format!(
                    "exponent {:.3} not within {want} +- {tol}",
                    fit.exponent
                ));
            }
            // squared series doubles the exponent (the D_A / dS_A table)
            let sq = Series::new(
                "sq",
                s.times.clone(),
                s.values.iter().map(|v| v * v).collect(),
            )
            .unwrap();
            let fit2 = fit_power_law(&sq, window.0, window.1).map_err(|e| e.to_string())?;
            if (fit2.exponent - 2.0 * want).abs() > 2.0 * tol {
                return Err(format!(
                    "squared exponent {:.3} not within {} +- {}",
                    fit2.exponent,
                    2.0 * want,
                    2.0 * tol
                ));
            }
            detail.push_str(&format!("{:.3}/{:.3} ", fit.exponent, fit2.exponent));
        }
        Ok(format!(
            "exponents {detail}in {:.0}s",
            start.elapsed().as_secs_f64()
        ))
    })();
    criterion(5, "hydro_exponents", outcome);
}

#[test]
fn criterion_06_hydro_vs_analytic() {
    let outcome = (|| -> Result<String, String> {
        let cfg = HydroConfig {
            l_sites: 256,
            n_real: 128,
            t_max: 50.0,
            chi0: 2.0,
            grad_amp: 0.8,
            stagger_a: 0.4,
            n_samples: 15,
            seed: 7,
            ..HydroConfig::default()
        };
        let series = run_ensemble(&cfg).unwrap();
        let mut worst = 0.0f64;
        for (i, &t) in series.times.iter().enumerate() {
            let exact = analytic_correlator(&cfg, 0, t) - cfg.stationary_variance();
            let (v, e) = series.var_excess[i];
            if e > 0.0 {
                worst = worst.max((v - exact).abs() / e);
            }
            for r in 1..=cfg.r_max {
                let exact = analytic_correlator(&cfg, r, t);
                let (v, e) = series.two_point[r - 1][i];
                if e > 0.0 {
                    worst = worst.max((v - exact).abs() / e);
                }
            }
        }
        if worst >= 3.0 {
            return Err(format!("worst |mc - analytic| = {worst:.2} stderr >= 3"));
        }
        Ok(format!("worst deviation {worst:.2} stderr"))
    })();
    criterion(6, "hydro_vs_analytic", outcome);
}

#[test]
fn criterion_07_mpemba_crossing() {
    let outcome = (|| -> Result<String, String> {
        // Floquet, N=14, l=3: a=0 must end up below a=0.6, with a crossing
        let mut curves = Vec::new();
        for a in [0.0, 0.6] {
            let cfg = QuenchConfig {
                n_sites: 14,
                l: 3,
                a: Some(a),
                t_max: 100.0,
                ..QuenchConfig::default()
            };
            curves.push(run_quench(&cfg).unwrap());
        }
        let s0 = witness_series(&curves[0], |s| s.trace_distance);
        let s6 = witness_series(&curves[1], |s| s.trace_distance);
        let window_mean = |s: &Series, lo: f64, hi: f64| {
            let pts: Vec<f64> = s
                .times
                .iter()
                .zip(&s.values)
                .filter(|(t, _)| **t >= lo && **t <= hi)
                .map(|(_, v)| *v)
                .collect();
            pts.iter().sum::<f64>() / pts.len() as f64
        };
        // early window: a=0.6 relaxes below a=0; late window: order swapped
        let early = (window_mean(&s0, 5.0, 20.0), window_mean(&s6, 5.0, 20.0));
        let late = (window_mean(&s0, 25.0, 50.0), window_mean(&s6, 25.0, 50.0));
        if early.1 >= early.0 {
            return Err(format!("no early ordering: a06 {} vs a0 {}", early.1, early.0));
        }
        if late.0 >= late.1 {
            return Err(format!("a=0 not below a=0.6 late: {} vs {}", late.0, late.1));
        }
        let crossings = detect_crossings(&s0, &s6, 1.0, 5).map_err(|e| e.to_string())?;
        if crossings.is_empty() {
            return Err("no Floquet D_A crossing detected".into());
        }
        let t_m = crossings[0].t_cross;

        // MFI: theta = 5pi/8 crosses theta = 3pi/8 (existence)
        let mut mfi_curves = Vec::new();
        for theta in [3.0 * PI / 8.0, 5.0 * PI / 8.0] {
            let cfg = QuenchConfig {
                model: Model::Mfi,
                n_sites: 12,
                l: 3,
                a: None,
                theta: Some(theta),
                t_max: 30.0,
                ..QuenchConfig::default()
            };
            mfi_curves.push(run_quench(&cfg).unwrap());
        }
        let m38 = witness_series(&mfi_curves[0], |s| s.trace_distance);
        let m58 = witness_series(&mfi_curves[1], |s| s.trace_distance);
        let mfi_crossings = detect_crossings(&m58, &m38, 0.5, 3).map_err(|e| e.to_string())?;
        if mfi_crossings.is_empty() {
            return Err("no MFI D_A crossing detected".into());
        }
        Ok(format!(
            "Floquet t_M ~ {t_m:.1}, MFI t_M ~ {:.1}",
            mfi_crossings[0].t_cross
        ))
    })();
    criterion(7, "mpemba_crossing", outcome);
}

#[test]
fn criterion_08_plateau_monotonic_in_n() {
    let outcome = (|| -> Result<String, String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let template = QuenchConfig {
            a: Some(0.5),
            l: 3,
            t_max: 400.0,
            ..QuenchConfig::default()
        };
        let grid = SweepGrid::N(vec![8, 10, 12, 14]);
        let summary = run_sweep(&template, &grid, dir.path()).map_err(|e| e.to_string())?;
        if summary.n_failed > 0 {
            return Err(format!("{} sweep points failed", summary.n_failed));
        }
        let plateaus: Vec<f64> = summary
            .points
            .iter()
            .map(|p| p.plateau.ok_or_else(|| format!("{}: no plateau", p.tag)))
            .collect::<Result<Vec<_>, _>>()?
            .iter()
            .map(|(m, _)| *m)
            .collect();
        for w in plateaus.windows(2) {
            if w[1] >= w[0] {
                return Err(format!("plateaus not strictly decreasing: {plateaus:?}"));
            }
        }
        Ok(format!("plateaus {plateaus:.4?}"))
    })();
    criterion(8, "plateau_monotonic_in_n", outcome);
}

#[test]
fn criterion_09_trotter_robustness() {
    let outcome = (|| -> Result<String, String> {
        let mut curves = Vec::new();
        for dt in [0.1, 0.05] {
            let cfg = QuenchConfig {
                model: Model::Mfi,
                n_sites: 8,
                a: None,
                theta: Some(PI / 2.0),
                mfi: MfiParams {
                    dt,
                    ..MfiParams::default()
                },
                t_max: 20.0,
                sample_every: Some((0.5 / dt).round() as usize),
                ..QuenchConfig::default()
            };
            curves.push(run_quench(&cfg).unwrap());
        }
        // compare over the relaxation window, where D_A still decays
        let mut worst = 0.0f64;
        for (a, b) in curves[0].iter().zip(&curves[1]).skip(1) {
            if a.t > 10.0 {
                break;
            }
            let denom = a.trace_distance.max(b.trace_distance);
            if denom > 1e-6 {
                worst = worst.max((a.trace_distance - b.trace_distance).abs() / denom);
            }
        }
        if worst >= 0.05 {
            return Err(format!("max relative deviation {worst:.4} >= 0.05"));
        }
        Ok(format!("max relative deviation {worst:.4}"))
    })();
    criterion(9, "trotter_robustness", outcome);
}

#[test]
fn criterion_10_determinism() {
    let outcome = (|| -> Result<String, String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let quench_cfg = QuenchConfig {
            n_sites: 10,
            l: 3,
            a: Some(0.4),
            t_max: 50.0,
            ..QuenchConfig::default()
        };
        let hydro_cfg = HydroConfig {
            l_sites: 512,
            n_real: 16,
            t_max: 50.0,
            n_samples: 10,
            ..HydroConfig::default()
        };

        let run_both = |threads: usize| -> Result<(String, String), String> {
            let body = || -> Result<(String, String), String> {
                let samples = run_quench(&quench_cfg).map_err(|e| e.to_string())?;
                let q = mpemba::io::witness_csv_string(&samples);
                let series = run_ensemble(&hydro_cfg).map_err(|e| e.to_string())?;
                let h = mpemba::io::hydro_csv_string(&series);
                Ok((q, h))
            };
            #[cfg(feature = "parallel")]
            {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| e.to_string())?
                    .install(body)
            }
            #[cfg(not(feature = "parallel"))]
            {
                let _ = threads;
                body()
            }
        };

        let pools = [1usize, 2, 8];
        let outputs: Vec<(String, String)> = pools
            .iter()
            .map(|&t| run_both(t))
            .collect::<Result<_, _>>()?;
        for w in outputs.windows(2) {
            if w[0].0 != w[1].0 {
                return Err("quench CSV differs across thread counts".into());
            }
            if w[0].1 != w[1].1 {
                return Err("hydro CSV differs across thread counts".into());
            }
        }

        // and via full file round-trips, including manifests
        let paths: Vec<PathBuf> = (0..2)
            .map(|i| dir.path().join(format!("run{i}.csv")))
            .collect();
        for p in &paths {
            mpemba::run::run_quench_to_file(&quench_cfg, p).map_err(|e| e.to_string())?;
        }
        let a = std::fs::read(&paths[0]).map_err(|e| e.to_string())?;
        let b = std::fs::read(&paths[1]).map_err(|e| e.to_string())?;
        if a != b {
            return Err("repeated runs wrote different bytes".into());
        }
        Ok(format!(
            "byte-identical over thread counts {pools:?} and repeated runs"
        ))
    })();
    criterion(10, "determinism", outcome);
}

#[test]
fn analyze_reports_synthetic_crossing_time() {
    // end-to-end check of the reporting path used above
    let dir = tempfile::tempdir().unwrap();
    let times: Vec<f64> = (0..40).map(|i| 0.05 * 1.15f64.powi(i)).collect();
    let mut paths = Vec::new();
    for (name, amp, exp) in [("slow", 1.0, -0.5), ("fast", 0.5, -1.5)] {
        let mut text = String::from("step,t,D_A\n");
        for (i, t) in times.iter().enumerate() {
            text.push_str(&format!("{i},{t},{}\n", amp * t.powf(exp)));
        }
        let path = dir.path().join(format!("{name}.csv"));
        std::fs::write(&path, text).unwrap();
        paths.push(path);
    }
    let out = analyze_files(&paths, &AnalyzeOptions::default()).unwrap();
    assert_eq!(out.report.crossings.len(), 1);
    assert!((out.report.crossings[0].t_cross - 0.5).abs() < 1e-6);
}
