//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on any failure.

mod common;

use std::time::{Duration, Instant};

use discrete_ep::cli_io::{
    config::{config_to_string, parse_config},
    trajectory_from_csv, trajectory_from_json, trajectory_to_csv, trajectory_to_json, InitialData, Method,
    SimulationConfig,
};
use discrete_ep::diagnostics::{
    casimir_drift, convergence_study, halving_steps, noether_check, symplectic_check, MvChartSystem,
};
use discrete_ep::integrators::{dep_step_mv, mv_equivalence_check, run_trajectory, NewtonConfig};
use discrete_ep::lagrangians::{DiscreteLagrangian, LagrangianKind};
use discrete_ep::lie_core::{chi_op, exp, iex_op, log};
use discrete_ep::sampling::{random_algebra, random_group, rng};
use discrete_ep::{InertiaSpec, Momentum, Result, Side};

use common::{del_step, diag123};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

/// 1. Orbit invariants of Π under dep_mv + DLP.
fn casimir_exactness() -> Result<Outcome> {
    let start = Instant::now();
    let cfg = SimulationConfig::new(vec![1.0, 2.0, 3.0], 1e-2, 10_000, Method::DepMv).with_pi0(vec![0.6, -0.8, 1.0]);
    let traj = run_trajectory(&cfg)?;
    let drift = casimir_drift(&traj).max_abs_drift;
    let elapsed = start.elapsed();
    outcome(
        drift < 1e-10 && elapsed < Duration::from_secs(5),
        format!("spectrum drift {drift:.2e} (< 1e-10), runtime {elapsed:.2?} (< 5 s)"),
    )
}

/// 2. The DEP relation, M-transport and incremental-rotation forms on solver output.
fn moser_veselov_equivalence() -> Result<Outcome> {
    let mut r = rng(2002);
    let cfg = NewtonConfig::default();
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let n = 3 + k % 2;
        let lambda: Vec<f64> = (0..n).map(|i| 0.5 + i as f64 + 0.3 * (k % 7) as f64).collect();
        let inertia = InertiaSpec::new(lambda)?;
        let f_prev = exp(&random_algebra(n, 0.05 + 0.4 * ((k % 10) as f64) / 10.0, &mut r));
        let f_next = dep_step_mv(&f_prev, &inertia, &cfg)?.value;
        let res = mv_equivalence_check(&f_prev, &f_next, &inertia);
        worst = worst.max(res.dep).max(res.transport).max(res.lewis_simo);
    }
    outcome(worst < 1e-10, format!("max residual over 1000 steps {worst:.2e} (< 1e-10)"))
}

/// 3. Reconstructed DEP trajectory against a direct DEL root-finder.
fn reconstruction_equivalence() -> Result<Outcome> {
    let mut r = rng(3003);
    let inertia = diag123();
    let g0 = random_group(3, &mut r);
    let mut cfg = SimulationConfig::new(vec![1.0, 2.0, 3.0], 0.05, 100, Method::DepMv);
    cfg.reortho_every = 0;
    cfg.initial = Some(InitialData {
        g0: Some(g0.to_row_vec()),
        pi0: Some(vec![0.6, -0.8, 1.0]),
        ..Default::default()
    });
    let traj = run_trajectory(&cfg)?;
    let gs: Vec<_> = traj.records.iter().map(|rec| rec.g.clone().expect("dep runs carry g")).collect();
    let mut prev = gs[0].clone();
    let mut cur = gs[1].clone();
    let mut worst = 0.0f64;
    for expected in &gs[2..] {
        let next = del_step(&prev, &cur, &inertia);
        worst = worst.max(next.distance(expected));
        prev = cur;
        cur = next;
    }
    outcome(worst < 1e-9, format!("max ‖g_DEL − g_DEP‖ over 100 steps {worst:.2e} (< 1e-9)"))
}

/// 4. Conserved transported momentum.
fn discrete_noether() -> Result<Outcome> {
    let cfg = SimulationConfig::new(vec![1.0, 2.0, 3.0], 1e-2, 10_000, Method::DepMv).with_pi0(vec![0.6, -0.8, 1.0]);
    let inertia = cfg.inertia()?;
    let traj = run_trajectory(&cfg)?;
    let spatial = noether_check(&traj)?.max_abs_drift;
    // mirrored form Ad*_w m_{k+1} = m_k on consecutive reduced variables
    let fs: Vec<_> = traj.records.iter().filter_map(|rec| rec.f.clone()).collect();
    let mirrored = fs
        .windows(2)
        .map(|w| mv_equivalence_check(&w[0], &w[1], &inertia).bobenko_suris)
        .fold(0.0, f64::max);
    outcome(
        spatial < 1e-10 && mirrored < 1e-10,
        format!("drift of g Π gᵀ {spatial:.2e}, mirrored transport residual {mirrored:.2e} (< 1e-10)"),
    )
}

/// 5. Invariance of both discrete Lagrangians under the diagonal action.
fn invariance_lemma() -> Result<Outcome> {
    let mut r = rng(5005);
    let inertia = diag123();
    let mut worst = 0.0f64;
    for kind in [LagrangianKind::Chart, LagrangianKind::MoserVeselov] {
        for side in [Side::Left, Side::Right] {
            let lag = DiscreteLagrangian::new(kind, 1.0, inertia.clone(), side)?;
            for _ in 0..1000 {
                let g1 = random_group(3, &mut r);
                let step = exp(&random_algebra(3, 1.0, &mut r));
                let g2 = match side {
                    Side::Left => g1.compose(&step),
                    Side::Right => step.compose(&g1),
                };
                let a = random_group(3, &mut r);
                let (m1, m2) = match side {
                    Side::Left => (a.compose(&g1), a.compose(&g2)),
                    Side::Right => (g1.compose(&a), g2.compose(&a)),
                };
                worst = worst.max((lag.eval(&g1, &g2)? - lag.eval(&m1, &m2)?).abs());
            }
        }
    }
    outcome(worst < 1e-13, format!("max |𝕃(g₁,g₂) − 𝕃(moved)| over 4000 samples {worst:.2e} (< 1e-13)"))
}

/// 6. χ∘iex, derivative of exp, exp/log round trip.
fn operator_calculus() -> Result<Outcome> {
    let mut r = rng(6006);
    let mut chi_iex = 0.0f64;
    let mut dexp = 0.0f64;
    let mut roundtrip = 0.0f64;
    for k in 0..120 {
        let n = 3 + k % 3;
        let eta = random_algebra(n, 0.2 + 2.0 * (k as f64 / 120.0), &mut r);
        chi_iex = chi_iex.max(chi_op(&eta)?.compose(&iex_op(&eta)).distance_to_identity());

        let delta = random_algebra(n, 1.0, &mut r);
        let eps = 1e-5;
        let fd = (exp(&(&eta + &delta.scale(eps))).matrix() - exp(&(&eta - &delta.scale(eps))).matrix()) / (2.0 * eps);
        let analytic = exp(&eta).matrix() * iex_op(&eta).apply(&delta).matrix();
        dexp = dexp.max((fd - analytic).norm());

        let xi = random_algebra(n, 0.1 + 2.9 * (k as f64 / 120.0), &mut r);
        roundtrip = roundtrip.max((&log(&exp(&xi))? - &xi).norm());
    }
    outcome(
        chi_iex < 1e-13 && dexp < 1e-6 && roundtrip < 1e-12,
        format!("χ∘iex {chi_iex:.2e} (< 1e-13), d exp {dexp:.2e} (< 1e-6), log∘exp {roundtrip:.2e} (< 1e-12)"),
    )
}

/// 7. Convergence orders against a 100× finer RK4 reference.
fn convergence_orders() -> Result<Outcome> {
    let start = Instant::now();
    let inertia = diag123();
    let pi0 = Momentum::from_coords(3, &[0.6, -0.8, 1.0])?;
    let hs = halving_steps(0.4, 5);
    let newton = NewtonConfig::default();
    let slope = |m| convergence_study(m, &inertia, &pi0, 4.0, &hs, &newton).map(|r| r.slope);
    let mv = slope(Method::DepMv)?;
    let leapfrog = slope(Method::SplittingLeapfrog)?;
    let rk4 = slope(Method::Rk4)?;
    let chart = slope(Method::DepChart)?;
    let elapsed = start.elapsed();
    outcome(
        (mv - 2.0).abs() <= 0.2
            && (leapfrog - 2.0).abs() <= 0.15
            && (rk4 - 4.0).abs() <= 0.2
            && chart >= 1.0
            && elapsed < Duration::from_secs(60),
        format!(
            "dep_mv {mv:.3}, leapfrog {leapfrog:.3}, rk4 {rk4:.3}, dep_chart {chart:.3} (measured), runtime {elapsed:.2?}"
        ),
    )
}

/// 8. Symplectic-form preservation and its discrimination.
fn symplectic_form() -> Result<Outcome> {
    let mut r = rng(8008);
    let inertia = diag123();
    let mut worst = 0.0f64;
    let mut weakest_perturbed = f64::INFINITY;
    let mut evaluated = 0;
    while evaluated < 20 {
        let system = MvChartSystem::new(random_group(3, &mut r), inertia.clone())?;
        let q0 = random_algebra(3, 0.6, &mut r).coords();
        let dq = random_algebra(3, 0.15, &mut r).coords();
        let point: Vec<f64> = q0.iter().copied().chain(q0.iter().zip(&dq).map(|(a, b)| a + b)).collect();
        let Some(exact) = system.check(&point)?.residual() else {
            continue;
        };
        let perturbed = symplectic_check(
            &|x| system.mixed_hessian(x),
            &|x| {
                let mut y = system.step_map(x)?;
                y[3..].iter_mut().for_each(|v| *v *= 1.05);
                Ok(y)
            },
            &point,
        )?
        .residual()
        .unwrap_or(0.0);
        worst = worst.max(exact);
        weakest_perturbed = weakest_perturbed.min(perturbed);
        evaluated += 1;
    }
    outcome(
        worst < 1e-5 && weakest_perturbed > 1e-2,
        format!("max DEP residual {worst:.2e} (< 1e-5), min perturbed residual {weakest_perturbed:.2e} (> 1e-2)"),
    )
}

/// 9. Casimir drift of DLP and splitting against RK4 at matched h.
fn comparative_drift() -> Result<Outcome> {
    let base = SimulationConfig::new(vec![1.0, 2.0, 3.0], 0.3, 100_000, Method::DepMv).with_pi0(vec![2.0, 1.0, -1.5]);
    let drifts = std::thread::scope(|s| {
        let handles: Vec<_> = [Method::DepMv, Method::SplittingLeapfrog, Method::Rk4]
            .into_iter()
            .map(|m| {
                let mut cfg = base.clone();
                cfg.method = m;
                s.spawn(move || run_trajectory(&cfg).map(|t| casimir_drift(&t).max_abs_drift))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect::<Result<Vec<_>>>()
    })?;
    let (dlp, split, rk4) = (drifts[0], drifts[1], drifts[2]);
    outcome(
        dlp < 1e-9 && split < 1e-9 && rk4 > 1e-6,
        format!("h = 0.3, 1e5 steps: dep_mv {dlp:.2e}, leapfrog {split:.2e} (< 1e-9), rk4 {rk4:.2e} (> 1e-6)"),
    )
}

/// 10. Exact config round trips; bitwise-identical seeded runs and files.
fn determinism_and_io() -> Result<Outcome> {
    let mut ok = true;
    let mut cfgs = vec![SimulationConfig::new(vec![1.0, 2.0, 3.0], 0.01, 50, Method::DepMv)];
    let mut c = SimulationConfig::new(vec![0.1 + 0.2, 1.0 / 3.0, std::f64::consts::E, 7.5e-3], 1.0 / 30.0, 40, Method::DepChart);
    c.side = Side::Right;
    c.seed = 77;
    c.initial = Some(InitialData {
        xi0: Some(vec![0.1, -1.0 / 7.0, 0.3, 2e-9, -0.5, 0.25]),
        ..Default::default()
    });
    cfgs.push(c);
    cfgs.push(SimulationConfig::new(vec![1.0, 2.0, 3.0], 0.05, 30, Method::Rk4).with_pi0(vec![0.3, 0.2, 0.1]));
    for cfg in &cfgs {
        let back = parse_config(&config_to_string(cfg)?)?;
        ok &= back == *cfg;
        let a = run_trajectory(cfg)?;
        let b = run_trajectory(cfg)?;
        let (csv_a, csv_b) = (trajectory_to_csv(&a)?, trajectory_to_csv(&b)?);
        let (json_a, json_b) = (trajectory_to_json(&a)?, trajectory_to_json(&b)?);
        ok &= csv_a == csv_b && json_a == json_b;
        ok &= trajectory_from_csv(&csv_a)? == a && trajectory_from_json(&json_a)? == a;
    }
    outcome(
        ok,
        format!("{} configs: load∘save exact, repeated runs byte-identical, read∘write exact", cfgs.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("casimir/orbit exactness", casimir_exactness),
        ("moser-veselov equivalence", moser_veselov_equivalence),
        ("reconstruction equivalence", reconstruction_equivalence),
        ("discrete noether", discrete_noether),
        ("invariance of discrete lagrangians", invariance_lemma),
        ("operator calculus", operator_calculus),
        ("convergence orders", convergence_orders),
        ("symplectic form", symplectic_form),
        ("comparative drift", comparative_drift),
        ("determinism and i/o", determinism_and_io),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!("criterion {:>2} {:<36} {}  {}", i + 1, name, if passed { "PASS" } else { "FAIL" }, detail);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
