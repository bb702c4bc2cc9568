//! Command implementations behind the binary. Each returns a process exit code:
//! 0 success, 1 validation or check failure, 2 solver failure, 3 I/O failure.

use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use super::config::{load_config, Method, OutputFormat, SimulationConfig};
use super::trajectory_io::{trajectory_to_string, write_trajectory};
use crate::diagnostics::{check_suite, compare_methods, convergence_study, halving_steps};
use crate::error::{Error, Result};
use crate::integrators::run_trajectory;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Step sizes used by `convergence`: `h, h/2, …`.
pub const CONVERGENCE_LEVELS: usize = 5;

#[derive(Clone, Debug, Default)]
pub struct CommandOptions {
    pub config: PathBuf,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub method: Option<Method>,
    pub steps: Option<usize>,
    pub h: Option<f64>,
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_solver_failure() {
        EXIT_SOLVER
    } else if matches!(err.root(), Error::Io(_)) {
        EXIT_IO
    } else {
        EXIT_INVALID
    }
}

fn load(opts: &CommandOptions) -> Result<SimulationConfig> {
    let mut cfg = load_config(&opts.config)?;
    if let Some(m) = opts.method {
        cfg.method = m;
    }
    if let Some(s) = opts.steps {
        cfg.steps = s;
    }
    if let Some(h) = opts.h {
        cfg.h = h;
    }
    if let Some(o) = &opts.output {
        cfg.output.path = Some(o.clone());
    }
    if let Some(f) = opts.format {
        cfg.output.format = f;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn finish(result: Result<i32>, err: &mut dyn Write) -> i32 {
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit_json<T: Serialize>(value: &T, cfg: &SimulationConfig, out: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Validation(e.to_string()))?;
    match &cfg.output.path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

pub fn cmd_simulate(opts: &CommandOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    finish(
        (|| {
            let cfg = load(opts)?;
            let traj = run_trajectory(&cfg)?;
            log::info!(
                "simulated {} steps of {} (n = {}, h = {})",
                cfg.steps,
                cfg.method,
                cfg.n,
                cfg.h
            );
            match &cfg.output.path {
                Some(p) => write_trajectory(&traj, p, cfg.output.format)?,
                None => out.write_all(trajectory_to_string(&traj, cfg.output.format)?.as_bytes())?,
            }
            Ok(EXIT_OK)
        })(),
        err,
    )
}

pub fn cmd_check(opts: &CommandOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    finish(
        (|| {
            let cfg = load(opts)?;
            let traj = run_trajectory(&cfg)?;
            let results = check_suite(&cfg, &traj)?;
            writeln!(out, "{:<24} {:>12} {:>12}  result", "check", "value", "threshold")?;
            for r in &results {
                writeln!(
                    out,
                    "{:<24} {:>12.3e} {:>12.3e}  {}",
                    r.name,
                    r.value,
                    r.threshold,
                    if r.passed { "PASS" } else { "FAIL" }
                )?;
            }
            if let Some(p) = &cfg.output.path {
                let text = serde_json::to_string_pretty(&results).map_err(|e| Error::Validation(e.to_string()))?;
                std::fs::write(p, text + "\n")?;
            }
            Ok(if results.iter().all(|r| r.passed) {
                EXIT_OK
            } else {
                EXIT_INVALID
            })
        })(),
        err,
    )
}

/// Final-time errors over `h, h/2, …` with final time `steps · h`.
pub fn cmd_convergence(opts: &CommandOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    finish(
        (|| {
            let cfg = load(opts)?;
            let inertia = cfg.inertia()?;
            let (_, pi0) = cfg.initial_state(&inertia)?;
            let final_time = cfg.h * cfg.steps as f64;
            if cfg.steps == 0 {
                return Err(Error::Validation("convergence needs steps > 0".into()));
            }
            let hs = halving_steps(cfg.h, CONVERGENCE_LEVELS);
            let report = convergence_study(cfg.method, &inertia, &pi0, final_time, &hs, &cfg.newton)?;
            emit_json(&report, &cfg, out)?;
            Ok(EXIT_OK)
        })(),
        err,
    )
}

pub fn cmd_compare(opts: &CommandOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    finish(
        (|| {
            let mut cfg = load(opts)?;
            // all three methods start from momentum data
            let inertia = cfg.inertia()?;
            let (_, pi0) = cfg.initial_state(&inertia)?;
            cfg.initial = None;
            cfg = cfg.with_pi0(pi0.coords());
            cfg.init = Default::default();
            cfg.validate()?;
            let report = compare_methods(&cfg)?;
            emit_json(&report, &cfg, out)?;
            Ok(EXIT_OK)
        })(),
        err,
    )
}
