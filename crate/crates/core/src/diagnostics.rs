//! Invariant and accuracy measurements over trajectories.
//!
//! All sums run sequentially left to right so reports are replayable bit for bit.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cli_io::config::{Method, SimulationConfig};
use crate::error::{Error, Result};
use crate::integrators::{dep_step_mv, mv_equivalence_check, propagate_momentum, run_trajectory, NewtonConfig, Trajectory};
use crate::lagrangians::Side;
use crate::lie_core::{exp, iex_op, log, AlgebraElement, GroupElement, Momentum};
use crate::rigid_body::{momentum_energy, InertiaSpec};

/// Least-squares slope of `ln y` against `ln x` and the RMS residual of the fit.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len(), "loglog_slope needs paired samples");
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (slope, intercept) = linear_fit(&lx, &ly);
    let n = lx.len() as f64;
    let rss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    (slope, (rss / n).sqrt())
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Least-squares trend of a drift series with a z-test against zero.
///
/// The standard error is inflated by `√(N/N_eff)`, `N_eff = N(1−ρ)/(1+ρ)`,
/// where ρ is the lag-one autocorrelation of the fit residuals. A trend is
/// only significant when it also exceeds `floor` over the run, which keeps
/// round-off random walks from being reported as drift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecularTrend {
    pub slope: f64,
    pub stderr: f64,
    pub z: f64,
    pub effective_samples: f64,
    pub floor: f64,
    pub significant: bool,
}

pub const SECULAR_Z: f64 = 3.0;

/// Round-off allowance for a drift series of `n` samples of a quantity of size `reference`.
pub fn roundoff_floor(n: usize, reference: f64) -> f64 {
    100.0 * f64::EPSILON * (n as f64).sqrt() * reference
}

pub fn secular_trend(series: &[f64], floor: f64) -> SecularTrend {
    let n = series.len();
    if n < 3 {
        return SecularTrend {
            slope: 0.0,
            stderr: f64::INFINITY,
            z: 0.0,
            effective_samples: n as f64,
            floor,
            significant: false,
        };
    }
    let x: Vec<f64> = (0..n).map(|k| k as f64).collect();
    let (slope, intercept) = linear_fit(&x, series);
    let resid: Vec<f64> = x.iter().zip(series).map(|(a, b)| b - intercept - slope * a).collect();
    let ss: f64 = resid.iter().map(|e| e * e).sum();
    let lag: f64 = resid.windows(2).map(|w| w[0] * w[1]).sum();
    let rho = if ss > 0.0 { (lag / ss).clamp(0.0, 1.0 - 1e-9) } else { 0.0 };
    let nf = n as f64;
    let n_eff = (nf * (1.0 - rho) / (1.0 + rho)).clamp(3.0, nf);
    let mean_x = (nf - 1.0) / 2.0;
    let sxx: f64 = x.iter().map(|a| (a - mean_x).powi(2)).sum();
    let stderr = (ss / (nf - 2.0) / sxx).sqrt() * (nf / n_eff).sqrt();
    let z = if stderr > 0.0 {
        slope / stderr
    } else if slope == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(slope)
    };
    SecularTrend {
        slope,
        stderr,
        z,
        effective_samples: n_eff,
        floor,
        significant: z.abs() > SECULAR_Z && slope.abs() * (nf - 1.0) > floor,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub quantity: String,
    /// Per-step value of the monitored quantity (for vector quantities, its deviation norm).
    pub values: Vec<f64>,
    /// Per-step absolute deviation from step 0.
    pub deviations: Vec<f64>,
    pub max_abs_drift: f64,
    pub max_rel_drift: f64,
    pub trend: SecularTrend,
}

impl DriftReport {
    /// Scalar quantity; deviations are `|v_k − v_0|`.
    pub fn from_series(quantity: impl Into<String>, values: Vec<f64>) -> Self {
        let v0 = values.first().copied().unwrap_or(0.0);
        let deviations: Vec<f64> = values.iter().map(|v| (v - v0).abs()).collect();
        Self::assemble(quantity.into(), values, deviations, v0.abs())
    }

    /// Vector quantity summarized by its deviation norm against a reference size.
    pub fn from_deviations(quantity: impl Into<String>, deviations: Vec<f64>, reference: f64) -> Self {
        Self::assemble(quantity.into(), deviations.clone(), deviations, reference)
    }

    fn assemble(quantity: String, values: Vec<f64>, deviations: Vec<f64>, reference: f64) -> Self {
        let max_abs_drift = deviations.iter().copied().fold(0.0, f64::max);
        let max_rel_drift = if reference > 0.0 {
            max_abs_drift / reference
        } else {
            max_abs_drift
        };
        let trend = secular_trend(&deviations, roundoff_floor(deviations.len(), reference));
        Self {
            quantity,
            values,
            deviations,
            max_abs_drift,
            max_rel_drift,
            trend,
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Drift of the singular-value spectrum of Π (the coadjoint-orbit invariants).
pub fn casimir_drift(traj: &Trajectory) -> DriftReport {
    let s0 = traj.records[0].pi.spectrum();
    let devs = traj.momenta().map(|p| max_abs_diff(&p.spectrum(), &s0)).collect();
    let reference = s0.first().copied().unwrap_or(0.0);
    DriftReport::from_deviations("spectrum", devs, reference)
}

/// Drift of each `Tr(Π^{2m})`.
pub fn trace_casimir_drift(traj: &Trajectory) -> Vec<DriftReport> {
    let m = traj.n / 2;
    (0..m)
        .map(|k| {
            let values = traj.momenta().map(|p| p.trace_casimirs()[k]).collect();
            DriftReport::from_series(format!("trace_casimir_{}", k + 1), values)
        })
        .collect()
}

/// Kinetic energy recomputed from the stored momenta.
pub fn energy_drift(traj: &Trajectory, inertia: &InertiaSpec) -> Result<DriftReport> {
    let values = traj
        .momenta()
        .map(|p| momentum_energy(inertia, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(DriftReport::from_series("energy", values))
}

/// Conserved momentum map: `g Π gᵀ` for left-invariant runs and `gᵀ μ g`
/// for right-invariant runs.
pub fn noether_momenta(traj: &Trajectory) -> Result<Vec<Momentum>> {
    traj.records
        .iter()
        .map(|r| {
            let g = r
                .g
                .as_ref()
                .ok_or_else(|| Error::Validation("momentum map needs reconstructed g".into()))?;
            let g = g.matrix();
            let m = match traj.side {
                Side::Left => g * r.pi.matrix() * g.transpose(),
                Side::Right => g.transpose() * r.pi.matrix() * g,
            };
            Momentum::from_matrix(&m)
        })
        .collect()
}

pub fn noether_check(traj: &Trajectory) -> Result<DriftReport> {
    let ms = noether_momenta(traj)?;
    let devs = ms.iter().map(|m| (m - &ms[0]).norm()).collect();
    Ok(DriftReport::from_deviations("noether", devs, ms[0].norm()))
}

/// Largest residual of the equivalent Moser-Veselov forms over consecutive steps.
pub fn mv_equivalence_max(traj: &Trajectory, inertia: &InertiaSpec) -> Result<f64> {
    let fs: Vec<&GroupElement> = traj.records.iter().filter_map(|r| r.f.as_ref()).collect();
    let mut worst = 0.0f64;
    for w in fs.windows(2) {
        let (a, b) = match traj.side {
            Side::Left => (w[0].clone(), w[1].clone()),
            Side::Right => (w[0].inverse(), w[1].inverse()),
        };
        worst = worst.max(mv_equivalence_check(&a, &b, inertia).max());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SymplecticOutcome {
    Residual { value: f64 },
    Skipped { reason: String },
}

impl SymplecticOutcome {
    pub fn residual(&self) -> Option<f64> {
        match self {
            SymplecticOutcome::Residual { value } => Some(*value),
            SymplecticOutcome::Skipped { .. } => None,
        }
    }
}

pub const SYMPLECTIC_FD_STEP: f64 = 1e-6;

/// Checks `DFᵀ Ω(F(x)) DF = Ω(x)` for a map F on `(q₀, q₁)` pairs, where
/// `Ω = [[0, B], [−Bᵀ, 0]]` and `B(q₀, q₁)` is the mixed Hessian of the
/// discrete Lagrangian. DF comes from central differences.
pub fn symplectic_check(
    mixed_hessian: &dyn Fn(&[f64]) -> Result<DMatrix<f64>>,
    step_map: &dyn Fn(&[f64]) -> Result<Vec<f64>>,
    point: &[f64],
) -> Result<SymplecticOutcome> {
    let dim = point.len();
    if dim % 2 != 0 {
        return Err(Error::Validation("phase point must hold (q0, q1)".into()));
    }
    let d = dim / 2;
    let omega = |x: &[f64]| -> Result<Option<DMatrix<f64>>> {
        let b = mixed_hessian(x)?;
        let sv = b.clone().singular_values();
        let max = sv.max();
        if max <= f64::MIN_POSITIVE || sv.min() < 1e-8 * max {
            return Ok(None);
        }
        let mut w = DMatrix::zeros(dim, dim);
        w.view_mut((0, d), (d, d)).copy_from(&b);
        w.view_mut((d, 0), (d, d)).copy_from(&(-b.transpose()));
        Ok(Some(w))
    };
    let Some(w0) = omega(point)? else {
        return Ok(SymplecticOutcome::Skipped {
            reason: "discrete Lagrangian is degenerate at this point".into(),
        });
    };
    let image = step_map(point)?;
    let Some(w1) = omega(&image)? else {
        return Ok(SymplecticOutcome::Skipped {
            reason: "discrete Lagrangian is degenerate at the image point".into(),
        });
    };
    let mut jac = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let mut plus = point.to_vec();
        let mut minus = point.to_vec();
        plus[k] += SYMPLECTIC_FD_STEP;
        minus[k] -= SYMPLECTIC_FD_STEP;
        let fp = step_map(&plus)?;
        let fm = step_map(&minus)?;
        for r in 0..dim {
            jac[(r, k)] = (fp[r] - fm[r]) / (2.0 * SYMPLECTIC_FD_STEP);
        }
    }
    let value = (jac.transpose() * w1 * &jac - w0).norm();
    Ok(SymplecticOutcome::Residual { value })
}

/// Phase space of the Moser-Veselov system in exponential coordinates
/// `g = base · exp(q)`, for n = 3.
#[derive(Clone, Debug)]
pub struct MvChartSystem {
    pub base: GroupElement,
    pub inertia: InertiaSpec,
    pub newton: NewtonConfig,
}

impl MvChartSystem {
    pub fn new(base: GroupElement, inertia: InertiaSpec) -> Result<Self> {
        if base.n() != 3 || inertia.n() != 3 {
            return Err(Error::UnsupportedDimension {
                n: base.n(),
                what: "chart phase space is set up for SO(3)",
            });
        }
        Ok(Self {
            base,
            inertia,
            newton: NewtonConfig::default(),
        })
    }

    pub fn group(&self, q: &[f64]) -> Result<GroupElement> {
        Ok(self.base.compose(&exp(&AlgebraElement::from_coords(3, q)?)))
    }

    pub fn chart(&self, g: &GroupElement) -> Result<Vec<f64>> {
        Ok(log(&self.base.inverse().compose(g))?.coords())
    }

    /// Mixed Hessian of `Tr(g₀ Λ g₁ᵀ)` in the chart; the constant prefactor
    /// of the Lagrangian is dropped since it scales Ω uniformly.
    pub fn mixed_hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let lam = self.inertia.lambda_matrix();
        let q0 = AlgebraElement::from_coords(3, &x[0..3])?;
        let q1 = AlgebraElement::from_coords(3, &x[3..6])?;
        let partials = |q: &AlgebraElement| -> Result<Vec<DMatrix<f64>>> {
            let e = exp(q);
            let d = iex_op(q);
            (0..3)
                .map(|a| {
                    let mut c = [0.0; 3];
                    c[a] = 1.0;
                    let basis = AlgebraElement::from_coords(3, &c)?;
                    Ok(e.matrix() * d.apply(&basis).matrix())
                })
                .collect()
        };
        let d0 = partials(&q0)?;
        let d1 = partials(&q1)?;
        Ok(DMatrix::from_fn(3, 3, |a, b| (&d0[a] * &lam * d1[b].transpose()).trace()))
    }

    /// `(q₀, q₁) ↦ (q₁, q₂)` through one DEP step.
    pub fn step_map(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g0 = self.group(&x[0..3])?;
        let g1 = self.group(&x[3..6])?;
        let f_prev = g1.inverse().compose(&g0);
        let f_next = dep_step_mv(&f_prev, &self.inertia, &self.newton)?.value;
        let g2 = g1.compose(&f_next.inverse());
        let mut out = x[3..6].to_vec();
        out.extend(self.chart(&g2)?);
        Ok(out)
    }

    pub fn check(&self, point: &[f64]) -> Result<SymplecticOutcome> {
        symplectic_check(&|x| self.mixed_hessian(x), &|x| self.step_map(x), point)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub method: Method,
    pub step_sizes: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub fit_residual: f64,
}

/// Number of steps of size h covering `final_time`, when that is an integer.
fn steps_for(final_time: f64, h: f64) -> Result<usize> {
    let n = (final_time / h).round();
    if n < 1.0 || (n * h - final_time).abs() > 1e-9 * final_time {
        return Err(Error::Validation(format!("final time {final_time} is not a multiple of h = {h}")));
    }
    Ok(n as usize)
}

/// Final-time momentum errors against an RK4 reference run at `h_min/100`.
/// Step sizes are integrated concurrently.
pub fn convergence_study(
    method: Method,
    inertia: &InertiaSpec,
    pi0: &Momentum,
    final_time: f64,
    h_list: &[f64],
    newton: &NewtonConfig,
) -> Result<OrderReport> {
    if h_list.len() < 4 {
        return Err(Error::Validation("convergence study needs at least 4 step sizes".into()));
    }
    let h_min = h_list.iter().copied().fold(f64::INFINITY, f64::min);
    let h_ref = h_min / 100.0;
    let counts = h_list
        .iter()
        .map(|&h| steps_for(final_time, h))
        .collect::<Result<Vec<_>>>()?;
    let ref_steps = steps_for(final_time, h_ref)?;

    let (reference, finals) = std::thread::scope(|scope| {
        let reference = scope.spawn(|| propagate_momentum(Method::Rk4, inertia, pi0, h_ref, ref_steps, newton));
        let handles: Vec<_> = h_list
            .iter()
            .zip(&counts)
            .map(|(&h, &steps)| scope.spawn(move || propagate_momentum(method, inertia, pi0, h, steps, newton)))
            .collect();
        let finals: Vec<Result<Momentum>> = handles.into_iter().map(|h| h.join().expect("worker panicked")).collect();
        (reference.join().expect("worker panicked"), finals)
    });
    let reference = reference?;
    let errors = finals
        .into_iter()
        .map(|r| r.map(|p| (&p - &reference).norm()))
        .collect::<Result<Vec<_>>>()?;
    let (slope, fit_residual) = loglog_slope(h_list, &errors);
    Ok(OrderReport {
        method,
        step_sizes: h_list.to_vec(),
        errors,
        slope,
        fit_residual,
    })
}

/// Geometric step sizes `h_max, h_max/2, …`.
pub fn halving_steps(h_max: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| h_max / 2f64.powi(k as i32)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodDrift {
    pub method: Method,
    pub casimir: DriftReport,
    pub energy: DriftReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub h: f64,
    pub steps: usize,
    pub methods: Vec<MethodDrift>,
}

/// Runs dep_mv, splitting_leapfrog and rk4 on the same data, concurrently.
pub fn compare_methods(config: &SimulationConfig) -> Result<CompareReport> {
    let methods = [Method::DepMv, Method::SplittingLeapfrog, Method::Rk4];
    let inertia = config.inertia()?;
    let runs: Vec<Result<Trajectory>> = std::thread::scope(|scope| {
        let handles: Vec<_> = methods
            .iter()
            .map(|&m| {
                let mut cfg = config.clone();
                cfg.method = m;
                scope.spawn(move || run_trajectory(&cfg))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = Vec::new();
    for (m, run) in methods.iter().zip(runs) {
        let traj = run?;
        out.push(MethodDrift {
            method: *m,
            casimir: casimir_drift(&traj),
            energy: energy_drift(&traj, &inertia)?,
        });
    }
    Ok(CompareReport {
        h: config.h,
        steps: config.steps,
        methods: out,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckResult {
    fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value < threshold,
        }
    }
}

/// Runs the invariant suite that applies to a trajectory produced by `config`.
pub fn check_suite(config: &SimulationConfig, traj: &Trajectory) -> Result<Vec<CheckResult>> {
    let inertia = config.inertia()?;
    let mut out = Vec::new();
    let geometric = config.method != Method::Rk4;
    if geometric {
        out.push(CheckResult::below("casimir_spectrum_drift", casimir_drift(traj).max_abs_drift, 1e-10));
    }
    let energy = energy_drift(traj, &inertia)?;
    if geometric && traj.records.len() >= 1000 {
        out.push(CheckResult {
            name: "energy_secular_z".into(),
            value: energy.trend.z.abs(),
            threshold: SECULAR_Z,
            passed: !energy.trend.significant,
        });
    }
    if matches!(config.method, Method::DepMv | Method::DepChart) {
        out.push(CheckResult::below("noether_drift", noether_check(traj)?.max_abs_drift, 1e-10));
        let defect = traj
            .records
            .iter()
            .filter_map(|r| r.g.as_ref().map(|g| g.orthogonality_defect()))
            .fold(0.0, f64::max);
        out.push(CheckResult::below("orthogonality_defect", defect, 1e-10));
    }
    if config.method == Method::DepMv {
        out.push(CheckResult::below("mv_equivalence", mv_equivalence_max(traj, &inertia)?, 1e-10));
        if config.n == 3 {
            let system = MvChartSystem::new(GroupElement::identity(3), inertia.clone())?;
            let q1 = config_chart_start(traj)?;
            let point: Vec<f64> = [0.0, 0.0, 0.0].iter().copied().chain(q1).collect();
            if let SymplecticOutcome::Residual { value } = system.check(&point)? {
                out.push(CheckResult::below("symplectic_form", value, 1e-5));
            }
        }
    }
    Ok(out)
}

/// Chart point of `g₁ = g₀ f₁₀⁻¹` relative to `g₀`, from the first step of a
/// left-invariant DEP trajectory.
fn config_chart_start(traj: &Trajectory) -> Result<Vec<f64>> {
    let f = traj
        .records
        .get(1)
        .and_then(|r| r.f.as_ref())
        .ok_or_else(|| Error::Validation("symplectic check needs at least one step".into()))?;
    let f = match traj.side {
        Side::Left => f.clone(),
        Side::Right => f.inverse(),
    };
    Ok(log(&f.inverse())?.coords())
}
