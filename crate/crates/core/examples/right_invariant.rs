//! A right-invariant run. The spatial momentum μ is transported by Ad*, and
//! the body-frame quantity gᵀμg stays fixed.

use discrete_ep::cli_io::{InitialData, Method, SimulationConfig};
use discrete_ep::diagnostics::{casimir_drift, noether_check};
use discrete_ep::integrators::run_trajectory;
use discrete_ep::Side;

fn main() -> discrete_ep::Result<()> {
    let mut cfg = SimulationConfig::new(vec![0.5, 1.0, 1.5, 2.0], 0.02, 2_000, Method::DepMv);
    cfg.side = Side::Right;
    cfg.initial = Some(InitialData {
        xi0: Some(vec![0.3, -0.2, 0.5, 0.1, 0.4, -0.6]),
        ..Default::default()
    });
    let traj = run_trajectory(&cfg)?;
    println!("n = {}, steps = {}", traj.n, traj.records.len() - 1);
    println!("final μ coordinates: {:?}", traj.last().pi.coords());
    println!("spectrum of μ: {:?}", traj.last().pi.spectrum());
    println!("spectrum drift: {:.2e}", casimir_drift(&traj).max_abs_drift);
    println!("gᵀμg drift: {:.2e}", noether_check(&traj)?.max_abs_drift);
    Ok(())
}
