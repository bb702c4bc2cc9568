//! Rigid bodies on SO(4) and SO(5): the full spectrum of Π is an orbit invariant.

use discrete_ep::cli_io::{Method, SimulationConfig};
use discrete_ep::diagnostics::{casimir_drift, trace_casimir_drift};
use discrete_ep::integrators::run_trajectory;

fn main() -> discrete_ep::Result<()> {
    for lambda in [vec![0.4, 0.9, 1.6, 2.5], vec![0.3, 0.8, 1.1, 1.7, 2.2]] {
        let mut cfg = SimulationConfig::new(lambda, 0.02, 5_000, Method::DepMv);
        cfg.seed = 9;
        let traj = run_trajectory(&cfg)?;
        println!("n = {}", traj.n);
        println!("  initial spectrum {:?}", traj.records[0].pi.spectrum());
        println!("  final spectrum   {:?}", traj.last().pi.spectrum());
        println!("  spectrum drift   {:.2e}", casimir_drift(&traj).max_abs_drift);
        for r in trace_casimir_drift(&traj) {
            println!("  {} drift {:.2e}", r.quantity, r.max_rel_drift);
        }
    }
    Ok(())
}
