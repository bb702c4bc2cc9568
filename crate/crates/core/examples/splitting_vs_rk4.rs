//! Orbit-invariant and energy drift of the DLP scheme, leapfrog splitting and
//! RK4 at the same step size.

use discrete_ep::cli_io::{Method, SimulationConfig};
use discrete_ep::diagnostics::compare_methods;

fn main() -> discrete_ep::Result<()> {
    let cfg = SimulationConfig::new(vec![1.0, 2.0, 3.0], 0.3, 100_000, Method::DepMv).with_pi0(vec![2.0, 1.0, -1.5]);
    let report = compare_methods(&cfg)?;
    println!("h = {}, {} steps", report.h, report.steps);
    println!("{:<20} {:>14} {:>14} {:>10}", "method", "spectrum", "energy (rel)", "trend z");
    for m in &report.methods {
        println!(
            "{:<20} {:>14.3e} {:>14.3e} {:>10.1}",
            m.method.to_string(),
            m.casimir.max_abs_drift,
            m.energy.max_rel_drift,
            m.energy.trend.z
        );
    }
    Ok(())
}
