//! The exponential-chart DEP scheme next to the Moser-Veselov scheme on the
//! same initial momentum.

use discrete_ep::cli_io::{Method, SimulationConfig};
use discrete_ep::diagnostics::energy_drift;
use discrete_ep::integrators::{chart_momentum, dep_step_chart, run_trajectory, NewtonConfig};
use discrete_ep::lie_core::AlgebraElement;
use discrete_ep::InertiaSpec;

fn main() -> discrete_ep::Result<()> {
    let inertia = InertiaSpec::new(vec![1.0, 2.0, 3.0])?;
    let h = 0.05;

    // a single step in terms of ζ = log(f)/h
    let zeta = AlgebraElement::hat3([0.4, 0.9, -0.2]);
    let next = dep_step_chart(&zeta, &inertia, h, &NewtonConfig::default())?;
    println!(
        "one chart step: ζ = {:?} -> {:?} ({} iterations)",
        zeta.vee3(),
        next.value.vee3(),
        next.iterations
    );
    println!("χᵀJζ at the new step: {:?}", chart_momentum(&next.value, h, &inertia)?.vee3());

    for method in [Method::DepChart, Method::DepMv] {
        let cfg = SimulationConfig::new(vec![1.0, 2.0, 3.0], h, 4_000, method).with_pi0(vec![0.6, -0.8, 1.0]);
        let traj = run_trajectory(&cfg)?;
        let e = energy_drift(&traj, &inertia)?;
        println!(
            "{method:<10} final Π = {:?}  max |ΔE|/E = {:.3e}",
            traj.last().pi.vee3(),
            e.max_rel_drift
        );
    }
    Ok(())
}
