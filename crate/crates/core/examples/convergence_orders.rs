//! Empirical convergence orders of every integrator against a fine RK4 reference.

use discrete_ep::cli_io::Method;
use discrete_ep::diagnostics::{convergence_study, halving_steps};
use discrete_ep::integrators::NewtonConfig;
use discrete_ep::{InertiaSpec, Momentum};

fn main() -> discrete_ep::Result<()> {
    let inertia = InertiaSpec::new(vec![1.0, 2.0, 3.0])?;
    let pi0 = Momentum::from_coords(3, &[0.6, -0.8, 1.0])?;
    let hs = halving_steps(0.4, 5);
    for method in Method::ALL {
        let r = convergence_study(method, &inertia, &pi0, 4.0, &hs, &NewtonConfig::default())?;
        let errs: Vec<String> = r.errors.iter().map(|e| format!("{e:.2e}")).collect();
        println!("{:<20} slope {:5.2}  errors {}", method.to_string(), r.slope, errs.join(" "));
    }
    Ok(())
}
