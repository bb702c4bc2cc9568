//! Finite-difference check that the DEP step preserves the discrete symplectic
//! form, and that a slightly perturbed map does not.

use discrete_ep::diagnostics::{symplectic_check, MvChartSystem};
use discrete_ep::sampling::{random_algebra, random_group, rng};
use discrete_ep::InertiaSpec;

fn main() -> discrete_ep::Result<()> {
    let inertia = InertiaSpec::new(vec![1.0, 2.0, 3.0])?;
    let mut r = rng(11);
    for k in 0..5 {
        let system = MvChartSystem::new(random_group(3, &mut r), inertia.clone())?;
        let q0 = random_algebra(3, 0.5, &mut r).coords();
        let dq = random_algebra(3, 0.1, &mut r).coords();
        let point: Vec<f64> = q0.iter().copied().chain(q0.iter().zip(&dq).map(|(a, b)| a + b)).collect();

        let exact = system.check(&point)?;
        let perturbed = symplectic_check(
            &|x| system.mixed_hessian(x),
            &|x| {
                let mut y = system.step_map(x)?;
                y[3..].iter_mut().for_each(|v| *v *= 1.05);
                Ok(y)
            },
            &point,
        )?;
        println!(
            "point {k}: DEP residual {:.2e}, perturbed residual {:.2e}",
            exact.residual().unwrap_or(f64::NAN),
            perturbed.residual().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
