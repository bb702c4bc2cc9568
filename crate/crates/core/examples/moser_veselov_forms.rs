//! Residuals of the equivalent forms of one Moser-Veselov step: the DEP
//! relation, momentum transport, the incremental-rotation form and the
//! mirrored right-trivialized form.

use discrete_ep::integrators::{dep_step_mv, mv_equivalence_check, mv_momentum, NewtonConfig};
use discrete_ep::lie_core::exp;
use discrete_ep::sampling::{random_algebra, rng};
use discrete_ep::InertiaSpec;

fn main() -> discrete_ep::Result<()> {
    let inertia = InertiaSpec::new(vec![0.7, 1.3, 2.1, 2.9])?;
    let mut r = rng(3);
    let mut f = exp(&random_algebra(4, 0.2, &mut r));
    for k in 0..5 {
        let next = dep_step_mv(&f, &inertia, &NewtonConfig::default())?;
        let res = mv_equivalence_check(&f, &next.value, &inertia);
        println!(
            "step {k}: |M| = {:.6}  newton = {}  dep {:.1e}  transport {:.1e}  increment {:.1e}  mirrored {:.1e}",
            mv_momentum(&next.value, &inertia).norm(),
            next.iterations,
            res.dep,
            res.transport,
            res.lewis_simo,
            res.bobenko_suris
        );
        f = next.value;
    }
    Ok(())
}
