//! Exponential, logarithm, Cayley map and the iex/χ operators on so(3) and so(4).

use discrete_ep::lie_core::{adjoint, cayley, cayley_inverse, chi_op, exp, iex_op, log, AlgebraElement};
use discrete_ep::sampling::{random_algebra, rng};

fn main() -> discrete_ep::Result<()> {
    let xi = AlgebraElement::hat3([0.3, -1.1, 0.7]);
    let g = exp(&xi);
    println!("exp(xi) =\n{g}");
    println!("orthogonality defect: {:.2e}", g.orthogonality_defect());
    println!("log(exp(xi)) - xi: {:.2e}", (&log(&g)? - &xi).norm());

    let c = cayley(&xi);
    println!("cay(xi) vs exp(xi): {:.2e}", c.distance(&g));
    println!("cay^-1(cay(xi)) - xi: {:.2e}", (&cayley_inverse(&c)? - &xi).norm());

    // χ inverts iex; both are operators on the 6-dimensional so(4)
    let mut r = rng(1);
    let eta = random_algebra(4, 1.5, &mut r);
    let prod = chi_op(&eta)?.compose(&iex_op(&eta));
    println!("|chi(eta) iex(eta) - I| on so(4): {:.2e}", prod.distance_to_identity());

    // Ad_exp(η) η = η
    let fixed = adjoint(&exp(&eta), &eta)?;
    println!("|Ad_exp(eta) eta - eta|: {:.2e}", (&fixed - &eta).norm());
    Ok(())
}
