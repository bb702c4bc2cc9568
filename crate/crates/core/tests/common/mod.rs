//! Test-only oracles shared by the integration targets.
#![allow(dead_code)]

use discrete_ep::lie_core::{exp, log, AlgebraElement, GroupElement};
use discrete_ep::InertiaSpec;
use nalgebra::{DMatrix, DVector};

/// Σ over basis directions a of the discrete Euler-Lagrange residual
/// `D₂𝕃(g_{k−1}, g_k)·(g_k a) + D₁𝕃(g_k, g_{k+1})·(g_k a)` for
/// `𝕃(g, g') = Tr(g Λ g'ᵀ)`; the constant prefactor of 𝕃 drops out.
pub fn del_residual(
    g_prev: &GroupElement,
    g: &GroupElement,
    g_next: &GroupElement,
    inertia: &InertiaSpec,
) -> DVector<f64> {
    let n = g.n();
    let lam = inertia.lambda_matrix();
    let d = n * (n - 1) / 2;
    let mut out = DVector::zeros(d);
    let mut coords = vec![0.0; d];
    for k in 0..d {
        coords[k] = 1.0;
        let a = AlgebraElement::from_coords(n, &coords).unwrap();
        coords[k] = 0.0;
        let ga = g.matrix() * a.matrix();
        let d1 = (&ga * &lam * g_next.matrix().transpose()).trace();
        let d2 = (g_prev.matrix() * &lam * ga.transpose()).trace();
        out[k] = d1 + d2;
    }
    out
}

/// Solves the DEL equations for `g_{k+1} = g_k exp(Y)` by Newton iteration
/// with a finite-difference Jacobian, starting from the previous increment.
pub fn del_step(g_prev: &GroupElement, g: &GroupElement, inertia: &InertiaSpec) -> GroupElement {
    let n = g.n();
    let d = n * (n - 1) / 2;
    let mut y = log(&g_prev.inverse().compose(g)).unwrap().coord_vector();
    let eval = |y: &DVector<f64>| {
        let step = exp(&AlgebraElement::from_coords(n, y.as_slice()).unwrap());
        del_residual(g_prev, g, &g.compose(&step), inertia)
    };
    for _ in 0..60 {
        let r = eval(&y);
        if r.norm() < 1e-15 {
            break;
        }
        let eps = 1e-7;
        let mut jac = DMatrix::zeros(d, d);
        for k in 0..d {
            let mut p = y.clone();
            let mut m = y.clone();
            p[k] += eps;
            m[k] -= eps;
            jac.set_column(k, &((eval(&p) - eval(&m)) / (2.0 * eps)));
        }
        let delta = jac.lu().solve(&r).expect("nonsingular DEL Jacobian");
        y -= &delta;
        if delta.norm() < 1e-16 {
            break;
        }
    }
    g.compose(&exp(&AlgebraElement::from_coords(n, y.as_slice()).unwrap()))
}

/// Λ = diag(1, 2, 3).
pub fn diag123() -> InertiaSpec {
    InertiaSpec::new(vec![1.0, 2.0, 3.0]).unwrap()
}
