//! Comparison integrators: exact-flow splitting on so(3)* and classical RK4.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_core::{coadjoint, exp, AlgebraElement, Momentum};
use crate::rigid_body::{continuous_ep_rhs, InertiaSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingOrder {
    /// `φ¹_h ∘ ⋯ ∘ φᴺ_h`.
    First,
    /// Strang composition: half steps in list order, then half steps reversed.
    Leapfrog,
}

/// Splitting of `H = Σ πᵢ²/(2Iᵢ)` into single-axis pieces, each of which
/// rotates π rigidly about its axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingScheme {
    pub order: SplittingOrder,
    /// Axis indices, applied in this order.
    pub sub_hamiltonians: Vec<usize>,
}

impl SplittingScheme {
    pub fn first_order() -> Self {
        Self {
            order: SplittingOrder::First,
            sub_hamiltonians: vec![0, 1, 2],
        }
    }

    pub fn leapfrog() -> Self {
        Self {
            order: SplittingOrder::Leapfrog,
            sub_hamiltonians: vec![0, 1, 2],
        }
    }
}

/// Exact flow of `πᵢ²/(2Iᵢ)` for time `t`: rotation of π about axis i by `−t πᵢ/Iᵢ`.
pub fn axis_flow(pi: &Momentum, moments: &[f64; 3], axis: usize, t: f64) -> Result<Momentum> {
    if axis > 2 {
        return Err(Error::Validation(format!("splitting axis {axis} out of range")));
    }
    let v = pi.vee3();
    let mut w = [0.0; 3];
    w[axis] = -t * v[axis] / moments[axis];
    let r = exp(&AlgebraElement::hat3(w));
    // R Π Rᵀ
    coadjoint(&r.inverse(), pi)
}

pub fn splitting_step(pi: &Momentum, inertia: &InertiaSpec, h: f64, scheme: &SplittingScheme) -> Result<Momentum> {
    if pi.n() != 3 || inertia.n() != 3 {
        return Err(Error::UnsupportedDimension {
            n: pi.n(),
            what: "splitting is implemented for so(3) only",
        });
    }
    let moments = inertia.principal_moments().expect("n = 3");
    let mut out = pi.clone();
    match scheme.order {
        SplittingOrder::First => {
            for &axis in &scheme.sub_hamiltonians {
                out = axis_flow(&out, &moments, axis, h)?;
            }
        }
        SplittingOrder::Leapfrog => {
            for &axis in &scheme.sub_hamiltonians {
                out = axis_flow(&out, &moments, axis, 0.5 * h)?;
            }
            for &axis in scheme.sub_hamiltonians.iter().rev() {
                out = axis_flow(&out, &moments, axis, 0.5 * h)?;
            }
        }
    }
    Ok(out)
}

/// Classical four-stage Runge-Kutta on `Π̇ = ad*_{J⁻¹Π} Π`.
pub fn rk4_step(pi: &Momentum, inertia: &InertiaSpec, h: f64) -> Result<Momentum> {
    let k1 = continuous_ep_rhs(inertia, pi)?;
    let k2 = continuous_ep_rhs(inertia, &(pi + &k1.scale(0.5 * h)))?;
    let k3 = continuous_ep_rhs(inertia, &(pi + &k2.scale(0.5 * h)))?;
    let k4 = continuous_ep_rhs(inertia, &(pi + &k3.scale(h)))?;
    let incr = &(&(&k1 + &k2.scale(2.0)) + &k3.scale(2.0)) + &k4;
    Ok(pi + &incr.scale(h / 6.0))
}
