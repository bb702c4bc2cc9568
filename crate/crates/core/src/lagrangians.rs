//! Discrete Lagrangians on SO(n)×SO(n) and their reductions to SO(n).
//!
//! Two constructions are provided for the rigid body:
//!
//! * the exponential chart, `𝕃(g_k, g_{k+1}) = ½⟨ζ, Jζ⟩` with
//!   `ζ = log(f)/h`, `f` the quotient of the pair;
//! * the Moser-Veselov trace form `𝕃(g_k, g_{k+1}) = −(1/h²) Tr(g_k Λ g_{k+1}ᵀ)`,
//!   whose reduction is `ℓ(f) = Tr(fΛ)` without the `−1/h²` factor.
//!
//! Quotient maps: right-invariant pairs reduce to `f = g_k g_{k+1}⁻¹`,
//! left-invariant pairs to `f = g_{k+1}⁻¹ g_k`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_core::{exp, iex_op, log, pairing, AlgebraElement, GroupElement};
use crate::rigid_body::{inertia_apply, InertiaSpec, CHART_LAGRANGIAN_SCALE};

/// Which diagonal action the Lagrangian is invariant under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagrangianKind {
    Chart,
    MoserVeselov,
}

/// Multiplier relating the Moser-Veselov discrete Lagrangian to its
/// reduced trace form: `𝕃 = mv_scale(h) · ℓ`.
pub fn mv_scale(h: f64) -> f64 {
    -1.0 / (h * h)
}

/// The reduced variable of a pair.
pub fn quotient(g1: &GroupElement, g2: &GroupElement, side: Side) -> GroupElement {
    match side {
        Side::Right => g1.compose(&g2.inverse()),
        Side::Left => g2.inverse().compose(g1),
    }
}

fn quadratic(inertia: &InertiaSpec, zeta: &AlgebraElement) -> Result<f64> {
    Ok(CHART_LAGRANGIAN_SCALE * pairing(&inertia_apply(inertia, zeta)?, zeta)?)
}

/// Chart discrete Lagrangian with the chart based at `g_{k+1}`.
pub fn chart_discrete_lagrangian(
    g1: &GroupElement,
    g2: &GroupElement,
    h: f64,
    inertia: &InertiaSpec,
    side: Side,
) -> Result<f64> {
    chart_reduced_lagrangian(&quotient(g1, g2, side), h, inertia)
}

/// Chart discrete Lagrangian with an arbitrary chart base point.
///
/// The chart is `ψ(x) = log(x·baseᵀ)` (right) or `log(baseᵀ·x)` (left); the
/// Lagrangian evaluates the kinetic energy on the trivialized velocity of the
/// chart curve at the coordinate midpoint `η`.
pub fn chart_discrete_lagrangian_general(
    g1: &GroupElement,
    g2: &GroupElement,
    base: &GroupElement,
    h: f64,
    inertia: &InertiaSpec,
    side: Side,
) -> Result<f64> {
    let psi = |x: &GroupElement| match side {
        Side::Right => log(&x.compose(&base.inverse())),
        Side::Left => log(&base.inverse().compose(x)),
    };
    let p1 = psi(g1)?;
    let p2 = psi(g2)?;
    let eta = (&p1 + &p2).scale(0.5);
    let zeta = (&p2 - &p1).scale(1.0 / h);
    // right-trivialized derivative of exp is iex(ad_η), left-trivialized iex(−ad_η)
    let fiber = match side {
        Side::Right => iex_op(&-&eta).apply(&zeta),
        Side::Left => iex_op(&eta).apply(&zeta),
    };
    quadratic(inertia, &fiber)
}

/// Midpoint `q` of the chart based at `g2`: `exp(½ log(g1 g2⁻¹))·g2` (right)
/// or `g2·exp(½ log(g2⁻¹ g1))` (left).
pub fn chart_base_point(g1: &GroupElement, g2: &GroupElement, side: Side) -> Result<GroupElement> {
    let half = log(&quotient(g1, g2, side))?.scale(0.5);
    Ok(match side {
        Side::Right => exp(&half).compose(g2),
        Side::Left => g2.compose(&exp(&half)),
    })
}

/// `ℓ(f) = (1/2h²)⟨log f, J log f⟩`.
pub fn chart_reduced_lagrangian(f: &GroupElement, h: f64, inertia: &InertiaSpec) -> Result<f64> {
    let zeta = log(f)?.scale(1.0 / h);
    quadratic(inertia, &zeta)
}

/// `−(1/h²) Tr(g_k Λ g_{k+1}ᵀ)`.
pub fn mv_discrete_lagrangian(
    gk: &GroupElement,
    gk1: &GroupElement,
    h: f64,
    inertia: &InertiaSpec,
) -> f64 {
    mv_scale(h) * (gk.matrix() * inertia.lambda_matrix() * gk1.matrix().transpose()).trace()
}

/// `ℓ(f) = Tr(fΛ)`.
pub fn mv_reduced_lagrangian(f: &GroupElement, inertia: &InertiaSpec) -> f64 {
    (f.matrix() * inertia.lambda_matrix()).trace()
}

/// Velocity discretization `ξ ≈ (1/h) g_{k+1}ᵀ (g_{k+1} − g_k)`.
#[derive(Clone, Debug)]
pub struct MvVelocity {
    /// The raw, generally non-skew, difference quotient.
    pub raw: DMatrix<f64>,
    pub skew: AlgebraElement,
}

pub fn mv_velocity_discretization(gk: &GroupElement, gk1: &GroupElement, h: f64) -> MvVelocity {
    let raw = gk1.matrix().transpose() * (gk1.matrix() - gk.matrix()) / h;
    let skew = AlgebraElement::from_matrix(&raw).expect("square");
    MvVelocity { raw, skew }
}

/// A two-point discrete Lagrangian for the rigid body.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteLagrangian {
    pub kind: LagrangianKind,
    pub h: f64,
    pub inertia: InertiaSpec,
    pub side: Side,
}

/// The reduction `ℓ` of a [`DiscreteLagrangian`], satisfying `ℓ ∘ π = 𝕃`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedLagrangian {
    pub kind: LagrangianKind,
    pub h: f64,
    pub inertia: InertiaSpec,
    pub side: Side,
}

impl DiscreteLagrangian {
    pub fn new(kind: LagrangianKind, h: f64, inertia: InertiaSpec, side: Side) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Validation(format!("time step must be positive, got {h}")));
        }
        Ok(Self {
            kind,
            h,
            inertia,
            side,
        })
    }

    pub fn eval(&self, g1: &GroupElement, g2: &GroupElement) -> Result<f64> {
        match self.kind {
            LagrangianKind::Chart => chart_discrete_lagrangian(g1, g2, self.h, &self.inertia, self.side),
            LagrangianKind::MoserVeselov => Ok(match self.side {
                Side::Left => mv_discrete_lagrangian(g1, g2, self.h, &self.inertia),
                // mirror g ↦ g⁻¹ turns the left-invariant trace form into a right-invariant one
                Side::Right => mv_discrete_lagrangian(&g1.inverse(), &g2.inverse(), self.h, &self.inertia),
            }),
        }
    }

    pub fn reduce(&self) -> ReducedLagrangian {
        ReducedLagrangian {
            kind: self.kind,
            h: self.h,
            inertia: self.inertia.clone(),
            side: self.side,
        }
    }
}

impl ReducedLagrangian {
    /// Evaluates so that `eval(quotient(g1, g2, side)) == DiscreteLagrangian::eval(g1, g2)`.
    pub fn eval(&self, f: &GroupElement) -> Result<f64> {
        match self.kind {
            LagrangianKind::Chart => chart_reduced_lagrangian(f, self.h, &self.inertia),
            LagrangianKind::MoserVeselov => Ok(mv_scale(self.h) * mv_reduced_lagrangian(f, &self.inertia)),
        }
    }
}
