//! Generalized rigid body on SO(n) with inertia operator `J(ξ) = Λξ + ξΛ`.
//!
//! Energy convention: `L(ξ) = ¼⟨ξ, J(ξ)⟩ = ½ Tr(ξᵀΛξ)`. The chart-based
//! discrete Lagrangians use `½⟨ζ, J(ζ)⟩`, i.e. [`CHART_LAGRANGIAN_SCALE`]
//! instead of [`KINETIC_SCALE`]; overall scaling drops out of every discrete
//! Euler-Poincaré equation.
//!
//! For n = 3 with `ξ = hat(Ω)` the principal moments of inertia are
//! `I_0 = Λ_1 + Λ_2`, `I_1 = Λ_0 + Λ_2`, `I_2 = Λ_0 + Λ_1`, and
//! `J(hat(Ω)) = hat(IΩ)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_core::{coad, coadjoint, pairing, AlgebraElement, GroupElement, Momentum};

/// Factor in `L(ξ) = KINETIC_SCALE·⟨ξ, Jξ⟩`.
pub const KINETIC_SCALE: f64 = 0.25;

/// Factor in the chart discrete Lagrangian `CHART_LAGRANGIAN_SCALE·⟨ζ, Jζ⟩`.
pub const CHART_LAGRANGIAN_SCALE: f64 = 0.5;

const DEGENERATE_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InertiaSpec {
    lambda: Vec<f64>,
}

impl InertiaSpec {
    /// Requires `Λ_i + Λ_j > 0` for every pair `i ≠ j`.
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.len() < 2 {
            return Err(Error::Validation(format!(
                "lambda must have at least 2 entries, got {}",
                lambda.len()
            )));
        }
        if lambda.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation("lambda entries must be finite".into()));
        }
        for i in 0..lambda.len() {
            for j in (i + 1)..lambda.len() {
                let sum = lambda[i] + lambda[j];
                if sum.abs() < DEGENERATE_TOL {
                    return Err(Error::DegenerateInertia { i, j, sum });
                }
                if sum <= 0.0 {
                    return Err(Error::Validation(format!(
                        "inertia requires Λ_i+Λ_j>0 for all i≠j; Λ_{i}+Λ_{j} = {sum}"
                    )));
                }
            }
        }
        Ok(Self { lambda })
    }

    /// Inertia with given principal moments `(I_0, I_1, I_2)` on SO(3).
    pub fn from_principal_moments(moments: [f64; 3]) -> Result<Self> {
        let total = 0.5 * (moments[0] + moments[1] + moments[2]);
        Self::new(vec![total - moments[0], total - moments[1], total - moments[2]])
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn lambda_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.lambda))
    }

    /// Principal moments of inertia for n = 3.
    pub fn principal_moments(&self) -> Option<[f64; 3]> {
        let l = &self.lambda;
        (l.len() == 3).then(|| [l[1] + l[2], l[0] + l[2], l[0] + l[1]])
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                got: n,
            })
        }
    }
}

/// `(Jξ)_ij = (Λ_i + Λ_j) ξ_ij`.
pub fn inertia_apply(inertia: &InertiaSpec, xi: &AlgebraElement) -> Result<Momentum> {
    inertia.check(xi.n())?;
    let l = &inertia.lambda;
    let m = DMatrix::from_fn(xi.n(), xi.n(), |i, j| (l[i] + l[j]) * xi.matrix()[(i, j)]);
    Ok(Momentum::from_skew_unchecked(m))
}

/// `ξ_ij = μ_ij / (Λ_i + Λ_j)`.
pub fn inertia_invert(inertia: &InertiaSpec, mu: &Momentum) -> Result<AlgebraElement> {
    inertia.check(mu.n())?;
    let l = &inertia.lambda;
    let n = mu.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let sum = l[i] + l[j];
            if sum.abs() < DEGENERATE_TOL {
                return Err(Error::DegenerateInertia { i, j, sum });
            }
        }
    }
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            mu.matrix()[(i, j)] / (l[i] + l[j])
        }
    });
    Ok(AlgebraElement::from_skew_unchecked(m))
}

/// `¼⟨ξ, J(ξ)⟩`.
pub fn kinetic_energy(inertia: &InertiaSpec, xi: &AlgebraElement) -> Result<f64> {
    Ok(KINETIC_SCALE * pairing(&inertia_apply(inertia, xi)?, xi)?)
}

/// `½ Tr(ξᵀ Λ ξ)`; equal to [`kinetic_energy`].
pub fn kinetic_energy_trace(inertia: &InertiaSpec, xi: &AlgebraElement) -> Result<f64> {
    inertia.check(xi.n())?;
    let x = xi.matrix();
    Ok(0.5 * (x.transpose() * inertia.lambda_matrix() * x).trace())
}

/// Kinetic energy expressed through body momentum, `¼⟨J⁻¹Π, Π⟩`.
pub fn momentum_energy(inertia: &InertiaSpec, pi: &Momentum) -> Result<f64> {
    let xi = inertia_invert(inertia, pi)?;
    Ok(KINETIC_SCALE * pairing(pi, &xi)?)
}

/// `m_s = Ad*_{g⁻¹} m_c = g m_c gᵀ`.
pub fn spatial_from_body(g: &GroupElement, body: &Momentum) -> Result<Momentum> {
    coadjoint(&g.inverse(), body)
}

/// `m_c = Ad*_g m_s = gᵀ m_s g`.
pub fn body_from_spatial(g: &GroupElement, spatial: &Momentum) -> Result<Momentum> {
    coadjoint(g, spatial)
}

/// Body and spatial momentum held together at a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct BodySpatialPair {
    pub body: Momentum,
    pub spatial: Momentum,
    pub at: GroupElement,
}

impl BodySpatialPair {
    pub fn from_body(at: GroupElement, body: Momentum) -> Result<Self> {
        let spatial = spatial_from_body(&at, &body)?;
        Ok(Self { body, spatial, at })
    }

    /// `‖spatial − Ad*_{g⁻¹} body‖`.
    pub fn consistency_defect(&self) -> Result<f64> {
        Ok((&spatial_from_body(&self.at, &self.body)? - &self.spatial).norm())
    }
}

/// Free rigid body Euler equations `Π̇ = ad*_ξ Π = [Π, ξ]`, `ξ = J⁻¹Π`.
/// For n = 3 this is `π̇ = π × Ω`.
pub fn continuous_ep_rhs(inertia: &InertiaSpec, pi: &Momentum) -> Result<Momentum> {
    let xi = inertia_invert(inertia, pi)?;
    coad(&xi, pi)
}
