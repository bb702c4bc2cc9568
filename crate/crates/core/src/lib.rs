//! Discrete Euler-Poincaré (DEP) and discrete Lie-Poisson (DLP) integrators
//! for left- or right-invariant systems on SO(n), with the free rigid body
//! as the worked system.
//!
//! Conventions used throughout:
//! - so(n) elements are skew matrices; the pairing is `⟨μ, ξ⟩ = Tr(μᵀξ)`,
//!   which identifies so(n)* with so(n).
//! - Coordinates are `ξ_ij`, `i < j` in lexicographic order, so the basis
//!   `e_i e_jᵀ − e_j e_iᵀ` has Gram matrix `2·I`.
//! - `ad_η ξ = ηξ − ξη`, `Ad_g ξ = g ξ gᵀ`, `Ad*_g μ = gᵀ μ g`,
//!   `ad*_ξ μ = μξ − ξμ`.
//! - The rigid-body inertia is `J(ξ) = Λξ + ξΛ`.

pub mod baselines;
pub mod cli_io;
pub mod diagnostics;
pub mod error;
pub mod integrators;
pub mod lagrangians;
pub mod lie_core;
pub mod rigid_body;
pub mod sampling;

pub use error::{Error, Result};
pub use lagrangians::Side;
pub use lie_core::{AlgebraElement, GroupElement, Momentum};
pub use rigid_body::InertiaSpec;
