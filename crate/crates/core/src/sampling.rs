//! Seeded random fixtures shared by tests, examples and the CLI.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lie_core::{algebra_dim, project_group, AlgebraElement, GroupElement, Momentum};

pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn random_coords(d: usize, norm: f64, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
    // coordinate norm is the Frobenius norm divided by √2
    let len = raw.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let scale = norm / (len * 2f64.sqrt());
    raw.into_iter().map(|x| x * scale).collect()
}

/// Random direction with the given Frobenius norm.
pub fn random_algebra(n: usize, norm: f64, rng: &mut impl Rng) -> AlgebraElement {
    AlgebraElement::from_coords(n, &random_coords(algebra_dim(n), norm, rng)).expect("dimension")
}

pub fn random_momentum(n: usize, norm: f64, rng: &mut impl Rng) -> Momentum {
    Momentum::from_coords(n, &random_coords(algebra_dim(n), norm, rng)).expect("dimension")
}

/// Haar-distributed rotation (polar factor of a Gaussian matrix).
pub fn random_group(n: usize, rng: &mut impl Rng) -> GroupElement {
    let m = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    project_group(&m).expect("Gaussian matrices are almost surely nonsingular")
}
