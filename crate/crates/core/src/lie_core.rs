//! SO(n) / so(n) kernel.
//!
//! Group elements are n×n special-orthogonal matrices, algebra elements and
//! momenta are n×n skew matrices. Duals are identified with skew matrices
//! through the trace pairing `⟨μ, ξ⟩ = Tr(μᵀ ξ)`, which turns every
//! coadjoint operation into a matrix conjugation or commutator:
//!
//! | operation        | formula      |
//! |------------------|--------------|
//! | `adjoint(g, ξ)`  | `g ξ gᵀ`     |
//! | `coadjoint(g, μ)`| `gᵀ μ g`     |
//! | `ad(η, ξ)`       | `η ξ − ξ η`  |
//! | `coad(ξ, μ)`     | `μ ξ − ξ μ`  |
//!
//! Coordinates on so(n) use the basis `E_ij = e_i e_jᵀ − e_j e_iᵀ` for `i < j`
//! in lexicographic order; the coordinate of `ξ` along `E_ij` is `ξ_ij`. The
//! pairing Gram matrix of that basis is `2·I`, so the pairing-transpose of a
//! coordinate operator is its plain matrix transpose.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default orthogonality tolerance (Frobenius norm of `g gᵀ − I` and `|det g − 1|`).
pub const DEFAULT_ORTHO_TOL: f64 = 1e-10;

/// Default angular margin kept between any rotation angle and π.
pub const DEFAULT_BRANCH_MARGIN: f64 = 0.1;

/// Series for iex stop once the next term's norm drops below this.
const SERIES_TOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 400;

/// Dimension of so(n).
pub fn algebra_dim(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

/// Recovers n from `d = n(n−1)/2`.
pub fn group_dim_from_algebra_dim(d: usize) -> Option<usize> {
    (2..64).find(|&n| algebra_dim(n) == d)
}

fn skew_part(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m - m.transpose()) * 0.5
}

fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

fn check_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if m.nrows() < 2 {
        return Err(Error::UnsupportedDimension {
            n: m.nrows(),
            what: "SO(n) requires n >= 2",
        });
    }
    Ok(m.nrows())
}

fn check_same(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a,
            got: b,
        })
    }
}

/// An element of SO(n).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    mat: DMatrix<f64>,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self {
            mat: DMatrix::identity(n, n),
        }
    }

    /// Validates orthogonality and orientation within [`DEFAULT_ORTHO_TOL`].
    pub fn from_matrix(mat: DMatrix<f64>) -> Result<Self> {
        Self::from_matrix_with_tol(mat, DEFAULT_ORTHO_TOL)
    }

    pub fn from_matrix_with_tol(mat: DMatrix<f64>, tol: f64) -> Result<Self> {
        check_square(&mat)?;
        let defect = orthogonality_defect(&mat);
        if defect > tol || !defect.is_finite() {
            return Err(Error::NotSpecialOrthogonal { defect });
        }
        Ok(Self { mat })
    }

    /// Row-major flattened entries.
    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(n, n, data))
    }

    pub(crate) fn from_matrix_unchecked(mat: DMatrix<f64>) -> Self {
        Self { mat }
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// Row-major flattened entries.
    pub fn to_row_vec(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.mat[(i, j)])
            .collect()
    }

    pub fn inverse(&self) -> Self {
        Self {
            mat: self.mat.transpose(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &GroupElement) -> Self {
        Self {
            mat: &self.mat * &other.mat,
        }
    }

    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.mat)
    }

    pub fn distance(&self, other: &GroupElement) -> f64 {
        (&self.mat - &other.mat).norm()
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.compose(rhs)
    }
}

fn orthogonality_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let gram = m * m.transpose() - DMatrix::identity(n, n);
    gram.norm().max((m.determinant() - 1.0).abs())
}

macro_rules! skew_type {
    ($name:ident) => {
        impl $name {
            pub fn zeros(n: usize) -> Self {
                Self {
                    mat: DMatrix::zeros(n, n),
                }
            }

            /// Canonicalizes to `(m − mᵀ)/2`.
            pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
                check_square(m)?;
                Ok(Self { mat: skew_part(m) })
            }

            pub(crate) fn from_skew_unchecked(mat: DMatrix<f64>) -> Self {
                Self { mat }
            }

            /// Builds from coordinates `ξ_ij`, `i < j`, lexicographic.
            pub fn from_coords(n: usize, coords: &[f64]) -> Result<Self> {
                if coords.len() != algebra_dim(n) {
                    return Err(Error::DimensionMismatch {
                        expected: algebra_dim(n),
                        got: coords.len(),
                    });
                }
                let mut mat = DMatrix::zeros(n, n);
                let mut k = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        mat[(i, j)] = coords[k];
                        mat[(j, i)] = -coords[k];
                        k += 1;
                    }
                }
                Ok(Self { mat })
            }

            pub fn coords(&self) -> Vec<f64> {
                let n = self.n();
                let mut out = Vec::with_capacity(algebra_dim(n));
                for i in 0..n {
                    for j in (i + 1)..n {
                        out.push(self.mat[(i, j)]);
                    }
                }
                out
            }

            pub fn coord_vector(&self) -> DVector<f64> {
                DVector::from_vec(self.coords())
            }

            /// so(3) hat map: `hat(a)·v = a × v`.
            pub fn hat3(v: [f64; 3]) -> Self {
                #[rustfmt::skip]
                let mat = DMatrix::from_row_slice(3, 3, &[
                    0.0, -v[2], v[1],
                    v[2], 0.0, -v[0],
                    -v[1], v[0], 0.0,
                ]);
                Self { mat }
            }

            /// Inverse of [`Self::hat3`]. Panics unless n = 3.
            pub fn vee3(&self) -> [f64; 3] {
                assert_eq!(self.n(), 3, "vee3 requires n = 3");
                [self.mat[(2, 1)], self.mat[(0, 2)], self.mat[(1, 0)]]
            }

            pub fn n(&self) -> usize {
                self.mat.nrows()
            }

            pub fn matrix(&self) -> &DMatrix<f64> {
                &self.mat
            }

            pub fn norm(&self) -> f64 {
                self.mat.norm()
            }

            pub fn scale(&self, s: f64) -> Self {
                Self {
                    mat: &self.mat * s,
                }
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                $name {
                    mat: &self.mat + &rhs.mat,
                }
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                $name {
                    mat: &self.mat - &rhs.mat,
                }
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name { mat: -&self.mat }
            }
        }

        impl Mul<f64> for &$name {
            type Output = $name;
            fn mul(self, rhs: f64) -> $name {
                self.scale(rhs)
            }
        }
    };
}

/// An element of so(n): velocities, chart coordinates, variations.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    mat: DMatrix<f64>,
}

/// An element of so(n)*, stored as a skew matrix under the trace pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct Momentum {
    mat: DMatrix<f64>,
}

skew_type!(AlgebraElement);
skew_type!(Momentum);

impl AlgebraElement {
    /// Reinterprets the same skew matrix as a dual element.
    pub fn to_momentum(&self) -> Momentum {
        Momentum {
            mat: self.mat.clone(),
        }
    }
}

impl Momentum {
    pub fn to_algebra(&self) -> AlgebraElement {
        AlgebraElement {
            mat: self.mat.clone(),
        }
    }

    /// Singular values in decreasing order; the spectrum of a real skew
    /// matrix is `±i σ_k`, so these are its coadjoint-orbit invariants.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.mat.clone().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// `Tr(Π^{2m})` for `m = 1..=⌊n/2⌋`.
    pub fn trace_casimirs(&self) -> Vec<f64> {
        let sq = &self.mat * &self.mat;
        let mut power = sq.clone();
        let mut out = Vec::new();
        for _ in 0..self.n() / 2 {
            out.push(power.trace());
            power = &power * &sq;
        }
        out
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SO({}){}", self.n(), self.mat)
    }
}

/// Linear operator on so(n) written in coordinates, `d×d` with `d = n(n−1)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdOperator {
    n: usize,
    mat: DMatrix<f64>,
}

impl AdOperator {
    pub fn identity(n: usize) -> Self {
        let d = algebra_dim(n);
        Self {
            n,
            mat: DMatrix::identity(d, d),
        }
    }

    pub fn from_matrix(n: usize, mat: DMatrix<f64>) -> Result<Self> {
        let d = algebra_dim(n);
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: mat.nrows(),
            });
        }
        Ok(Self { n, mat })
    }

    /// Builds the coordinate matrix of a linear map on skew matrices.
    fn from_fn(n: usize, f: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> Self {
        let d = algebra_dim(n);
        let mut mat = DMatrix::zeros(d, d);
        let mut e = vec![0.0; d];
        for k in 0..d {
            e[k] = 1.0;
            let basis = AlgebraElement::from_coords(n, &e).expect("basis coordinates");
            let image = AlgebraElement {
                mat: skew_part(&f(&basis.mat)),
            };
            mat.set_column(k, &image.coord_vector());
            e[k] = 0.0;
        }
        Self { n, mat }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn apply(&self, xi: &AlgebraElement) -> AlgebraElement {
        let c = &self.mat * xi.coord_vector();
        AlgebraElement::from_coords(self.n, c.as_slice()).expect("operator dimension")
    }

    pub fn apply_momentum(&self, mu: &Momentum) -> Momentum {
        let c = &self.mat * mu.coord_vector();
        Momentum::from_coords(self.n, c.as_slice()).expect("operator dimension")
    }

    /// Transpose with respect to the trace pairing.
    pub fn dual(&self) -> Self {
        Self {
            n: self.n,
            mat: self.mat.transpose(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AdOperator) -> Self {
        Self {
            n: self.n,
            mat: &self.mat * &other.mat,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self
            .mat
            .clone()
            .lu()
            .try_inverse()
            .ok_or(Error::SingularOperator("operator is not invertible"))?;
        if inv.iter().any(|x| !x.is_finite()) {
            return Err(Error::SingularOperator("operator inverse is not finite"));
        }
        Ok(Self { n: self.n, mat: inv })
    }

    pub fn distance_to_identity(&self) -> f64 {
        let d = self.mat.nrows();
        (&self.mat - DMatrix::<f64>::identity(d, d)).norm()
    }
}

/// Coordinate matrix of `ad_η = [η, ·]`.
pub fn ad_operator(eta: &AlgebraElement) -> AdOperator {
    AdOperator::from_fn(eta.n(), |x| commutator(&eta.mat, x))
}

/// Coordinate matrix of `Ad_g = g (·) gᵀ`.
pub fn adjoint_operator(g: &GroupElement) -> AdOperator {
    AdOperator::from_fn(g.n(), |x| &g.mat * x * g.mat.transpose())
}

/// `Σ_{k≥0} Aᵏ/(k+1)!` for an arbitrary square matrix `A`, truncated once the
/// next term falls below `1e-16` in Frobenius norm. On a 1×1 input this is
/// `(eʷ − 1)/w`.
pub fn iex_series(a: &DMatrix<f64>) -> DMatrix<f64> {
    let d = a.nrows();
    let mut term = DMatrix::identity(d, d);
    let mut sum = term.clone();
    for k in 1..SERIES_MAX_TERMS {
        term = &term * a / (k as f64 + 1.0);
        sum += &term;
        if term.norm() < SERIES_TOL {
            break;
        }
    }
    sum
}

/// `iex(−ad_η)`, the left-trivialized derivative of the exponential:
/// `d/dt exp(η + tδ)|₀ = exp(η) · iex(−ad_η)δ`.
pub fn iex_op(eta: &AlgebraElement) -> AdOperator {
    let minus_ad = -ad_operator(eta).mat;
    AdOperator {
        n: eta.n(),
        mat: iex_series(&minus_ad),
    }
}

/// `χ(ad_ξ)`, the operator inverse of `iex(−ad_ξ)`, by a direct linear solve.
pub fn chi_op(xi: &AlgebraElement) -> Result<AdOperator> {
    iex_op(xi).inverse()
}

/// `ξ ↦ η ξ − ξ η`.
pub fn ad(eta: &AlgebraElement, xi: &AlgebraElement) -> Result<AlgebraElement> {
    check_same(eta.n(), xi.n())?;
    Ok(AlgebraElement {
        mat: commutator(&eta.mat, &xi.mat),
    })
}

/// `ad*_ξ μ`, defined by `⟨ad*_ξ μ, η⟩ = ⟨μ, [ξ, η]⟩`; equals `μ ξ − ξ μ`.
pub fn coad(xi: &AlgebraElement, mu: &Momentum) -> Result<Momentum> {
    check_same(xi.n(), mu.n())?;
    Ok(Momentum {
        mat: commutator(&mu.mat, &xi.mat),
    })
}

/// `Ad_g ξ = g ξ gᵀ`.
pub fn adjoint(g: &GroupElement, xi: &AlgebraElement) -> Result<AlgebraElement> {
    check_same(g.n(), xi.n())?;
    Ok(AlgebraElement {
        mat: skew_part(&(&g.mat * &xi.mat * g.mat.transpose())),
    })
}

/// `Ad*_g μ = gᵀ μ g`, the pairing-dual of [`adjoint`].
pub fn coadjoint(g: &GroupElement, mu: &Momentum) -> Result<Momentum> {
    check_same(g.n(), mu.n())?;
    Ok(Momentum {
        mat: skew_part(&(g.mat.transpose() * &mu.mat * &g.mat)),
    })
}

/// `⟨μ, ξ⟩ = Tr(μᵀ ξ)`.
pub fn pairing(mu: &Momentum, xi: &AlgebraElement) -> Result<f64> {
    check_same(mu.n(), xi.n())?;
    Ok(mu.mat.dot(&xi.mat))
}

/// Largest rotation angle of `g`, in `[0, π]`.
pub fn max_rotation_angle(g: &GroupElement) -> f64 {
    let m = &g.mat;
    match g.n() {
        2 => m[(1, 0)].atan2(m[(0, 0)]).abs(),
        3 => {
            let s = 0.5
                * ((m[(2, 1)] - m[(1, 2)]).powi(2)
                    + (m[(0, 2)] - m[(2, 0)]).powi(2)
                    + (m[(1, 0)] - m[(0, 1)]).powi(2))
                .sqrt();
            let c = 0.5 * (m.trace() - 1.0);
            s.atan2(c)
        }
        _ => {
            let sym = (m + m.transpose()) * 0.5;
            let min = sym
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            min.clamp(-1.0, 1.0).acos()
        }
    }
}

/// Group exponential. Closed form for n ≤ 3; scaling and squaring with a
/// diagonal Padé approximant otherwise.
pub fn exp(xi: &AlgebraElement) -> GroupElement {
    let mat = match xi.n() {
        2 => {
            let t = xi.mat[(1, 0)];
            DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
        }
        3 => rodrigues(xi),
        _ => expm_pade(&xi.mat),
    };
    GroupElement { mat }
}

fn rodrigues(xi: &AlgebraElement) -> DMatrix<f64> {
    let w = xi.vee3();
    let theta2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    let theta = theta2.sqrt();
    let (a, b) = if theta < 1e-4 {
        (
            1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0,
            0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0,
        )
    } else {
        let half = (0.5 * theta).sin();
        (theta.sin() / theta, 2.0 * half * half / theta2)
    };
    let k = &xi.mat;
    DMatrix::identity(3, 3) + k * a + (k * k) * b
}

const PADE_ORDER: usize = 8;
const PADE_THETA: f64 = 0.5;

fn pade_coefficients(m: usize) -> Vec<f64> {
    // c_k = (2m−k)! m! / ((2m)! k! (m−k)!), built by recurrence from c_0 = 1
    let mut c = vec![1.0; m + 1];
    for k in 1..=m {
        c[k] = c[k - 1] * (m + 1 - k) as f64 / (k as f64 * (2 * m + 1 - k) as f64);
    }
    c
}

fn expm_pade(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > PADE_THETA {
        (norm1 / PADE_THETA).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(s);
    let c = pade_coefficients(PADE_ORDER);
    let mut num = DMatrix::zeros(n, n);
    let mut den = DMatrix::zeros(n, n);
    let mut power = DMatrix::identity(n, n);
    for (k, ck) in c.iter().enumerate() {
        num += &power * *ck;
        den += &power * if k % 2 == 0 { *ck } else { -*ck };
        power = &power * &scaled;
    }
    let mut r = den
        .lu()
        .solve(&num)
        .expect("Padé denominator is nonsingular for skew arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Principal logarithm with the default branch margin.
pub fn log(g: &GroupElement) -> Result<AlgebraElement> {
    log_with_margin(g, DEFAULT_BRANCH_MARGIN)
}

/// Principal logarithm. Fails with [`Error::BranchCut`] when a rotation angle
/// exceeds `π − margin`.
pub fn log_with_margin(g: &GroupElement, margin: f64) -> Result<AlgebraElement> {
    let angle = max_rotation_angle(g);
    let limit = std::f64::consts::PI - margin;
    if angle > limit {
        return Err(Error::BranchCut { angle, limit });
    }
    let m = &g.mat;
    let mat = match g.n() {
        2 => {
            let t = m[(1, 0)].atan2(m[(0, 0)]);
            DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0])
        }
        3 => {
            let v = skew_part(m);
            let s = AlgebraElement { mat: v.clone() };
            let w = s.vee3();
            let sin = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            let cos = 0.5 * (m.trace() - 1.0);
            let theta = sin.atan2(cos);
            let factor = if theta < 1e-4 {
                1.0 + theta * theta / 6.0 + 7.0 * theta.powi(4) / 360.0
            } else {
                theta / sin
            };
            v * factor
        }
        _ => logm_inverse_scaling(m)?,
    };
    Ok(AlgebraElement {
        mat: skew_part(&mat),
    })
}

fn logm_inverse_scaling(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = g.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut a = g.clone();
    let mut s = 0;
    while (&a - &id).norm() > 0.25 {
        a = sqrtm_denman_beavers(&a)?;
        s += 1;
        if s > 60 {
            return Err(Error::SingularMatrix("square-root iteration did not reach the identity"));
        }
    }
    // log A = 2 atanh(Z), Z = (A − I)(A + I)⁻¹
    // A − I and A + I commute
    let z = (&a + &id)
        .lu()
        .solve(&(&a - &id))
        .ok_or(Error::SingularMatrix("A + I is singular"))?;
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut sum = z.clone();
    for k in 1..SERIES_MAX_TERMS {
        term = &term * &z2;
        let contrib = &term / (2 * k + 1) as f64;
        sum += &contrib;
        if contrib.norm() < 1e-18 {
            break;
        }
    }
    Ok(sum * 2.0 * 2f64.powi(s))
}

fn sqrtm_denman_beavers(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    for _ in 0..100 {
        let y_inv = y
            .clone()
            .try_inverse()
            .ok_or(Error::SingularMatrix("square-root iterate is singular"))?;
        let z_inv = z
            .clone()
            .try_inverse()
            .ok_or(Error::SingularMatrix("square-root iterate is singular"))?;
        let y_next = (&y + z_inv) * 0.5;
        let z_next = (&z + y_inv) * 0.5;
        let delta = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if delta < 1e-15 * y.norm() {
            break;
        }
    }
    Ok(y)
}

/// `cay(ξ) = (I + ξ/2)(I − ξ/2)⁻¹`.
pub fn cayley(xi: &AlgebraElement) -> GroupElement {
    let n = xi.n();
    let half = &xi.mat * 0.5;
    let id = DMatrix::<f64>::identity(n, n);
    let plus = &id + &half;
    let minus = &id - &half;
    // The two factors commute, so solve (I − ξ/2) X = (I + ξ/2).
    let mat = minus
        .lu()
        .solve(&plus)
        .expect("I − ξ/2 is invertible for real skew ξ");
    GroupElement { mat }
}

/// Inverse Cayley map `2 (g − I)(g + I)⁻¹`.
pub fn cayley_inverse(g: &GroupElement) -> Result<AlgebraElement> {
    let n = g.n();
    let id = DMatrix::<f64>::identity(n, n);
    let num = &g.mat - &id;
    let den = &g.mat + &id;
    let mat = den
        .lu()
        .solve(&num)
        .ok_or(Error::BranchCut {
            angle: std::f64::consts::PI,
            limit: std::f64::consts::PI,
        })?
        * 2.0;
    Ok(AlgebraElement {
        mat: skew_part(&mat),
    })
}

/// Nearest special-orthogonal matrix in Frobenius norm (polar factor with
/// orientation fix).
pub fn project_group(m: &DMatrix<f64>) -> Result<GroupElement> {
    let n = check_square(m)?;
    let svd = m.clone().svd(true, true);
    let sv = &svd.singular_values;
    let max = sv.max();
    let min = sv.min();
    if !(min > 1e-14 * max.max(f64::MIN_POSITIVE)) {
        return Err(Error::SingularMatrix("cannot project a singular matrix onto SO(n)"));
    }
    let u = svd.u.expect("svd with u");
    let v_t = svd.v_t.expect("svd with v_t");
    let mut r = &u * &v_t;
    if r.determinant() < 0.0 {
        // flip the direction of the smallest singular value
        let k = (0..n)
            .min_by(|&a, &b| sv[a].total_cmp(&sv[b]))
            .expect("nonempty");
        let mut d = DMatrix::<f64>::identity(n, n);
        d[(k, k)] = -1.0;
        r = &u * d * &v_t;
    }
    Ok(GroupElement { mat: r })
}
