//! The five-dimensional space `V` of patterned symmetric matrices, the dual
//! Vinberg cone `Ω ⊂ V`, its closure, and the linear automorphisms that
//! preserve it.
//!
//! A point `x = (x1, .., x5)` of `V` is the symmetric matrix
//!
//! ```text
//! ( x1  0   x4 )
//! ( 0   x2  x5 )
//! ( x4  x5  x3 )
//! ```
//!
//! and `Ω` is the set of such matrices that are positive definite.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, SMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix5 = SMatrix<f64, 5, 5>;

/// Default scale-relative tolerance for closed-cone and PSD membership.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Absolute tolerance (scaled by `1 + ‖M‖`) for structural zeros.
pub(crate) const PATTERN_TOL: f64 = 1e-12;

/// A point of `V`, serialized as a JSON array of five numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VVector(pub [f64; 5]);

impl VVector {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64, x5: f64) -> Self {
        VVector([x1, x2, x3, x4, x5])
    }

    /// The coordinates of the 3×3 identity matrix.
    pub const fn identity() -> Self {
        VVector([1.0, 1.0, 1.0, 0.0, 0.0])
    }

    pub const fn zero() -> Self {
        VVector([0.0; 5])
    }

    pub fn basis(i: usize) -> Self {
        let mut x = [0.0; 5];
        x[i] = 1.0;
        VVector(x)
    }

    pub fn x1(&self) -> f64 {
        self.0[0]
    }
    pub fn x2(&self) -> f64 {
        self.0[1]
    }
    pub fn x3(&self) -> f64 {
        self.0[2]
    }
    pub fn x4(&self) -> f64 {
        self.0[3]
    }
    pub fn x5(&self) -> f64 {
        self.0[4]
    }

    pub fn embed(&self) -> Matrix3<f64> {
        let [x1, x2, x3, x4, x5] = self.0;
        Matrix3::new(x1, 0.0, x4, 0.0, x2, x5, x4, x5, x3)
    }

    /// Reads the `V`-coordinates of a 3×3 matrix, averaging the symmetric
    /// off-diagonal pairs. Entries outside the pattern are ignored; use
    /// [`VVector::try_unembed`] to check them.
    pub fn unembed(m: &Matrix3<f64>) -> Self {
        VVector([
            m[(0, 0)],
            m[(1, 1)],
            m[(2, 2)],
            0.5 * (m[(0, 2)] + m[(2, 0)]),
            0.5 * (m[(1, 2)] + m[(2, 1)]),
        ])
    }

    /// Like [`VVector::unembed`] but fails if `m` is not symmetric with a
    /// vanishing `(1,2)` entry, up to `tol · (1 + ‖m‖)`.
    pub fn try_unembed(m: &Matrix3<f64>, tol: f64) -> Result<Self> {
        let slack = tol * (1.0 + m.amax());
        let off = m[(0, 1)]
            .abs()
            .max(m[(1, 0)].abs())
            .max((m[(0, 2)] - m[(2, 0)]).abs())
            .max((m[(1, 2)] - m[(2, 1)]).abs());
        if off > slack {
            return Err(Error::Pattern(format!(
                "matrix leaves V (off-pattern residue {off:e})"
            )));
        }
        Ok(Self::unembed(m))
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &VVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for VVector {
    type Output = VVector;
    fn add(self, rhs: VVector) -> VVector {
        VVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for VVector {
    type Output = VVector;
    fn sub(self, rhs: VVector) -> VVector {
        VVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for VVector {
    type Output = VVector;
    fn neg(self) -> VVector {
        VVector(self.0.map(|c| -c))
    }
}

impl Mul<f64> for VVector {
    type Output = VVector;
    fn mul(self, rhs: f64) -> VVector {
        VVector(self.0.map(|c| c * rhs))
    }
}

/// A point `diag(u1, u2, 0)` of the subspace `V′ ⊂ V`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VPrimeVector(pub [f64; 2]);

impl VPrimeVector {
    pub const fn new(u1: f64, u2: f64) -> Self {
        VPrimeVector([u1, u2])
    }

    pub const fn zero() -> Self {
        VPrimeVector([0.0, 0.0])
    }

    pub fn embed(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&nalgebra::Vector3::new(self.0[0], self.0[1], 0.0))
    }

    pub fn to_v(&self) -> VVector {
        VVector([self.0[0], self.0[1], 0.0, 0.0, 0.0])
    }

    /// Diagonal part of `m`, ignoring everything else.
    pub fn from_diagonal(m: &Matrix3<f64>) -> Self {
        VPrimeVector([m[(0, 0)], m[(1, 1)]])
    }

    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.0.iter().all(|&c| c >= -tol)
    }
}

impl Neg for VPrimeVector {
    type Output = VPrimeVector;
    fn neg(self) -> VPrimeVector {
        VPrimeVector(self.0.map(|c| -c))
    }
}

/// A lower-patterned matrix
///
/// ```text
/// ( a1  0   0  )
/// ( 0   a2  0  )
/// ( a4  a5  a3 )
/// ```
///
/// Used both for elements of the group `H` (when `a1 a2 ≠ 0`, `a3 > 0`) and
/// for elements of its Lie algebra `𝔥` (no constraint).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HMatrix(pub [f64; 5]);

impl HMatrix {
    pub const fn new(a1: f64, a2: f64, a3: f64, a4: f64, a5: f64) -> Self {
        HMatrix([a1, a2, a3, a4, a5])
    }

    pub const fn identity() -> Self {
        HMatrix([1.0, 1.0, 1.0, 0.0, 0.0])
    }

    pub const fn zero() -> Self {
        HMatrix([0.0; 5])
    }

    pub const fn diag(a1: f64, a2: f64, a3: f64) -> Self {
        HMatrix([a1, a2, a3, 0.0, 0.0])
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        let [a1, a2, a3, a4, a5] = self.0;
        Matrix3::new(a1, 0.0, 0.0, 0.0, a2, 0.0, a4, a5, a3)
    }

    /// Reads the pattern entries of `m` without checking the zeros.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        HMatrix([m[(0, 0)], m[(1, 1)], m[(2, 2)], m[(2, 0)], m[(2, 1)]])
    }

    /// Residue of `m` outside the `H′` pattern: the largest of the entries
    /// `(1,2), (1,3), (2,1), (2,3)`.
    pub fn pattern_residue(m: &Matrix3<f64>) -> f64 {
        [m[(0, 1)], m[(0, 2)], m[(1, 0)], m[(1, 2)]]
            .iter()
            .fold(0.0, |acc, c| acc.max(c.abs()))
    }

    pub fn is_in_h(&self) -> bool {
        self.0[0] * self.0[1] != 0.0 && self.0[2] > 0.0
    }

    pub fn is_in_h_plus(&self) -> bool {
        self.is_in_h() && self.0[0] > 0.0 && self.0[1] > 0.0
    }

    pub fn det(&self) -> f64 {
        self.0[0] * self.0[1] * self.0[2]
    }

    pub fn inverse(&self) -> Result<HMatrix> {
        if self.det() == 0.0 {
            return Err(Error::Singular("H-matrix has a zero diagonal entry".into()));
        }
        let [a1, a2, a3, a4, a5] = self.0;
        Ok(HMatrix([
            1.0 / a1,
            1.0 / a2,
            1.0 / a3,
            -a4 / (a1 * a3),
            -a5 / (a2 * a3),
        ]))
    }

    pub fn mul(&self, other: &HMatrix) -> HMatrix {
        HMatrix::from_matrix(&(self.to_matrix() * other.to_matrix()))
    }

    pub fn max_abs_diff(&self, other: &HMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A matrix of the pattern
///
/// ```text
/// ( x1  0   x6 )
/// ( 0   x2  x7 )
/// ( x4  x5  x3 )
/// ```
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WMatrix(pub [f64; 7]);

impl WMatrix {
    pub fn to_matrix(&self) -> Matrix3<f64> {
        let [x1, x2, x3, x4, x5, x6, x7] = self.0;
        Matrix3::new(x1, 0.0, x6, 0.0, x2, x7, x4, x5, x3)
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        WMatrix([
            m[(0, 0)],
            m[(1, 1)],
            m[(2, 2)],
            m[(2, 0)],
            m[(2, 1)],
            m[(0, 2)],
            m[(1, 2)],
        ])
    }

    /// Largest magnitude of the `(1,2)` and `(2,1)` entries.
    pub fn pattern_residue(m: &Matrix3<f64>) -> f64 {
        m[(0, 1)].abs().max(m[(1, 0)].abs())
    }
}

/// Leading principal minors `(Δ1, Δ2, Δ3)` of `embed(x)`.
pub fn minors(x: &VVector) -> (f64, f64, f64) {
    let [x1, x2, x3, x4, x5] = x.0;
    (x1, x1 * x2, x1 * x2 * x3 - x1 * x5 * x5 - x2 * x4 * x4)
}

/// Strict membership in the open cone `Ω`.
pub fn in_open_cone(x: &VVector) -> bool {
    let (d1, d2, d3) = minors(x);
    d1 > 0.0 && d2 > 0.0 && d3 > 0.0
}

/// Membership in the closure of `Ω`: every eigenvalue of `embed(x)` is at
/// least `-tol · (1 + ‖embed(x)‖)`.
pub fn in_closed_cone(x: &VVector, tol: f64) -> bool {
    psd_within(&x.embed(), tol)
}

/// Positive semidefiniteness of a symmetric 3×3 matrix up to a scale-relative
/// tolerance. The spectral norm is used as the scale.
pub fn psd_within(m: &Matrix3<f64>, tol: f64) -> bool {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym).eigenvalues;
    let scale = eig.amax();
    eig.min() >= -tol * (1.0 + scale)
}

fn require_open(x: &VVector) -> Result<()> {
    if in_open_cone(x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{:?} is not in the open cone", x.0)))
    }
}

/// The relatively invariant function
/// `Δ_(s1,s2,s3)(x) = x1^(s1-s3) · x2^(s2-s3) · (det x)^s3`.
pub fn delta_s(x: &VVector, s1: f64, s2: f64, s3: f64) -> Result<f64> {
    require_open(x)?;
    let (_, _, det) = minors(x);
    Ok(x.x1().powf(s1 - s3) * x.x2().powf(s2 - s3) * det.powf(s3))
}

/// `Δ1^(s1-s2) · Δ2^(s2-s3) · Δ3^s3`, the same function written in minors.
pub fn delta_s_minors(x: &VVector, s1: f64, s2: f64, s3: f64) -> Result<f64> {
    require_open(x)?;
    let (d1, d2, d3) = minors(x);
    Ok(d1.powf(s1 - s2) * d2.powf(s2 - s3) * d3.powf(s3))
}

/// Characteristic function `x1^½ · x2^½ · (det x)^-2`, normalized so that it
/// equals 1 at the identity.
pub fn char_function(x: &VVector) -> Result<f64> {
    require_open(x)?;
    let (_, _, det) = minors(x);
    Ok(x.x1().sqrt() * x.x2().sqrt() / (det * det))
}

/// `log φ(x)`, used by the finite-difference metric oracle.
pub fn log_char_function(x: &VVector) -> Result<f64> {
    require_open(x)?;
    let (_, _, det) = minors(x);
    Ok(0.5 * x.x1().ln() + 0.5 * x.x2().ln() - 2.0 * det.ln())
}

/// `ρ(A)x = A·x·Aᵀ`.
pub fn rho(a: &HMatrix, x: &VVector) -> Result<VVector> {
    let am = a.to_matrix();
    let image = am * x.embed() * am.transpose();
    VVector::try_unembed(&image, PATTERN_TOL)
}

/// The 5×5 matrix of `ρ(A)` acting on `V`-coordinates.
pub fn rho_matrix(a: &HMatrix) -> Matrix5 {
    let am = a.to_matrix();
    let mut out = Matrix5::zeros();
    for j in 0..5 {
        let image = VVector::unembed(&(am * VVector::basis(j).embed() * am.transpose()));
        for i in 0..5 {
            out[(i, j)] = image.0[i];
        }
    }
    out
}

/// `Det ρ(A) = a1³ a2³ a3⁴`.
pub fn det_rho(a: &HMatrix) -> f64 {
    let [a1, a2, a3, ..] = a.0;
    a1.powi(3) * a2.powi(3) * a3.powi(4)
}

/// The element of `H⁺` with `log a1, log a2, log a3, a4, a5` given by `z`.
pub fn h_plus_from_normals(z: [f64; 5]) -> HMatrix {
    HMatrix([z[0].exp(), z[1].exp(), z[2].exp(), z[3], z[4]])
}

pub fn sample_h_plus<R: Rng + ?Sized>(rng: &mut R) -> HMatrix {
    h_plus_from_normals(std::array::from_fn(|_| rng.sample(StandardNormal)))
}

/// A random point `ρ(A)·I₃` of `Ω` with `A` drawn from [`sample_h_plus`].
pub fn sample_cone<R: Rng + ?Sized>(rng: &mut R) -> VVector {
    cone_point_from_normals(std::array::from_fn(|_| rng.sample(StandardNormal)))
}

pub fn cone_point_from_normals(z: [f64; 5]) -> VVector {
    let a = h_plus_from_normals(z).to_matrix();
    VVector::unembed(&(a * a.transpose()))
}

/// A linear map of `V` stored as a 5×5 matrix on coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotropyElement(pub Matrix5);

impl IsotropyElement {
    pub fn apply(&self, x: &VVector) -> VVector {
        let v = self.0 * nalgebra::Vector5::from(x.0);
        VVector(v.into())
    }

    pub fn compose(&self, other: &IsotropyElement) -> IsotropyElement {
        IsotropyElement(self.0 * other.0)
    }

    pub fn is_identity(&self) -> bool {
        self.0 == Matrix5::identity()
    }
}

/// The swap `σ` of the first two rows and columns. It is not an `H`-matrix,
/// so its action is built directly.
pub fn sigma_action() -> IsotropyElement {
    let mut m = Matrix5::zeros();
    for (i, j) in [(0, 1), (1, 0), (2, 2), (3, 4), (4, 3)] {
        m[(i, j)] = 1.0;
    }
    IsotropyElement(m)
}

/// The isotropy subgroup of `G(Ω)` at `I₃`: the closure under composition of
/// `ρ(diag(-1,1,1))`, `ρ(diag(1,-1,1))` and `ρ(σ)`.
pub fn isotropy_group() -> Vec<IsotropyElement> {
    let generators = [
        IsotropyElement(rho_matrix(&HMatrix::diag(-1.0, 1.0, 1.0))),
        IsotropyElement(rho_matrix(&HMatrix::diag(1.0, -1.0, 1.0))),
        sigma_action(),
    ];
    let mut group = vec![IsotropyElement(Matrix5::identity())];
    let mut frontier = group.clone();
    // Entries are 0 and ±1, so exact comparison is sound.
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &generators {
                let h = s.compose(g);
                if !group.contains(&h) {
                    group.push(h);
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    group
}
