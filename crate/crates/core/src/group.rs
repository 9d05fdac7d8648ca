//! `Sp(6,ℝ)`, its subgroup `G` realizing the automorphisms of the tube
//! domain `V + iΩ`, the linear fractional action, and the triple
//! decomposition `g = t_v · ρ(L) · t̃_{-u}` on the dense set `Υ` where the
//! lower-right block is invertible.
//!
//! A 6×6 matrix is split into 3×3 blocks
//!
//! ```text
//! g = ( A  B )
//!     ( C  D )
//! ```

use std::f64::consts::{PI, TAU};

use nalgebra::{Complex, Matrix3, Matrix6};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::{in_open_cone, HMatrix, VPrimeVector, VVector, WMatrix, PATTERN_TOL};
use crate::error::{Error, Result};
use crate::linalg::{det_adj3, inverse3};

pub type Complex64 = Complex<f64>;

/// Scale-relative tolerance for the symplectic relations.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Scale-relative threshold on `|det D|` for membership in `Υ`.
pub const UPSILON_TOL: f64 = 1e-12;

/// The four 3×3 blocks of a 6×6 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Blocks {
    pub a: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub c: Matrix3<f64>,
    pub d: Matrix3<f64>,
}

impl Blocks {
    pub fn of(m: &Matrix6<f64>) -> Self {
        Blocks {
            a: m.fixed_view::<3, 3>(0, 0).into_owned(),
            b: m.fixed_view::<3, 3>(0, 3).into_owned(),
            c: m.fixed_view::<3, 3>(3, 0).into_owned(),
            d: m.fixed_view::<3, 3>(3, 3).into_owned(),
        }
    }

    pub fn assemble(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.a);
        m.fixed_view_mut::<3, 3>(0, 3).copy_from(&self.b);
        m.fixed_view_mut::<3, 3>(3, 0).copy_from(&self.c);
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(&self.d);
        m
    }
}

/// `J = ((0, −I), (I, 0))`.
pub fn j_matrix() -> Matrix6<f64> {
    Blocks {
        a: Matrix3::zeros(),
        b: -Matrix3::identity(),
        c: Matrix3::identity(),
        d: Matrix3::zeros(),
    }
    .assemble()
}

fn symplectic_slack(m: &Matrix6<f64>) -> f64 {
    let n = m.amax();
    SYMPLECTIC_TOL * (1.0 + n * n)
}

/// `AᵀC` and `DᵀB` symmetric and `DᵀA − BᵀC = I`, within
/// `1e-10 · (1 + ‖M‖²)`.
pub fn is_symplectic(m: &Matrix6<f64>) -> bool {
    symplectic_defect(m) <= symplectic_slack(m)
}

/// Largest violation of the block relations `AᵀC = CᵀA`, `DᵀB = BᵀD`,
/// `DᵀA − BᵀC = I`.
pub fn symplectic_defect(m: &Matrix6<f64>) -> f64 {
    let Blocks { a, b, c, d } = Blocks::of(m);
    let atc = a.transpose() * c;
    let dtb = d.transpose() * b;
    let unit = d.transpose() * a - b.transpose() * c - Matrix3::identity();
    (atc - atc.transpose())
        .amax()
        .max((dtb - dtb.transpose()).amax())
        .max(unit.amax())
}

/// The equivalent relations `BAᵀ`, `CDᵀ` symmetric and `ADᵀ − BCᵀ = I`.
pub fn is_symplectic_dual(m: &Matrix6<f64>) -> bool {
    let Blocks { a, b, c, d } = Blocks::of(m);
    let bat = b * a.transpose();
    let cdt = c * d.transpose();
    let unit = a * d.transpose() - b * c.transpose() - Matrix3::identity();
    let defect = (bat - bat.transpose())
        .amax()
        .max((cdt - cdt.transpose()).amax())
        .max(unit.amax());
    defect <= symplectic_slack(m)
}

fn vprime_residue(m: &Matrix3<f64>) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if !(i == j && i < 2) {
                r = r.max(m[(i, j)].abs());
            }
        }
    }
    r
}

/// First violated defining constraint of `G`, or `None` for members.
pub fn g_violation(m: &Matrix6<f64>) -> Option<&'static str> {
    if !is_symplectic(m) {
        return Some("not symplectic");
    }
    let Blocks { a, b, c, d } = Blocks::of(m);
    let slack = PATTERN_TOL * (1.0 + m.amax());
    let dt = d.transpose();
    if HMatrix::pattern_residue(&a) > slack {
        return Some("A not in H' pattern");
    }
    if WMatrix::pattern_residue(&b) > slack {
        return Some("B not in W pattern");
    }
    if vprime_residue(&c) > slack {
        return Some("C not in V' pattern");
    }
    if HMatrix::pattern_residue(&dt) > slack {
        return Some("D^T not in H' pattern");
    }
    if a[(2, 2)] <= 0.0 || dt[(2, 2)] <= 0.0 {
        return Some("A_33 or D_33 not positive");
    }
    None
}

/// Membership in `G`: symplectic with `A ∈ H′`, `B ∈ W`, `C ∈ V′`, `Dᵀ ∈ H′`.
pub fn in_g(m: &Matrix6<f64>) -> bool {
    g_violation(m).is_none()
}

/// Membership in `G` through the alternative description: symplectic with
/// `A ∈ H′`, `Dᵀ ∈ H′`, `DᵀB ∈ V`, `CDᵀ ∈ V′`.
pub fn in_g_alt(m: &Matrix6<f64>) -> bool {
    if !is_symplectic(m) {
        return false;
    }
    let Blocks { a, b, c, d } = Blocks::of(m);
    let scale = 1.0 + m.amax();
    let slack = PATTERN_TOL * scale;
    let dt = d.transpose();
    if HMatrix::pattern_residue(&a) > slack || HMatrix::pattern_residue(&dt) > slack {
        return false;
    }
    if a[(2, 2)] <= 0.0 || dt[(2, 2)] <= 0.0 {
        return false;
    }
    let product_slack = PATTERN_TOL * scale * scale;
    let dtb = dt * b;
    if VVector::try_unembed(&dtb, PATTERN_TOL * scale).is_err() || WMatrix::pattern_residue(&dtb) > product_slack {
        return false;
    }
    vprime_residue(&(c * dt)) <= product_slack
}

/// An element of `G`, stored as its 6×6 matrix. Serializes as 36 numbers in
/// row-major order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GElement(Matrix6<f64>);

impl GElement {
    /// Checks membership in `G`.
    pub fn new(m: Matrix6<f64>) -> Result<Self> {
        match g_violation(&m) {
            None => Ok(GElement(m)),
            Some(reason) => Err(Error::Domain(format!("matrix is not in G: {reason}"))),
        }
    }

    /// Wraps a matrix known to lie in `G` by construction.
    pub(crate) fn from_matrix_unchecked(m: Matrix6<f64>) -> Self {
        GElement(m)
    }

    pub fn identity() -> Self {
        GElement(Matrix6::identity())
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    pub fn blocks(&self) -> Blocks {
        Blocks::of(&self.0)
    }

    pub fn mul(&self, other: &GElement) -> GElement {
        GElement(self.0 * other.0)
    }

    /// `g⁻¹ = ((Dᵀ, −Bᵀ), (−Cᵀ, Aᵀ))`.
    pub fn inverse(&self) -> GElement {
        GElement(symplectic_inverse(&self.0))
    }

    pub fn max_abs_diff(&self, other: &GElement) -> f64 {
        (self.0 - other.0).amax()
    }

    pub fn to_row_major(&self) -> [f64; 36] {
        row_major(&self.0)
    }
}

pub fn row_major(m: &Matrix6<f64>) -> [f64; 36] {
    std::array::from_fn(|k| m[(k / 6, k % 6)])
}

pub fn from_row_major(entries: &[f64]) -> Result<Matrix6<f64>> {
    if entries.len() != 36 {
        return Err(Error::Domain(format!(
            "expected 36 matrix entries, got {}",
            entries.len()
        )));
    }
    Ok(Matrix6::from_row_slice(entries))
}

impl Serialize for GElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_row_major().as_slice().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<f64>::deserialize(deserializer)?;
        let m = from_row_major(&entries).map_err(serde::de::Error::custom)?;
        GElement::new(m).map_err(serde::de::Error::custom)
    }
}

/// `M⁻¹ = ((Dᵀ, −Bᵀ), (−Cᵀ, Aᵀ))` for symplectic `M`.
pub fn symplectic_inverse(m: &Matrix6<f64>) -> Matrix6<f64> {
    let Blocks { a, b, c, d } = Blocks::of(m);
    Blocks {
        a: d.transpose(),
        b: -b.transpose(),
        c: -c.transpose(),
        d: a.transpose(),
    }
    .assemble()
}

/// A point `z = x + iy` of the tube domain, `y ∈ Ω`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TubePoint {
    pub re: VVector,
    pub im: VVector,
}

impl TubePoint {
    pub fn new(re: VVector, im: VVector) -> Result<Self> {
        if !in_open_cone(&im) {
            return Err(Error::Domain("imaginary part is not in the open cone".into()));
        }
        Ok(TubePoint { re, im })
    }

    /// The base point `p₀ = i·I₃`.
    pub fn base_point() -> Self {
        TubePoint {
            re: VVector::zero(),
            im: VVector::identity(),
        }
    }

    pub fn embed(&self) -> Matrix3<Complex64> {
        let re = self.re.embed();
        let im = self.im.embed();
        Matrix3::from_fn(|i, j| Complex64::new(re[(i, j)], im[(i, j)]))
    }

    pub fn max_abs_diff(&self, other: &TubePoint) -> f64 {
        self.re.max_abs_diff(&other.re).max(self.im.max_abs_diff(&other.im))
    }
}

/// `t_v = ((I, v), (0, I))`.
pub fn translation(v: &VVector) -> GElement {
    GElement(
        Blocks {
            a: Matrix3::identity(),
            b: v.embed(),
            c: Matrix3::zeros(),
            d: Matrix3::identity(),
        }
        .assemble(),
    )
}

/// `t̃_u = ((I, 0), (−u, I))`, the conjugate of `t_u` by the inversion `s`.
pub fn dual_translation(u: &VPrimeVector) -> GElement {
    GElement(
        Blocks {
            a: Matrix3::identity(),
            b: Matrix3::zeros(),
            c: -u.embed(),
            d: Matrix3::identity(),
        }
        .assemble(),
    )
}

/// `((A, 0), (0, A⁻ᵀ))`, inducing `ρ(A)` on `V`.
pub fn rho_embed(a: &HMatrix) -> Result<GElement> {
    if !a.is_in_h() {
        return Err(Error::Singular(format!("{:?} is not in H", a.0)));
    }
    let inv = a.inverse()?.to_matrix();
    Ok(GElement(
        Blocks {
            a: a.to_matrix(),
            b: Matrix3::zeros(),
            c: Matrix3::zeros(),
            d: inv.transpose(),
        }
        .assemble(),
    ))
}

/// The inversion `s`, acting by
/// `z ↦ (−1/z1, −1/z2, det z/(z1 z2), z4/z1, z5/z2)`.
pub fn inversion_s() -> GElement {
    let mut m = Matrix6::zeros();
    for (i, j, val) in [
        (0, 3, -1.0),
        (1, 4, -1.0),
        (2, 2, 1.0),
        (3, 0, 1.0),
        (4, 1, 1.0),
        (5, 5, 1.0),
    ] {
        m[(i, j)] = val;
    }
    GElement(m)
}

/// The element `k_{θ,φ} = ((C, −S), (S, C))` of the isotropy group at `p₀`,
/// with `C = diag(cos θ, cos φ, 1)` and `S = diag(sin θ, sin φ, 0)`.
pub fn isotropy_k(theta: f64, phi: f64) -> GElement {
    let (theta, phi) = (theta.rem_euclid(TAU), phi.rem_euclid(TAU));
    let cos = Matrix3::from_diagonal(&nalgebra::Vector3::new(theta.cos(), phi.cos(), 1.0));
    let sin = Matrix3::from_diagonal(&nalgebra::Vector3::new(theta.sin(), phi.sin(), 0.0));
    GElement(Blocks { a: cos, b: -sin, c: sin, d: cos }.assemble())
}

fn complexify(m: &Matrix3<f64>) -> Matrix3<Complex64> {
    m.map(|c| Complex64::new(c, 0.0))
}

/// `g·z = (Az + B)(Cz + D)⁻¹`.
pub fn act(g: &GElement, z: &TubePoint) -> Result<TubePoint> {
    let Blocks { a, b, c, d } = g.blocks();
    let zm = z.embed();
    let num = complexify(&a) * zm + complexify(&b);
    let den = complexify(&c) * zm + complexify(&d);
    let image = num * inverse3(&den)?;
    let re = image.map(|c| c.re);
    let im = image.map(|c| c.im);
    let tol = 1e-9;
    Ok(TubePoint {
        re: VVector::try_unembed(&re, tol)?,
        im: VVector::try_unembed(&im, tol)?,
    })
}

/// The real linear fractional map on `V`, defined where `det(Cx + D) ≠ 0`.
pub fn act_real(g: &GElement, x: &VVector) -> Result<VVector> {
    let Blocks { a, b, c, d } = g.blocks();
    let xm = x.embed();
    let den = c * xm + d;
    let inv = inverse3(&den)
        .map_err(|_| Error::Singular("det(Cx + D) = 0: point outside the domain of g".into()))?;
    VVector::try_unembed(&((a * xm + b) * inv), 1e-9)
}

/// `det D ≠ 0`, measured as `|det D| > 1e-12 · (1 + ‖D‖)³`.
pub fn in_upsilon(g: &GElement) -> bool {
    d_invertible(g.matrix())
}

pub(crate) fn d_invertible(m: &Matrix6<f64>) -> bool {
    let d = Blocks::of(m).d;
    let (det, _) = det_adj3(&d);
    det.abs() > UPSILON_TOL * (1.0 + d.amax()).powi(3)
}

/// Factors `(v, L, u)` with `g = ((I, v), (0, I)) · ((L, 0), (0, L⁻ᵀ)) · ((I, 0), (u, I))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleFactors {
    pub v: VVector,
    #[serde(rename = "L")]
    pub l: HMatrix,
    pub u: VPrimeVector,
}

impl TripleFactors {
    pub fn max_abs_diff(&self, other: &TripleFactors) -> f64 {
        self.v
            .max_abs_diff(&other.v)
            .max(self.l.max_abs_diff(&other.l))
            .max((self.u.0[0] - other.u.0[0]).abs())
            .max((self.u.0[1] - other.u.0[1]).abs())
    }
}

/// `L = D⁻ᵀ`, `v = BD⁻¹`, `u = D⁻¹C`. Fails outside `Υ`.
pub fn triple_decompose(g: &GElement) -> Result<TripleFactors> {
    if !in_upsilon(g) {
        return Err(Error::Singular("not in Upsilon: det D = 0".into()));
    }
    let Blocks { b, c, d, .. } = g.blocks();
    let d_inv = inverse3(&d)?;
    Ok(TripleFactors {
        v: VVector::unembed(&(b * d_inv)),
        l: HMatrix::from_matrix(&d_inv.transpose()),
        u: VPrimeVector::from_diagonal(&(d_inv * c)),
    })
}

/// Largest entry of `D⁻ᵀ − (A − BD⁻¹C)`; the two expressions for `L` agree
/// on `Υ`.
pub fn triple_l_discrepancy(g: &GElement) -> Result<f64> {
    let Blocks { a, b, c, d } = g.blocks();
    let d_inv = inverse3(&d)?;
    Ok((d_inv.transpose() - (a - b * d_inv * c)).amax())
}

/// Multiplies the three factors. Requires `L ∈ H`.
pub fn triple_compose(f: &TripleFactors) -> Result<GElement> {
    if f.l.det() == 0.0 {
        return Err(Error::Singular("L is singular".into()));
    }
    if !f.l.is_in_h() {
        return Err(Error::Domain("L is not in H (a3 must be positive)".into()));
    }
    let l = f.l.to_matrix();
    let l_inv_t = f.l.inverse()?.to_matrix().transpose();
    let v = f.v.embed();
    let u = f.u.embed();
    let v_lit = v * l_inv_t;
    Ok(GElement(
        Blocks {
            a: l + v_lit * u,
            b: v_lit,
            c: l_inv_t * u,
            d: l_inv_t,
        }
        .assemble(),
    ))
}

/// Grid of shifts tried by [`generation_witness`].
pub const WITNESS_SHIFTS: [f64; 8] = [
    0.0,
    PI / 8.0,
    PI / 4.0,
    3.0 * PI / 8.0,
    PI / 2.0,
    5.0 * PI / 8.0,
    3.0 * PI / 4.0,
    7.0 * PI / 8.0,
];

/// Writes `k_{θ,φ} = k_{−α,−α} · k_{θ+α,φ+α}` with the second factor in `Υ`,
/// choosing `α` from [`WITNESS_SHIFTS`] to maximize
/// `|cos(θ+α) cos(φ+α)|`. Returns `α` and the triple factors of
/// `k_{θ+α,φ+α}`.
pub fn generation_witness(theta: f64, phi: f64) -> Result<(f64, TripleFactors)> {
    let alpha = WITNESS_SHIFTS
        .iter()
        .copied()
        .max_by(|x, y| {
            let score = |a: f64| ((theta + a).cos() * (phi + a).cos()).abs();
            score(*x).total_cmp(&score(*y))
        })
        .expect("non-empty grid");
    let factors = triple_decompose(&isotropy_k(theta + alpha, phi + alpha))?;
    Ok((alpha, factors))
}
