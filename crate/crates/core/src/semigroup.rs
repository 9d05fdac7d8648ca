//! The compression semigroup `Γ = {g ∈ G : g·Ω ⊂ Ω}` and the symplectic
//! semigroup `Γ_Sp` of `Sym⁺⁺(3,ℝ)`.
//!
//! Elements of `Γ` factor as `t_v · ρ(A) · t̃_{−u}` with `v ∈ Ω̄`, `A ∈ H` and
//! `u ∈ Ω̄ ∩ V′`, and also as `ρ(A) · exp(X)` with `X` in the invariant cone
//! `C ⊂ 𝔤₋₁ ⊕ 𝔤₁` of the graded Lie algebra `𝔤 = 𝔤₋₁ ⊕ 𝔤₀ ⊕ 𝔤₁`.

use nalgebra::{Matrix3, Matrix6};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cone::{self, in_closed_cone, psd_within, HMatrix, VPrimeVector, VVector, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::group::{
    self, d_invertible, g_violation, is_symplectic, rho_embed, triple_compose, triple_decompose, Blocks,
    GElement, TripleFactors,
};
use crate::linalg::{expm, logm};

/// First failed condition of `Γ_Sp`, or `None` for members.
pub fn gamma_sp_violation(m: &Matrix6<f64>, tol: f64) -> Option<&'static str> {
    if !is_symplectic(m) {
        return Some("not symplectic");
    }
    if !d_invertible(m) {
        return Some("det D = 0");
    }
    let Blocks { b, c, d, .. } = Blocks::of(m);
    if !psd_within(&(c * d.transpose()), tol) {
        return Some("C D^T not positive semidefinite");
    }
    if !psd_within(&(d.transpose() * b), tol) {
        return Some("D^T B not positive semidefinite");
    }
    None
}

/// Membership in the symplectic semigroup: symplectic, `det D ≠ 0`, and
/// `CDᵀ`, `DᵀB` positive semidefinite within `tol`.
pub fn in_gamma_sp(m: &Matrix6<f64>, tol: f64) -> bool {
    gamma_sp_violation(m, tol).is_none()
}

/// First failed condition of `Γ`, or `None` for members.
pub fn gamma_violation(m: &Matrix6<f64>, tol: f64) -> Option<&'static str> {
    if let Some(reason) = g_violation(m) {
        return Some(reason);
    }
    if !d_invertible(m) {
        return Some("det D = 0");
    }
    let Blocks { b, c, d, .. } = Blocks::of(m);
    let dt = d.transpose();
    if !in_closed_cone(&VVector::unembed(&(dt * b)), tol) {
        return Some("D^T B not in closed cone");
    }
    let cdt = c * dt;
    let scale = 1.0 + m.amax();
    let off_diag = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i == j && i < 2))
        .fold(0.0_f64, |acc, ij| acc.max(cdt[ij].abs()));
    if off_diag > crate::cone::PATTERN_TOL * scale * scale {
        return Some("C D^T not in V' pattern");
    }
    let diag_scale = 1.0 + cdt[(0, 0)].abs().max(cdt[(1, 1)].abs());
    if cdt[(0, 0)].min(cdt[(1, 1)]).min(0.0) < -tol * diag_scale {
        return Some("C D^T not in closed cone");
    }
    None
}

/// Membership in `Γ` via the block description: `g ∈ G`, `det D ≠ 0`,
/// `DᵀB ∈ Ω̄` and `CDᵀ ∈ Ω̄ ∩ V′`.
pub fn in_gamma(m: &Matrix6<f64>, tol: f64) -> bool {
    gamma_violation(m, tol).is_none()
}

/// Evaluates `Γ_Sp ∩ G` and checks it against [`in_gamma`]. A disagreement is
/// an inconsistency between two descriptions of the same set.
pub fn gamma_sp_intersection_check(m: &Matrix6<f64>, tol: f64) -> Result<bool> {
    let lhs = in_gamma_sp(m, tol) && group::in_g(m);
    let rhs = in_gamma(m, tol);
    if lhs != rhs {
        return Err(Error::Inconsistency(format!(
            "Gamma_Sp ∩ G gives {lhs}, block description gives {rhs}"
        )));
    }
    Ok(lhs)
}

/// Factors `(v, A, u)` of an element `t_v · ρ(A) · t̃_{−u}` of `Γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaFactors {
    pub v: VVector,
    #[serde(rename = "A")]
    pub a: HMatrix,
    pub u: VPrimeVector,
}

impl GammaFactors {
    pub fn compose(&self) -> Result<GElement> {
        triple_compose(&TripleFactors { v: self.v, l: self.a, u: self.u })
    }
}

/// Triple factors of `g ∈ Γ` together with the certificates `v ∈ Ω̄`,
/// `A ∈ H`, `u ≥ 0`.
pub fn gamma_factor(g: &GElement, tol: f64) -> Result<GammaFactors> {
    let f = triple_decompose(g).map_err(|e| Error::Membership(format!("not in Gamma: {e}")))?;
    if !in_closed_cone(&f.v, tol) {
        return Err(Error::Membership("v is not in the closed cone".into()));
    }
    if !f.l.is_in_h() {
        return Err(Error::Membership("A is not in H".into()));
    }
    let u_scale = 1.0 + f.u.0[0].abs().max(f.u.0[1].abs());
    if !f.u.is_nonnegative(tol * u_scale) {
        return Err(Error::Membership("u has a negative entry".into()));
    }
    Ok(GammaFactors { v: f.v, a: f.l, u: f.u })
}

/// An element `((A, v), (u, −Aᵀ))` of `𝔤`, with `A ∈ 𝔥`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebraElement {
    #[serde(rename = "A")]
    pub a: HMatrix,
    pub v: VVector,
    pub u: VPrimeVector,
}

impl LieAlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The grading element `Z₀ = diag(I/2, −I/2)`.
    pub fn grading_element() -> Self {
        LieAlgebraElement { a: HMatrix::diag(0.5, 0.5, 0.5), ..Self::default() }
    }

    pub fn to_matrix(&self) -> Matrix6<f64> {
        let a = self.a.to_matrix();
        Blocks { a, b: self.v.embed(), c: self.u.embed(), d: -a.transpose() }.assemble()
    }

    pub fn scale(&self, t: f64) -> Self {
        LieAlgebraElement {
            a: HMatrix(self.a.0.map(|c| c * t)),
            v: self.v * t,
            u: VPrimeVector(self.u.0.map(|c| c * t)),
        }
    }

    pub fn max_abs_diff(&self, other: &LieAlgebraElement) -> f64 {
        (self.to_matrix() - other.to_matrix()).amax()
    }

    /// Frobenius norm of the 6×6 realization.
    pub fn norm(&self) -> f64 {
        self.to_matrix().norm()
    }
}

/// `[X, Y] = XY − YX` on 6×6 matrices.
pub fn bracket(x: &Matrix6<f64>, y: &Matrix6<f64>) -> Matrix6<f64> {
    x * y - y * x
}

/// Splits `X` into its `ad(Z₀)`-eigencomponents `(X₋₁, X₀, X₁)`.
pub fn grade(x: &LieAlgebraElement) -> (LieAlgebraElement, LieAlgebraElement, LieAlgebraElement) {
    let zero = LieAlgebraElement::zero();
    (
        LieAlgebraElement { u: x.u, ..zero },
        LieAlgebraElement { a: x.a, ..zero },
        LieAlgebraElement { v: x.v, ..zero },
    )
}

/// An element `((0, v), (u, 0))` of the invariant cone `C`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConeLieElement {
    pub v: VVector,
    pub u: VPrimeVector,
}

impl ConeLieElement {
    pub fn to_lie(&self) -> LieAlgebraElement {
        LieAlgebraElement { a: HMatrix::zero(), v: self.v, u: self.u }
    }

    pub fn is_in_cone(&self, tol: f64) -> bool {
        in_cone_c(&self.to_lie(), tol)
    }
}

/// `X ∈ C`: vanishing `𝔥`-part, `v ∈ Ω̄`, `u ∈ Ω̄ ∩ V′`, all within `tol`.
pub fn in_cone_c(x: &LieAlgebraElement, tol: f64) -> bool {
    let a_part = x.a.0.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
    let u_scale = 1.0 + x.u.0[0].abs().max(x.u.0[1].abs());
    a_part <= tol && in_closed_cone(&x.v, tol) && x.u.is_nonnegative(tol * u_scale)
}

/// Replaces the structural zeros of `G` by exact zeros.
fn project_to_g_pattern(m: &Matrix6<f64>) -> Matrix6<f64> {
    let Blocks { a, b, c, d } = Blocks::of(m);
    let h = |x: &Matrix3<f64>| HMatrix::from_matrix(x).to_matrix();
    let mut w = b;
    w[(0, 1)] = 0.0;
    w[(1, 0)] = 0.0;
    Blocks {
        a: h(&a),
        b: w,
        c: VPrimeVector::from_diagonal(&c).embed(),
        d: h(&d.transpose()).transpose(),
    }
    .assemble()
}

/// The exponential of `X ∈ 𝔤` (degree-13 Padé with scaling and squaring).
pub fn exp_lie(x: &LieAlgebraElement) -> GElement {
    let e = expm(&x.to_matrix());
    GElement::from_matrix_unchecked(project_to_g_pattern(&e))
}

/// Largest off-`𝔤` residue accepted by [`log_group`].
pub const LOG_PATTERN_TOL: f64 = 1e-6;

/// Principal logarithm projected onto `𝔤`, with the size of the discarded
/// off-pattern part.
pub fn log_group_with_residue(g: &GElement) -> Result<(LieAlgebraElement, f64)> {
    let l = logm(g.matrix())?;
    let Blocks { a, b, c, d } = Blocks::of(&l);
    let x = LieAlgebraElement {
        a: HMatrix::from_matrix(&((a - d.transpose()) * 0.5)),
        v: VVector::unembed(&b),
        u: VPrimeVector::from_diagonal(&c),
    };
    let residue = (l - x.to_matrix()).amax();
    Ok((x, residue))
}

/// Principal logarithm of `g`, as an element of `𝔤`. Fails when `g` has an
/// eigenvalue on `(−∞, 0]` or when the logarithm leaves `𝔤` by more than
/// `1e-6 · (1 + ‖log g‖)`.
pub fn log_group(g: &GElement) -> Result<LieAlgebraElement> {
    let (x, residue) = log_group_with_residue(g)?;
    if residue > LOG_PATTERN_TOL * (1.0 + x.to_matrix().amax()) {
        return Err(Error::Pattern(format!("logarithm leaves g (residue {residue:e})")));
    }
    Ok(x)
}

/// `ρ(A) · exp(X)`.
pub fn polar_compose(a: &HMatrix, x: &ConeLieElement) -> Result<GElement> {
    Ok(rho_embed(a)?.mul(&exp_lie(&x.to_lie())))
}

/// A pair `(A, X)` with `g = ρ(A) · exp(X)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarFactors {
    #[serde(rename = "A")]
    pub a: HMatrix,
    #[serde(rename = "X")]
    pub x: ConeLieElement,
    pub iterations: usize,
}

impl PolarFactors {
    pub fn compose(&self) -> Result<GElement> {
        polar_compose(&self.a, &self.x)
    }
}

/// Factors `g ∈ Γ` as `ρ(A) · exp(X)` with `X ∈ C`.
///
/// Starting from the `L`-factor of the triple decomposition, `A` is updated by
/// `A ← A · exp(Y₀)` where `Y₀` is the `𝔤₀`-component of
/// `log(ρ(A)⁻¹ g)`, until `‖Y₀‖ ≤ tol`. `X` is then the `𝔤₋₁ ⊕ 𝔤₁` part of
/// the last logarithm.
pub fn polar_factor(g: &GElement, max_iter: usize, tol: f64) -> Result<PolarFactors> {
    if let Some(reason) = gamma_violation(g.matrix(), DEFAULT_TOL.max(tol)) {
        return Err(Error::Membership(format!("not in Gamma: {reason}")));
    }
    let mut a = triple_decompose(g)?.l;
    let mut residual = f64::INFINITY;
    for iteration in 0..=max_iter {
        let y = log_group(&rho_embed(&a)?.inverse().mul(g))?;
        residual = y.a.0.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
        if residual <= tol {
            let x = ConeLieElement { v: y.v, u: y.u };
            if !x.is_in_cone(10.0 * tol) {
                return Err(Error::ConeViolation(format!(
                    "recovered X = (v {:?}, u {:?}) is outside C",
                    x.v.0, x.u.0
                )));
            }
            return Ok(PolarFactors { a, x, iterations: iteration });
        }
        if iteration == max_iter {
            break;
        }
        a = HMatrix::from_matrix(&(a.to_matrix() * expm(&y.a.to_matrix())));
    }
    Err(Error::Convergence { iterations: max_iter, residual })
}

/// A random element of `Γ` composed from triple factors. With
/// `interior = false` the factors are pushed to the boundary of `Ω̄` some of
/// the time (zero `v`, singular `v`, zero entries of `u`).
pub fn sample_gamma<R: Rng + ?Sized>(rng: &mut R, interior: bool) -> GElement {
    sample_gamma_factors(rng, interior)
        .compose()
        .expect("sampled A lies in H+")
}

pub fn sample_gamma_factors<R: Rng + ?Sized>(rng: &mut R, interior: bool) -> GammaFactors {
    let mut v = cone::sample_cone(rng);
    let a = cone::sample_h_plus(rng);
    let mut u = VPrimeVector([0.0; 2].map(|_| rng.sample::<f64, _>(StandardNormal).exp()));
    if !interior {
        match rng.gen_range(0..4) {
            0 => {}
            1 => v = VVector::zero(),
            2 => v = boundary_point(&v),
            _ => {
                v.0[1] = 0.0;
                v.0[4] = 0.0;
            }
        }
        for c in u.0.iter_mut() {
            if rng.gen_bool(1.0 / 3.0) {
                *c = 0.0;
            }
        }
    }
    GammaFactors { v, a, u }
}

/// Moves `x ∈ Ω` to the boundary along the `x3` direction (`det = 0`).
pub fn boundary_point(x: &VVector) -> VVector {
    let [x1, x2, _, x4, x5] = x.0;
    VVector([x1, x2, x5 * x5 / x2 + x4 * x4 / x1, x4, x5])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{dual_translation, in_g, in_upsilon, inversion_s, is_symplectic, translation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = DEFAULT_TOL;

    fn upper(b: Matrix3<f64>) -> Matrix6<f64> {
        Blocks { a: Matrix3::identity(), b, c: Matrix3::zeros(), d: Matrix3::identity() }.assemble()
    }

    #[test]
    fn gamma_sp_examples() {
        let psd = Matrix3::new(2.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0);
        assert!(in_gamma_sp(&upper(psd), TOL));
        assert!(in_gamma_sp(&Matrix6::identity(), TOL));
        let indefinite = Matrix3::new(1.0, 2.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert_eq!(gamma_sp_violation(&upper(indefinite), TOL), Some("D^T B not positive semidefinite"));
    }

    #[test]
    fn gamma_examples() {
        let v = VVector::new(1.0, 1.0, 1.0, 1.0, 0.0);
        assert!(in_gamma(translation(&v).matrix(), TOL));
        assert_eq!(gamma_violation(inversion_s().matrix(), TOL), Some("det D = 0"));
        let v0 = VVector::new(1.0, 1.0, 1.01, -1.0, 0.0);
        assert!(in_gamma(translation(&v0).matrix(), TOL));
        assert!(!in_gamma(translation(&-v0).matrix(), TOL));
        assert!(!in_gamma(dual_translation(&VPrimeVector::new(1.0, 0.0)).matrix(), TOL));
        assert!(in_gamma(dual_translation(&VPrimeVector::new(-1.0, 0.0)).matrix(), TOL));
    }

    #[test]
    fn gamma_factor_examples() {
        let v = VVector::new(2.0, 1.0, 3.0, 0.5, 0.5);
        let f = gamma_factor(&translation(&v), TOL).unwrap();
        assert_eq!(f, GammaFactors { v, a: HMatrix::identity(), u: VPrimeVector::zero() });

        let a = HMatrix::new(1.5, -2.0, 0.5, 0.3, 0.1);
        let u = VPrimeVector::new(0.25, 4.0);
        let g = rho_embed(&a).unwrap().mul(&dual_translation(&-u));
        let f = gamma_factor(&g, TOL).unwrap();
        assert!(f.a.max_abs_diff(&a) < 1e-14);
        assert!((f.u.0[0] - u.0[0]).abs() < 1e-14 && (f.u.0[1] - u.0[1]).abs() < 1e-14);
        assert!(f.v.norm() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let want = sample_gamma_factors(&mut rng, true);
            let got = gamma_factor(&want.compose().unwrap(), TOL).unwrap();
            assert!(got.v.max_abs_diff(&want.v) < 1e-9 * (1.0 + want.v.norm()));
            assert!(got.a.max_abs_diff(&want.a) < 1e-9);
        }

        assert!(matches!(gamma_factor(&inversion_s(), TOL), Err(Error::Membership(_))));
        assert!(matches!(
            gamma_factor(&translation(&VVector::new(-1.0, 1.0, 1.0, 0.0, 0.0)), TOL),
            Err(Error::Membership(_))
        ));
    }

    #[test]
    fn intersection_check_examples() {
        let v = VVector::new(1.0, 1.0, 1.0, 1.0, 0.0);
        assert_eq!(gamma_sp_intersection_check(translation(&v).matrix(), TOL), Ok(true));
        assert_eq!(gamma_sp_intersection_check(inversion_s().matrix(), TOL), Ok(false));
        // Gamma_Sp but not G: a PSD translation with a nonzero (1,2) entry
        let b = Matrix3::new(2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 1.0);
        assert_eq!(gamma_sp_intersection_check(&upper(b), TOL), Ok(false));
    }

    #[test]
    fn grading_examples() {
        let z0 = LieAlgebraElement::grading_element().to_matrix();
        let only_v = LieAlgebraElement { v: VVector::new(1.0, 2.0, 3.0, 4.0, 5.0), ..Default::default() };
        let (m, z, p) = grade(&only_v);
        assert_eq!(p, only_v);
        assert_eq!(m, LieAlgebraElement::zero());
        assert_eq!(z, LieAlgebraElement::zero());
        let (_, z, _) = grade(&LieAlgebraElement::grading_element());
        assert_eq!(z, LieAlgebraElement::grading_element());

        let x = LieAlgebraElement {
            a: HMatrix::new(0.3, -1.1, 0.7, 2.0, -0.5),
            v: VVector::new(1.0, -2.0, 0.5, 0.25, 3.0),
            u: VPrimeVector::new(-0.75, 1.25),
        };
        let (m, z, p) = grade(&x);
        assert_eq!(m.to_matrix() + z.to_matrix() + p.to_matrix(), x.to_matrix());
        assert_eq!(bracket(&z0, &m.to_matrix()), -m.to_matrix());
        assert_eq!(bracket(&z0, &z.to_matrix()), Matrix6::zeros());
        assert_eq!(bracket(&z0, &p.to_matrix()), p.to_matrix());
    }

    #[test]
    fn lie_elements_are_hamiltonian() {
        let x = LieAlgebraElement {
            a: HMatrix::new(0.3, -1.1, 0.7, 2.0, -0.5),
            v: VVector::new(1.0, -2.0, 0.5, 0.25, 3.0),
            u: VPrimeVector::new(-0.75, 1.25),
        }
        .to_matrix();
        let j = group::j_matrix();
        assert!((x * j + j * x.transpose()).amax() < 1e-15);
    }

    #[test]
    fn cone_c_examples() {
        assert!(in_cone_c(&LieAlgebraElement::zero(), TOL));
        let interior = LieAlgebraElement { v: VVector::identity(), u: VPrimeVector::new(1.0, 1.0), ..Default::default() };
        assert!(in_cone_c(&interior, TOL));
        let bad = LieAlgebraElement { v: VVector::new(1.0, 1.0, 0.5, 1.0, 0.0), ..Default::default() };
        assert!(!in_cone_c(&bad, TOL));
        let with_a = LieAlgebraElement { a: HMatrix::diag(0.1, 0.0, 0.0), ..interior };
        assert!(!in_cone_c(&with_a, TOL));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_lie(&LieAlgebraElement::zero()), GElement::identity());
        let v = VVector::new(1.0, 2.0, 3.0, -0.5, 0.25);
        let x = LieAlgebraElement { v, ..Default::default() };
        assert_eq!(exp_lie(&x), translation(&v));

        let x = LieAlgebraElement {
            a: HMatrix::new(0.3, -0.4, 0.2, 0.5, -0.5),
            v: VVector::new(0.5, 0.2, 0.3, -0.1, 0.2),
            u: VPrimeVector::new(0.3, -0.2),
        };
        let e = exp_lie(&x);
        assert!(in_g(e.matrix()));
        assert!(is_symplectic(e.matrix()));
        assert!(e.mul(&exp_lie(&x.scale(-1.0))).max_abs_diff(&GElement::identity()) < 1e-12);
    }

    #[test]
    fn log_examples() {
        assert_eq!(log_group(&GElement::identity()).unwrap(), LieAlgebraElement::zero());
        let v = VVector::new(1.0, 2.0, 3.0, -0.5, 0.25);
        let x = log_group(&translation(&v)).unwrap();
        assert!(x.max_abs_diff(&LieAlgebraElement { v, ..Default::default() }) < 1e-12);
        // s² = ρ(diag(-1,-1,1)) has eigenvalue -1
        let s2 = inversion_s().mul(&inversion_s());
        assert!(matches!(log_group(&s2), Err(Error::Spectrum(_))));
    }

    #[test]
    fn polar_examples() {
        let id = polar_compose(&HMatrix::identity(), &ConeLieElement::default()).unwrap();
        assert_eq!(id, GElement::identity());
        let v = VVector::new(1.0, 2.0, 3.0, -0.5, 0.25);
        let t = polar_compose(&HMatrix::identity(), &ConeLieElement { v, u: VPrimeVector::zero() }).unwrap();
        assert_eq!(t, translation(&v));

        let f = polar_factor(&GElement::identity(), 50, 1e-12).unwrap();
        assert_eq!(f.a, HMatrix::identity());
        assert_eq!(f.x, ConeLieElement::default());

        let f = polar_factor(&translation(&v), 50, 1e-12).unwrap();
        assert!(f.a.max_abs_diff(&HMatrix::identity()) < 1e-12);
        assert!(f.x.v.max_abs_diff(&v) < 1e-12);

        assert!(matches!(polar_factor(&inversion_s(), 50, 1e-12), Err(Error::Membership(_))));
    }

    #[test]
    fn polar_factor_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = cone::sample_h_plus(&mut rng);
            let x = ConeLieElement {
                v: cone::sample_cone(&mut rng) * 0.2,
                u: VPrimeVector::new(rng.gen_range(0.0..0.3), rng.gen_range(0.0..0.3)),
            };
            let g = polar_compose(&a, &x).unwrap();
            assert!(in_gamma(g.matrix(), TOL));
            let f = polar_factor(&g, 200, 1e-12).unwrap();
            let back = f.compose().unwrap();
            assert!(back.max_abs_diff(&g) <= 1e-8 * (1.0 + g.matrix().amax()), "{:?}", f);
        }
    }

    #[test]
    fn samples_lie_in_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for interior in [true, false] {
            for _ in 0..200 {
                let g = sample_gamma(&mut rng, interior);
                assert!(in_gamma(g.matrix(), TOL));
                assert!(in_upsilon(&g));
            }
        }
        let id = GammaFactors { v: VVector::zero(), a: HMatrix::identity(), u: VPrimeVector::zero() };
        assert_eq!(id.compose().unwrap(), GElement::identity());
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(sample_gamma(&mut r1, false), sample_gamma(&mut r2, false));
    }

    #[test]
    fn boundary_point_is_on_boundary() {
        let x = VVector::new(2.0, 3.0, 5.0, 1.0, -1.0);
        let b = boundary_point(&x);
        assert!(cone::minors(&b).2.abs() < 1e-14);
        assert!(in_closed_cone(&b, TOL));
        assert!(!cone::in_open_cone(&(b - VVector::new(0.0, 0.0, 1e-6, 0.0, 0.0))));
    }
}
