//! The canonical Hessian metric `D_v D_w log φ` on `Ω`, the trace metric on
//! `Sym⁺⁺(3,ℝ)`, Jacobians of the linear fractional action, and contraction
//! ratios.
//!
//! Elements of the symplectic semigroup contract the trace metric on
//! `Sym⁺⁺(3,ℝ)`. The analogous statement fails on `Ω`: the translation by
//! `(1, 1, 1.01, −1, 0)` stretches the tangent vector `(1, 0, 1, 1, 0)` at
//! `I₃`, see [`counterexample`].

use std::io::Write;

use nalgebra::{Matrix3, Matrix6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cone::{in_open_cone, log_char_function, sample_cone, VVector, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::group::{act_real, translation, Blocks, GElement};
use crate::linalg::inverse3;
use crate::semigroup::{gamma_violation, sample_gamma};

/// Ratios above `1 + VIOLATION_SLACK` count as violations of contraction.
pub const VIOLATION_SLACK: f64 = 1e-12;

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

fn require_open(x: &VVector) -> Result<()> {
    if in_open_cone(x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{:?} is not in the open cone", x.0)))
    }
}

fn trace_form(x_inv: &Matrix3<f64>, v: &Matrix3<f64>, w: &Matrix3<f64>) -> f64 {
    2.0 * (x_inv * v * x_inv * w).trace()
}

/// `−½ (v1 w1 / x1² + v2 w2 / x2²) + 2 tr(x⁻¹ v x⁻¹ w)`.
pub fn metric_omega(x: &VVector, v: &VVector, w: &VVector) -> Result<f64> {
    require_open(x)?;
    let x_inv = inverse3(&x.embed())?;
    let extra = -0.5 * (v.x1() * w.x1() / (x.x1() * x.x1()) + v.x2() * w.x2() / (x.x2() * x.x2()));
    Ok(extra + trace_form(&x_inv, &v.embed(), &w.embed()))
}

/// `2 tr(x⁻¹ v x⁻¹ w)` on positive definite `x`, evaluated as
/// `2 ⟨R⁻¹ v R⁻ᵀ, R⁻¹ w R⁻ᵀ⟩` with `x = R Rᵀ` the Cholesky factorization.
pub fn metric_sym(x: &Matrix3<f64>, v: &Matrix3<f64>, w: &Matrix3<f64>) -> Result<f64> {
    let r = x
        .cholesky()
        .ok_or_else(|| Error::Domain("x is not positive definite".into()))?
        .l();
    let congruence = |m: &Matrix3<f64>| {
        let half = r.solve_lower_triangular(m).expect("Cholesky factor has a positive diagonal");
        r.solve_lower_triangular(&half.transpose())
            .expect("Cholesky factor has a positive diagonal")
    };
    Ok(2.0 * congruence(v).dot(&congruence(w)))
}

/// Central mixed second difference of `f` at `x` in directions `v`, `w`.
pub fn hessian_fd<F>(f: F, x: &VVector, v: &VVector, w: &VVector, h: f64) -> Result<f64>
where
    F: Fn(&VVector) -> Result<f64>,
{
    let hv = *v * h;
    let hw = *w * h;
    let pp = f(&(*x + hv + hw))?;
    let pm = f(&(*x + hv - hw))?;
    let mp = f(&(*x - hv + hw))?;
    let mm = f(&(*x - hv - hw))?;
    Ok((pp - pm - mp + mm) / (4.0 * h * h))
}

/// Finite-difference Hessian of `log φ`; fails if a stencil point leaves `Ω`.
pub fn hessian_log_phi_fd(x: &VVector, v: &VVector, w: &VVector, h: f64) -> Result<f64> {
    require_open(x)?;
    hessian_fd(log_char_function, x, v, w, h)
}

/// Derivative of `x ↦ g·x` in direction `v`: `M⁻ᵀ v M⁻¹` with `M = Cx + D`.
pub fn jacobian_action(g: &GElement, x: &VVector, v: &VVector) -> Result<VVector> {
    let Blocks { c, d, .. } = g.blocks();
    let m_inv = inverse3(&(c * x.embed() + d))
        .map_err(|_| Error::Singular("det(Cx + D) = 0: point outside the domain of g".into()))?;
    Ok(VVector::unembed(&(m_inv.transpose() * v.embed() * m_inv)))
}

/// `(g·(x + hv) − g·(x − hv)) / 2h`.
pub fn jacobian_fd(g: &GElement, x: &VVector, v: &VVector, h: f64) -> Result<VVector> {
    let plus = act_real(g, &(*x + *v * h))?;
    let minus = act_real(g, &(*x - *v * h))?;
    Ok((plus - minus) * (0.5 / h))
}

/// One contraction probe `(g, x, v)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionRecord {
    pub g: GElement,
    pub x: VVector,
    /// Tangent vector, normalized to unit Euclidean norm.
    pub v: VVector,
    /// `(v|v)_x`.
    pub before: f64,
    /// `(Jv|Jv)_{g·x}`.
    pub after: f64,
    pub ratio: f64,
    pub violated: bool,
}

/// `(J(g,x)v | J(g,x)v)_{g·x} / (v|v)_x` for `g ∈ Γ`, `x ∈ Ω`, `v ≠ 0`.
pub fn contraction_ratio(g: &GElement, x: &VVector, v: &VVector) -> Result<ContractionRecord> {
    if let Some(reason) = gamma_violation(g.matrix(), DEFAULT_TOL) {
        return Err(Error::Domain(format!("g is not in Gamma: {reason}")));
    }
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::Domain("tangent vector is zero".into()));
    }
    let v = *v * (1.0 / norm);
    let image = act_real(g, x)?;
    let jv = jacobian_action(g, x, &v)?;
    let before = metric_omega(x, &v, &v)?;
    let after = metric_omega(&image, &jv, &jv)?;
    let ratio = after / before;
    Ok(ContractionRecord {
        g: *g,
        x: *x,
        v,
        before,
        after,
        ratio,
        violated: ratio > 1.0 + VIOLATION_SLACK,
    })
}

/// The analogous ratio for an element of `Γ_Sp` acting on `Sym⁺⁺(3,ℝ)` with
/// the trace metric.
pub fn contraction_ratio_sym(g: &Matrix6<f64>, x: &Matrix3<f64>, v: &Matrix3<f64>) -> Result<f64> {
    let Blocks { a, b, c, d } = Blocks::of(g);
    // solves against Mᵀ lose less to round-off than an explicit inverse
    let mt = (c * x + d).transpose().lu();
    let singular = || Error::Singular("det(Cx + D) = 0: point outside the domain of g".into());
    let image_t = mt.solve(&(a * x + b).transpose()).ok_or_else(singular)?;
    let image = (image_t + image_t.transpose()) * 0.5;
    let half = mt.solve(v).ok_or_else(singular)?;
    let jv = mt.solve(&half.transpose()).ok_or_else(singular)?;
    let jv = (jv + jv.transpose()) * 0.5;
    Ok(metric_sym(&image, &jv, &jv)? / metric_sym(x, v, v)?)
}

fn normal3<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    Matrix3::from_fn(|_, _| rng.sample(StandardNormal))
}

/// A random element `((I,b),(0,I)) · ((L,0),(0,L⁻ᵀ)) · ((I,0),(c,I))` of
/// `Γ_Sp` with `b`, `c` positive semidefinite (occasionally singular) and
/// `L ∈ GL(3,ℝ)`.
pub fn sample_gamma_sp<R: Rng + ?Sized>(rng: &mut R) -> Matrix6<f64> {
    let psd = |rng: &mut R| {
        let f = normal3(rng);
        let rank = rng.gen_range(0..=3);
        let f = Matrix3::from_fn(|i, j| if j < rank { f[(i, j)] } else { 0.0 });
        f * f.transpose()
    };
    let b = psd(rng);
    let c = psd(rng);
    let l = loop {
        let l = normal3(rng) + Matrix3::identity();
        if l.determinant().abs() > 1e-2 {
            break l;
        }
    };
    let l_inv_t = l.try_inverse().expect("determinant bounded away from zero").transpose();
    let blocks = |a, b, c, d| Blocks { a, b, c, d }.assemble();
    let upper = blocks(Matrix3::identity(), b, Matrix3::zeros(), Matrix3::identity());
    let middle = blocks(l, Matrix3::zeros(), Matrix3::zeros(), l_inv_t);
    let lower = blocks(Matrix3::identity(), Matrix3::zeros(), c, Matrix3::identity());
    upper * middle * lower
}

/// A random positive definite 3×3 matrix.
pub fn sample_spd<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let f = normal3(rng);
    f * f.transpose() + Matrix3::identity() * 0.1
}

/// A random symmetric 3×3 matrix.
pub fn sample_sym<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let f = normal3(rng);
    f + f.transpose()
}

/// `v₀ = (1, 1, 1.01, −1, 0)`.
pub const COUNTEREXAMPLE_SHIFT: VVector = VVector::new(1.0, 1.0, 1.01, -1.0, 0.0);

/// `v = (1, 0, 1, 1, 0)`.
pub const COUNTEREXAMPLE_TANGENT: VVector = VVector::new(1.0, 0.0, 1.0, 1.0, 0.0);

/// The translation `t_{v₀}` stretches `(1, 0, 1, 1, 0)` at `I₃`:
/// `(v|v)_{I₃} = 7.5` while `(v|v)_{I₃+v₀} = −1/8 + 2 (6.01/3.02)²`.
///
/// Unlike [`contraction_ratio`], the tangent vector is not normalized, so
/// `before` and `after` are the exact displayed values.
pub fn counterexample() -> ContractionRecord {
    let g = translation(&COUNTEREXAMPLE_SHIFT);
    let x = VVector::identity();
    let v = COUNTEREXAMPLE_TANGENT;
    let image = act_real(&g, &x).expect("translations are defined everywhere");
    let jv = jacobian_action(&g, &x, &v).expect("translations are defined everywhere");
    let before = metric_omega(&x, &v, &v).expect("identity lies in the cone");
    let after = metric_omega(&image, &jv, &jv).expect("image lies in the cone");
    let ratio = after / before;
    ContractionRecord { g, x, v, before, after, ratio, violated: ratio > 1.0 + VIOLATION_SLACK }
}

/// A violated probe and its position in the search.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexedRecord {
    pub seed_index: usize,
    pub record: ContractionRecord,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub max_ratio: f64,
    pub violation_count: usize,
    pub n_samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    /// Violated probes only.
    pub violations: Vec<IndexedRecord>,
    pub summary: SearchSummary,
}

const MAX_PROBE_DRAWS: usize = 64;

/// The probe for sample `index`: its own ChaCha stream keyed by the master
/// seed, so results do not depend on evaluation order. Draws that are
/// numerically singular are replaced by the next draw from the same stream.
pub fn search_probe(seed: u64, index: usize) -> Result<ContractionRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut last = Error::Domain("no probe drawn".into());
    for _ in 0..MAX_PROBE_DRAWS {
        let interior = rng.gen_bool(0.5);
        let g = sample_gamma(&mut rng, interior);
        let x = sample_cone(&mut rng);
        let v = VVector(std::array::from_fn(|_| rng.sample(StandardNormal)));
        match contraction_ratio(&g, &x, &v) {
            Ok(record) => return Ok(record),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Samples `n_samples` probes `(g, x, v)` with `g ∈ Γ`, `x ∈ Ω` and a random
/// unit tangent `v`. With `inject_probe`, index 0 is the fixed counterexample
/// instead of a random probe.
pub fn search_violations(seed: u64, n_samples: usize, inject_probe: bool) -> Result<SearchReport> {
    if n_samples == 0 {
        return Err(Error::Domain("n_samples must be positive".into()));
    }
    let mut violations = Vec::new();
    let mut max_ratio = f64::NEG_INFINITY;
    for index in 0..n_samples {
        let record = if inject_probe && index == 0 {
            counterexample()
        } else {
            search_probe(seed, index)?
        };
        max_ratio = max_ratio.max(record.ratio);
        if record.violated {
            violations.push(IndexedRecord { seed_index: index, record });
        }
    }
    let violation_count = violations.len();
    Ok(SearchReport {
        violations,
        summary: SearchSummary { max_ratio, violation_count, n_samples },
    })
}

/// Writes records as CSV with columns
/// `seed_index, ratio, violated, g_json, x_json, v_json`.
pub fn write_records_csv<W: Write>(records: &[IndexedRecord], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Domain(format!("csv output failed: {e}"));
    let json = |e: serde_json::Error| Error::Domain(format!("json encoding failed: {e}"));
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record(["seed_index", "ratio", "violated", "g_json", "x_json", "v_json"])
        .map_err(io)?;
    for r in records {
        writer
            .write_record([
                r.seed_index.to_string(),
                r.record.ratio.to_string(),
                r.record.violated.to_string(),
                serde_json::to_string(&r.record.g).map_err(json)?,
                serde_json::to_string(&r.record.x).map_err(json)?,
                serde_json::to_string(&r.record.v).map_err(json)?,
            ])
            .map_err(io)?;
    }
    writer.flush().map_err(|e| Error::Domain(format!("csv output failed: {e}")))?;
    Ok(())
}
