//! Small dense matrix helpers: adjugate inverses for 3×3 blocks, and the
//! matrix exponential and principal logarithm for the 6×6 group elements.

use nalgebra::{ComplexField, DMatrix, Matrix3, SMatrix};

use crate::error::{Error, Result};

/// Determinant and adjugate of a 3×3 matrix over `f64` or `Complex<f64>`.
pub fn det_adj3<T: ComplexField + Copy>(m: &Matrix3<T>) -> (T, Matrix3<T>) {
    let c = |i: usize, j: usize| m[(i, j)];
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| c(r0, c0) * c(r1, c1) - c(r0, c1) * c(r1, c0);
    // adj[i][j] = cofactor of entry (j, i)
    let adj = Matrix3::new(
        cof(1, 2, 1, 2),
        -cof(0, 2, 1, 2),
        cof(0, 1, 1, 2),
        -cof(1, 2, 0, 2),
        cof(0, 2, 0, 2),
        -cof(0, 1, 0, 2),
        cof(1, 2, 0, 1),
        -cof(0, 2, 0, 1),
        cof(0, 1, 0, 1),
    );
    let det = c(0, 0) * adj[(0, 0)] + c(0, 1) * adj[(1, 0)] + c(0, 2) * adj[(2, 0)];
    (det, adj)
}

/// Inverse by adjugate, failing when `|det| ≤ 1e-12 · (1 + ‖m‖)³`.
pub fn inverse3<T: ComplexField<RealField = f64> + Copy>(m: &Matrix3<T>) -> Result<Matrix3<T>> {
    let (det, adj) = det_adj3(m);
    let scale = 1.0 + m.iter().fold(0.0_f64, |acc, z| acc.max(z.modulus()));
    if det.modulus() <= 1e-12 * scale.powi(3) {
        return Err(Error::Singular(format!(
            "3x3 determinant {:e} below threshold",
            det.modulus()
        )));
    }
    Ok(adj.map(|a| a / det))
}

/// Induced 1-norm (maximum absolute column sum).
pub fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|c| c.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;
const MAX_SQUARINGS: i32 = 20;

fn to_dyn<const N: usize>(a: &SMatrix<f64, N, N>) -> DMatrix<f64> {
    DMatrix::from_column_slice(N, N, a.as_slice())
}

fn from_dyn<const N: usize>(a: &DMatrix<f64>) -> SMatrix<f64, N, N> {
    SMatrix::from_column_slice(a.as_slice())
}

/// Matrix exponential by scaling and squaring with the degree-13 diagonal
/// Padé approximant. At most 20 squarings are applied.
pub fn expm<const N: usize>(a: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    from_dyn(&expm_dyn(&to_dyn(a)))
}

/// Principal matrix logarithm, see [`logm_dyn`].
pub fn logm<const N: usize>(a: &SMatrix<f64, N, N>) -> Result<SMatrix<f64, N, N>> {
    logm_dyn(&to_dyn(a)).map(|l| from_dyn(&l))
}

pub fn expm_dyn(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = norm1(a);
    if norm == 0.0 {
        return DMatrix::identity(n, n);
    }
    let s = if norm > THETA13 {
        ((norm / THETA13).log2().ceil() as i32).clamp(0, MAX_SQUARINGS)
    } else {
        0
    };
    let a = a * 2f64.powi(-s);
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &id * b[0];
    let p = &v + &u;
    let q = v - u;
    // q is well conditioned for ‖a‖₁ ≤ θ₁₃
    let mut r = q.lu().solve(&p).expect("Pade denominator is nonsingular after scaling");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Gauss-Legendre nodes and weights on `[0, 1]`, by Newton iteration on the
/// Legendre polynomial.
fn gauss_legendre01(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

/// Principal square root by the unscaled Denman-Beavers iteration. Stops on
/// a small step or when round-off makes the step stop shrinking.
fn sqrtm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    let mut prev_delta = f64::INFINITY;
    for _ in 0..100 {
        let yi = y
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Spectrum("singular iterate in square root".into()))?;
        let zi = z
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Spectrum("singular iterate in square root".into()))?;
        let y_next = (&y + zi) * 0.5;
        z = (z + yi) * 0.5;
        let delta = norm1(&(&y_next - &y));
        let scale = norm1(&y_next);
        if delta <= 1e-15 * scale || (delta >= prev_delta && delta <= 1e-10 * scale) {
            return Ok(y_next);
        }
        y = y_next;
        prev_delta = delta;
    }
    Err(Error::Spectrum("square root iteration did not converge".into()))
}

const LOG_PADE_ORDER: usize = 8;
const LOG_SQRT_THRESHOLD: f64 = 0.25;

/// Principal matrix logarithm by inverse scaling and squaring: repeated
/// square roots until `‖A − I‖₁ ≤ 1/4`, then the degree-8 diagonal Padé
/// approximant of `log(I + X)` in its Gauss-Legendre partial-fraction form.
pub fn logm_dyn(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_log_spectrum(a)?;
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut r = a.clone();
    let mut k = 0;
    while norm1(&(&r - &id)) > LOG_SQRT_THRESHOLD {
        if k >= 64 {
            return Err(Error::Spectrum("too many square roots".into()));
        }
        r = sqrtm(&r)?;
        k += 1;
    }
    let x = r - &id;
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for (node, weight) in gauss_legendre01(LOG_PADE_ORDER) {
        let denom = &id + &x * node;
        let term = denom
            .lu()
            .solve(&x)
            .ok_or_else(|| Error::Spectrum("singular Pade denominator".into()))?;
        acc += term * weight;
    }
    Ok(acc * 2f64.powi(k))
}

/// Rejects matrices with an eigenvalue on the closed negative real axis.
pub fn check_log_spectrum(a: &DMatrix<f64>) -> Result<()> {
    let scale = 1.0 + a.amax();
    for lambda in a.clone().complex_eigenvalues().iter() {
        if lambda.re <= 0.0 && lambda.im.abs() <= 1e-12 * scale {
            return Err(Error::Spectrum(format!(
                "eigenvalue {:.3e}{:+.3e}i on the closed negative axis",
                lambda.re, lambda.im
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Complex, Matrix2, Matrix6};

    #[test]
    fn adjugate_inverse_matches_lu() {
        let m = Matrix3::new(2.0, -1.0, 0.5, 0.3, 4.0, 1.0, -2.0, 0.0, 3.0);
        let inv = inverse3(&m).unwrap();
        assert!((inv * m - Matrix3::identity()).amax() < 1e-15);
        assert!((det_adj3(&m).0 - m.determinant()).abs() < 1e-12);
        let z = m.map(|c| Complex::new(c, 0.5 * c));
        let zi = inverse3(&z).unwrap();
        let err = (zi * z - Matrix3::identity()).map(|c| c.norm()).amax();
        assert!(err < 1e-14);
        assert!(inverse3(&Matrix3::<f64>::zeros()).is_err());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre01(8);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-14);
        // exact up to degree 15
        let integral: f64 = rule.iter().map(|(x, w)| w * x.powi(15)).sum();
        assert!((integral - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn expm_rotation_generator() {
        let t = 0.7_f64;
        let a = Matrix2::new(0.0, -t, t, 0.0);
        let e = expm(&a);
        let want = Matrix2::new(t.cos(), -t.sin(), t.sin(), t.cos());
        assert!((e - want).amax() < 1e-15);
        // large norm exercises the squaring phase
        let big = Matrix2::new(0.0, -30.0, 30.0, 0.0);
        let e = expm(&big);
        let want = Matrix2::new(30f64.cos(), -30f64.sin(), 30f64.sin(), 30f64.cos());
        assert!((e - want).amax() < 1e-12);
    }

    #[test]
    fn expm_nilpotent_is_exact() {
        let mut a = Matrix6::zeros();
        a[(0, 3)] = 1.5;
        a[(1, 5)] = -2.0;
        assert_eq!(expm(&a), Matrix6::identity() + a);
    }

    #[test]
    fn logm_inverts_expm() {
        let a = Matrix3::new(0.1, 0.9, -0.3, -0.8, 0.2, 0.4, 0.5, -0.6, -0.1) * 1.5;
        let l = logm(&expm(&a)).unwrap();
        assert!((l - a).amax() < 1e-12);
    }

    #[test]
    fn logm_rejects_negative_eigenvalue() {
        let a = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -2.0, 3.0));
        assert!(matches!(logm(&a), Err(Error::Spectrum(_))));
        let a = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 0.0, 3.0));
        assert!(matches!(logm(&a), Err(Error::Spectrum(_))));
    }
}
