//! Samplers shared by the integration and acceptance tests.
#![allow(dead_code)]

use nalgebra::{Matrix3, Matrix6};
use rand::Rng;
use rand_distr::StandardNormal;

use vinberg::cone::{cone_point_from_normals, HMatrix, VPrimeVector, VVector};
use vinberg::group::{dual_translation, inversion_s, isotropy_k, rho_embed, translation, Blocks, GElement};
use vinberg::semigroup::ConeLieElement;

pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn normal_v<R: Rng>(rng: &mut R) -> VVector {
    VVector(std::array::from_fn(|_| normal(rng)))
}

pub fn unit_v<R: Rng>(rng: &mut R) -> VVector {
    let v = normal_v(rng);
    v * (1.0 / v.norm())
}

/// A point `ρ(A)·I₃` of the cone with `log a_i`, `a4`, `a5` drawn from
/// `N(0, 0.35²)`, so its eigenvalues mostly lie within a decade of 1.
pub fn moderate_cone_point<R: Rng>(rng: &mut R) -> VVector {
    cone_point_from_normals(std::array::from_fn(|_| 0.35 * normal(rng)))
}

/// An element of `H` with diagonal signs chosen at random in the first two
/// slots.
pub fn sample_h<R: Rng>(rng: &mut R) -> HMatrix {
    let mut sign = || if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let (s1, s2) = (sign(), sign());
    HMatrix::new(
        s1 * (0.5 * normal(rng)).exp(),
        s2 * (0.5 * normal(rng)).exp(),
        (0.5 * normal(rng)).exp(),
        normal(rng),
        normal(rng),
    )
}

/// One random generator of `G`.
pub fn sample_generator<R: Rng>(rng: &mut R) -> GElement {
    match rng.gen_range(0..5) {
        0 => translation(&normal_v(rng)),
        1 => dual_translation(&VPrimeVector::new(normal(rng), normal(rng))),
        2 => rho_embed(&sample_h(rng)).expect("sampled in H"),
        3 => isotropy_k(rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.0..std::f64::consts::TAU)),
        _ => inversion_s(),
    }
}

/// A word of length 1 to 4 in the generators.
pub fn sample_g_word<R: Rng>(rng: &mut R) -> GElement {
    let len = rng.gen_range(1..=4);
    (0..len).fold(GElement::identity(), |acc, _| acc.mul(&sample_generator(rng)))
}

fn sym3<R: Rng>(rng: &mut R) -> Matrix3<f64> {
    let f = Matrix3::from_fn(|_, _| normal(rng));
    f + f.transpose()
}

/// A symplectic matrix that breaks the block pattern of `G`.
pub fn sample_pattern_violator<R: Rng>(rng: &mut R) -> Matrix6<f64> {
    let id = Matrix3::identity();
    let zero = Matrix3::zeros();
    let base = match rng.gen_range(0..3) {
        0 => {
            let mut b = sym3(rng);
            let off = 0.5 + rng.gen::<f64>();
            b[(0, 1)] = off;
            b[(1, 0)] = off;
            Blocks { a: id, b, c: zero, d: id }.assemble()
        }
        1 => {
            let mut l = Matrix3::from_fn(|_, _| normal(rng)) + id * 3.0;
            l[(0, 2)] = 0.5 + rng.gen::<f64>();
            l[(2, 2)] = l[(2, 2)].abs() + 0.5;
            let l_inv_t = l.try_inverse().expect("diagonally dominant").transpose();
            Blocks { a: l, b: zero, c: zero, d: l_inv_t }.assemble()
        }
        _ => {
            let mut c = sym3(rng);
            c[(2, 2)] = 0.5 + rng.gen::<f64>();
            Blocks { a: id, b: zero, c, d: id }.assemble()
        }
    };
    if rng.gen_bool(0.5) {
        sample_g_word(rng).matrix() * base
    } else {
        base
    }
}

/// A random `X ∈ C` rescaled so that its 6×6 Frobenius norm is `norm`.
pub fn sample_cone_lie<R: Rng>(rng: &mut R, norm: f64) -> ConeLieElement {
    let v = cone_point_from_normals(std::array::from_fn(|_| 0.5 * normal(rng)));
    let u = VPrimeVector::new(normal(rng).abs(), normal(rng).abs());
    let x = ConeLieElement { v, u };
    let scale = norm / x.to_lie().norm();
    ConeLieElement { v: v * scale, u: VPrimeVector(u.0.map(|c| c * scale)) }
}
