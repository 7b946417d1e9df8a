//! Small algebras, systems and bimodules, fixed and random.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Algebra, BimoduleActions};
use crate::bimodule::RBSBimodule;
use crate::cohomology::{ComplexTag, Complexes};
use crate::deformation::{
    first_order_equations, first_order_operator_equations, DeformationData, GaugeSeries, OperatorDeformation,
};
use crate::extension::Cocycle2;
use crate::linalg::{Field, Matrix, Scalar};
use crate::system::{check_weighted_rb, from_rb_operator, RotaBaxterSystem};

fn build(field: Field, d: usize, products: &[(usize, usize, usize)]) -> Algebra {
    let mut c = vec![vec![vec![0i64; d]; d]; d];
    for &(i, j, k) in products {
        c[i][j][k] = 1;
    }
    Algebra::from_i64_constants(field, &c).expect("catalog algebra")
}

/// `𝕂` with `1 · 1 = 1`.
pub fn line(field: Field) -> Algebra {
    build(field, 1, &[(0, 0, 0)])
}

/// `𝕂[ε]/(ε²)` on the basis `1, ε`.
pub fn dual_numbers(field: Field) -> Algebra {
    build(field, 2, &[(0, 0, 0), (0, 1, 1), (1, 0, 1)])
}

/// `𝕂 × 𝕂` on its two idempotents.
pub fn product_line(field: Field) -> Algebra {
    build(field, 2, &[(0, 0, 0), (1, 1, 1)])
}

/// Upper triangular 2×2 matrices on `e11, e12, e22`.
pub fn upper_triangular(field: Field) -> Algebra {
    build(field, 3, &[(0, 0, 0), (0, 1, 1), (1, 2, 1), (2, 2, 2)])
}

/// `𝕂[x]/(x³)` on `1, x, x²`.
pub fn truncated_cubic(field: Field) -> Algebra {
    build(field, 3, &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 2), (1, 1, 2)])
}

/// `e1 e1 = e2`, all other products zero.
pub fn square_zero_chain(field: Field) -> Algebra {
    build(field, 2, &[(0, 0, 1)])
}

/// `e_i e_j = e_i`.
pub fn left_zero_band(field: Field, d: usize) -> Algebra {
    let products: Vec<_> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j, i))).collect();
    build(field, d, &products)
}

pub fn catalog(field: Field) -> Vec<(&'static str, Algebra)> {
    vec![
        ("zero1", Algebra::zero(field, 1)),
        ("zero2", Algebra::zero(field, 2)),
        ("line", line(field)),
        ("dual", dual_numbers(field)),
        ("product", product_line(field)),
        ("upper-triangular", upper_triangular(field)),
        ("cubic", truncated_cubic(field)),
        ("square-zero", square_zero_chain(field)),
        ("left-zero-band", left_zero_band(field, 2)),
    ]
}

/// One-dimensional zero algebra over `𝔽₂` with `R = S = 0` and its regular bimodule.
pub fn zero_f2_module() -> RBSBimodule {
    let sys = RotaBaxterSystem::trivial(Algebra::zero(Field::Prime(2), 1));
    RBSBimodule::regular(&sys).expect("zero structure is valid")
}

/// Small integers over `ℚ` (occasionally halves), uniform residues over `𝔽_p`.
pub fn random_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Scalar {
    match field {
        Field::Rationals => {
            let n = field.from_i64(rng.gen_range(-2..=2));
            if rng.gen_bool(0.1) {
                &n * &field.from_fraction(&1.into(), &2.into()).expect("nonzero")
            } else {
                n
            }
        }
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

pub fn random_matrix<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| random_scalar(field, rng))
}

/// Sparse random matrix: each entry is nonzero with probability `density`.
pub fn random_sparse<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, density: f64, rng: &mut R) -> Matrix {
    Matrix::from_fn(
        field,
        rows,
        cols,
        |_, _| if rng.gen_bool(density) { random_scalar(field, rng) } else { field.zero() },
    )
}

pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

fn random_nonzero<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Scalar {
    loop {
        let s = random_scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Every `(R, S)` over `𝔽₂` making `(alg, R, S)` a Rota-Baxter system.
pub fn enumerate_f2_systems(alg: &Algebra) -> Vec<RotaBaxterSystem> {
    let f = Field::Prime(2);
    assert_eq!(alg.field(), f, "enumeration is over 𝔽₂");
    let d = alg.dim();
    assert!(d <= 2, "enumeration is limited to d ≤ 2");
    let n = d * d;
    let mut out = Vec::new();
    for bits in 0u32..(1 << (2 * n)) {
        let mat =
            |shift: usize| Matrix::from_fn(f, d, d, |i, j| f.from_i64(((bits >> (shift + i * d + j)) & 1) as i64));
        let sys = RotaBaxterSystem::new(alg.clone(), mat(0), mat(n)).expect("shapes");
        if sys.operator_verdict().is_pass() {
            out.push(sys);
        }
    }
    out
}

/// Left multiplication by `u` in the algebra.
fn left_mult(alg: &Algebra, u: &Matrix) -> Matrix {
    let d = alg.dim();
    alg.mult().mul(&u.kron(&Matrix::identity(alg.field(), d)))
}

fn seed_system<R: Rng + ?Sized>(field: Field, rng: &mut R) -> RotaBaxterSystem {
    let algebras = catalog(field);
    let lambda = random_nonzero(field, rng);
    match rng.gen_range(0..7) {
        // Trivial operators.
        0 => RotaBaxterSystem::trivial(algebras.choose(rng).expect("nonempty").1.clone()),
        // Zero multiplication makes every pair of operators admissible.
        1 => {
            let d = rng.gen_range(1..=2);
            RotaBaxterSystem::new(
                Algebra::zero(field, d),
                random_matrix(field, d, d, rng),
                random_matrix(field, d, d, rng),
            )
            .expect("shapes")
        }
        // R = 0 and R = -λ id are weight-λ operators on any algebra.
        2 => {
            let alg = algebras.choose(rng).expect("nonempty").1.clone();
            let r = if rng.gen_bool(0.5) {
                Matrix::zeros(field, alg.dim(), alg.dim())
            } else {
                Matrix::scalar_identity(alg.dim(), &-&lambda)
            };
            let (a, b) = from_rb_operator(&alg, &r, &lambda).expect("weight-λ operator");
            if rng.gen_bool(0.5) {
                a
            } else {
                b
            }
        }
        // -λ times the projection onto the first factor of a sum of two subalgebras.
        3 => {
            let (alg, keep) =
                if rng.gen_bool(0.5) { (product_line(field), vec![0]) } else { (upper_triangular(field), vec![0, 1]) };
            let r = Matrix::from_fn(field, alg.dim(), alg.dim(), |i, j| {
                if i == j && keep.contains(&i) {
                    -&lambda
                } else {
                    field.zero()
                }
            });
            let (a, b) = from_rb_operator(&alg, &r, &lambda).expect("weight-λ operator");
            if rng.gen_bool(0.5) {
                a
            } else {
                b
            }
        }
        // (A, L_u, L_v) with A commutative and uv = 0.
        4 => {
            let (alg, u, v) = match rng.gen_range(0..3) {
                0 => (dual_numbers(field), vec![0, 1], vec![0, 1]),
                1 => (truncated_cubic(field), vec![0, 1, 0], vec![0, 0, 1]),
                _ => (product_line(field), vec![1, 0], vec![0, 1]),
            };
            let mut col = |idx: Vec<i64>| {
                let s = random_nonzero(field, rng);
                Matrix::column_vector(field, idx.into_iter().map(|x| &field.from_i64(x) * &s).collect())
            };
            let (u, v) = (col(u), col(v));
            let (r, s) = (left_mult(&alg, &u), left_mult(&alg, &v));
            if rng.gen_bool(0.5) {
                RotaBaxterSystem::new(alg, r, s).expect("shapes")
            } else {
                RotaBaxterSystem::new(alg, s, r).expect("shapes")
            }
        }
        // Everything admissible over 𝔽₂ on a two-dimensional algebra.
        5 if field == Field::Prime(2) => {
            let two_dim: Vec<Algebra> = algebras.into_iter().map(|(_, a)| a).filter(|a| a.dim() == 2).collect();
            let alg = two_dim.choose(rng).expect("nonempty");
            enumerate_f2_systems(alg).choose(rng).expect("trivial pair is always admissible").clone()
        }
        // (A, 0, λ id) and (A, -λ id, 0) on a random catalog algebra.
        _ => {
            let alg = algebras.choose(rng).expect("nonempty").1.clone();
            let d = alg.dim();
            let shift = Matrix::scalar_identity(d, &lambda);
            RotaBaxterSystem::new(alg, Matrix::zeros(field, d, d), shift).expect("shapes")
        }
    }
}

/// A valid system of dimension at most `max_dim`, moved to a random basis.
pub fn random_system<R: Rng + ?Sized>(field: Field, max_dim: usize, rng: &mut R) -> RotaBaxterSystem {
    loop {
        let sys = seed_system(field, rng);
        if sys.dim() > max_dim {
            continue;
        }
        let p = random_invertible(field, sys.dim(), rng);
        let moved = sys.base_change(&p).expect("invertible change of basis");
        debug_assert!(moved.validate().is_pass());
        return moved;
    }
}

/// Zero actions admit arbitrary module operators.
pub fn zero_action_module<R: Rng + ?Sized>(sys: &RotaBaxterSystem, m: usize, rng: &mut R) -> RBSBimodule {
    let f = sys.field();
    RBSBimodule::new(
        sys.clone(),
        BimoduleActions::zero(f, sys.dim(), m),
        random_matrix(f, m, m, rng),
        random_matrix(f, m, m, rng),
    )
    .expect("shapes")
}

/// Regular, zero-action or a direct sum of both, of dimension at most `max_dim`,
/// moved to a random basis.
pub fn random_bimodule<R: Rng + ?Sized>(sys: &RotaBaxterSystem, max_dim: usize, rng: &mut R) -> RBSBimodule {
    let d = sys.dim();
    let regular = || RBSBimodule::regular(sys).expect("system is valid");
    let mut choices = vec![0];
    if d <= max_dim {
        choices.push(1);
    }
    if d < max_dim {
        choices.push(2);
    }
    let module = match choices.choose(rng).expect("nonempty") {
        0 => zero_action_module(sys, rng.gen_range(1..=max_dim.max(1)), rng),
        1 => regular(),
        _ => regular().direct_sum(&zero_action_module(sys, rng.gen_range(1..=max_dim - d), rng)).expect("same base"),
    };
    let q = random_invertible(sys.field(), module.dim(), rng);
    module.base_change(&q).expect("invertible change of basis")
}

/// A random valid `(system, bimodule)` pair with `d, m ≤ max_dim`.
pub fn random_instance<R: Rng + ?Sized>(field: Field, max_dim: usize, rng: &mut R) -> RBSBimodule {
    let sys = random_system(field, max_dim, rng);
    random_bimodule(&sys, max_dim, rng)
}

/// Random combination of a basis of columns.
fn random_combination<R: Rng + ?Sized>(basis: &Matrix, rng: &mut R) -> Vec<Scalar> {
    let f = basis.field();
    let coeffs = random_matrix(f, basis.cols(), 1, rng);
    if basis.cols() == 0 {
        return vec![f.zero(); basis.rows()];
    }
    basis.mul(&coeffs).column(0)
}

/// A random solution of the order-1 deformation equations.
pub fn random_first_order<R: Rng + ?Sized>(sys: &RotaBaxterSystem, rng: &mut R) -> DeformationData {
    let f = sys.field();
    let d = sys.dim();
    let v = random_combination(&first_order_equations(sys).kernel_basis(), rng);
    let (a, b) = (d * d * d, d * d * d + d * d);
    let mu1 = Matrix::from_vec(f, d, d * d, v[..a].to_vec()).expect("shape");
    let r1 = Matrix::from_vec(f, d, d, v[a..b].to_vec()).expect("shape");
    let s1 = Matrix::from_vec(f, d, d, v[b..].to_vec()).expect("shape");
    DeformationData::first_order(sys, mu1, r1, s1).expect("shape")
}

/// A random solution of the order-1 operator deformation equations.
pub fn random_operator_first_order<R: Rng + ?Sized>(sys: &RotaBaxterSystem, rng: &mut R) -> OperatorDeformation {
    let f = sys.field();
    let d = sys.dim();
    let v = random_combination(&first_order_operator_equations(sys).kernel_basis(), rng);
    let r1 = Matrix::from_vec(f, d, d, v[..d * d].to_vec()).expect("shape");
    let s1 = Matrix::from_vec(f, d, d, v[d * d..].to_vec()).expect("shape");
    OperatorDeformation::new(vec![sys.r().clone(), r1], vec![sys.s().clone(), s1]).expect("shape")
}

pub fn random_gauge<R: Rng + ?Sized>(field: Field, dim: usize, order: usize, rng: &mut R) -> GaugeSeries {
    let mut psis = vec![Matrix::identity(field, dim)];
    psis.extend((0..order).map(|_| random_matrix(field, dim, dim, rng)));
    GaugeSeries::new(psis).expect("Ψ_0 = Id")
}

/// A weight-`λ` Rota-Baxter operator `(A, R, λ)`, moved to a random basis.
pub fn random_weighted_operator<R: Rng + ?Sized>(field: Field, rng: &mut R) -> (Algebra, Matrix, Scalar) {
    let lambda = if rng.gen_bool(0.2) { field.zero() } else { random_nonzero(field, rng) };
    let algebras = catalog(field);
    let (alg, r) = match rng.gen_range(0..4) {
        0 => {
            let alg = algebras.choose(rng).expect("nonempty").1.clone();
            let d = alg.dim();
            (alg, Matrix::zeros(field, d, d))
        }
        1 => {
            let alg = algebras.choose(rng).expect("nonempty").1.clone();
            let d = alg.dim();
            (alg, Matrix::scalar_identity(d, &-&lambda))
        }
        2 => {
            let (alg, keep) =
                if rng.gen_bool(0.5) { (product_line(field), vec![0]) } else { (upper_triangular(field), vec![0, 1]) };
            let r = Matrix::from_fn(field, alg.dim(), alg.dim(), |i, j| {
                if i == j && keep.contains(&i) {
                    -&lambda
                } else {
                    field.zero()
                }
            });
            (alg, r)
        }
        // Weight zero: left multiplication by a square-zero element of a commutative algebra.
        _ => {
            let alg = dual_numbers(field);
            let u = Matrix::column_vector(field, vec![field.zero(), random_nonzero(field, rng)]);
            let r = left_mult(&alg, &u);
            let p = random_invertible(field, 2, rng);
            let inv = p.inverse().expect("invertible");
            let moved = alg.base_change(&p).expect("invertible");
            return (moved, inv.mul(&r).mul(&p), field.zero());
        }
    };
    let p = random_invertible(field, alg.dim(), rng);
    let inv = p.inverse().expect("invertible");
    let moved = alg.base_change(&p).expect("invertible");
    (moved, inv.mul(&r).mul(&p), lambda)
}

/// Every weight-`λ` operator on a two-dimensional algebra over `𝔽₂`.
pub fn enumerate_f2_weighted(alg: &Algebra, lambda: &Scalar) -> Vec<Matrix> {
    let f = Field::Prime(2);
    let d = alg.dim();
    (0u32..1 << (d * d))
        .map(|bits| Matrix::from_fn(f, d, d, |i, j| f.from_i64(((bits >> (i * d + j)) & 1) as i64)))
        .filter(|r| check_weighted_rb(alg, r, lambda).is_pass())
        .collect()
}

/// A random element of `ker d²` in `C_RBS`.
pub fn random_cocycle<R: Rng + ?Sized>(cx: &Complexes, rng: &mut R) -> Cocycle2 {
    let z = cx.rbs_d(2).expect("within cap").matrix.kernel_basis();
    let (d, m) = (cx.module().algebra_dim(), cx.module().dim());
    Cocycle2::from_coordinates(cx.field(), d, m, &random_combination(&z, rng)).expect("shape")
}

/// A random degree-2 cochain outside `ker d²`, or `None` when `d² = 0`.
pub fn random_non_cocycle<R: Rng + ?Sized>(cx: &Complexes, rng: &mut R) -> Option<Cocycle2> {
    let d2 = cx.rbs_d(2).expect("within cap").matrix;
    if d2.is_zero() {
        return None;
    }
    let (d, m) = (cx.module().algebra_dim(), cx.module().dim());
    loop {
        let v = random_matrix(cx.field(), cx.dim(ComplexTag::Rbs, 2), 1, rng);
        if !d2.mul(&v).is_zero() {
            return Some(Cocycle2::from_coordinates(cx.field(), d, m, &v.column(0)).expect("shape"));
        }
    }
}
