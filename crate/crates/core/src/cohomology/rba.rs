//! The embedding `ψ(f, g) = (f, (g, g))` of the Rota-Baxter algebra complex
//! of a weight-λ operator into `C_RBS` of `(A, R, R + λ)`.

use super::{matrix_of, unit_map, ComplexTag, Complexes};
use crate::algebra::{tensor_dim, Algebra};
use crate::bimodule::RBSBimodule;
use crate::error::Result;
use crate::linalg::{Field, Matrix, Scalar};
use crate::system::from_rb_operator;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbaDegree {
    pub degree: usize,
    pub injective: bool,
    /// `0 → C_RBA → C_RBS → C_Alg[-1] → 0` is exact in this degree.
    pub short_exact: bool,
    pub subcomplex: bool,
    /// Induced differential on the cokernel matches the closed formula;
    /// `None` in degree 0, where the cokernel is zero.
    pub cokernel_formula: Option<bool>,
}

impl RbaDegree {
    pub fn ok(&self) -> bool {
        self.injective && self.short_exact && self.subcomplex && self.cokernel_formula != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbaReport {
    pub degrees: Vec<RbaDegree>,
}

impl RbaReport {
    pub fn ok(&self) -> bool {
        self.degrees.iter().all(RbaDegree::ok)
    }
}

fn psi(cx: &Complexes, n: usize) -> Matrix {
    let f = cx.field();
    let dim = cx.dim(ComplexTag::Rbs, n);
    if n == 0 {
        return Matrix::identity(f, dim);
    }
    let a = cx.dim(ComplexTag::Alg, n);
    let b = cx.dim(ComplexTag::Alg, n - 1);
    let mut out = Matrix::zeros(f, dim, a + b);
    out.set_block(0, 0, &Matrix::identity(f, a));
    out.set_block(a, a, &Matrix::identity(f, b));
    out.set_block(a + b, a, &Matrix::identity(f, b));
    out
}

/// `C^n_RBS -> C^{n-1}_Alg(A, A)`, `(f, (x, y)) ↦ x - y`.
fn quotient(cx: &Complexes, n: usize) -> Matrix {
    let f = cx.field();
    let dim = cx.dim(ComplexTag::Rbs, n);
    if n == 0 {
        return Matrix::zeros(f, 0, dim);
    }
    let a = cx.dim(ComplexTag::Alg, n);
    let b = cx.dim(ComplexTag::Alg, n - 1);
    let mut out = Matrix::zeros(f, b, dim);
    out.set_block(0, a, &Matrix::identity(f, b));
    out.set_block(0, a + b, &Matrix::identity(f, b).neg());
    out
}

/// `h ↦ (0, (h, 0))`, a section of the quotient map.
fn lift(cx: &Complexes, n: usize) -> Matrix {
    let f = cx.field();
    let a = cx.dim(ComplexTag::Alg, n);
    let b = cx.dim(ComplexTag::Alg, n - 1);
    let mut out = Matrix::zeros(f, cx.dim(ComplexTag::Rbs, n), b);
    out.set_block(a, 0, &Matrix::identity(f, b));
    out
}

/// `d̄(H) = (-1)^{n-1} μ(R ⊗ H) + Σ_{i<n} (-1)^{n-1-i} H(.. a_i ⋆ a_{i+1} ..) - μ(H ⊗ S)`
/// for `H` of arity `n - 1`, where `a ⋆ b = R(a)b + aS(b)` and `S = R + λ`.
pub fn cokernel_differential_formula(n: usize, alg: &Algebra, r: &Matrix, lambda: &Scalar) -> Matrix {
    assert!(n >= 1, "the cokernel starts in degree 1");
    let f: Field = alg.field();
    let d = alg.dim();
    let mu = alg.mult();
    let id = Matrix::identity(f, d);
    let s = r.add(&Matrix::scalar_identity(d, lambda));
    let star = mu.mul(&r.kron(&id).add(&id.kron(&s)));
    let k = n - 1;
    let dk = tensor_dim(d, k);
    let sign = |e: usize| if e.is_multiple_of(2) { f.one() } else { -f.one() };
    matrix_of(f, d * dk * d, d * dk, |c| {
        let h = unit_map(f, d, dk, c);
        let mut out = mu.mul(&r.kron(&h)).scale(&sign(k)).sub(&mu.mul(&h.kron(&s)));
        for i in 1..=k {
            let op =
                Matrix::identity(f, tensor_dim(d, i - 1)).kron(&star).kron(&Matrix::identity(f, tensor_dim(d, k - i)));
            out = out.add(&h.mul(&op).scale(&sign(k - i)));
        }
        out
    })
}

/// Builds `(A, R, R + λ)` with its regular bimodule and checks the embedding
/// and the cokernel differential in degrees `0..=max_degree`.
pub fn rba_embedding_check(alg: &Algebra, r: &Matrix, lambda: &Scalar, max_degree: usize) -> Result<RbaReport> {
    let (sys, _) = from_rb_operator(alg, r, lambda)?;
    let cx = Complexes::new(&RBSBimodule::regular(&sys)?)?;
    let mut degrees = Vec::new();
    for n in 0..=max_degree {
        let p = psi(&cx, n);
        let q = quotient(&cx, n);
        let dn = cx.rbs_d(n)?.matrix;
        let q_next = quotient(&cx, n + 1);
        let injective = p.rank() == p.cols();
        let short_exact = injective && q.mul(&p).is_zero() && p.rank() + q.rank() == p.rows();
        let subcomplex = q_next.mul(&dn).mul(&p).is_zero();
        let cokernel_formula = if n == 0 {
            None
        } else {
            let induced = q_next.mul(&cx.rbs_d(n)?.matrix).mul(&lift(&cx, n));
            Some(induced == cokernel_differential_formula(n, alg, r, lambda))
        };
        degrees.push(RbaDegree { degree: n, injective, short_exact, subcomplex, cokernel_formula });
    }
    Ok(RbaReport { degrees })
}
