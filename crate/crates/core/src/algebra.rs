//! Finite-dimensional associative algebras, bimodule actions and
//! multilinear maps `A^{⊗n} -> M`.
//!
//! Every multilinear map of arity `n` out of a `d`-dimensional algebra is an
//! `m × d^n` matrix whose column for the basis tuple `(i_1, ..., i_n)`
//! (0-based) is `Σ_k i_k d^{n-k}`: big-endian lexicographic order. Arity 0 maps
//! are `m × 1` columns, identified with their value at `1 ∈ K`. The
//! multiplication `μ` is the arity-2 map, so `e_i e_j` is column `i d + j` of
//! [`Algebra::mult`].

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::verdict::{compare_maps, Law, Verdict, Violation};

/// `d^n`, panicking on overflow.
pub fn tensor_dim(d: usize, n: usize) -> usize {
    (0..n).fold(1usize, |acc, _| acc.checked_mul(d).expect("tensor power overflows usize"))
}

/// Column index of a basis tuple.
pub fn encode_tuple(tuple: &[usize], d: usize) -> usize {
    tuple.iter().fold(0, |acc, &i| {
        debug_assert!(i < d);
        acc * d + i
    })
}

/// Inverse of [`encode_tuple`] for tuples of length `n`.
pub fn decode_tuple(mut index: usize, n: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in (0..n).rev() {
        out[slot] = index % d;
        index /= d;
    }
    out
}

/// An associative algebra given by its structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    dim: usize,
    mult: Matrix,
}

impl Algebra {
    /// `mult` is the `d × d²` matrix of `μ`. Associativity is not checked here.
    pub fn new(field: Field, dim: usize, mult: Matrix) -> Result<Algebra> {
        if dim == 0 {
            return Err(Error::Shape("algebra dimension must be positive".into()));
        }
        if mult.field() != field || mult.shape() != (dim, dim * dim) {
            return Err(Error::Shape(format!("multiplication must be a {dim}x{} matrix over {field}", dim * dim)));
        }
        Ok(Algebra { field, dim, mult })
    }

    /// From `c[i][j][k]`, meaning `e_i e_j = Σ_k c[i][j][k] e_k`.
    pub fn from_constants(field: Field, c: &[Vec<Vec<Scalar>>]) -> Result<Algebra> {
        let d = c.len();
        if c.iter().any(|row| row.len() != d || row.iter().any(|v| v.len() != d)) {
            return Err(Error::Shape(format!("structure constants must be {d}x{d}x{d}")));
        }
        let mult = Matrix::from_fn(field, d, d * d, |k, col| c[col / d][col % d][k].clone());
        Algebra::new(field, d, mult)
    }

    pub fn from_i64_constants(field: Field, c: &[Vec<Vec<i64>>]) -> Result<Algebra> {
        let c: Vec<Vec<Vec<Scalar>>> =
            c.iter().map(|r| r.iter().map(|v| v.iter().map(|&x| field.from_i64(x)).collect()).collect()).collect();
        Algebra::from_constants(field, &c)
    }

    pub fn zero(field: Field, dim: usize) -> Algebra {
        Algebra::new(field, dim, Matrix::zeros(field, dim, dim * dim)).expect("valid shape")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mult(&self) -> &Matrix {
        &self.mult
    }

    /// `c[i][j][k]`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.mult[(k, i * self.dim + j)]
    }

    pub fn constants(&self) -> Vec<Vec<Vec<Scalar>>> {
        let d = self.dim;
        (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| self.constant(i, j, k).clone()).collect()).collect()).collect()
    }

    /// Product of two coordinate columns.
    pub fn product(&self, a: &Matrix, b: &Matrix) -> Matrix {
        self.mult.mul(&a.kron(b))
    }

    pub fn identity_map(&self) -> Matrix {
        Matrix::identity(self.field, self.dim)
    }

    pub fn check_associative(&self) -> Verdict {
        let id = self.identity_map();
        let lhs = self.mult.mul(&self.mult.kron(&id));
        let rhs = self.mult.mul(&id.kron(&self.mult));
        compare_maps(Law::Associativity, &lhs, &rhs, |c| decode_tuple(c, 3, self.dim))
    }

    /// Fails with a nonzero annihilating vector `b` (in `lhs`) when `bA = 0`
    /// or `Ab = 0` has a nonzero solution.
    pub fn check_nondegenerate(&self) -> Verdict {
        let d = self.dim;
        // b ↦ (b e_j)_j and b ↦ (e_j b)_j, stacked over j.
        let right_stack = Matrix::from_fn(self.field, d * d, d, |row, i| {
            let (j, k) = (row / d, row % d);
            self.constant(i, j, k).clone()
        });
        let left_stack = Matrix::from_fn(self.field, d * d, d, |row, i| {
            let (j, k) = (row / d, row % d);
            self.constant(j, i, k).clone()
        });
        for stack in [right_stack, left_stack] {
            let kernel = stack.kernel_basis();
            if kernel.cols() > 0 {
                return Verdict::Fail(Violation {
                    law: Law::NonDegenerate,
                    indices: vec![],
                    lhs: kernel.column(0),
                    rhs: vec![],
                });
            }
        }
        Verdict::Pass
    }

    /// Structure constants in the basis given by the columns of `p`:
    /// `μ' = p⁻¹ μ (p ⊗ p)`.
    pub fn base_change(&self, p: &Matrix) -> Result<Algebra> {
        let inv = p.inverse().ok_or_else(|| Error::Precondition("base change matrix is not invertible".into()))?;
        if p.shape() != (self.dim, self.dim) {
            return Err(Error::Shape("base change must be d×d".into()));
        }
        Algebra::new(self.field, self.dim, inv.mul(&self.mult).mul(&p.kron(p)))
    }

    /// The same space with multiplication `s·μ`.
    pub fn scaled(&self, s: &Scalar) -> Algebra {
        Algebra { mult: self.mult.scale(s), ..self.clone() }
    }

    /// The multiplication as an arity-2 multilinear map.
    pub fn mult_map(&self) -> MultiMap {
        MultiMap { arity: 2, source_dim: self.dim, matrix: self.mult.clone() }
    }
}

/// Left and right actions of a `d`-dimensional algebra on an `m`-dimensional space.
///
/// `left` is `m × (d·m)` with column `i m + u` holding `e_i · f_u`;
/// `right` is `m × (m·d)` with column `u d + i` holding `f_u · e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleActions {
    algebra_dim: usize,
    dim: usize,
    left: Matrix,
    right: Matrix,
}

impl BimoduleActions {
    pub fn new(algebra_dim: usize, dim: usize, left: Matrix, right: Matrix) -> Result<BimoduleActions> {
        if dim == 0 {
            return Err(Error::Shape("module dimension must be positive".into()));
        }
        if left.shape() != (dim, algebra_dim * dim) || right.shape() != (dim, dim * algebra_dim) {
            return Err(Error::Shape(format!("actions must be {dim}x{} matrices", algebra_dim * dim)));
        }
        if left.field() != right.field() {
            return Err(Error::Shape("actions over different fields".into()));
        }
        Ok(BimoduleActions { algebra_dim, dim, left, right })
    }

    /// From `l[i][u][v]` (`e_i f_u = Σ_v l[i][u][v] f_v`) and `r[u][i][v]`.
    pub fn from_constants(
        field: Field,
        algebra_dim: usize,
        dim: usize,
        l: &[Vec<Vec<Scalar>>],
        r: &[Vec<Vec<Scalar>>],
    ) -> Result<BimoduleActions> {
        let (d, m) = (algebra_dim, dim);
        let shape_ok = |t: &[Vec<Vec<Scalar>>], a: usize, b: usize| {
            t.len() == a && t.iter().all(|x| x.len() == b && x.iter().all(|y| y.len() == m))
        };
        if !shape_ok(l, d, m) || !shape_ok(r, m, d) {
            return Err(Error::Shape(format!("action tensors must be {d}x{m}x{m} and {m}x{d}x{m}")));
        }
        let left = Matrix::from_fn(field, m, d * m, |v, col| l[col / m][col % m][v].clone());
        let right = Matrix::from_fn(field, m, m * d, |v, col| r[col / d][col % d][v].clone());
        BimoduleActions::new(d, m, left, right)
    }

    pub fn zero(field: Field, algebra_dim: usize, dim: usize) -> BimoduleActions {
        BimoduleActions::new(
            algebra_dim,
            dim,
            Matrix::zeros(field, dim, algebra_dim * dim),
            Matrix::zeros(field, dim, dim * algebra_dim),
        )
        .expect("valid shape")
    }

    /// `A` acting on itself by multiplication.
    pub fn regular(alg: &Algebra) -> BimoduleActions {
        BimoduleActions::new(alg.dim, alg.dim, alg.mult.clone(), alg.mult.clone()).expect("valid shape")
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self) -> &Matrix {
        &self.left
    }

    pub fn right(&self) -> &Matrix {
        &self.right
    }

    /// `l[i][u][v]`.
    pub fn left_constant(&self, i: usize, u: usize, v: usize) -> &Scalar {
        &self.left[(v, i * self.dim + u)]
    }

    /// `r[u][i][v]`.
    pub fn right_constant(&self, u: usize, i: usize, v: usize) -> &Scalar {
        &self.right[(v, u * self.algebra_dim + i)]
    }

    pub fn left_constants(&self) -> Vec<Vec<Vec<Scalar>>> {
        let (d, m) = (self.algebra_dim, self.dim);
        (0..d)
            .map(|i| (0..m).map(|u| (0..m).map(|v| self.left_constant(i, u, v).clone()).collect()).collect())
            .collect()
    }

    pub fn right_constants(&self) -> Vec<Vec<Vec<Scalar>>> {
        let (d, m) = (self.algebra_dim, self.dim);
        (0..m)
            .map(|u| (0..d).map(|i| (0..m).map(|v| self.right_constant(u, i, v).clone()).collect()).collect())
            .collect()
    }

    /// The three bimodule identities as tensor equations.
    pub fn check(&self, alg: &Algebra) -> Verdict {
        if alg.dim != self.algebra_dim {
            return Verdict::Fail(Violation { law: Law::LeftAction, indices: vec![], lhs: vec![], rhs: vec![] });
        }
        let f = alg.field;
        let (d, m) = (alg.dim, self.dim);
        let id_a = Matrix::identity(f, d);
        let id_m = Matrix::identity(f, m);
        let (l, r, mu) = (&self.left, &self.right, &alg.mult);
        let left_l = l.mul(&mu.kron(&id_m));
        let left_r = l.mul(&id_a.kron(l));
        compare_maps(Law::LeftAction, &left_l, &left_r, |c| decode_mixed(c, &[d, d, m]))
            .and_then(|| {
                let lhs = r.mul(&id_m.kron(mu));
                let rhs = r.mul(&r.kron(&id_a));
                compare_maps(Law::RightAction, &lhs, &rhs, |c| decode_mixed(c, &[m, d, d]))
            })
            .and_then(|| {
                let lhs = r.mul(&l.kron(&id_a));
                let rhs = l.mul(&id_a.kron(r));
                compare_maps(Law::ActionCompatibility, &lhs, &rhs, |c| decode_mixed(c, &[d, m, d]))
            })
    }

    /// Actions in the module basis given by the columns of `q`.
    pub fn base_change(&self, q: &Matrix) -> Result<BimoduleActions> {
        let inv = q.inverse().ok_or_else(|| Error::Precondition("base change matrix is not invertible".into()))?;
        let id_a = Matrix::identity(self.field(), self.algebra_dim);
        let left = inv.mul(&self.left).mul(&id_a.kron(q));
        let right = inv.mul(&self.right).mul(&q.kron(&id_a));
        BimoduleActions::new(self.algebra_dim, self.dim, left, right)
    }

    /// Actions for a simultaneous change of algebra basis `p` and module basis `q`.
    pub fn transport(&self, p: &Matrix, q: &Matrix) -> Result<BimoduleActions> {
        let inv = q.inverse().ok_or_else(|| Error::Precondition("base change matrix is not invertible".into()))?;
        let left = inv.mul(&self.left).mul(&p.kron(q));
        let right = inv.mul(&self.right).mul(&q.kron(p));
        BimoduleActions::new(self.algebra_dim, self.dim, left, right)
    }

    /// `M ⊕ N` with componentwise actions.
    pub fn direct_sum(&self, other: &BimoduleActions) -> Result<BimoduleActions> {
        if self.algebra_dim != other.algebra_dim {
            return Err(Error::Shape("direct sum of modules over different algebras".into()));
        }
        let (d, m1, m2) = (self.algebra_dim, self.dim, other.dim);
        let m = m1 + m2;
        let f = self.field();
        let mut left = Matrix::zeros(f, m, d * m);
        let mut right = Matrix::zeros(f, m, m * d);
        for i in 0..d {
            for u in 0..m {
                for v in 0..m {
                    let (l, r) = match (u < m1, v < m1) {
                        (true, true) => (self.left_constant(i, u, v).clone(), self.right_constant(u, i, v).clone()),
                        (false, false) => (
                            other.left_constant(i, u - m1, v - m1).clone(),
                            other.right_constant(u - m1, i, v - m1).clone(),
                        ),
                        _ => continue,
                    };
                    left[(v, i * m + u)] = l;
                    right[(v, u * d + i)] = r;
                }
            }
        }
        BimoduleActions::new(d, m, left, right)
    }
}

/// Decodes a column index over a product of spaces of the given dimensions.
pub fn decode_mixed(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in dims.iter().enumerate().rev() {
        out[slot] = index % d;
        index /= d;
    }
    out
}

/// An element of `Hom(A^{⊗n}, M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMap {
    arity: usize,
    source_dim: usize,
    matrix: Matrix,
}

impl MultiMap {
    pub fn new(arity: usize, source_dim: usize, matrix: Matrix) -> Result<MultiMap> {
        if matrix.cols() != tensor_dim(source_dim, arity) {
            return Err(Error::Shape(format!(
                "arity-{arity} map out of a {source_dim}-dimensional algebra needs {} columns, got {}",
                tensor_dim(source_dim, arity),
                matrix.cols()
            )));
        }
        Ok(MultiMap { arity, source_dim, matrix })
    }

    pub fn zero(field: Field, arity: usize, source_dim: usize, target_dim: usize) -> MultiMap {
        MultiMap::new(arity, source_dim, Matrix::zeros(field, target_dim, tensor_dim(source_dim, arity)))
            .expect("valid shape")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Value on a basis tuple.
    pub fn eval_basis(&self, tuple: &[usize]) -> Vec<Scalar> {
        assert_eq!(tuple.len(), self.arity);
        self.matrix.column(encode_tuple(tuple, self.source_dim))
    }

    /// `(a_1, ..., a_{n+1}) ↦ f(a_1, ..., a_slot a_{slot+1}, ..., a_{n+1})`, `slot` 1-based.
    pub fn compose_with_mult(&self, alg: &Algebra, slot: usize) -> Result<MultiMap> {
        let n = self.arity;
        if slot == 0 || slot > n {
            return Err(Error::OutOfRange(format!("slot {slot} not in 1..={n}")));
        }
        if alg.dim != self.source_dim {
            return Err(Error::Shape("algebra dimension differs from source".into()));
        }
        let f = alg.field;
        let before = Matrix::identity(f, tensor_dim(alg.dim, slot - 1));
        let after = Matrix::identity(f, tensor_dim(alg.dim, n - slot));
        let inner = before.kron(&alg.mult).kron(&after);
        MultiMap::new(n + 1, alg.dim, self.matrix.mul(&inner))
    }

    /// `f ∘ (op_1 ⊗ ... ⊗ op_n)`.
    pub fn precompose_operators(&self, ops: &[&Matrix]) -> Result<MultiMap> {
        if ops.len() != self.arity {
            return Err(Error::Shape(format!("need {} operators, got {}", self.arity, ops.len())));
        }
        let d = self.source_dim;
        if ops.iter().any(|op| op.shape() != (d, d) || op.field() != self.matrix.field()) {
            return Err(Error::Shape(format!("operators must be {d}x{d} over the same field")));
        }
        let k = Matrix::kron_all(self.matrix.field(), ops);
        MultiMap::new(self.arity, d, self.matrix.mul(&k))
    }

    /// `g ∘ f` for a linear map `g` on the target.
    pub fn postcompose(&self, g: &Matrix) -> Result<MultiMap> {
        MultiMap::new(self.arity, self.source_dim, g.try_mul(&self.matrix)?)
    }

    /// Row-major flattening: coordinate `u · d^n + t` holds the `f_u`
    /// component of the value on tuple `t`.
    pub fn to_coordinates(&self) -> Vec<Scalar> {
        self.matrix.entries().to_vec()
    }

    pub fn from_coordinates(
        field: Field,
        arity: usize,
        source_dim: usize,
        target_dim: usize,
        coords: Vec<Scalar>,
    ) -> Result<MultiMap> {
        let cols = tensor_dim(source_dim, arity);
        MultiMap::new(arity, source_dim, Matrix::from_vec(field, target_dim, cols, coords)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn line() -> Algebra {
        Algebra::from_i64_constants(Q, &[vec![vec![1]]]).unwrap()
    }

    #[test]
    fn tuple_encoding_round_trips() {
        for n in 0..4 {
            for idx in 0..tensor_dim(3, n) {
                assert_eq!(encode_tuple(&decode_tuple(idx, n, 3), 3), idx);
            }
        }
        // 1-based (2,1,3) in dimension 3 is 1 + 1*9 + 0*3 + 2 = 12, i.e. 11 zero-based.
        assert_eq!(encode_tuple(&[1, 0, 2], 3), 11);
    }

    #[test]
    fn associativity_examples() {
        assert!(line().check_associative().is_pass());
        assert!(Algebra::zero(Q, 3).check_associative().is_pass());
        // e1 e1 = e2, e2 e1 = e1: (e1 e1) e1 = e1 but e1 (e1 e1) = 0.
        let bad =
            Algebra::from_i64_constants(Q, &[vec![vec![0, 1], vec![0, 0]], vec![vec![1, 0], vec![0, 0]]]).unwrap();
        let v = bad.check_associative();
        let w = v.violation().expect("not associative");
        assert_eq!(w.indices, vec![0, 0, 0]);
        assert_eq!(w.lhs, vec![Q.one(), Q.zero()]);
        assert_eq!(w.rhs, vec![Q.zero(), Q.zero()]);
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(line().check_nondegenerate().is_pass());
        assert!(!Algebra::zero(Q, 2).check_nondegenerate().is_pass());
        let idem =
            Algebra::from_i64_constants(Q, &[vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 0]]]).unwrap();
        let v = idem.check_nondegenerate();
        assert_eq!(v.violation().unwrap().lhs, vec![Q.zero(), Q.one()]);
    }

    #[test]
    fn compose_with_mult_examples() {
        let id = MultiMap::new(1, 1, Matrix::identity(Q, 1)).unwrap();
        let composed = id.compose_with_mult(&line(), 1).unwrap();
        assert_eq!(composed.matrix(), &Matrix::from_i64(Q, &[&[1]]));
        let zero = MultiMap::zero(Q, 2, 2, 3);
        assert!(zero.compose_with_mult(&Algebra::zero(Q, 2), 2).unwrap().matrix().is_zero());
        let f = MultiMap::new(1, 2, Matrix::from_i64(Q, &[&[1, 2]])).unwrap();
        assert!(f.compose_with_mult(&Algebra::zero(Q, 2), 1).unwrap().matrix().is_zero());
        assert!(f.compose_with_mult(&Algebra::zero(Q, 2), 2).is_err());
    }

    #[test]
    fn compose_with_mult_evaluates_pointwise() {
        // dual numbers: e0 = 1, e1 = x, x² = 0
        let alg =
            Algebra::from_i64_constants(Q, &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]]).unwrap();
        let f = MultiMap::new(2, 2, Matrix::from_i64(Q, &[&[1, 2, 3, 4]])).unwrap();
        let g = f.compose_with_mult(&alg, 2).unwrap();
        // g(e1, e0, e1) = f(e1, e0 e1) = f(e1, e1) = 4
        assert_eq!(g.eval_basis(&[1, 0, 1]), vec![Q.from_i64(4)]);
        // g(e0, e1, e1) = f(e0, 0) = 0
        assert_eq!(g.eval_basis(&[0, 1, 1]), vec![Q.zero()]);
    }

    #[test]
    fn precompose_examples() {
        let f = MultiMap::new(2, 2, Matrix::from_i64(Q, &[&[1, 2, 3, 4], &[0, 1, 0, 1]])).unwrap();
        let id = Matrix::identity(Q, 2);
        assert_eq!(f.precompose_operators(&[&id, &id]).unwrap(), f);
        let zero = Matrix::zeros(Q, 2, 2);
        assert!(f.precompose_operators(&[&id, &zero]).unwrap().matrix().is_zero());
        let r = Matrix::from_i64(Q, &[&[1, 1], &[0, 2]]);
        let g = MultiMap::new(1, 2, Matrix::identity(Q, 2)).unwrap();
        assert_eq!(g.precompose_operators(&[&r]).unwrap().matrix(), &r);
        assert!(f.precompose_operators(&[&id]).is_err());
    }

    #[test]
    fn regular_actions_are_a_bimodule() {
        let alg =
            Algebra::from_i64_constants(Q, &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]]).unwrap();
        assert!(BimoduleActions::regular(&alg).check(&alg).is_pass());
        let sum = BimoduleActions::regular(&alg).direct_sum(&BimoduleActions::zero(Q, 2, 1)).unwrap();
        assert!(sum.check(&alg).is_pass());
    }
}
