//! The complexes `C_Alg`, `C_RBSO` and `C_RBS` as explicit matrices.
//!
//! Cochains are stored row-major: for a map `f: A^{⊗n} -> M` coordinate
//! `u · d^n + t` is the `f_u` component of `f` on tuple `t`. A `C_RBSO` cochain
//! `(x, y)` is `[vec x | vec y]` (equivalently a map into `M ⊕ M`), and a
//! `C_RBS` cochain `(f, (x, y))` of degree `n ≥ 1` is `[vec f | vec x | vec y]`.

mod les;
mod rba;

use std::fmt;

pub use les::{LesReport, LesSlot};
pub use rba::{cokernel_differential_formula, rba_embedding_check, RbaDegree, RbaReport};

use crate::algebra::{decode_tuple, tensor_dim, Algebra, BimoduleActions};
use crate::bimodule::{d_module, DModule, RBSBimodule};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::verdict::{Law, Violation};

/// Default bound on the number of rows or columns of a single slice.
pub const DEFAULT_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComplexTag {
    Alg,
    Rbso,
    Rbs,
}

impl fmt::Display for ComplexTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexTag::Alg => "alg",
            ComplexTag::Rbso => "rbso",
            ComplexTag::Rbs => "rbs",
        })
    }
}

impl std::str::FromStr for ComplexTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<ComplexTag> {
        match s.to_ascii_lowercase().as_str() {
            "alg" => Ok(ComplexTag::Alg),
            "rbso" => Ok(ComplexTag::Rbso),
            "rbs" => Ok(ComplexTag::Rbs),
            other => Err(Error::Parse(format!("unknown complex {other:?}"))),
        }
    }
}

/// The degree-`n` differential of one complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexSlice {
    pub tag: ComplexTag,
    pub degree: usize,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub tag: ComplexTag,
    pub degree: usize,
    pub coords: Matrix,
}

fn check_cap(rows: usize, cols: usize, cap: usize) -> Result<()> {
    let needed = rows.max(cols);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    Ok(())
}

/// Hochschild differential `δ^n` for a product `mult` (`d × d²`) acting on a
/// bimodule of dimension `m`, with sign `(-1)^{n+1}` on the left action term
/// and `(-1)^{n-i+1}` on the `i`-th contraction.
pub fn hochschild_matrix(n: usize, mult: &Matrix, left: &Matrix, right: &Matrix) -> Matrix {
    let f = mult.field();
    let d = mult.rows();
    let m = left.rows();
    let dn = tensor_dim(d, n);
    let dn1 = dn * d;
    let mut out = Matrix::zeros(f, m * dn1, m * dn);
    let sign = |e: usize| if e.is_multiple_of(2) { f.one() } else { -f.one() };
    let first = sign(n + 1);
    for t_idx in 0..dn {
        let t = decode_tuple(t_idx, n, d);
        for u in 0..m {
            let col = u * dn + t_idx;
            for s1 in 0..d {
                let s = s1 * dn + t_idx;
                for v in 0..m {
                    let c = &left[(v, s1 * m + u)];
                    if !c.is_zero() {
                        out[(v * dn1 + s, col)] += &(&first * c);
                    }
                }
            }
            for i in 1..=n {
                let sg = sign(n - i + 1);
                let k = t[i - 1];
                let prefix = t[..i - 1].iter().fold(0, |acc, &x| acc * d + x);
                let tail_len = n - i;
                let suffix = t[i..].iter().fold(0, |acc, &x| acc * d + x);
                let tail_dim = tensor_dim(d, tail_len);
                for p in 0..d {
                    for q in 0..d {
                        let c = &mult[(k, p * d + q)];
                        if c.is_zero() {
                            continue;
                        }
                        let s = ((prefix * d + p) * d + q) * tail_dim + suffix;
                        out[(u * dn1 + s, col)] += &(&sg * c);
                    }
                }
            }
            for j in 0..d {
                let s = t_idx * d + j;
                for v in 0..m {
                    let c = &right[(v, u * d + j)];
                    if !c.is_zero() {
                        out[(v * dn1 + s, col)] += c;
                    }
                }
            }
        }
    }
    out
}

/// `δ^n` of `C_Alg(A, M)`, refusing slices larger than `cap`.
pub fn delta(n: usize, alg: &Algebra, actions: &BimoduleActions, cap: usize) -> Result<ComplexSlice> {
    if actions.algebra_dim() != alg.dim() || actions.field() != alg.field() {
        return Err(Error::Shape("bimodule does not match the algebra".into()));
    }
    let dn = tensor_dim(alg.dim(), n);
    check_cap(actions.dim() * dn * alg.dim(), actions.dim() * dn, cap)?;
    Ok(ComplexSlice {
        tag: ComplexTag::Alg,
        degree: n,
        matrix: hochschild_matrix(n, alg.mult(), actions.left(), actions.right()),
    })
}

/// Sum over `i` of `R^{⊗ i-1} ⊗ Id ⊗ S^{⊗ n-i}`.
fn mixed_sum(f: Field, r: &Matrix, s: &Matrix, n: usize) -> Matrix {
    let d = r.rows();
    let id = Matrix::identity(f, d);
    let dn = tensor_dim(d, n);
    let mut acc = Matrix::zeros(f, dn, dn);
    for i in 1..=n {
        let mut factors: Vec<&Matrix> = Vec::with_capacity(n);
        factors.extend(std::iter::repeat_n(r, i - 1));
        factors.push(&id);
        factors.extend(std::iter::repeat_n(s, n - i));
        acc = acc.add(&Matrix::kron_all(f, &factors));
    }
    acc
}

/// Cochain complexes of one Rota-Baxter system bimodule.
#[derive(Clone, Debug)]
pub struct Complexes {
    module: RBSBimodule,
    dmod: DModule,
    cap: usize,
}

impl Complexes {
    /// Validates the bimodule (and its base system) and builds `D(M)`.
    pub fn new(module: &RBSBimodule) -> Result<Complexes> {
        let dmod = d_module(module)?;
        Ok(Complexes { module: module.clone(), dmod, cap: DEFAULT_CAP })
    }

    pub fn with_cap(mut self, cap: usize) -> Complexes {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn module(&self) -> &RBSBimodule {
        &self.module
    }

    pub fn d_module(&self) -> &DModule {
        &self.dmod
    }

    pub fn field(&self) -> Field {
        self.module.field()
    }

    /// Dimension of the degree-`n` cochain space.
    pub fn dim(&self, tag: ComplexTag, n: usize) -> usize {
        let (d, m) = (self.module.algebra_dim(), self.module.dim());
        match (tag, n) {
            (ComplexTag::Alg, _) => m * tensor_dim(d, n),
            (ComplexTag::Rbso, _) => 2 * m * tensor_dim(d, n),
            (ComplexTag::Rbs, 0) => m,
            (ComplexTag::Rbs, _) => m * tensor_dim(d, n) + 2 * m * tensor_dim(d, n - 1),
        }
    }

    fn guard(&self, tag: ComplexTag, n: usize) -> Result<()> {
        check_cap(self.dim(tag, n + 1), self.dim(tag, n), self.cap)
    }

    pub fn delta(&self, n: usize) -> Result<ComplexSlice> {
        let base = self.module.base();
        delta(n, base.algebra(), self.module.actions(), self.cap)
    }

    /// `∂^n`: the Hochschild differential of `A_⋆` with values in `D(M)`.
    pub fn partial(&self, n: usize) -> Result<ComplexSlice> {
        self.guard(ComplexTag::Rbso, n)?;
        let a = &self.dmod.actions;
        Ok(ComplexSlice {
            tag: ComplexTag::Rbso,
            degree: n,
            matrix: hochschild_matrix(n, self.dmod.star.mult(), a.left(), a.right()),
        })
    }

    /// `Φ^n: C^n_Alg -> C^n_RBSO`.
    pub fn phi(&self, n: usize) -> Result<Matrix> {
        check_cap(self.dim(ComplexTag::Rbso, n), self.dim(ComplexTag::Alg, n), self.cap)?;
        let f = self.field();
        let base = self.module.base();
        let (r, s) = (base.r(), base.s());
        let m = self.module.dim();
        let id_m = Matrix::identity(f, m);
        let mixed_t = mixed_sum(f, r, s, n).transpose();
        let pure = |op: &Matrix| Matrix::kron_all(f, &vec![op; n]).transpose();
        let phi_r = id_m.kron(&pure(r)).sub(&self.module.r_m().kron(&mixed_t));
        let phi_s = id_m.kron(&pure(s)).sub(&self.module.s_m().kron(&mixed_t));
        Ok(Matrix::vstack(&[&phi_r, &phi_s]).expect("same width"))
    }

    /// `d^n(f, (x, y)) = (δ^n f, -∂^{n-1}(x, y) - Φ^n f)`, and `d^0 f = (δ^0 f, -Φ^0 f)`.
    pub fn rbs_d(&self, n: usize) -> Result<ComplexSlice> {
        self.guard(ComplexTag::Rbs, n)?;
        let delta = self.delta(n)?.matrix;
        let phi = self.phi(n)?.neg();
        let matrix = if n == 0 {
            Matrix::vstack(&[&delta, &phi])?
        } else {
            let partial = self.partial(n - 1)?.matrix.neg();
            let top = Matrix::hstack(&[&delta, &Matrix::zeros(self.field(), delta.rows(), partial.cols())])?;
            let bottom = Matrix::hstack(&[&phi, &partial])?;
            Matrix::vstack(&[&top, &bottom])?
        };
        Ok(ComplexSlice { tag: ComplexTag::Rbs, degree: n, matrix })
    }

    pub fn slice(&self, tag: ComplexTag, n: usize) -> Result<ComplexSlice> {
        match tag {
            ComplexTag::Alg => self.delta(n),
            ComplexTag::Rbso => self.partial(n),
            ComplexTag::Rbs => self.rbs_d(n),
        }
    }

    /// Slices `0..=top`.
    pub fn slices(&self, tag: ComplexTag, top: usize) -> Result<Vec<Matrix>> {
        (0..=top).map(|n| self.slice(tag, n).map(|s| s.matrix)).collect()
    }

    pub fn betti(&self, tag: ComplexTag, max_degree: usize) -> Result<BettiReport> {
        let slices = self.slices(tag, max_degree)?;
        let ranks: Vec<usize> = slices.iter().map(Matrix::rank).collect();
        let degrees = (0..=max_degree)
            .map(|n| {
                let dim = self.dim(tag, n);
                let rank = ranks[n];
                let image = if n == 0 { 0 } else { ranks[n - 1] };
                DegreeStats {
                    degree: n,
                    cochains: dim,
                    rank,
                    kernel: dim - rank,
                    image,
                    cohomology: dim - rank - image,
                }
            })
            .collect();
        Ok(BettiReport { tag, degrees })
    }

    pub fn zero_cochain(&self, tag: ComplexTag, n: usize) -> Cochain {
        Cochain { tag, degree: n, coords: Matrix::zeros(self.field(), self.dim(tag, n), 1) }
    }

    pub fn cochain(&self, tag: ComplexTag, degree: usize, coords: Vec<Scalar>) -> Result<Cochain> {
        let n = self.dim(tag, degree);
        if coords.len() != n {
            return Err(Error::Shape(format!("{tag} degree {degree} cochains have {n} coordinates")));
        }
        Ok(Cochain { tag, degree, coords: Matrix::column_vector(self.field(), coords) })
    }

    fn check_cochain(&self, c: &Cochain) -> Result<()> {
        if c.coords.shape() != (self.dim(c.tag, c.degree), 1) || c.coords.field() != self.field() {
            return Err(Error::Shape(format!("not a {} degree-{} cochain", c.tag, c.degree)));
        }
        Ok(())
    }

    pub fn apply(&self, c: &Cochain) -> Result<Cochain> {
        self.check_cochain(c)?;
        let slice = self.slice(c.tag, c.degree)?;
        Ok(Cochain { tag: c.tag, degree: c.degree + 1, coords: slice.matrix.mul(&c.coords) })
    }

    pub fn is_cocycle(&self, c: &Cochain) -> Result<bool> {
        Ok(self.apply(c)?.coords.is_zero())
    }

    /// First nonzero coordinate of `d c`, if any.
    pub fn cocycle_violation(&self, c: &Cochain) -> Result<Option<Violation>> {
        let image = self.apply(c)?.coords;
        Ok((0..image.rows()).find(|&i| !image[(i, 0)].is_zero()).map(|i| Violation {
            law: Law::Cocycle,
            indices: vec![i],
            lhs: vec![image[(i, 0)].clone()],
            rhs: vec![self.field().zero()],
        }))
    }

    /// Echelon solution `x` of `d^{n-1} x = c`; `None` when `c` is not a coboundary.
    /// In degree 0 only the zero cochain is a coboundary, and it has no preimage space.
    pub fn coboundary_preimage(&self, c: &Cochain) -> Result<Option<Cochain>> {
        self.check_cochain(c)?;
        if c.degree == 0 {
            return Err(Error::OutOfRange("degree-0 cochains have no preimage space".into()));
        }
        let slice = self.slice(c.tag, c.degree - 1)?;
        Ok(slice.matrix.solve(&c.coords)?.map(|x| Cochain { tag: c.tag, degree: c.degree - 1, coords: x }))
    }

    /// Cocycles, a basis of coboundaries and echelon representatives of a
    /// cohomology basis in degree `n`.
    pub fn cohomology_basis(&self, tag: ComplexTag, n: usize) -> Result<CohomologyBasis> {
        let cocycles = self.slice(tag, n)?.matrix.kernel_basis();
        let boundaries = if n == 0 {
            Matrix::zeros(self.field(), self.dim(tag, 0), 0)
        } else {
            self.slice(tag, n - 1)?.matrix.column_space_basis()
        };
        let joined = Matrix::hstack(&[&boundaries, &cocycles])?;
        let b = boundaries.cols();
        let picks: Vec<usize> = joined.echelon().pivots.into_iter().filter(|&p| p >= b).collect();
        let representatives = joined.select_columns(&picks);
        Ok(CohomologyBasis { tag, degree: n, cocycles, boundaries, representatives })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyBasis {
    pub tag: ComplexTag,
    pub degree: usize,
    pub cocycles: Matrix,
    pub boundaries: Matrix,
    pub representatives: Matrix,
}

impl CohomologyBasis {
    pub fn dim(&self) -> usize {
        self.representatives.cols()
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn class_coordinates(&self, c: &Cochain) -> Result<Vec<Scalar>> {
        if c.tag != self.tag || c.degree != self.degree {
            return Err(Error::Shape("cochain from a different slot".into()));
        }
        let joined = Matrix::hstack(&[&self.boundaries, &self.representatives])?;
        let x = joined.solve(&c.coords)?.ok_or_else(|| Error::Precondition("cochain is not a cocycle".into()))?;
        Ok((self.boundaries.cols()..joined.cols()).map(|k| x[(k, 0)].clone()).collect())
    }

    /// The `k`-th representative as a cochain.
    pub fn representative(&self, k: usize) -> Cochain {
        Cochain { tag: self.tag, degree: self.degree, coords: self.representatives.column_matrix(k) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub degree: usize,
    pub cochains: usize,
    /// Rank of the outgoing differential.
    pub rank: usize,
    pub kernel: usize,
    /// Rank of the incoming differential.
    pub image: usize,
    pub cohomology: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiReport {
    pub tag: ComplexTag,
    pub degrees: Vec<DegreeStats>,
}

impl BettiReport {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|s| s.cohomology).collect()
    }
}

/// Matrix whose `k`-th column is `vec_r` of `f(k)`.
pub(crate) fn matrix_of(field: Field, rows: usize, cols: usize, f: impl Fn(usize) -> Matrix) -> Matrix {
    let mut out = Matrix::zeros(field, rows, cols);
    for k in 0..cols {
        let v = f(k);
        assert_eq!(v.rows() * v.cols(), rows, "image has the wrong size");
        for (i, x) in v.into_entries().into_iter().enumerate() {
            out[(i, k)] = x;
        }
    }
    out
}

/// Basis element `k` of `Hom(A^{⊗n}, M)` as an `m × d^n` matrix.
pub(crate) fn unit_map(field: Field, m: usize, dn: usize, k: usize) -> Matrix {
    let mut e = Matrix::zeros(field, m, dn);
    e[(k / dn, k % dn)] = field.one();
    e
}

/// `∂^n` assembled term by term from the expanded formula in `R`, `S`,
/// `R_M`, `S_M` and the original actions, without `D(M)`.
pub fn partial_expanded(n: usize, module: &RBSBimodule) -> Matrix {
    let f = module.field();
    let (d, m) = (module.algebra_dim(), module.dim());
    let base = module.base();
    let (r, s, mu) = (base.r(), base.s(), base.algebra().mult());
    let (rm, sm) = (module.r_m(), module.s_m());
    let (l, rt) = (module.actions().left(), module.actions().right());
    let id_a = Matrix::identity(f, d);
    let star = mu.mul(&r.kron(&id_a).add(&id_a.kron(s)));
    let dn = tensor_dim(d, n);
    let sign = |e: usize| if e.is_multiple_of(2) { f.one() } else { -f.one() };
    let contract = |x: &Matrix| {
        let mut acc = Matrix::zeros(f, m, dn * d);
        for i in 1..=n {
            let op =
                Matrix::identity(f, tensor_dim(d, i - 1)).kron(&star).kron(&Matrix::identity(f, tensor_dim(d, n - i)));
            acc = acc.add(&x.mul(&op).scale(&sign(n - i + 1)));
        }
        acc
    };
    matrix_of(f, 2 * m * dn * d, 2 * m * dn, |k| {
        let e = unit_map(f, m, dn, k % (m * dn));
        let zero = Matrix::zeros(f, m, dn);
        let (x, y) = if k < m * dn { (e, zero) } else { (zero, e) };
        let s1 = sign(n + 1);
        let xr = l
            .mul(&r.kron(&x))
            .scale(&s1)
            .sub(&rm.mul(&l.mul(&id_a.kron(&y))).scale(&s1))
            .add(&contract(&x))
            .add(&rt.mul(&x.kron(r)))
            .sub(&rm.mul(&rt.mul(&x.kron(&id_a))));
        let ys = l
            .mul(&s.kron(&y))
            .scale(&s1)
            .sub(&sm.mul(&l.mul(&id_a.kron(&y))).scale(&s1))
            .add(&contract(&y))
            .add(&rt.mul(&y.kron(s)))
            .sub(&sm.mul(&rt.mul(&x.kron(&id_a))));
        Matrix::vstack(&[&xr, &ys]).expect("same width")
    })
}
