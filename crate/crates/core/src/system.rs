//! Rota-Baxter systems `(A, R, S)`, the ⋆-product and morphisms.

use crate::algebra::{decode_tuple, Algebra};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::verdict::{compare_maps, Law, Verdict};

/// Both sides of `P(a)P'(b) = Q(X(a)b + aY(b))` for a bilinear product `prod`
/// (`n × (p·q)`): returns `(prod (P ⊗ P'), Q prod (X ⊗ I + I ⊗ Y))`.
pub(crate) fn twisted_sides(
    prod: &Matrix,
    p_left: &Matrix,
    p_right: &Matrix,
    outer: &Matrix,
    x: &Matrix,
    y: &Matrix,
) -> (Matrix, Matrix) {
    let f = prod.field();
    let lhs = prod.mul(&p_left.kron(p_right));
    let inner = x.kron(&Matrix::identity(f, y.rows())).add(&Matrix::identity(f, x.rows()).kron(y));
    let rhs = outer.mul(&prod.mul(&inner));
    (lhs, rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotaBaxterSystem {
    alg: Algebra,
    r: Matrix,
    s: Matrix,
}

impl RotaBaxterSystem {
    /// Checks shapes only; see [`RotaBaxterSystem::check_rbs`] for the axioms.
    pub fn new(alg: Algebra, r: Matrix, s: Matrix) -> Result<RotaBaxterSystem> {
        let d = alg.dim();
        for (name, op) in [("R", &r), ("S", &s)] {
            if op.shape() != (d, d) || op.field() != alg.field() {
                return Err(Error::Shape(format!("{name} must be a {d}x{d} matrix over {}", alg.field())));
            }
        }
        Ok(RotaBaxterSystem { alg, r, s })
    }

    /// `(A, 0, 0)`.
    pub fn trivial(alg: Algebra) -> RotaBaxterSystem {
        let z = Matrix::zeros(alg.field(), alg.dim(), alg.dim());
        RotaBaxterSystem { alg, r: z.clone(), s: z }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Both defining identities, without looking at associativity.
    pub fn operator_verdict(&self) -> Verdict {
        let d = self.dim();
        let mu = self.alg.mult();
        let (l, r) = twisted_sides(mu, &self.r, &self.r, &self.r, &self.r, &self.s);
        compare_maps(Law::RotaBaxterR, &l, &r, |c| decode_tuple(c, 2, d)).and_then(|| {
            let (l, r) = twisted_sides(mu, &self.s, &self.s, &self.s, &self.r, &self.s);
            compare_maps(Law::RotaBaxterS, &l, &r, |c| decode_tuple(c, 2, d))
        })
    }

    /// Fails with [`Error::NotAssociative`] when the algebra is not associative.
    pub fn check_rbs(&self) -> Result<Verdict> {
        self.alg.check_associative().into_result(Error::NotAssociative)?;
        Ok(self.operator_verdict())
    }

    /// Associativity followed by the operator identities, as one verdict.
    pub fn validate(&self) -> Verdict {
        self.alg.check_associative().and_then(|| self.operator_verdict())
    }

    /// Errors unless the system passes every axiom.
    pub fn ensure_valid(&self) -> Result<()> {
        self.check_rbs()?.into_result(Error::NotRotaBaxterSystem)
    }

    /// Conjugates the structure by the invertible `p` (new basis = columns of `p`).
    pub fn base_change(&self, p: &Matrix) -> Result<RotaBaxterSystem> {
        let alg = self.alg.base_change(p)?;
        let inv = p.inverse().expect("checked by base_change");
        RotaBaxterSystem::new(alg, inv.mul(&self.r).mul(p), inv.mul(&self.s).mul(p))
    }

    /// `a ⋆ b = R(a)b + aS(b)`; requires a valid system.
    pub fn star_algebra(&self) -> Result<Algebra> {
        self.ensure_valid()?;
        Ok(self.star_unchecked())
    }

    pub(crate) fn star_unchecked(&self) -> Algebra {
        let f = self.field();
        let id = Matrix::identity(f, self.dim());
        let inner = self.r.kron(&id).add(&id.kron(&self.s));
        Algebra::new(f, self.dim(), self.alg.mult().mul(&inner)).expect("shape preserved")
    }

    /// `(A_⋆, R, S)` when `RS = SR`, verified; `None` otherwise.
    pub fn star_rbs_if_commuting(&self) -> Result<Option<RotaBaxterSystem>> {
        self.ensure_valid()?;
        if self.r.mul(&self.s) != self.s.mul(&self.r) {
            return Ok(None);
        }
        let sys = RotaBaxterSystem::new(self.star_unchecked(), self.r.clone(), self.s.clone())?;
        sys.validate().into_result(Error::ClaimFailed)?;
        Ok(Some(sys))
    }
}

/// `R(a)R(b) = R(R(a)b + aR(b) + λab)` on basis pairs.
pub fn check_weighted_rb(alg: &Algebra, r: &Matrix, lambda: &Scalar) -> Verdict {
    let f = alg.field();
    let d = alg.dim();
    let id = Matrix::identity(f, d);
    let mu = alg.mult();
    let lhs = mu.mul(&r.kron(r));
    let inner = r.kron(&id).add(&id.kron(r)).add(&id.kron(&id).scale(lambda));
    let rhs = r.mul(&mu.mul(&inner));
    compare_maps(Law::WeightedRotaBaxter, &lhs, &rhs, |c| decode_tuple(c, 2, d))
}

/// `(A, R, R + λ id)` and `(A, R + λ id, R)` from a weight-λ operator.
pub fn from_rb_operator(alg: &Algebra, r: &Matrix, lambda: &Scalar) -> Result<(RotaBaxterSystem, RotaBaxterSystem)> {
    if r.shape() != (alg.dim(), alg.dim()) {
        return Err(Error::Shape("operator must be d×d".into()));
    }
    alg.check_associative().into_result(Error::NotAssociative)?;
    check_weighted_rb(alg, r, lambda).into_result(Error::NotRotaBaxterOperator)?;
    let shifted = r.add(&Matrix::scalar_identity(alg.dim(), lambda));
    let first = RotaBaxterSystem::new(alg.clone(), r.clone(), shifted.clone())?;
    let second = RotaBaxterSystem::new(alg.clone(), shifted, r.clone())?;
    for sys in [&first, &second] {
        sys.operator_verdict().into_result(Error::ClaimFailed)?;
    }
    Ok((first, second))
}

/// Outcome of the orthogonality test for a left-linear `R` and right-linear `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityReport {
    /// `R(ab) = aR(b)`
    pub r_left_linear: bool,
    /// `S(ab) = S(a)b`
    pub s_right_linear: bool,
    pub nondegenerate: bool,
    pub is_rbs: bool,
    /// `aR(S(b)) = 0 = S(R(a))b`, evaluated only under the linearity hypotheses.
    pub annihilation: Option<bool>,
    /// `RS = SR = 0`, evaluated only when additionally non-degenerate.
    pub orthogonal: Option<bool>,
}

impl OrthogonalityReport {
    /// Every equivalence whose hypotheses hold was confirmed.
    pub fn consistent(&self) -> bool {
        self.annihilation.is_none_or(|a| a == self.is_rbs) && self.orthogonal.is_none_or(|o| o == self.is_rbs)
    }
}

pub fn orthogonality_criterion(alg: &Algebra, r: &Matrix, s: &Matrix) -> Result<OrthogonalityReport> {
    let sys = RotaBaxterSystem::new(alg.clone(), r.clone(), s.clone())?;
    let f = alg.field();
    let d = alg.dim();
    let id = Matrix::identity(f, d);
    let mu = alg.mult();
    let r_left_linear = r.mul(mu) == mu.mul(&id.kron(r));
    let s_right_linear = s.mul(mu) == mu.mul(&s.kron(&id));
    let nondegenerate = alg.check_nondegenerate().is_pass();
    let is_rbs = sys.operator_verdict().is_pass();
    let rs = r.mul(s);
    let sr = s.mul(r);
    let annihilation =
        (r_left_linear && s_right_linear).then(|| mu.mul(&id.kron(&rs)).is_zero() && mu.mul(&sr.kron(&id)).is_zero());
    let orthogonal = (r_left_linear && s_right_linear && nondegenerate).then(|| rs.is_zero() && sr.is_zero());
    Ok(OrthogonalityReport { r_left_linear, s_right_linear, nondegenerate, is_rbs, annihilation, orthogonal })
}

/// Whether `f: A -> B` is multiplicative and intertwines both operator pairs.
pub fn check_morphism(f: &Matrix, src: &RotaBaxterSystem, dst: &RotaBaxterSystem) -> Result<Verdict> {
    if f.shape() != (dst.dim(), src.dim()) || f.field() != src.field() || src.field() != dst.field() {
        return Err(Error::Shape(format!(
            "morphism must be a {}x{} matrix over {}",
            dst.dim(),
            src.dim(),
            src.field()
        )));
    }
    let d = src.dim();
    let lhs = f.mul(src.alg.mult());
    let rhs = dst.alg.mult().mul(&f.kron(f));
    Ok(compare_maps(Law::Multiplicative, &lhs, &rhs, |c| decode_tuple(c, 2, d))
        .and_then(|| compare_maps(Law::CommutesWithR, &f.mul(&src.r), &dst.r.mul(f), |c| vec![c]))
        .and_then(|| compare_maps(Law::CommutesWithS, &f.mul(&src.s), &dst.s.mul(f), |c| vec![c])))
}
