//! Formal deformations of `(A, μ, R, S)` truncated at `t^{N+1}`.
//!
//! A series is a `Vec` of coefficients indexed by the power of `t`; products of
//! series are truncated to the common order.

use std::fmt;

use crate::algebra::{tensor_dim, MultiMap};
use crate::bimodule::RBSBimodule;
use crate::cohomology::{Cochain, ComplexTag, Complexes};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::system::RotaBaxterSystem;

fn series_mul(a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    let order = a.len().min(b.len());
    (0..order)
        .map(|n| {
            let mut acc = a[0].mul(&b[n]);
            for i in 1..=n {
                acc = acc.add(&a[i].mul(&b[n - i]));
            }
            acc
        })
        .collect()
}

fn series_kron(a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    let order = a.len().min(b.len());
    (0..order)
        .map(|n| {
            let mut acc = a[0].kron(&b[n]);
            for i in 1..=n {
                acc = acc.add(&a[i].kron(&b[n - i]));
            }
            acc
        })
        .collect()
}

fn check_series(name: &str, series: &[Matrix], shape: (usize, usize), field: Field) -> Result<()> {
    match series.iter().position(|m| m.shape() != shape || m.field() != field) {
        Some(i) => Err(Error::Shape(format!("{name}_{i} must be {}×{} over {field}", shape.0, shape.1))),
        None => Ok(()),
    }
}

/// `μ_t = Σ μ_i t^i`, `R_t`, `S_t` up to order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationData {
    mus: Vec<Matrix>,
    rs: Vec<Matrix>,
    ss: Vec<Matrix>,
}

impl DeformationData {
    pub fn new(mus: Vec<Matrix>, rs: Vec<Matrix>, ss: Vec<Matrix>) -> Result<DeformationData> {
        if mus.is_empty() || mus.len() != rs.len() || mus.len() != ss.len() {
            return Err(Error::Shape("μ, R and S series need the same nonzero length".into()));
        }
        let f = mus[0].field();
        let d = mus[0].rows();
        check_series("μ", &mus, (d, d * d), f)?;
        check_series("R", &rs, (d, d), f)?;
        check_series("S", &ss, (d, d), f)?;
        Ok(DeformationData { mus, rs, ss })
    }

    /// The deformation with every higher coefficient zero.
    pub fn constant(sys: &RotaBaxterSystem, order: usize) -> DeformationData {
        let f = sys.field();
        let d = sys.dim();
        let pad = |first: &Matrix, rows, cols| {
            std::iter::once(first.clone()).chain((0..order).map(|_| Matrix::zeros(f, rows, cols))).collect()
        };
        DeformationData { mus: pad(sys.algebra().mult(), d, d * d), rs: pad(sys.r(), d, d), ss: pad(sys.s(), d, d) }
    }

    /// The constant deformation with `(μ₁, R₁, S₁)` at order one.
    pub fn first_order(sys: &RotaBaxterSystem, mu1: Matrix, r1: Matrix, s1: Matrix) -> Result<DeformationData> {
        let c = DeformationData::constant(sys, 0);
        DeformationData::new(vec![c.mus[0].clone(), mu1], vec![c.rs[0].clone(), r1], vec![c.ss[0].clone(), s1])
    }

    pub fn order(&self) -> usize {
        self.mus.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.mus[0].rows()
    }

    pub fn field(&self) -> Field {
        self.mus[0].field()
    }

    pub fn mus(&self) -> &[Matrix] {
        &self.mus
    }

    pub fn rs(&self) -> &[Matrix] {
        &self.rs
    }

    pub fn ss(&self) -> &[Matrix] {
        &self.ss
    }

    /// `(μ_n, R_n, S_n)`.
    pub fn coefficient(&self, n: usize) -> (&Matrix, &Matrix, &Matrix) {
        (&self.mus[n], &self.rs[n], &self.ss[n])
    }

    pub fn check_normalized(&self, sys: &RotaBaxterSystem) -> Result<()> {
        let (mu, r, s) = self.coefficient(0);
        if mu != sys.algebra().mult() || r != sys.r() || s != sys.s() {
            return Err(Error::Precondition("order-0 coefficients differ from (μ, R, S)".into()));
        }
        Ok(())
    }

    /// Orders `1..=n` all vanish.
    pub fn is_constant_through(&self, n: usize) -> bool {
        (1..=n.min(self.order())).all(|i| self.mus[i].is_zero() && self.rs[i].is_zero() && self.ss[i].is_zero())
    }

    /// Same coefficients truncated at a lower order.
    pub fn truncate(&self, order: usize) -> DeformationData {
        let k = order.min(self.order()) + 1;
        DeformationData { mus: self.mus[..k].to_vec(), rs: self.rs[..k].to_vec(), ss: self.ss[..k].to_vec() }
    }
}

/// `Ψ_t = Id + Σ_{i≥1} Ψ_i t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeSeries {
    psis: Vec<Matrix>,
}

impl GaugeSeries {
    pub fn new(psis: Vec<Matrix>) -> Result<GaugeSeries> {
        let first = psis.first().ok_or_else(|| Error::Shape("empty gauge series".into()))?;
        let d = first.rows();
        check_series("Ψ", &psis, (d, d), first.field())?;
        if *first != Matrix::identity(first.field(), d) {
            return Err(Error::Precondition("Ψ_0 must be the identity".into()));
        }
        Ok(GaugeSeries { psis })
    }

    pub fn identity(field: Field, dim: usize, order: usize) -> GaugeSeries {
        let mut psis = vec![Matrix::identity(field, dim)];
        psis.extend((0..order).map(|_| Matrix::zeros(field, dim, dim)));
        GaugeSeries { psis }
    }

    /// `Id + Ψ t^k`, padded to `order`.
    pub fn monomial(psi: Matrix, k: usize, order: usize) -> Result<GaugeSeries> {
        if k == 0 || k > order {
            return Err(Error::OutOfRange(format!("power {k} outside 1..={order}")));
        }
        let mut g = GaugeSeries::identity(psi.field(), psi.rows(), order);
        g.psis[k] = psi;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.psis.len() - 1
    }

    pub fn psis(&self) -> &[Matrix] {
        &self.psis
    }

    pub fn is_identity(&self) -> bool {
        self.psis[1..].iter().all(Matrix::is_zero)
    }

    /// Series product, i.e. the composite map `Ψ_t ∘ Φ_t`.
    pub fn compose(&self, other: &GaugeSeries) -> GaugeSeries {
        GaugeSeries { psis: series_mul(&self.psis, &other.psis) }
    }

    /// `inv_0 = Id`, `inv_n = -Σ_{j=1}^{n} inv_{n-j} Ψ_j`.
    pub fn inverse(&self) -> GaugeSeries {
        let mut inv: Vec<Matrix> = vec![self.psis[0].clone()];
        for n in 1..self.psis.len() {
            let mut acc = inv[n - 1].mul(&self.psis[1]);
            for j in 2..=n {
                acc = acc.add(&inv[n - j].mul(&self.psis[j]));
            }
            inv.push(acc.neg());
        }
        GaugeSeries { psis: inv }
    }
}

pub fn gauge_inverse(g: &GaugeSeries) -> GaugeSeries {
    g.inverse()
}

/// `μ' = Ψ⁻¹ μ_t (Ψ ⊗ Ψ)`, `R' = Ψ⁻¹ R_t Ψ`, `S' = Ψ⁻¹ S_t Ψ`.
pub fn apply_gauge(def: &DeformationData, g: &GaugeSeries) -> Result<DeformationData> {
    if g.order() != def.order() || g.psis[0].rows() != def.dim() || g.psis[0].field() != def.field() {
        return Err(Error::Shape("gauge and deformation differ in order, dimension or field".into()));
    }
    let inv = g.inverse();
    let conj = |series: &[Matrix]| series_mul(&series_mul(&inv.psis, series), &g.psis);
    let mus = series_mul(&series_mul(&inv.psis, &def.mus), &series_kron(&g.psis, &g.psis));
    Ok(DeformationData { mus, rs: conj(&def.rs), ss: conj(&def.ss) })
}

/// Residuals of the three deformation equations at one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderResidual {
    pub order: usize,
    /// `Σ μ_i(μ_j ⊗ Id) - μ_i(Id ⊗ μ_j)`, a 3-ary map.
    pub mu: MultiMap,
    /// `Σ μ_i(R_j ⊗ R_k) - R_i μ_j(R_k ⊗ Id) - R_i μ_j(Id ⊗ S_k)`.
    pub r: MultiMap,
    /// `Σ μ_i(S_j ⊗ S_k) - S_i μ_j(R_k ⊗ Id) - S_i μ_j(Id ⊗ S_k)`.
    pub s: MultiMap,
}

impl OrderResidual {
    pub fn is_zero(&self) -> bool {
        self.mu.matrix().is_zero() && self.r.matrix().is_zero() && self.s.matrix().is_zero()
    }

    /// Name of the first equation with a nonzero residual.
    pub fn failing_equation(&self) -> Option<&'static str> {
        [("μ", &self.mu), ("R", &self.r), ("S", &self.s)]
            .into_iter()
            .find(|(_, m)| !m.matrix().is_zero())
            .map(|(n, _)| n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationReport {
    pub residuals: Vec<OrderResidual>,
}

impl DeformationReport {
    pub fn passes(&self) -> bool {
        self.residuals.iter().all(OrderResidual::is_zero)
    }

    pub fn passes_through(&self, n: usize) -> bool {
        self.residuals.iter().take(n + 1).all(OrderResidual::is_zero)
    }

    pub fn first_failure(&self) -> Option<&OrderResidual> {
        self.residuals.iter().find(|r| !r.is_zero())
    }
}

impl fmt::Display for DeformationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.residuals {
            match r.failing_equation() {
                None => writeln!(f, "order {}: ok", r.order)?,
                Some(eq) => writeln!(f, "order {}: {eq} equation fails", r.order)?,
            }
        }
        Ok(())
    }
}

fn residuals_at(def: &DeformationData, n: usize) -> OrderResidual {
    let f = def.field();
    let d = def.dim();
    let id = Matrix::identity(f, d);
    let mut mu = Matrix::zeros(f, d, tensor_dim(d, 3));
    for i in 0..=n {
        let j = n - i;
        mu = mu.add(&def.mus[i].mul(&def.mus[j].kron(&id))).sub(&def.mus[i].mul(&id.kron(&def.mus[j])));
    }
    let op = |p: &[Matrix]| {
        let mut acc = Matrix::zeros(f, d, d * d);
        for i in 0..=n {
            for j in 0..=n - i {
                let k = n - i - j;
                acc = acc
                    .add(&def.mus[i].mul(&p[j].kron(&p[k])))
                    .sub(&p[i].mul(&def.mus[j].mul(&def.rs[k].kron(&id))))
                    .sub(&p[i].mul(&def.mus[j].mul(&id.kron(&def.ss[k]))));
            }
        }
        acc
    };
    let wrap = |arity, m| MultiMap::new(arity, d, m).expect("residual shape");
    OrderResidual { order: n, mu: wrap(3, mu), r: wrap(2, op(&def.rs)), s: wrap(2, op(&def.ss)) }
}

/// Residuals of every order `0..=N`.
pub fn verify_deformation(sys: &RotaBaxterSystem, def: &DeformationData) -> Result<DeformationReport> {
    def.check_normalized(sys)?;
    Ok(DeformationReport { residuals: (0..=def.order()).map(|n| residuals_at(def, n)).collect() })
}

fn regular_complexes(sys: &RotaBaxterSystem) -> Result<Complexes> {
    Complexes::new(&RBSBimodule::regular(sys)?)
}

/// `(μ_n, (R_n, S_n))` as a degree-2 cochain of the regular bimodule.
pub fn coefficient_cochain(cx: &Complexes, def: &DeformationData, n: usize) -> Result<Cochain> {
    let (mu, r, s) = def.coefficient(n);
    let coords: Vec<Scalar> = mu.entries().iter().chain(r.entries()).chain(s.entries()).cloned().collect();
    cx.cochain(ComplexTag::Rbs, 2, coords)
}

/// The infinitesimal `(μ₁, (R₁, S₁))` and whether `d²` annihilates it.
pub fn infinitesimal(sys: &RotaBaxterSystem, def: &DeformationData) -> Result<(Cochain, bool)> {
    if def.order() < 1 {
        return Err(Error::Precondition("deformation has no order-1 term".into()));
    }
    let report = verify_deformation(sys, &def.truncate(1))?;
    if let Some(bad) = report.first_failure() {
        return Err(Error::Precondition(format!(
            "order {} {} equation fails",
            bad.order,
            bad.failing_equation().unwrap_or("?")
        )));
    }
    let cx = regular_complexes(sys)?;
    let c = coefficient_cochain(&cx, def, 1)?;
    let closed = cx.is_cocycle(&c)?;
    Ok((c, closed))
}

/// Kills the order-`n+1` coefficient of a deformation that is constant through
/// order `n`, using a gauge `Id - Ψ t^{n+1}` with `d¹(Ψ, (0, 0))` equal to it.
/// `None` when no such `Ψ` exists.
pub fn trivialize_step(
    sys: &RotaBaxterSystem,
    def: &DeformationData,
    n: usize,
) -> Result<Option<(GaugeSeries, DeformationData)>> {
    trivialize_with(&regular_complexes(sys)?, sys, def, n)
}

fn trivialize_with(
    cx: &Complexes,
    sys: &RotaBaxterSystem,
    def: &DeformationData,
    n: usize,
) -> Result<Option<(GaugeSeries, DeformationData)>> {
    def.check_normalized(sys)?;
    if n + 1 > def.order() {
        return Err(Error::OutOfRange(format!("order {} exceeds the truncation {}", n + 1, def.order())));
    }
    if !def.is_constant_through(n) {
        return Err(Error::Precondition(format!("coefficients of orders 1..={n} are not all zero")));
    }
    let z = coefficient_cochain(cx, def, n + 1)?;
    if let Some(v) = cx.cocycle_violation(&z)? {
        return Err(Error::NotCocycle(v));
    }
    let d = sys.dim();
    let d1 = cx.rbs_d(1)?.matrix;
    let restricted = d1.submatrix(0, 0, d1.rows(), d * d);
    let Some(psi) = restricted.solve(&z.coords)? else {
        return Ok(None);
    };
    let psi = Matrix::from_vec(sys.field(), d, d, psi.into_entries())?;
    let gauge = GaugeSeries::monomial(psi.neg(), n + 1, def.order())?;
    let next = apply_gauge(def, &gauge)?;
    Ok(Some((gauge, next)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RigidifyOutcome {
    /// `apply_gauge(def, gauge)` is the constant deformation.
    Success { gauge: GaugeSeries },
    /// Orders below `order` were removed by `gauge`; the order-`order`
    /// coefficient of the partially gauged deformation is `cocycle`, with
    /// `class` its coordinates in the echelon basis of `H²_RBS`.
    Stuck { order: usize, gauge: GaugeSeries, cocycle: Cochain, class: Vec<Scalar> },
}

/// Applies [`trivialize_step`] for orders `1..=N`.
pub fn rigidify(sys: &RotaBaxterSystem, def: &DeformationData) -> Result<RigidifyOutcome> {
    let report = verify_deformation(sys, def)?;
    if let Some(bad) = report.first_failure() {
        return Err(Error::Precondition(format!("deformation fails at order {}", bad.order)));
    }
    let cx = regular_complexes(sys)?;
    let mut gauge = GaugeSeries::identity(sys.field(), sys.dim(), def.order());
    let mut current = def.clone();
    for n in 0..def.order() {
        match trivialize_with(&cx, sys, &current, n)? {
            Some((step, next)) => {
                gauge = gauge.compose(&step);
                current = next;
            }
            None => {
                let cocycle = coefficient_cochain(&cx, &current, n + 1)?;
                let class = cx.cohomology_basis(ComplexTag::Rbs, 2)?.class_coordinates(&cocycle)?;
                return Ok(RigidifyOutcome::Stuck { order: n + 1, gauge, cocycle, class });
            }
        }
    }
    Ok(RigidifyOutcome::Success { gauge })
}

/// `R_t`, `S_t` with the multiplication held fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDeformation {
    rs: Vec<Matrix>,
    ss: Vec<Matrix>,
}

impl OperatorDeformation {
    pub fn new(rs: Vec<Matrix>, ss: Vec<Matrix>) -> Result<OperatorDeformation> {
        if rs.is_empty() || rs.len() != ss.len() {
            return Err(Error::Shape("R and S series need the same nonzero length".into()));
        }
        let d = rs[0].rows();
        check_series("R", &rs, (d, d), rs[0].field())?;
        check_series("S", &ss, (d, d), rs[0].field())?;
        Ok(OperatorDeformation { rs, ss })
    }

    pub fn constant(sys: &RotaBaxterSystem, order: usize) -> OperatorDeformation {
        let c = DeformationData::constant(sys, order);
        OperatorDeformation { rs: c.rs, ss: c.ss }
    }

    pub fn order(&self) -> usize {
        self.rs.len() - 1
    }

    pub fn rs(&self) -> &[Matrix] {
        &self.rs
    }

    pub fn ss(&self) -> &[Matrix] {
        &self.ss
    }

    /// The same series as a full deformation with `μ_t = μ`.
    pub fn as_deformation(&self, sys: &RotaBaxterSystem) -> Result<DeformationData> {
        let f = sys.field();
        let d = sys.dim();
        let mut mus = vec![sys.algebra().mult().clone()];
        mus.extend((0..self.order()).map(|_| Matrix::zeros(f, d, d * d)));
        DeformationData::new(mus, self.rs.clone(), self.ss.clone())
    }
}

/// Per-order residuals of the `R` and `S` equations (`μ` residuals are the
/// associator at order 0 and vanish above it).
pub fn verify_operator_deformation(sys: &RotaBaxterSystem, od: &OperatorDeformation) -> Result<DeformationReport> {
    verify_deformation(sys, &od.as_deformation(sys)?)
}

/// `(R₁, S₁)` as a degree-1 cochain of `C_RBSO` and whether `∂¹` annihilates it.
pub fn operator_infinitesimal(sys: &RotaBaxterSystem, od: &OperatorDeformation) -> Result<(Cochain, bool)> {
    if od.order() < 1 {
        return Err(Error::Precondition("operator deformation has no order-1 term".into()));
    }
    let short = OperatorDeformation { rs: od.rs[..2].to_vec(), ss: od.ss[..2].to_vec() };
    let report = verify_operator_deformation(sys, &short)?;
    if let Some(bad) = report.first_failure() {
        return Err(Error::Precondition(format!(
            "order {} {} equation fails",
            bad.order,
            bad.failing_equation().unwrap_or("?")
        )));
    }
    let cx = regular_complexes(sys)?;
    let coords: Vec<Scalar> = od.rs[1].entries().iter().chain(od.ss[1].entries()).cloned().collect();
    let c = cx.cochain(ComplexTag::Rbso, 1, coords)?;
    let closed = cx.is_cocycle(&c)?;
    Ok((c, closed))
}

/// Matrix of the order-1 residual map `(μ₁, R₁, S₁) ↦ residuals at order 1`,
/// assembled from [`verify_deformation`] on unit inputs. Its kernel is the
/// space of first-order deformations.
pub fn first_order_equations(sys: &RotaBaxterSystem) -> Matrix {
    let f = sys.field();
    let d = sys.dim();
    let sizes = [d * d * d, d * d, d * d];
    let total: usize = sizes.iter().sum();
    let columns: Vec<Vec<Scalar>> = (0..total)
        .map(|k| {
            let mut coords = vec![f.zero(); total];
            coords[k] = f.one();
            let mu1 = Matrix::from_vec(f, d, d * d, coords[..sizes[0]].to_vec()).expect("shape");
            let r1 = Matrix::from_vec(f, d, d, coords[sizes[0]..sizes[0] + sizes[1]].to_vec()).expect("shape");
            let s1 = Matrix::from_vec(f, d, d, coords[sizes[0] + sizes[1]..].to_vec()).expect("shape");
            let def = DeformationData::first_order(sys, mu1, r1, s1).expect("shape");
            let res = residuals_at(&def, 1);
            res.mu
                .matrix()
                .entries()
                .iter()
                .chain(res.r.matrix().entries())
                .chain(res.s.matrix().entries())
                .cloned()
                .collect()
        })
        .collect();
    let rows = columns.first().map_or(0, Vec::len);
    Matrix::from_fn(f, rows, total, |i, j| columns[j][i].clone())
}

/// Matrix of `(R₁, S₁) ↦` order-1 operator residuals.
pub fn first_order_operator_equations(sys: &RotaBaxterSystem) -> Matrix {
    let full = first_order_equations(sys);
    let d = sys.dim();
    let (mu_rows, mu_cols) = (d * d * d * d, d * d * d);
    full.submatrix(mu_rows, mu_cols, full.rows() - mu_rows, full.cols() - mu_cols)
}
