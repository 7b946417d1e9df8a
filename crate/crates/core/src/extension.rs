//! Abelian extensions `0 → M → Â → A → 0` of Rota-Baxter systems and their
//! degree-2 cocycles `(Ψ, (χ_R, χ_S))`.

use crate::algebra::decode_tuple;
use crate::algebra::BimoduleActions;
use crate::bimodule::{
    inclusion_of_algebra, inclusion_of_module, projection_to_algebra, projection_to_module, twisted_sum, RBSBimodule,
};
use crate::cohomology::{Cochain, ComplexTag, Complexes};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::system::{check_morphism, RotaBaxterSystem};
use crate::verdict::{compare_maps, Law, Verdict, Violation};

/// `Ψ: A⊗A -> M` (`m × d²`), `χ_R, χ_S: A -> M` (`m × d`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    pub psi: Matrix,
    pub chi_r: Matrix,
    pub chi_s: Matrix,
}

impl Cocycle2 {
    pub fn new(psi: Matrix, chi_r: Matrix, chi_s: Matrix) -> Result<Cocycle2> {
        let (m, d) = chi_r.shape();
        if psi.shape() != (m, d * d) || chi_s.shape() != (m, d) {
            return Err(Error::Shape(format!("cocycle blocks must be {m}×{}, {m}×{d}, {m}×{d}", d * d)));
        }
        if psi.field() != chi_r.field() || psi.field() != chi_s.field() {
            return Err(Error::Shape("cocycle blocks over different fields".into()));
        }
        Ok(Cocycle2 { psi, chi_r, chi_s })
    }

    pub fn zero(field: Field, d: usize, m: usize) -> Cocycle2 {
        Cocycle2 {
            psi: Matrix::zeros(field, m, d * d),
            chi_r: Matrix::zeros(field, m, d),
            chi_s: Matrix::zeros(field, m, d),
        }
    }

    pub fn algebra_dim(&self) -> usize {
        self.chi_r.cols()
    }

    pub fn module_dim(&self) -> usize {
        self.chi_r.rows()
    }

    pub fn field(&self) -> Field {
        self.psi.field()
    }

    pub fn coordinates(&self) -> Vec<Scalar> {
        self.psi.entries().iter().chain(self.chi_r.entries()).chain(self.chi_s.entries()).cloned().collect()
    }

    pub fn to_cochain(&self, cx: &Complexes) -> Result<Cochain> {
        cx.cochain(ComplexTag::Rbs, 2, self.coordinates())
    }

    pub fn from_coordinates(field: Field, d: usize, m: usize, coords: &[Scalar]) -> Result<Cocycle2> {
        let (a, b) = (m * d * d, m * d * d + m * d);
        if coords.len() != b + m * d {
            return Err(Error::Shape(format!("expected {} coordinates", b + m * d)));
        }
        Cocycle2::new(
            Matrix::from_vec(field, m, d * d, coords[..a].to_vec())?,
            Matrix::from_vec(field, m, d, coords[a..b].to_vec())?,
            Matrix::from_vec(field, m, d, coords[b..].to_vec())?,
        )
    }

    pub fn from_cochain(d: usize, m: usize, c: &Cochain) -> Result<Cocycle2> {
        if c.tag != ComplexTag::Rbs || c.degree != 2 {
            return Err(Error::Shape("expected a degree-2 cochain of C_RBS".into()));
        }
        Cocycle2::from_coordinates(c.coords.field(), d, m, &c.coords.column(0))
    }

    pub fn add(&self, other: &Cocycle2) -> Cocycle2 {
        Cocycle2 {
            psi: self.psi.add(&other.psi),
            chi_r: self.chi_r.add(&other.chi_r),
            chi_s: self.chi_s.add(&other.chi_s),
        }
    }

    pub fn sub(&self, other: &Cocycle2) -> Cocycle2 {
        self.add(&Cocycle2 { psi: other.psi.neg(), chi_r: other.chi_r.neg(), chi_s: other.chi_s.neg() })
    }
}

/// `d¹(γ, (0, 0))` for `γ: A -> M`.
pub fn gauge_coboundary(cx: &Complexes, gamma: &Matrix) -> Result<Cocycle2> {
    let (d, m) = (cx.module().algebra_dim(), cx.module().dim());
    if gamma.shape() != (m, d) {
        return Err(Error::Shape(format!("γ must be {m}×{d}")));
    }
    let mut coords = gamma.entries().to_vec();
    coords.resize(cx.dim(ComplexTag::Rbs, 1), cx.field().zero());
    let image = cx.apply(&cx.cochain(ComplexTag::Rbs, 1, coords)?)?;
    Cocycle2::from_cochain(d, m, &image)
}

/// A presented extension: `incl: M -> Â`, `proj: Â -> A`, optionally a
/// section `t: A -> Â` and a retraction `s: Â -> M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionData {
    pub base: RotaBaxterSystem,
    pub hat: RotaBaxterSystem,
    pub incl: Matrix,
    pub proj: Matrix,
    pub section: Option<Matrix>,
    pub retraction: Option<Matrix>,
}

impl ExtensionData {
    pub fn module_dim(&self) -> usize {
        self.incl.cols()
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    fn check_shapes(&self) -> Result<()> {
        let (d, n, m) = (self.base.dim(), self.hat.dim(), self.incl.cols());
        let ok = self.incl.rows() == n
            && self.proj.shape() == (d, n)
            && self.section.as_ref().is_none_or(|t| t.shape() == (n, d))
            && self.retraction.as_ref().is_none_or(|s| s.shape() == (m, n))
            && self.hat.field() == self.base.field();
        if ok {
            Ok(())
        } else {
            Err(Error::Shape("extension maps do not match the dimensions of Â and A".into()))
        }
    }

    /// `i⁺`, a left inverse of the inclusion.
    fn incl_inverse(&self) -> Result<Matrix> {
        self.incl
            .left_inverse()
            .ok_or_else(|| Error::NotExtension(rank_violation(self.field(), self.incl.rank(), self.module_dim())))
    }
}

fn rank_violation(field: Field, got: usize, want: usize) -> Violation {
    Violation {
        law: Law::Exactness,
        indices: vec![],
        lhs: vec![field.from_i64(got as i64)],
        rhs: vec![field.from_i64(want as i64)],
    }
}

fn zero_check(law: Law, m: &Matrix, decode: impl Fn(usize) -> Vec<usize>) -> Verdict {
    compare_maps(law, m, &Matrix::zeros(m.field(), m.rows(), m.cols()), decode)
}

fn single(c: usize) -> Vec<usize> {
    vec![c]
}

/// All defining properties of an abelian extension, first failure reported.
pub fn check_extension(ext: &ExtensionData) -> Result<Verdict> {
    ext.check_shapes()?;
    ext.base.ensure_valid()?;
    let f = ext.field();
    let (d, n, m) = (ext.base.dim(), ext.hat.dim(), ext.module_dim());
    let (i, p) = (&ext.incl, &ext.proj);
    let mu = ext.hat.algebra().mult();
    let id_n = Matrix::identity(f, n);
    let verdict = ext
        .hat
        .check_rbs()?
        .and_then(|| zero_check(Law::Exactness, &p.mul(i), single))
        .and_then(|| {
            let (ri, rp) = (i.rank(), p.rank());
            if ri != m {
                Verdict::Fail(rank_violation(f, ri, m))
            } else if rp != d || d + m != n {
                Verdict::Fail(rank_violation(f, rp, n - m))
            } else {
                Verdict::Pass
            }
        })
        .and_then(|| zero_check(Law::Ideal, &p.mul(&mu.mul(&id_n.kron(i))), |c| vec![c / m, c % m]))
        .and_then(|| zero_check(Law::Ideal, &p.mul(&mu.mul(&i.kron(&id_n))), |c| vec![c / n, c % n]))
        .and_then(|| zero_check(Law::TrivialProduct, &mu.mul(&i.kron(i)), |c| decode_tuple(c, 2, m)))
        .and_then(|| zero_check(Law::InvariantKernel, &p.mul(&ext.hat.r().mul(i)), single))
        .and_then(|| zero_check(Law::InvariantKernel, &p.mul(&ext.hat.s().mul(i)), single))
        .and_then(|| check_morphism(p, &ext.hat, &ext.base).expect("shapes checked"))
        .and_then(|| match &ext.section {
            Some(t) => compare_maps(Law::Section, &p.mul(t), &Matrix::identity(f, d), single),
            None => Verdict::Pass,
        })
        .and_then(|| match (&ext.section, &ext.retraction) {
            (Some(t), Some(s)) => compare_maps(Law::Retraction, &s.mul(i), &Matrix::identity(f, m), single)
                .and_then(|| zero_check(Law::Retraction, &s.mul(t), single))
                .and_then(|| compare_maps(Law::Retraction, &i.mul(s).add(&t.mul(p)), &id_n, single)),
            (None, Some(s)) => compare_maps(Law::Retraction, &s.mul(i), &Matrix::identity(f, m), single),
            _ => Verdict::Pass,
        });
    Ok(verdict)
}

fn ensure_extension(ext: &ExtensionData) -> Result<()> {
    check_extension(ext)?.into_result(Error::NotExtension)
}

fn ensure_section(ext: &ExtensionData, t: &Matrix) -> Result<()> {
    if t.shape() != (ext.hat.dim(), ext.base.dim()) {
        return Err(Error::Shape("section must be (d+m)×d".into()));
    }
    compare_maps(Law::Section, &ext.proj.mul(t), &Matrix::identity(ext.field(), ext.base.dim()), single)
        .into_result(Error::NotExtension)
}

/// Canonical data on `A ⊕ M` for the given cocycle, without checking it.
pub fn build_extension_unchecked(module: &RBSBimodule, c: &Cocycle2) -> Result<ExtensionData> {
    let (d, m) = (module.algebra_dim(), module.dim());
    if (c.algebra_dim(), c.module_dim()) != (d, m) || c.field() != module.field() {
        return Err(Error::Shape("cocycle does not match the bimodule".into()));
    }
    let f = module.field();
    Ok(ExtensionData {
        base: module.base().clone(),
        hat: twisted_sum(module, &c.psi, &c.chi_r, &c.chi_s),
        incl: inclusion_of_module(f, d, m),
        proj: projection_to_algebra(f, d, m),
        section: Some(inclusion_of_algebra(f, d, m)),
        retraction: Some(projection_to_module(f, d, m)),
    })
}

/// `A ⊕ M` with the `Ψ`-twisted product and operators `R_χ`, `S_χ`.
pub fn build_extension(module: &RBSBimodule, c: &Cocycle2) -> Result<ExtensionData> {
    let cx = Complexes::new(module)?;
    build_with(&cx, c)
}

fn build_with(cx: &Complexes, c: &Cocycle2) -> Result<ExtensionData> {
    let ext = build_extension_unchecked(cx.module(), c)?;
    if let Some(v) = cx.cocycle_violation(&c.to_cochain(cx)?)? {
        return Err(Error::NotCocycle(v));
    }
    Ok(ext)
}

/// Some `t` with `p t = Id`: the stored section if present, else an echelon solution.
pub fn any_section(ext: &ExtensionData) -> Result<Matrix> {
    if let Some(t) = &ext.section {
        return Ok(t.clone());
    }
    let f = ext.field();
    let d = ext.base.dim();
    let cols = (0..d)
        .map(|k| {
            let e = Matrix::identity(f, d).column_matrix(k);
            ext.proj.solve(&e)?.ok_or_else(|| Error::NotExtension(rank_violation(f, ext.proj.rank(), d)))
        })
        .collect::<Result<Vec<Matrix>>>()?;
    let refs: Vec<&Matrix> = cols.iter().collect();
    if refs.is_empty() {
        return Ok(Matrix::zeros(f, ext.hat.dim(), 0));
    }
    Matrix::hstack(&refs)
}

/// Actions `a·u = i⁺(t(a) i(u))`, `u·a = i⁺(i(u) t(a))` and operators
/// `i⁺ R̂ i`, `i⁺ Ŝ i`.
pub fn induced_bimodule(ext: &ExtensionData, t: &Matrix) -> Result<RBSBimodule> {
    ensure_extension(ext)?;
    ensure_section(ext, t)?;
    induced_unchecked(ext, t)
}

fn induced_unchecked(ext: &ExtensionData, t: &Matrix) -> Result<RBSBimodule> {
    let i = &ext.incl;
    let ip = ext.incl_inverse()?;
    let mu = ext.hat.algebra().mult();
    let left = ip.mul(&mu.mul(&t.kron(i)));
    let right = ip.mul(&mu.mul(&i.kron(t)));
    let actions = BimoduleActions::new(ext.base.dim(), ext.module_dim(), left, right)?;
    let module = RBSBimodule::new(ext.base.clone(), actions, ip.mul(&ext.hat.r().mul(i)), ip.mul(&ext.hat.s().mul(i)))?;
    module.ensure_valid()?;
    Ok(module)
}

/// `Ψ = i⁺(t(a)t(b) - t(ab))`, `χ_R = i⁺(R̂ t - t R)`, `χ_S = i⁺(Ŝ t - t S)`.
pub fn extract_cocycle(ext: &ExtensionData, t: &Matrix) -> Result<Cocycle2> {
    let module = induced_bimodule(ext, t)?;
    let c = extract_unchecked(ext, t)?;
    let cx = Complexes::new(&module)?;
    if let Some(v) = cx.cocycle_violation(&c.to_cochain(&cx)?)? {
        return Err(Error::ClaimFailed(v));
    }
    Ok(c)
}

fn extract_unchecked(ext: &ExtensionData, t: &Matrix) -> Result<Cocycle2> {
    let ip = ext.incl_inverse()?;
    let base = &ext.base;
    let mu_hat = ext.hat.algebra().mult();
    let psi = ip.mul(&mu_hat.mul(&t.kron(t)).sub(&t.mul(base.algebra().mult())));
    let chi = |hat_op: &Matrix, op: &Matrix| ip.mul(&hat_op.mul(t).sub(&t.mul(op)));
    Cocycle2::new(psi, chi(ext.hat.r(), base.r()), chi(ext.hat.s(), base.s()))
}

/// Moves `Â` to `A ⊕ M` along `(p, s): Â -> A ⊕ M` for a section `t` and the
/// retraction `s = i⁺(Id - t p)`. Returns the canonical-form extension and
/// the coordinate change.
pub fn normalize(ext: &ExtensionData, t: &Matrix) -> Result<(ExtensionData, Matrix)> {
    ensure_extension(ext)?;
    ensure_section(ext, t)?;
    let f = ext.field();
    let (d, m) = (ext.base.dim(), ext.module_dim());
    let n = d + m;
    let s = ext.incl_inverse()?.mul(&Matrix::identity(f, n).sub(&t.mul(&ext.proj)));
    let to_split = Matrix::vstack(&[&ext.proj, &s])?;
    let from_split = Matrix::hstack(&[t, &ext.incl])?;
    let hat = ext.hat.base_change(&from_split)?;
    let out = ExtensionData {
        base: ext.base.clone(),
        hat,
        incl: inclusion_of_module(f, d, m),
        proj: projection_to_algebra(f, d, m),
        section: Some(inclusion_of_algebra(f, d, m)),
        retraction: Some(projection_to_module(f, d, m)),
    };
    Ok((out, to_split))
}

/// `ζ: Â₁ -> Â₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionIso {
    pub zeta: Matrix,
}

/// `ζ` is an invertible morphism with `p₂ ζ = p₁` and `ζ i₁ = i₂`.
pub fn check_iso(ext1: &ExtensionData, ext2: &ExtensionData, iso: &ExtensionIso) -> Result<Verdict> {
    let z = &iso.zeta;
    if z.shape() != (ext2.hat.dim(), ext1.hat.dim()) {
        return Err(Error::Shape("ζ has the wrong shape".into()));
    }
    let f = ext1.field();
    let invertible = if z.is_square() && z.rank() == z.rows() {
        Verdict::Pass
    } else {
        Verdict::Fail(Violation {
            law: Law::Invertible,
            indices: vec![],
            lhs: vec![f.from_i64(z.rank() as i64)],
            rhs: vec![f.from_i64(z.rows() as i64)],
        })
    };
    Ok(invertible
        .and_then(|| check_morphism(z, &ext1.hat, &ext2.hat).expect("shapes checked"))
        .and_then(|| diagram_verdict(ext1, ext2, z)))
}

fn diagram_verdict(ext1: &ExtensionData, ext2: &ExtensionData, z: &Matrix) -> Verdict {
    compare_maps(Law::Diagram, &ext2.proj.mul(z), &ext1.proj, single)
        .and_then(|| compare_maps(Law::RestrictsToIdentity, &z.mul(&ext1.incl), &ext2.incl, single))
}

/// `ζ(a, u) = (a, u - γ(a))` from `build(c1)` to `build(c2)`, required
/// `c2 = c1 + d¹(γ, (0, 0))`.
pub fn iso_from_cohomologous(
    module: &RBSBimodule,
    c1: &Cocycle2,
    c2: &Cocycle2,
    gamma: &Matrix,
) -> Result<ExtensionIso> {
    let cx = Complexes::new(module)?;
    let boundary = gauge_coboundary(&cx, gamma)?;
    let diff = c2.sub(c1);
    if diff != boundary {
        return Err(Error::Precondition("c2 - c1 is not d¹(γ, (0, 0))".into()));
    }
    let ext1 = build_with(&cx, c1)?;
    let ext2 = build_with(&cx, c2)?;
    let f = module.field();
    let (d, m) = (module.algebra_dim(), module.dim());
    let mut zeta = Matrix::identity(f, d + m);
    zeta.set_block(d, 0, &gamma.neg());
    let iso = ExtensionIso { zeta };
    check_iso(&ext1, &ext2, &iso)?.into_result(Error::ClaimFailed)?;
    Ok(iso)
}

/// Extracted cocycles through `t₁` and `ζ t₁` coincide, as do the induced bimodules.
pub fn same_class_check(ext1: &ExtensionData, ext2: &ExtensionData, iso: &ExtensionIso) -> Result<Verdict> {
    let z = &iso.zeta;
    if z.shape() != (ext2.hat.dim(), ext1.hat.dim()) {
        return Err(Error::Shape("ζ has the wrong shape".into()));
    }
    diagram_verdict(ext1, ext2, z).into_result(Error::NotIsomorphism)?;
    let t1 = any_section(ext1)?;
    let t2 = z.mul(&t1);
    let m1 = induced_bimodule(ext1, &t1)?;
    let m2 = induced_bimodule(ext2, &t2)?;
    let c1 = extract_cocycle(ext1, &t1)?;
    let c2 = extract_cocycle(ext2, &t2)?;
    let as_column = |v: Vec<Scalar>| Matrix::column_vector(ext1.field(), v);
    let same_module = |a: &RBSBimodule, b: &RBSBimodule| {
        let flat = |x: &RBSBimodule| {
            as_column(
                [x.actions().left(), x.actions().right(), x.r_m(), x.s_m()]
                    .iter()
                    .flat_map(|mat| mat.entries().to_vec())
                    .collect(),
            )
        };
        compare_maps(Law::SameBimodule, &flat(a).transpose(), &flat(b).transpose(), single)
    };
    Ok(same_module(&m1, &m2).and_then(|| {
        compare_maps(
            Law::SameCocycle,
            &as_column(c1.coordinates()).transpose(),
            &as_column(c2.coordinates()).transpose(),
            single,
        )
    }))
}

/// The zero class followed by one extension per echelon basis vector of `H²_RBS`.
pub fn h2_extension_census(module: &RBSBimodule, cap: usize) -> Result<Vec<(Cocycle2, ExtensionData)>> {
    if module.field() == Field::Rationals {
        return Err(Error::Precondition("a census needs a finite field".into()));
    }
    let cx = Complexes::new(module)?;
    let basis = cx.cohomology_basis(ComplexTag::Rbs, 2)?;
    if basis.dim() > cap {
        return Err(Error::CapExceeded { needed: basis.dim(), cap });
    }
    let (d, m) = (module.algebra_dim(), module.dim());
    let mut reps = vec![Cocycle2::zero(module.field(), d, m)];
    for k in 0..basis.dim() {
        reps.push(Cocycle2::from_cochain(d, m, &basis.representative(k))?);
    }
    reps.into_iter()
        .map(|c| {
            let ext = build_with(&cx, &c)?;
            Ok((c, ext))
        })
        .collect()
}
