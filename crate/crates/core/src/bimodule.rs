//! Rota-Baxter system bimodules, semidirect products and the twisted
//! bimodule `D(M) = M ⊕ M` over `A_⋆`.

use crate::algebra::{decode_mixed, Algebra, BimoduleActions};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::system::{twisted_sides, RotaBaxterSystem};
use crate::verdict::{compare_maps, Law, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RBSBimodule {
    base: RotaBaxterSystem,
    actions: BimoduleActions,
    r_m: Matrix,
    s_m: Matrix,
}

impl RBSBimodule {
    /// Checks shapes only.
    pub fn new(base: RotaBaxterSystem, actions: BimoduleActions, r_m: Matrix, s_m: Matrix) -> Result<RBSBimodule> {
        let m = actions.dim();
        if actions.algebra_dim() != base.dim() || actions.field() != base.field() {
            return Err(Error::Shape("actions do not match the base system".into()));
        }
        for (name, op) in [("R_M", &r_m), ("S_M", &s_m)] {
            if op.shape() != (m, m) || op.field() != base.field() {
                return Err(Error::Shape(format!("{name} must be a {m}x{m} matrix over {}", base.field())));
            }
        }
        Ok(RBSBimodule { base, actions, r_m, s_m })
    }

    /// `A` over itself with `R_M = R`, `S_M = S`.
    pub fn regular(sys: &RotaBaxterSystem) -> Result<RBSBimodule> {
        sys.ensure_valid()?;
        Ok(Self::regular_unchecked(sys))
    }

    pub(crate) fn regular_unchecked(sys: &RotaBaxterSystem) -> RBSBimodule {
        RBSBimodule {
            base: sys.clone(),
            actions: BimoduleActions::regular(sys.algebra()),
            r_m: sys.r().clone(),
            s_m: sys.s().clone(),
        }
    }

    pub fn base(&self) -> &RotaBaxterSystem {
        &self.base
    }

    pub fn actions(&self) -> &BimoduleActions {
        &self.actions
    }

    pub fn r_m(&self) -> &Matrix {
        &self.r_m
    }

    pub fn s_m(&self) -> &Matrix {
        &self.s_m
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    /// Dimension of the algebra.
    pub fn algebra_dim(&self) -> usize {
        self.base.dim()
    }

    /// Dimension of the module.
    pub fn dim(&self) -> usize {
        self.actions.dim()
    }

    /// Bimodule axioms and the four operator identities. The base system must be valid.
    pub fn check_rbs_bimodule(&self) -> Result<Verdict> {
        self.base.ensure_valid()?;
        Ok(self.verdict_unchecked())
    }

    pub(crate) fn verdict_unchecked(&self) -> Verdict {
        let (d, m) = (self.algebra_dim(), self.dim());
        let (r, s) = (self.base.r(), self.base.s());
        let (l, rt) = (self.actions.left(), self.actions.right());
        let (rm, sm) = (&self.r_m, &self.s_m);
        let left = |c| decode_mixed(c, &[d, m]);
        let right = |c| decode_mixed(c, &[m, d]);
        self.actions.check(self.base.algebra()).and_then(|| {
            let (a, b) = twisted_sides(l, r, rm, rm, r, sm);
            compare_maps(Law::ModuleLeftR, &a, &b, left)
                .and_then(|| {
                    let (a, b) = twisted_sides(rt, rm, r, rm, rm, s);
                    compare_maps(Law::ModuleRightR, &a, &b, right)
                })
                .and_then(|| {
                    let (a, b) = twisted_sides(l, s, sm, sm, r, sm);
                    compare_maps(Law::ModuleLeftS, &a, &b, left)
                })
                .and_then(|| {
                    let (a, b) = twisted_sides(rt, sm, s, sm, rm, s);
                    compare_maps(Law::ModuleRightS, &a, &b, right)
                })
        })
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.check_rbs_bimodule()?.into_result(Error::NotBimodule)
    }

    /// `M ⊕ N` with componentwise actions and operators.
    pub fn direct_sum(&self, other: &RBSBimodule) -> Result<RBSBimodule> {
        if self.base != other.base {
            return Err(Error::Shape("direct sum of bimodules over different systems".into()));
        }
        RBSBimodule::new(
            self.base.clone(),
            self.actions.direct_sum(&other.actions)?,
            Matrix::direct_sum(&self.r_m, &other.r_m),
            Matrix::direct_sum(&self.s_m, &other.s_m),
        )
    }

    /// Change of module basis by the invertible `q`.
    pub fn base_change(&self, q: &Matrix) -> Result<RBSBimodule> {
        let actions = self.actions.base_change(q)?;
        let inv = q.inverse().expect("checked above");
        RBSBimodule::new(self.base.clone(), actions, inv.mul(&self.r_m).mul(q), inv.mul(&self.s_m).mul(q))
    }

    /// Transport along a base change `p` of the system and `q` of the module.
    pub fn transport(&self, p: &Matrix, q: &Matrix) -> Result<RBSBimodule> {
        let base = self.base.base_change(p)?;
        let actions = self.actions.transport(p, q)?;
        let inv = q.inverse().expect("checked by transport");
        RBSBimodule::new(base, actions, inv.mul(&self.r_m).mul(q), inv.mul(&self.s_m).mul(q))
    }
}

/// `ι: A -> A ⊕ M`.
pub fn inclusion_of_algebra(field: Field, d: usize, m: usize) -> Matrix {
    Matrix::vstack(&[&Matrix::identity(field, d), &Matrix::zeros(field, m, d)]).expect("shapes agree")
}

/// `π: A ⊕ M -> A`.
pub fn projection_to_algebra(field: Field, d: usize, m: usize) -> Matrix {
    Matrix::hstack(&[&Matrix::identity(field, d), &Matrix::zeros(field, d, m)]).expect("shapes agree")
}

/// `M -> A ⊕ M`.
pub fn inclusion_of_module(field: Field, d: usize, m: usize) -> Matrix {
    Matrix::vstack(&[&Matrix::zeros(field, d, m), &Matrix::identity(field, m)]).expect("shapes agree")
}

/// `A ⊕ M -> M`.
pub fn projection_to_module(field: Field, d: usize, m: usize) -> Matrix {
    Matrix::hstack(&[&Matrix::zeros(field, m, d), &Matrix::identity(field, m)]).expect("shapes agree")
}

/// `A ⊕ M` with `(a,m)(b,n) = (ab, an + mb + Ψ(a,b))` and lower-triangular
/// operators `(a,m) ↦ (R(a), χ_R(a) + R_M(m))`. No axiom is checked.
pub(crate) fn twisted_sum(module: &RBSBimodule, psi: &Matrix, chi_r: &Matrix, chi_s: &Matrix) -> RotaBaxterSystem {
    let f = module.field();
    let (d, m) = (module.algebra_dim(), module.dim());
    let n = d + m;
    let alg = module.base.algebra();
    let mut mult = Matrix::zeros(f, n, n * n);
    for i in 0..d {
        for j in 0..d {
            let col = i * n + j;
            for k in 0..d {
                mult[(k, col)] = alg.constant(i, j, k).clone();
            }
            for v in 0..m {
                mult[(d + v, col)] = psi[(v, i * d + j)].clone();
            }
        }
        for u in 0..m {
            for v in 0..m {
                mult[(d + v, i * n + d + u)] = module.actions.left_constant(i, u, v).clone();
                mult[(d + v, (d + u) * n + i)] = module.actions.right_constant(u, i, v).clone();
            }
        }
    }
    let op = |top: &Matrix, chi: &Matrix, bottom: &Matrix| {
        let mut out = Matrix::zeros(f, n, n);
        out.set_block(0, 0, top);
        out.set_block(d, 0, chi);
        out.set_block(d, d, bottom);
        out
    };
    let r = op(module.base.r(), chi_r, &module.r_m);
    let s = op(module.base.s(), chi_s, &module.s_m);
    RotaBaxterSystem::new(Algebra::new(f, n, mult).expect("valid shape"), r, s).expect("valid shape")
}

/// `A ⋉ M`; the bimodule must be valid.
pub fn semidirect_product(module: &RBSBimodule) -> Result<RotaBaxterSystem> {
    module.ensure_valid()?;
    let sys = semidirect_unchecked(module);
    sys.validate().into_result(Error::ClaimFailed)?;
    Ok(sys)
}

pub(crate) fn semidirect_unchecked(module: &RBSBimodule) -> RotaBaxterSystem {
    let f = module.field();
    let (d, m) = (module.algebra_dim(), module.dim());
    twisted_sum(module, &Matrix::zeros(f, m, d * d), &Matrix::zeros(f, m, d), &Matrix::zeros(f, m, d))
}

/// Reads `(R_M, S_M)` off operators `(R', S')` on the semidirect algebra
/// `A ⊕ M` for which `ι` and `π` are morphisms.
///
/// `Ok(Err(v))` reports why `(A ⊕ M, R', S')` is not a system with morphisms
/// `ι`, `π`; `Ok(Ok(module))` returns the extracted (unchecked) bimodule.
pub fn extract_bimodule(
    base: &RotaBaxterSystem,
    actions: &BimoduleActions,
    r_prime: &Matrix,
    s_prime: &Matrix,
) -> Result<std::result::Result<RBSBimodule, Verdict>> {
    base.ensure_valid()?;
    let f = base.field();
    let (d, m) = (base.dim(), actions.dim());
    let zero = |k| Matrix::zeros(f, k, k);
    let placeholder = RBSBimodule::new(base.clone(), actions.clone(), zero(m), zero(m))?;
    let algebra = semidirect_unchecked(&placeholder).algebra().clone();
    let big = RotaBaxterSystem::new(algebra, r_prime.clone(), s_prime.clone())?;
    let iota = inclusion_of_algebra(f, d, m);
    let pi = projection_to_algebra(f, d, m);
    let verdict = big
        .validate()
        .and_then(|| crate::system::check_morphism(&iota, base, &big).expect("shapes agree"))
        .and_then(|| crate::system::check_morphism(&pi, &big, base).expect("shapes agree"));
    if !verdict.is_pass() {
        return Ok(Err(verdict));
    }
    let r_m = r_prime.submatrix(d, d, m, m);
    let s_m = s_prime.submatrix(d, d, m, m);
    Ok(Ok(RBSBimodule::new(base.clone(), actions.clone(), r_m, s_m)?))
}

/// `M ⊕ M` as a bimodule over `A_⋆`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DModule {
    pub star: Algebra,
    pub actions: BimoduleActions,
}

/// Builds `⊳` and `⊲` on `M ⊕ M` and verifies the bimodule axioms over `A_⋆`.
pub fn d_module(module: &RBSBimodule) -> Result<DModule> {
    module.ensure_valid()?;
    let dm = d_module_unchecked(module);
    dm.actions.check(&dm.star).into_result(Error::ClaimFailed)?;
    Ok(dm)
}

pub(crate) fn d_module_unchecked(module: &RBSBimodule) -> DModule {
    let f = module.field();
    let (d, m) = (module.algebra_dim(), module.dim());
    let (r, s) = (module.base.r(), module.base.s());
    let (l, rt) = (module.actions.left(), module.actions.right());
    let id_m = Matrix::identity(f, m);
    let l_r = l.mul(&r.kron(&id_m));
    let l_s = l.mul(&s.kron(&id_m));
    let rm_l = module.r_m.mul(l);
    let sm_l = module.s_m.mul(l);
    let r_r = rt.mul(&id_m.kron(r));
    let r_s = rt.mul(&id_m.kron(s));
    let rm_r = module.r_m.mul(rt);
    let sm_r = module.s_m.mul(rt);
    let w = 2 * m;
    let mut left = Matrix::zeros(f, w, d * w);
    let mut right = Matrix::zeros(f, w, w * d);
    for i in 0..d {
        for u in 0..m {
            let src = i * m + u;
            for v in 0..m {
                // a ⊳ (f_u, 0) = (R(a) f_u, 0)
                left[(v, i * w + u)] = l_r[(v, src)].clone();
                // a ⊳ (0, f_u) = (-R_M(a f_u), S(a) f_u - S_M(a f_u))
                left[(v, i * w + m + u)] = -&rm_l[(v, src)];
                left[(m + v, i * w + m + u)] = &l_s[(v, src)] - &sm_l[(v, src)];
            }
            let src = u * d + i;
            for v in 0..m {
                // (f_u, 0) ⊲ a = (f_u R(a) - R_M(f_u a), -S_M(f_u a))
                right[(v, u * d + i)] = &r_r[(v, src)] - &rm_r[(v, src)];
                right[(m + v, u * d + i)] = -&sm_r[(v, src)];
                // (0, f_u) ⊲ a = (0, f_u S(a))
                right[(m + v, (m + u) * d + i)] = r_s[(v, src)].clone();
            }
        }
    }
    DModule {
        star: module.base.star_unchecked(),
        actions: BimoduleActions::new(d, w, left, right).expect("valid shape"),
    }
}

/// `(D(M), R_M ⊕ R_M, S_M ⊕ S_M)` over `(A_⋆, R, S)` when `RS = SR`.
pub fn d_module_rbs(module: &RBSBimodule) -> Result<Option<RBSBimodule>> {
    module.ensure_valid()?;
    let Some(star_sys) = module.base.star_rbs_if_commuting()? else {
        return Ok(None);
    };
    let dm = d_module_unchecked(module);
    let out = RBSBimodule::new(
        star_sys,
        dm.actions,
        Matrix::direct_sum(&module.r_m, &module.r_m),
        Matrix::direct_sum(&module.s_m, &module.s_m),
    )?;
    out.verdict_unchecked().into_result(Error::ClaimFailed)?;
    Ok(Some(out))
}
