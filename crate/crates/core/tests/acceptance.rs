//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbsys::algebra::{Algebra, BimoduleActions};
use rbsys::bimodule::{d_module, semidirect_product, RBSBimodule};
use rbsys::cohomology::{cokernel_differential_formula, rba_embedding_check, ComplexTag, Complexes};
use rbsys::deformation::{
    apply_gauge, coefficient_cochain, infinitesimal, operator_infinitesimal, rigidify, verify_deformation,
    verify_operator_deformation, DeformationData, RigidifyOutcome,
};
use rbsys::extension::{
    build_extension, build_extension_unchecked, check_extension, extract_cocycle, gauge_coboundary,
    iso_from_cohomologous, same_class_check, Cocycle2,
};
use rbsys::samples::{
    self, enumerate_f2_weighted, random_cocycle, random_first_order, random_gauge, random_instance, random_matrix,
    random_non_cocycle, random_operator_first_order, random_system, random_weighted_operator,
};
use rbsys::system::{from_rb_operator, RotaBaxterSystem};
use rbsys::{Field, Matrix};

type Outcome = Result<String, String>;

const FIELDS: [Field; 3] = [Field::Rationals, Field::Prime(2), Field::Prime(5)];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Instances for criteria 1, 2 and 9: mostly `d, m ≤ 2`, every sixth up to 3.
fn instance_set() -> Vec<RBSBimodule> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    (0..60)
        .map(|k| {
            let field = FIELDS[k % 3];
            let max_dim = if k % 6 == 5 { 3 } else { 2 };
            random_instance(field, max_dim, &mut rng)
        })
        .collect()
}

fn criterion_1(instances: &[RBSBimodule]) -> Outcome {
    let start = Instant::now();
    let mut products = 0;
    for (k, module) in instances.iter().enumerate() {
        ensure(module.check_rbs_bimodule().map_err(err)?.is_pass(), || format!("instance {k} invalid"))?;
        let cx = Complexes::new(module).map_err(err)?;
        for tag in [ComplexTag::Alg, ComplexTag::Rbso, ComplexTag::Rbs] {
            let s = cx.slices(tag, 4).map_err(err)?;
            for n in 0..=3 {
                ensure(s[n + 1].mul(&s[n]).is_zero(), || format!("instance {k}: {tag} d{}·d{n} ≠ 0", n + 1))?;
                products += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{} instances, {products} products zero, {secs:.1}s", instances.len()))
}

fn criterion_2(instances: &[RBSBimodule]) -> Outcome {
    for (k, module) in instances.iter().enumerate() {
        let cx = Complexes::new(module).map_err(err)?;
        for n in 0..=3 {
            let lhs = cx.partial(n).map_err(err)?.matrix.mul(&cx.phi(n).map_err(err)?);
            let rhs = cx.phi(n + 1).map_err(err)?.mul(&cx.delta(n).map_err(err)?.matrix);
            ensure(lhs == rhs, || format!("instance {k}, degree {n}"))?;
        }
    }
    Ok(format!("{} instances, degrees 0..=3", instances.len()))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut stars, mut rb, mut valid, mut invalid, mut dmods) = (0, 0, 0, 0, 0);
    for k in 0..90 {
        let field = FIELDS[k % 3];
        let sys = random_system(field, 3, &mut rng);
        let star = sys.star_algebra().map_err(err)?;
        ensure(star.check_associative().is_pass(), || format!("A_⋆ not associative for system {k}"))?;
        stars += 1;

        let (alg, r, lambda) = random_weighted_operator(field, &mut rng);
        let (a, b) = from_rb_operator(&alg, &r, &lambda).map_err(err)?;
        ensure(a.check_rbs().map_err(err)?.is_pass() && b.check_rbs().map_err(err)?.is_pass(), || {
            format!("weight-{lambda} operator {k} gives no system")
        })?;
        rb += 1;

        let module = random_instance(field, 2, &mut rng);
        ensure(semidirect_product(&module).is_ok(), || format!("semidirect product {k} fails"))?;
        valid += 1;
        d_module(&module).map_err(err)?;
        dmods += 1;

        // Same actions with random operators: the module laws hold iff the
        // twisted sum with zero cocycle is a system.
        let m = module.dim();
        let perturbed = RBSBimodule::new(
            module.base().clone(),
            module.actions().clone(),
            random_matrix(field, m, m, &mut rng),
            random_matrix(field, m, m, &mut rng),
        )
        .map_err(err)?;
        let is_module = perturbed.check_rbs_bimodule().map_err(err)?.is_pass();
        let hat =
            build_extension_unchecked(&perturbed, &Cocycle2::zero(field, module.algebra_dim(), m)).map_err(err)?.hat;
        let is_system = hat.check_rbs().map(|v| v.is_pass()).unwrap_or(false);
        ensure(is_module == is_system, || format!("semidirect iff fails on perturbation {k}"))?;
        if !is_module {
            invalid += 1;
        }
    }
    for alg in [samples::dual_numbers(Field::Prime(2)), samples::product_line(Field::Prime(2))] {
        for lambda in [Field::Prime(2).zero(), Field::Prime(2).one()] {
            for r in enumerate_f2_weighted(&alg, &lambda) {
                let (a, b) = from_rb_operator(&alg, &r, &lambda).map_err(err)?;
                ensure(a.validate().is_pass() && b.validate().is_pass(), || "𝔽₂ operator".into())?;
                rb += 1;
            }
        }
    }
    ensure(invalid >= 10, || format!("only {invalid} invalid perturbations sampled"))?;
    Ok(format!(
        "{stars} ⋆-products associative, {rb} weighted operators give systems, semidirect iff on {valid} valid + {invalid} invalid, {dmods} D(M) bimodules"
    ))
}

/// Dense rank over 𝔽₂.
fn gf2_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] == 1) else { continue };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][c] == 1 {
                let pivot = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// One-dimensional algebra and module over 𝔽₂ given by seven bits:
/// product `c`, operators `r, s`, actions `l, rt`, module operators `rm, sm`.
#[derive(Clone, Copy, Debug)]
struct Tiny {
    c: u8,
    r: u8,
    s: u8,
    l: u8,
    rt: u8,
    rm: u8,
    sm: u8,
}

impl Tiny {
    fn delta(&self, n: usize) -> u8 {
        (self.l + (n as u8 % 2) * self.c + self.rt) % 2
    }

    fn phi(&self, n: usize) -> [u8; 2] {
        if n == 0 {
            return [1, 1];
        }
        let pow = |x: u8, k: usize| if k == 0 { 1 } else { x };
        let mixed: u8 = (1..=n).map(|i| pow(self.r, i - 1) * pow(self.s, n - i)).sum::<u8>() % 2;
        [(pow(self.r, n) + self.rm * mixed) % 2, (pow(self.s, n) + self.sm * mixed) % 2]
    }

    fn partial(&self, n: usize) -> [[u8; 2]; 2] {
        let star = (n as u8 % 2) * self.c * ((self.r + self.s) % 2);
        [
            [(self.l * self.r + star + self.rt * self.r + self.rm * self.rt) % 2, (self.rm * self.l) % 2],
            [(self.sm * self.rt) % 2, (self.l * self.s + self.sm * self.l + star + self.rt * self.s) % 2],
        ]
    }

    /// Signs vanish over 𝔽₂, so `d^n = [[δ, 0], [Φ, ∂]]`.
    fn rbs(&self, n: usize) -> Vec<Vec<u8>> {
        let p = self.phi(n);
        if n == 0 {
            return vec![vec![self.delta(0)], vec![p[0]], vec![p[1]]];
        }
        let q = self.partial(n - 1);
        vec![vec![self.delta(n), 0, 0], vec![p[0], q[0][0], q[0][1]], vec![p[1], q[1][0], q[1][1]]]
    }

    fn betti(&self, top: usize) -> (Vec<usize>, Vec<usize>) {
        let alg_rank: Vec<usize> = (0..=top).map(|n| gf2_rank(vec![vec![self.delta(n)]])).collect();
        let rbs_rank: Vec<usize> = (0..=top).map(|n| gf2_rank(self.rbs(n))).collect();
        let h = |dim: usize, ranks: &[usize], n: usize| dim - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] };
        (
            (0..=top).map(|n| h(1, &alg_rank, n)).collect(),
            (0..=top).map(|n| h(if n == 0 { 1 } else { 3 }, &rbs_rank, n)).collect(),
        )
    }

    fn module(&self) -> rbsys::Result<RBSBimodule> {
        let f = Field::Prime(2);
        let one = |x: u8| Matrix::from_i64(f, &[&[x as i64]]);
        let alg = Algebra::new(f, 1, one(self.c))?;
        let sys = RotaBaxterSystem::new(alg, one(self.r), one(self.s))?;
        let actions = BimoduleActions::new(1, 1, one(self.l), one(self.rt))?;
        RBSBimodule::new(sys, actions, one(self.rm), one(self.sm))
    }
}

fn criterion_4() -> Outcome {
    let zero = Tiny { c: 0, r: 0, s: 0, l: 0, rt: 0, rm: 0, sm: 0 };
    let (hh, rbs) = zero.betti(3);
    ensure(hh == [1, 1, 1, 1] && rbs == [0, 2, 3, 3], || format!("oracle gives {hh:?} {rbs:?}"))?;
    let cx = Complexes::new(&samples::zero_f2_module()).map_err(err)?;
    let lib_hh = cx.betti(ComplexTag::Alg, 3).map_err(err)?.dims();
    let lib_rbs = cx.betti(ComplexTag::Rbs, 3).map_err(err)?.dims();
    ensure(lib_hh == hh && lib_rbs == rbs, || format!("library gives {lib_hh:?} {lib_rbs:?}"))?;

    // Every valid one-dimensional 𝔽₂ instance against the same oracle.
    let mut checked = 0;
    for bits in 0u8..128 {
        let b = |k: u8| (bits >> k) & 1;
        let t = Tiny { c: b(0), r: b(1), s: b(2), l: b(3), rt: b(4), rm: b(5), sm: b(6) };
        let module = t.module().map_err(err)?;
        let valid = matches!(module.check_rbs_bimodule(), Ok(v) if v.is_pass());
        if !valid {
            continue;
        }
        let cx = Complexes::new(&module).map_err(err)?;
        let got =
            (cx.betti(ComplexTag::Alg, 3).map_err(err)?.dims(), cx.betti(ComplexTag::Rbs, 3).map_err(err)?.dims());
        ensure(got == t.betti(3), || format!("{t:?}: library {got:?}, oracle {:?}", t.betti(3)))?;
        checked += 1;
    }
    Ok(format!("HH = {hh:?}, H_RBS = {rbs:?}; {checked} one-dimensional 𝔽₂ instances agree with the oracle"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cocycles = 0;
    let mut gauges = 0;
    for k in 0..30 {
        let field = FIELDS[k % 3];
        let sys = random_system(field, 3, &mut rng);
        let def = random_first_order(&sys, &mut rng);
        ensure(verify_deformation(&sys, &def).map_err(err)?.passes(), || format!("generated deformation {k} invalid"))?;
        let (_, closed) = infinitesimal(&sys, &def).map_err(err)?;
        ensure(closed, || format!("infinitesimal {k} is not a cocycle"))?;
        cocycles += 1;

        let sys = random_system(field, 2, &mut rng);
        let def = random_first_order(&sys, &mut rng);
        let g = random_gauge(field, sys.dim(), 1, &mut rng);
        let moved = apply_gauge(&def, &g).map_err(err)?;
        let cx = Complexes::new(&RBSBimodule::regular(&sys).map_err(err)?).map_err(err)?;
        let a = coefficient_cochain(&cx, &def, 1).map_err(err)?;
        let b = coefficient_cochain(&cx, &moved, 1).map_err(err)?;
        let diff = cx.cochain(ComplexTag::Rbs, 2, a.coords.sub(&b.coords).column(0)).map_err(err)?;
        let pre = cx.coboundary_preimage(&diff).map_err(err)?.ok_or_else(|| format!("gauge {k}: no preimage"))?;
        ensure(cx.apply(&pre).map_err(err)? == diff, || format!("gauge {k}: preimage wrong"))?;
        gauges += 1;
    }
    Ok(format!("{cocycles} infinitesimals closed, {gauges} gauge differences with explicit preimages"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut done = 0;
    for k in 0..30 {
        let field = if k % 2 == 0 { Field::Rationals } else { Field::Prime(5) };
        let order = 1 + k % 3;
        let sys = random_system(field, 2, &mut rng);
        let g = random_gauge(field, sys.dim(), order, &mut rng);
        let def = apply_gauge(&DeformationData::constant(&sys, order), &g).map_err(err)?;
        match rigidify(&sys, &def).map_err(err)? {
            RigidifyOutcome::Success { gauge } => {
                let back = apply_gauge(&def, &gauge).map_err(err)?;
                ensure(back.is_constant_through(order), || format!("instance {k}: residue after rigidify"))?;
            }
            RigidifyOutcome::Stuck { order: o, .. } => return Err(format!("instance {k} stuck at order {o}")),
        }
        done += 1;
    }
    Ok(format!("{done} gauged constant deformations (ℚ, 𝔽₅; N ≤ 3) trivialized"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..30 {
        let sys = random_system(FIELDS[k % 3], 3, &mut rng);
        let od = random_operator_first_order(&sys, &mut rng);
        ensure(verify_operator_deformation(&sys, &od).map_err(err)?.passes(), || format!("generated {k} invalid"))?;
        let (_, closed) = operator_infinitesimal(&sys, &od).map_err(err)?;
        ensure(closed, || format!("operator infinitesimal {k} not closed"))?;
    }
    Ok("30 operator infinitesimals are ∂¹-cocycles".into())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut trips, mut rejected, mut sections, mut isos) = (0, 0, 0, 0);
    for k in 0..60 {
        let field = FIELDS[k % 3];
        let module = random_instance(field, 2, &mut rng);
        let cx = Complexes::new(&module).map_err(err)?;
        let (d, m) = (module.algebra_dim(), module.dim());
        let c = random_cocycle(&cx, &mut rng);
        let ext = build_extension(&module, &c).map_err(err)?;
        ensure(check_extension(&ext).map_err(err)?.is_pass(), || format!("extension {k} invalid"))?;
        let t = ext.section.clone().expect("canonical section");
        ensure(extract_cocycle(&ext, &t).map_err(err)? == c, || format!("round trip {k}"))?;
        trips += 1;

        if let Some(bad) = random_non_cocycle(&cx, &mut rng) {
            let hat = build_extension_unchecked(&module, &bad).map_err(err)?.hat;
            ensure(!hat.check_rbs().map(|v| v.is_pass()).unwrap_or(false), || {
                format!("non-cocycle {k} built a system")
            })?;
            rejected += 1;
        }

        let gamma = random_matrix(field, m, d, &mut rng);
        let t2 = t.add(&ext.incl.mul(&gamma));
        let diff = extract_cocycle(&ext, &t2).map_err(err)?.sub(&c);
        ensure(diff == gauge_coboundary(&cx, &gamma).map_err(err)?, || format!("sections {k}"))?;
        sections += 1;

        let c2 = c.add(&gauge_coboundary(&cx, &gamma).map_err(err)?);
        let iso = iso_from_cohomologous(&module, &c, &c2, &gamma).map_err(err)?;
        let e2 = build_extension(&module, &c2).map_err(err)?;
        ensure(e2.proj.mul(&iso.zeta) == ext.proj && iso.zeta.mul(&ext.incl) == e2.incl, || format!("diagram {k}"))?;
        ensure(same_class_check(&ext, &e2, &iso).map_err(err)?.is_pass(), || format!("same class {k}"))?;
        isos += 1;
    }
    ensure(rejected >= 25, || format!("only {rejected} non-cocycles sampled"))?;
    Ok(format!(
        "{trips} round trips, {rejected} non-cocycles rejected, {sections} section changes, {isos} isomorphisms"
    ))
}

fn criterion_9(instances: &[RBSBimodule]) -> Outcome {
    let mut slots = 0;
    for (k, module) in instances.iter().enumerate() {
        let report = Complexes::new(module).map_err(err)?.les_check(3).map_err(err)?;
        ensure(report.exact(), || match report.first_failure() {
            Some(s) => format!("instance {k}: {s}"),
            None => format!("instance {k}: chain maps {} euler {}", report.chain_maps, report.euler),
        })?;
        slots += report.slots.len();
    }
    Ok(format!("{} instances, {slots} slots exact", instances.len()))
}

fn criterion_10() -> Outcome {
    let mut cases = 0;
    for field in FIELDS {
        let line = samples::line(field);
        let zero = Matrix::zeros(field, 1, 1);
        let neg = Matrix::from_i64(field, &[&[-1]]);
        let mut instances = vec![
            (line.clone(), zero.clone(), field.zero()),
            (line.clone(), zero.clone(), field.one()),
            (line.clone(), neg, field.one()),
        ];
        for (_, alg) in samples::catalog(field) {
            let d = alg.dim();
            instances.push((alg.clone(), Matrix::zeros(field, d, d), field.zero()));
            instances.push((alg, Matrix::zeros(field, d, d), field.one()));
        }
        for (alg, r, lambda) in instances {
            let report = rba_embedding_check(&alg, &r, &lambda, 3).map_err(err)?;
            ensure(report.ok(), || format!("{report:?}"))?;
            cases += 1;
        }
        // d̄¹(h)(a) = -h a for R = 0, λ = 1 on the line.
        let formula = cokernel_differential_formula(1, &line, &zero, &field.one());
        ensure(formula == Matrix::from_i64(field, &[&[-1]]), || "d̄¹ on the line".into())?;
    }
    Ok(format!("{cases} weighted operators, degrees 0..=3: ψ injective chain map, d̄ matches"))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let instances = instance_set();
    let criteria: Vec<Criterion<'_>> = vec![
        ("d∘d = 0", Box::new(|| criterion_1(&instances))),
        ("Φ chain map", Box::new(|| criterion_2(&instances))),
        ("executable theorems", Box::new(criterion_3)),
        ("Betti oracle", Box::new(criterion_4)),
        ("deformation cocycles", Box::new(criterion_5)),
        ("rigidity round trip", Box::new(criterion_6)),
        ("operator deformations", Box::new(criterion_7)),
        ("extension dictionary", Box::new(criterion_8)),
        ("long exact sequence", Box::new(|| criterion_9(&instances))),
        ("weighted embedding", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", k + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {reason} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
