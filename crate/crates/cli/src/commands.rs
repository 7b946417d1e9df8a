use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rbsys::algebra::decode_tuple;
use rbsys::bimodule::{semidirect_product, RBSBimodule};
use rbsys::cohomology::rba_embedding_check;
use rbsys::cohomology::{ComplexTag, Complexes};
use rbsys::deformation::{
    infinitesimal, operator_infinitesimal, rigidify, verify_deformation, verify_operator_deformation,
    DeformationReport, GaugeSeries, OrderResidual, RigidifyOutcome,
};
use rbsys::extension::{
    any_section, build_extension, check_extension, check_iso, extract_cocycle, h2_extension_census, induced_bimodule,
    same_class_check, Cocycle2, ExtensionIso,
};
use rbsys::system::RotaBaxterSystem;
use rbsys::verdict::{Verdict, Violation};
use rbsys::Matrix;
use serde_json::{json, Value};

use crate::args::{Command, DeformCommand, DeformInput, ExtendCommand, ModuleInput, What};
use crate::doc::{
    module_hash, read_document, system_hash, write_document, BimoduleDoc, CocycleDoc, Document, Envelope, ExtensionDoc,
    GaugeDoc, SystemDoc,
};
use crate::error::{CliError, CliResult, InFile};
use crate::report::{scalars_json, scalars_text, usizes_text, violation_json, Report};

/// Settings shared by every command.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub max_degree: usize,
    pub cap: usize,
}

pub fn execute(command: &Command, settings: Settings) -> CliResult<Report> {
    match command {
        Command::Validate { paths } => validate(paths),
        Command::Star { system, out } => star(system, out.as_deref()),
        Command::Semidirect { input, out } => semidirect(input, out.as_deref()),
        Command::Cohomology { input, what } => cohomology(input, *what, settings),
        Command::Les { input } => les(input, settings),
        Command::RbaEmbed { system, weight } => rba_embed(system, weight, settings),
        Command::Deform(DeformCommand::Verify { input }) => deform_verify(input),
        Command::Deform(DeformCommand::Infinitesimal { input, out }) => {
            deform_infinitesimal(input, out.as_deref(), settings)
        }
        Command::Deform(DeformCommand::Rigidify { input, out }) => deform_rigidify(input, out.as_deref()),
        Command::Deform(DeformCommand::OpVerify { input }) => deform_op_verify(input),
        Command::Extend(ExtendCommand::Build { input, cocycle, out }) => extend_build(input, cocycle, out.as_deref()),
        Command::Extend(ExtendCommand::Extract { extension, out, module_out }) => {
            extend_extract(extension, out.as_deref(), module_out.as_deref())
        }
        Command::Extend(ExtendCommand::Census { input, out_dir }) => extend_census(input, out_dir.as_deref(), settings),
        Command::Extend(ExtendCommand::CheckIso { first, second, zeta }) => extend_check_iso(first, second, zeta),
    }
}

// ---- loading ----

struct Loaded {
    sys: RotaBaxterSystem,
    name: String,
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn wrong_kind(path: &Path, found: &Document, expected: &str) -> CliError {
    CliError::input(format!("{}: expected a {expected} document, found {}", path.display(), found.kind()))
}

fn load_system(path: &Path) -> CliResult<Loaded> {
    match read_document(path)? {
        Document::System(doc) => {
            let sys = doc.to_system().in_file(path)?;
            Ok(Loaded { sys, name: doc.name.clone().unwrap_or_else(|| stem(path)) })
        }
        other => Err(wrong_kind(path, &other, "system")),
    }
}

/// The system, the bimodule (regular when omitted) and a label for the bimodule.
fn load_module(input: &ModuleInput) -> CliResult<(Loaded, RBSBimodule, String)> {
    let loaded = load_system(&input.system)?;
    let (module, label) = match &input.module {
        Some(path) => match read_document(path)? {
            Document::Bimodule(doc) => {
                let label = doc.name.clone().unwrap_or_else(|| stem(path));
                (doc.to_module(&loaded.sys).in_file(path)?, label)
            }
            other => return Err(wrong_kind(path, &other, "bimodule")),
        },
        None => (RBSBimodule::regular(&loaded.sys)?, "regular bimodule".to_string()),
    };
    Ok((loaded, module, label))
}

fn describe(sys: &RotaBaxterSystem, name: &str) -> String {
    format!("{name} (dim {}, over {})", sys.dim(), sys.field())
}

/// Writes `doc` to `out`, or embeds it in the report when no path is given.
fn emit(report: &mut Report, out: Option<&Path>, doc: Document, key: &str) -> CliResult<()> {
    let kind = doc.kind();
    match out {
        Some(path) => {
            write_document(path, doc)?;
            report.line(format!("wrote {kind} document to {}", path.display()));
            report.set(&format!("{key}_path"), path.display().to_string());
        }
        None => {
            let env = Envelope::new(doc);
            report.line(env.to_pretty());
            report.set(key, serde_json::to_value(&env).expect("documents serialize"));
        }
    }
    Ok(())
}

fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|i| scalars_text(m.row(i))).collect();
    format!("[{}]", rows.join(", "))
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| scalars_json(m.row(i))).collect())
}

// ---- validate ----

/// A failed check: text for people and the JSON witness.
struct Failure {
    text: String,
    json: Value,
}

impl From<&Violation> for Failure {
    fn from(v: &Violation) -> Failure {
        Failure { text: v.to_string(), json: violation_json(v) }
    }
}

fn verdict_failure(v: &Verdict) -> Option<Failure> {
    v.violation().map(Failure::from)
}

/// Mathematical errors become failures; input errors propagate.
fn math_outcome(r: Result<Verdict, rbsys::Error>) -> CliResult<Option<Failure>> {
    match r {
        Ok(v) => Ok(verdict_failure(&v)),
        Err(e) => {
            let e = CliError::from(e);
            match e.violation() {
                Some(v) => Ok(Some(Failure { text: e.to_string(), json: violation_json(v) })),
                None => Err(e),
            }
        }
    }
}

fn residual_failure(res: &OrderResidual) -> Option<Failure> {
    let eq = res.failing_equation()?;
    let map = match eq {
        "μ" => &res.mu,
        "R" => &res.r,
        _ => &res.s,
    };
    let m = map.matrix();
    let col = (0..m.cols()).find(|&j| m.column(j).iter().any(|s| !s.is_zero()))?;
    let basis: Vec<usize> = decode_tuple(col, map.arity(), map.source_dim()).iter().map(|i| i + 1).collect();
    let residual = m.column(col);
    Some(Failure {
        text: format!(
            "order {}: {eq} equation fails at basis {}: residual {}",
            res.order,
            usizes_text(&basis),
            scalars_text(&residual)
        ),
        json: json!({
            "order": res.order,
            "equation": eq,
            "basis": basis,
            "residual": scalars_json(&residual),
        }),
    })
}

fn deformation_lines(report: &mut Report, dr: &DeformationReport) {
    let mut orders = Vec::new();
    for res in &dr.residuals {
        let status = match res.failing_equation() {
            None => "ok".to_string(),
            Some(eq) => format!("{eq} equation fails"),
        };
        report.line(format!("order {}: {status}", res.order));
        orders.push(json!({"order": res.order, "ok": res.is_zero(), "failing_equation": res.failing_equation()}));
    }
    report.set("orders", orders);
    if let Some(f) = dr.first_failure().and_then(residual_failure) {
        report.fail();
        report.line(format!("witness: {}", f.text));
        report.set("witness", f.json);
    }
}

fn validate(paths: &[PathBuf]) -> CliResult<Report> {
    let docs: Vec<(String, Document)> =
        paths.iter().map(|p| Ok((p.display().to_string(), read_document(p)?))).collect::<CliResult<_>>()?;

    let mut systems: HashMap<String, RotaBaxterSystem> = HashMap::new();
    let mut modules: HashMap<String, RBSBimodule> = HashMap::new();
    for (path, doc) in &docs {
        if let Document::System(sd) = doc {
            let sys = sd.to_system().in_file(Path::new(path))?;
            if let Ok(regular) = RBSBimodule::regular(&sys) {
                modules.insert(module_hash(&regular), regular);
            }
            systems.insert(system_hash(&sys), sys);
        }
    }
    let find_system = |hash: &str, path: &str| {
        systems
            .get(hash)
            .cloned()
            .ok_or_else(|| CliError::input(format!("{path}: no system among the inputs has sha256 {hash}")))
    };
    for (path, doc) in &docs {
        if let Document::Bimodule(bd) = doc {
            let module = bd.to_module(&find_system(&bd.system_sha256, path)?).in_file(Path::new(path))?;
            modules.insert(module_hash(&module), module);
        }
    }

    let mut report = Report::new("validate");
    let mut results = Vec::new();
    for (path, doc) in &docs {
        let checked = || -> CliResult<(Option<Failure>, Option<String>)> {
            let failure: Option<Failure> = match doc {
                Document::System(sd) => verdict_failure(&sd.to_system()?.validate()),
                Document::Bimodule(bd) => {
                    let module = bd.to_module(&find_system(&bd.system_sha256, path)?)?;
                    math_outcome(module.check_rbs_bimodule())?
                }
                Document::Cocycle(cd) => {
                    let module = modules.get(&cd.module_sha256).ok_or_else(|| {
                        CliError::input(format!("{path}: no bimodule among the inputs has sha256 {}", cd.module_sha256))
                    })?;
                    let c = cd.to_cocycle(module)?;
                    let cx = Complexes::new(module)?;
                    cx.cocycle_violation(&c.to_cochain(&cx)?)?.as_ref().map(Failure::from)
                }
                Document::Deformation(dd) => {
                    let sys = find_system(&dd.system_sha256, path)?;
                    let def = dd.to_deformation(&sys)?;
                    verify_deformation(&sys, &def)?.first_failure().and_then(residual_failure)
                }
                Document::OperatorDeformation(od) => {
                    let sys = find_system(&od.system_sha256, path)?;
                    let def = od.to_operator_deformation(&sys)?;
                    verify_operator_deformation(&sys, &def)?.first_failure().and_then(residual_failure)
                }
                Document::Extension(ed) => math_outcome(check_extension(&ed.to_extension()?))?,
                Document::Gauge(gd) => {
                    gd.to_gauge(&find_system(&gd.system_sha256, path)?)?;
                    None
                }
                Document::Map(md) => {
                    md.to_matrix()?;
                    None
                }
            };
            let hash = match doc {
                Document::System(sd) => Some(system_hash(&sd.to_system()?)),
                Document::Bimodule(bd) => Some(module_hash(&bd.to_module(&find_system(&bd.system_sha256, path)?)?)),
                _ => None,
            };
            Ok((failure, hash))
        };
        let (failure, hash) = checked().in_file(Path::new(path))?;
        let kind = doc.kind();
        let shown = hash.as_ref().map(|h| format!(" (sha256 {h})")).unwrap_or_default();
        match &failure {
            None => report.line(format!("{path}: {kind}{shown} PASS")),
            Some(f) => {
                report.line(format!("{path}: {kind}{shown} FAIL: {}", f.text));
                if report.passed {
                    report.set("witness", json!({"path": path, "detail": f.json.clone()}));
                }
                report.fail();
            }
        }
        results.push(json!({
            "path": path,
            "kind": kind,
            "pass": failure.is_none(),
            "sha256": hash,
            "witness": failure.map(|f| f.json),
        }));
    }
    report.set("documents", results);
    Ok(report)
}

// ---- structure ----

fn star(system: &Path, out: Option<&Path>) -> CliResult<Report> {
    let loaded = load_system(system)?;
    let mut report = Report::new("star");
    let star_alg = loaded.sys.star_algebra()?;
    let name = format!("star of {}", loaded.name);
    let (result, kept) = match loaded.sys.star_rbs_if_commuting()? {
        Some(s) => (s, true),
        None => (RotaBaxterSystem::trivial(star_alg), false),
    };
    report.line(format!(
        "{} of {}",
        if kept { "(A_⋆, R, S)" } else { "(A_⋆, 0, 0)" },
        describe(&loaded.sys, &loaded.name)
    ));
    if !kept {
        report.line("R and S do not commute, so the operators are not carried over");
    }
    report.set("operators_kept", kept);
    report.set("dim", result.dim());
    emit(&mut report, out, Document::System(SystemDoc::from_system(&result, Some(name))), "document")?;
    Ok(report)
}

fn semidirect(input: &ModuleInput, out: Option<&Path>) -> CliResult<Report> {
    let (loaded, module, label) = load_module(input)?;
    let sys = semidirect_product(&module)?;
    let mut report = Report::new("semidirect");
    report.line(format!("{} ⋉ {label}: dimension {}", describe(&loaded.sys, &loaded.name), sys.dim()));
    report.set("dim", sys.dim());
    let name = format!("{} ⋉ {label}", loaded.name);
    emit(&mut report, out, Document::System(SystemDoc::from_system(&sys, Some(name))), "document")?;
    Ok(report)
}

// ---- cohomology ----

fn complexes(module: &RBSBimodule, settings: Settings) -> CliResult<Complexes> {
    Ok(Complexes::new(module)?.with_cap(settings.cap))
}

fn cohomology(input: &ModuleInput, what: What, settings: Settings) -> CliResult<Report> {
    if settings.max_degree < 1 {
        return Err(CliError::input("--max-degree must be at least 1"));
    }
    let (loaded, module, label) = load_module(input)?;
    let tag: ComplexTag = what.into();
    let betti = complexes(&module, settings)?.betti(tag, settings.max_degree)?;
    let mut report = Report::new("cohomology");
    report.line(format!("complex {tag} of {} with coefficients in {label}", describe(&loaded.sys, &loaded.name)));
    report.line(format!(
        "{:>3} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "n", "dim C^n", "rank d^n", "dim Z^n", "dim B^n", "dim H^n"
    ));
    let mut rows = Vec::new();
    for s in &betti.degrees {
        report.line(format!(
            "{:>3} {:>10} {:>10} {:>10} {:>10} {:>10}",
            s.degree, s.cochains, s.rank, s.kernel, s.image, s.cohomology
        ));
        rows.push(json!({
            "degree": s.degree,
            "cochains": s.cochains,
            "rank": s.rank,
            "cocycles": s.kernel,
            "coboundaries": s.image,
            "cohomology": s.cohomology,
        }));
    }
    report.line(format!("H: {}", usizes_text(&betti.dims())));
    report.set("complex", tag.to_string());
    report.set("field", loaded.sys.field().to_string());
    report.set("max_degree", settings.max_degree);
    report.set("degrees", rows);
    report.set("cohomology", betti.dims());
    Ok(report)
}

fn les(input: &ModuleInput, settings: Settings) -> CliResult<Report> {
    let (loaded, module, label) = load_module(input)?;
    let les = complexes(&module, settings)?.les_check(settings.max_degree)?;
    let mut report = Report::new("les");
    report.line(format!("long exact sequence of {} with coefficients in {label}", describe(&loaded.sys, &loaded.name)));
    let mut slots = Vec::new();
    for s in &les.slots {
        report.line(s.to_string());
        slots.push(json!({
            "group": s.tag.to_string(),
            "degree": s.degree,
            "dim": s.dim,
            "rank_in": s.rank_in,
            "rank_out": s.rank_out,
            "composite_zero": s.composite_zero,
            "exact": s.exact,
        }));
    }
    report.line(format!("chain maps commute with differentials: {}", yes_no(les.chain_maps)));
    report.line(format!("alternating sum of dimensions matches: {}", yes_no(les.euler)));
    report.set("max_degree", les.max_degree);
    report.set("slots", slots);
    report.set("chain_maps", les.chain_maps);
    report.set("euler", les.euler);
    if let Some(bad) = les.first_failure() {
        report.line(format!("first inexact slot: {bad}"));
    }
    if !les.exact() {
        report.fail();
    }
    Ok(report)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn rba_embed(system: &Path, weight: &str, settings: Settings) -> CliResult<Report> {
    let loaded = load_system(system)?;
    let lambda = loaded.sys.field().parse(weight).map_err(|e| CliError::input(format!("--weight: {e}")))?;
    let rep = rba_embedding_check(loaded.sys.algebra(), loaded.sys.r(), &lambda, settings.max_degree)?;
    let mut report = Report::new("rba-embed");
    report.line(format!("weight {lambda} operator R of {}", describe(&loaded.sys, &loaded.name)));
    let mut degrees = Vec::new();
    for d in &rep.degrees {
        let formula = match d.cokernel_formula {
            Some(b) => yes_no(b),
            None => "n/a",
        };
        report.line(format!(
            "degree {}: injective {}, short exact {}, subcomplex {}, cokernel formula {}",
            d.degree,
            yes_no(d.injective),
            yes_no(d.short_exact),
            yes_no(d.subcomplex),
            formula
        ));
        degrees.push(json!({
            "degree": d.degree,
            "injective": d.injective,
            "short_exact": d.short_exact,
            "subcomplex": d.subcomplex,
            "cokernel_formula": d.cokernel_formula,
        }));
    }
    report.set("weight", crate::doc::scalar_to_value(&lambda));
    report.set("degrees", degrees);
    if !rep.ok() {
        report.fail();
    }
    Ok(report)
}

// ---- deformations ----

fn load_deformation_input(input: &DeformInput) -> CliResult<(Loaded, Document)> {
    let loaded = load_system(&input.system)?;
    let doc = read_document(&input.deformation)?;
    Ok((loaded, doc))
}

fn load_deformation(input: &DeformInput) -> CliResult<(Loaded, rbsys::deformation::DeformationData)> {
    let (loaded, doc) = load_deformation_input(input)?;
    match doc {
        Document::Deformation(dd) => {
            let def = dd.to_deformation(&loaded.sys).in_file(&input.deformation)?;
            Ok((loaded, def))
        }
        other => Err(wrong_kind(&input.deformation, &other, "deformation")),
    }
}

fn deform_verify(input: &DeformInput) -> CliResult<Report> {
    let (loaded, def) = load_deformation(input)?;
    let mut report = Report::new("deform verify");
    report.line(format!("order-{} deformation of {}", def.order(), describe(&loaded.sys, &loaded.name)));
    report.set("order", def.order());
    deformation_lines(&mut report, &verify_deformation(&loaded.sys, &def)?);
    Ok(report)
}

fn deform_infinitesimal(input: &DeformInput, out: Option<&Path>, settings: Settings) -> CliResult<Report> {
    let (loaded, def) = load_deformation(input)?;
    let sys = &loaded.sys;
    let (cochain, is_cocycle) = infinitesimal(sys, &def)?;
    let module = RBSBimodule::regular(sys)?;
    let cx = complexes(&module, settings)?;
    let c = Cocycle2::from_cochain(sys.dim(), sys.dim(), &cochain)?;
    let mut report = Report::new("deform infinitesimal");
    report.line(format!("infinitesimal of an order-{} deformation of {}", def.order(), describe(sys, &loaded.name)));
    report.line(format!("2-cocycle: {}", yes_no(is_cocycle)));
    report.set("cocycle", is_cocycle);
    if is_cocycle {
        let class = cx.cohomology_basis(ComplexTag::Rbs, 2)?.class_coordinates(&cochain)?;
        let trivial = class.iter().all(|s| s.is_zero());
        report.line(format!(
            "class in H^2_RBS: {}{}",
            scalars_text(&class),
            if trivial { " (coboundary)" } else { "" }
        ));
        report.set("class", scalars_json(&class));
        report.set("coboundary", trivial);
    } else if let Some(v) = cx.cocycle_violation(&cochain)? {
        report.witness(&v);
    }
    emit(&mut report, out, Document::Cocycle(CocycleDoc::from_cocycle(&c, &module)), "document")?;
    Ok(report)
}

fn gauge_lines(report: &mut Report, g: &GaugeSeries) {
    for (k, psi) in g.psis().iter().enumerate().skip(1) {
        report.line(format!("Psi_{k} = {}", matrix_text(psi)));
    }
    report.set("gauge", Value::Array(g.psis()[1..].iter().map(matrix_json).collect()));
}

fn deform_rigidify(input: &DeformInput, out: Option<&Path>) -> CliResult<Report> {
    let (loaded, def) = load_deformation(input)?;
    let sys = &loaded.sys;
    let mut report = Report::new("deform rigidify");
    report.line(format!("order-{} deformation of {}", def.order(), describe(sys, &loaded.name)));
    match rigidify(sys, &def)? {
        RigidifyOutcome::Success { gauge } => {
            report.line(format!("equivalent to the constant deformation through order {}", def.order()));
            report.set("outcome", "success");
            gauge_lines(&mut report, &gauge);
            emit(&mut report, out, Document::Gauge(GaugeDoc::from_gauge(&gauge, sys)), "gauge_document")?;
        }
        RigidifyOutcome::Stuck { order, gauge, cocycle, class } => {
            report.fail();
            report.line(format!("stuck at order {order}: the coefficient there is a non-trivial class"));
            report.line(format!("class coordinates in H^2_RBS: {}", scalars_text(&class)));
            report.line(format!("cocycle coordinates: {}", scalars_text(&cocycle.coords.column(0))));
            report.set("outcome", "stuck");
            report.set("stuck_order", order);
            report.set("class", scalars_json(&class));
            report.set("cocycle", scalars_json(&cocycle.coords.column(0)));
            if order > 1 {
                report.line(format!("gauge removing orders 1..{}:", order - 1));
                gauge_lines(&mut report, &GaugeSeries::new(gauge.psis()[..order].to_vec())?);
            }
        }
    }
    Ok(report)
}

fn deform_op_verify(input: &DeformInput) -> CliResult<Report> {
    let (loaded, doc) = load_deformation_input(input)?;
    let od = match doc {
        Document::OperatorDeformation(d) => d.to_operator_deformation(&loaded.sys).in_file(&input.deformation)?,
        other => return Err(wrong_kind(&input.deformation, &other, "operator-deformation")),
    };
    let sys = &loaded.sys;
    let mut report = Report::new("deform op-verify");
    report.line(format!("order-{} operator deformation of {}", od.order(), describe(sys, &loaded.name)));
    report.set("order", od.order());
    let dr = verify_operator_deformation(sys, &od)?;
    deformation_lines(&mut report, &dr);
    if report.passed && od.order() >= 1 {
        let (_, ok) = operator_infinitesimal(sys, &od)?;
        report.line(format!("(R_1, S_1) is a 1-cocycle of the operator complex: {}", yes_no(ok)));
        report.set("infinitesimal_cocycle", ok);
        if !ok {
            report.fail();
        }
    }
    Ok(report)
}

// ---- extensions ----

fn extend_build(input: &ModuleInput, cocycle: &Path, out: Option<&Path>) -> CliResult<Report> {
    let (loaded, module, label) = load_module(input)?;
    let c = match read_document(cocycle)? {
        Document::Cocycle(cd) => cd.to_cocycle(&module).in_file(cocycle)?,
        other => return Err(wrong_kind(cocycle, &other, "cocycle")),
    };
    let ext = build_extension(&module, &c)?;
    let mut report = Report::new("extend build");
    report.line(format!(
        "extension of {} by {label}: total dimension {}",
        describe(&loaded.sys, &loaded.name),
        ext.hat.dim()
    ));
    report.set("dim", ext.hat.dim());
    emit(&mut report, out, Document::Extension(ExtensionDoc::from_extension(&ext)), "document")?;
    Ok(report)
}

fn load_extension(path: &Path) -> CliResult<rbsys::extension::ExtensionData> {
    match read_document(path)? {
        Document::Extension(ed) => ed.to_extension().in_file(path),
        other => Err(wrong_kind(path, &other, "extension")),
    }
}

fn extend_extract(extension: &Path, out: Option<&Path>, module_out: Option<&Path>) -> CliResult<Report> {
    let ext = load_extension(extension)?;
    let mut report = Report::new("extend extract");
    if let Verdict::Fail(v) = check_extension(&ext)? {
        report.line("not an abelian extension");
        report.witness(&v);
        return Ok(report);
    }
    let stored = ext.section.is_some();
    let t = any_section(&ext)?;
    let module = induced_bimodule(&ext, &t)?;
    let c = extract_cocycle(&ext, &t)?;
    report.line(format!(
        "section: {}",
        if stored { "stored in the document" } else { "computed (echelon solution of p t = Id)" }
    ));
    report.line(format!("induced bimodule sha256 {}", module_hash(&module)));
    report.set("section_stored", stored);
    report.set("section", matrix_json(&t));
    report.set("module_sha256", module_hash(&module));
    if let Some(path) = module_out {
        write_document(path, Document::Bimodule(BimoduleDoc::from_module(&module, None)))?;
        report.line(format!("wrote bimodule document to {}", path.display()));
        report.set("module_path", path.display().to_string());
    }
    emit(&mut report, out, Document::Cocycle(CocycleDoc::from_cocycle(&c, &module)), "document")?;
    Ok(report)
}

fn extend_census(input: &ModuleInput, out_dir: Option<&Path>, settings: Settings) -> CliResult<Report> {
    let (loaded, module, label) = load_module(input)?;
    let census = h2_extension_census(&module, settings.cap)?;
    let h2 = census.len() - 1;
    let mut report = Report::new("extend census");
    report.line(format!(
        "H^2_RBS of {} with coefficients in {label} has dimension {h2}",
        describe(&loaded.sys, &loaded.name)
    ));
    report.line(format!("{} representatives: the zero class and {h2} basis classes", census.len()));
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    }
    let mut reps = Vec::new();
    for (k, (c, ext)) in census.iter().enumerate() {
        let coords = c.coordinates();
        report.line(format!("class {k}: cocycle {}", scalars_text(&coords)));
        let mut entry = json!({"index": k, "cocycle": scalars_json(&coords), "dim": ext.hat.dim()});
        if let Some(dir) = out_dir {
            let cpath = dir.join(format!("class-{k}.cocycle.json"));
            let epath = dir.join(format!("class-{k}.extension.json"));
            write_document(&cpath, Document::Cocycle(CocycleDoc::from_cocycle(c, &module)))?;
            write_document(&epath, Document::Extension(ExtensionDoc::from_extension(ext)))?;
            entry["cocycle_path"] = Value::from(cpath.display().to_string());
            entry["extension_path"] = Value::from(epath.display().to_string());
        }
        reps.push(entry);
    }
    if let Some(dir) = out_dir {
        report.line(format!("wrote {} cocycle and extension documents to {}", census.len(), dir.display()));
    }
    report.set("h2_dim", h2);
    report.set("representatives", reps);
    Ok(report)
}

fn extend_check_iso(first: &Path, second: &Path, zeta: &Path) -> CliResult<Report> {
    let e1 = load_extension(first)?;
    let e2 = load_extension(second)?;
    let z = match read_document(zeta)? {
        Document::Map(md) => md.to_matrix().in_file(zeta)?,
        other => return Err(wrong_kind(zeta, &other, "map")),
    };
    if e1.field() != e2.field() || z.field() != e1.field() {
        return Err(CliError::input("extensions and ζ must share a field"));
    }
    let iso = ExtensionIso { zeta: z };
    let mut report = Report::new("extend check-iso");
    match check_iso(&e1, &e2, &iso)? {
        Verdict::Fail(v) => {
            report.line("ζ is not an isomorphism of extensions");
            report.witness(&v);
        }
        Verdict::Pass => {
            report.line("ζ is an invertible morphism with p₂ζ = p₁ and ζi₁ = i₂");
            match same_class_check(&e1, &e2, &iso)? {
                Verdict::Pass => report.line("sections t and ζt give the same bimodule and the same cocycle"),
                Verdict::Fail(v) => report.witness(&v),
            }
        }
    }
    Ok(report)
}
