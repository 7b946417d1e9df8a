use std::path::{Path, PathBuf};
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbsys::bimodule::RBSBimodule;
use rbsys::cohomology::Complexes;
use rbsys::deformation::{apply_gauge, DeformationData, OperatorDeformation};
use rbsys::extension::{build_extension, iso_from_cohomologous, Cocycle2};
use rbsys::samples::{line, random_cocycle, random_gauge, random_matrix, random_non_cocycle, zero_f2_module};
use rbsys::system::RotaBaxterSystem;
use rbsys::{Field, Matrix};
use rbsys_cli::doc::{
    read_document, write_document, BimoduleDoc, CocycleDoc, DeformationDoc, Document, MapDoc, OperatorDeformationDoc,
};
use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn rbsys_with_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rbsys"));
    cmd.args(args).env_remove("RBS_DIM_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn rbsys(args: &[&str]) -> Run {
    rbsys_with_env(args, &[])
}

fn write(dir: &TempDir, name: &str, doc: Document) -> String {
    let path = dir.path().join(name);
    write_document(&path, doc).unwrap();
    path.display().to_string()
}

fn path_in(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

// ---- validate ----

#[test]
fn validate_exit_codes() {
    let ok = rbsys(&["validate", &data("f2-zero.json"), &data("line-weight-one.json")]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);

    let bad = rbsys(&["validate", &data("line-identity.json")]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("R(a)R(b) = R(R(a)b + aS(b)) fails at basis (1,1)"), "{}", bad.stdout);

    let malformed = rbsys(&["validate", &data("malformed.json")]);
    assert_eq!(malformed.code, 2);
    assert!(malformed.stderr.contains("malformed.json"), "{}", malformed.stderr);

    let missing = rbsys(&["validate", "/nonexistent/file.json"]);
    assert_eq!(missing.code, 2);
}

#[test]
fn validate_reports_witness_in_json() {
    let run = rbsys(&["--json", "validate", &data("line-identity.json")]);
    assert_eq!(run.code, 1);
    let v = run.json();
    assert_eq!(v["status"], "fail");
    assert_eq!(v["witness"]["detail"]["basis"], serde_json::json!([1, 1]));
    assert_eq!(v["witness"]["detail"]["lhs"], serde_json::json!(["1"]));
    assert_eq!(v["witness"]["detail"]["rhs"], serde_json::json!(["2"]));
}

#[test]
fn validate_resolves_dependent_documents_by_hash() {
    let dir = TempDir::new().unwrap();
    let module = zero_f2_module();
    let sys = module.base().clone();
    let cx = Complexes::new(&module).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let c = random_cocycle(&cx, &mut rng);
    let cpath = write(&dir, "c.json", Document::Cocycle(CocycleDoc::from_cocycle(&c, &module)));
    let ok = rbsys(&["validate", &data("f2-zero.json"), &cpath]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);

    let orphan = rbsys(&["validate", &cpath]);
    assert_eq!(orphan.code, 2);
    assert!(orphan.stderr.contains("no bimodule"), "{}", orphan.stderr);

    let mdoc = write(&dir, "m.json", Document::Bimodule(BimoduleDoc::from_module(&module, None)));
    let ddoc = write(
        &dir,
        "d.json",
        Document::Deformation(DeformationDoc::from_deformation(&DeformationData::constant(&sys, 2), &sys)),
    );
    let ok = rbsys(&["validate", &data("f2-zero.json"), &mdoc, &ddoc, &cpath]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
}

// ---- cohomology ----

#[test]
fn f2_zero_structure_cohomology() {
    let rbs = rbsys(&["--json", "cohomology", "--system", &data("f2-zero.json")]);
    assert_eq!(rbs.code, 0);
    assert_eq!(rbs.json()["cohomology"], serde_json::json!([0, 2, 3, 3]));

    let alg = rbsys(&["--json", "cohomology", "--what", "alg", "--system", &data("f2-zero.json")]);
    assert_eq!(alg.json()["cohomology"], serde_json::json!([1, 1, 1, 1]));

    let text = rbsys(&["cohomology", "--system", &data("f2-zero.json")]);
    assert!(text.stdout.contains("H: [0, 2, 3, 3]"), "{}", text.stdout);
}

#[test]
fn omitted_module_means_regular() {
    let dir = TempDir::new().unwrap();
    let module = RBSBimodule::regular(zero_f2_module().base()).unwrap();
    let mpath = write(&dir, "regular.json", Document::Bimodule(BimoduleDoc::from_module(&module, None)));
    for what in ["alg", "rbso", "rbs"] {
        let a = rbsys(&["--json", "cohomology", "--what", what, "--system", &data("f2-zero.json")]);
        let b = rbsys(&["--json", "cohomology", "--what", what, "--system", &data("f2-zero.json"), "--module", &mpath]);
        assert_eq!(a.json()["degrees"], b.json()["degrees"]);
    }
}

#[test]
fn json_report_carries_every_table_number() {
    let run = rbsys(&["--json", "--max-degree", "2", "cohomology", "--system", &data("line-weight-one.json")]);
    let v = run.json();
    let degrees = v["degrees"].as_array().unwrap();
    assert_eq!(degrees.len(), 3);
    for d in degrees {
        let n = |k: &str| d[k].as_u64().unwrap();
        assert_eq!(n("cochains"), n("rank") + n("cocycles"));
        assert_eq!(n("cocycles"), n("coboundaries") + n("cohomology"));
    }
}

#[test]
fn cap_is_enforced_from_flag_and_environment() {
    let flag = rbsys(&["--cap", "2", "cohomology", "--system", &data("f2-zero.json")]);
    assert_eq!(flag.code, 2);
    assert!(flag.stderr.contains("cap"), "{}", flag.stderr);
    let env = rbsys_with_env(&["cohomology", "--system", &data("f2-zero.json")], &[("RBS_DIM_CAP", "2")]);
    assert_eq!(env.code, 2);
    let zero_degree = rbsys(&["--max-degree", "0", "cohomology", "--system", &data("f2-zero.json")]);
    assert_eq!(zero_degree.code, 2);
}

#[test]
fn les_and_rba_embedding() {
    let les = rbsys(&["--json", "les", "--system", &data("line-weight-one.json")]);
    assert_eq!(les.code, 0, "{}", les.stdout);
    assert_eq!(les.json()["slots"].as_array().unwrap().len(), 12);

    let rba = rbsys(&["rba-embed", "--system", &data("line-weight-one.json"), "--weight", "1"]);
    assert_eq!(rba.code, 0, "{}", rba.stdout);
    let wrong = rbsys(&["rba-embed", "--system", &data("line-weight-one.json"), "--weight", "0"]);
    assert_eq!(wrong.code, 1, "{}", wrong.stdout);
    let garbage = rbsys(&["rba-embed", "--system", &data("line-weight-one.json"), "--weight", "x"]);
    assert_eq!(garbage.code, 2);
}

// ---- structure ----

#[test]
fn star_and_semidirect_produce_valid_systems() {
    let dir = TempDir::new().unwrap();
    let star = path_in(&dir, "star.json");
    assert_eq!(rbsys(&["star", "--system", &data("line-weight-one.json"), "--out", &star]).code, 0);
    let semi = path_in(&dir, "semi.json");
    assert_eq!(rbsys(&["semidirect", "--system", &data("line-weight-one.json"), "--out", &semi]).code, 0);
    let check = rbsys(&["validate", &star, &semi]);
    assert_eq!(check.code, 0, "{}", check.stdout);
    let Document::System(sd) = read_document(Path::new(&semi)).unwrap() else { panic!() };
    assert_eq!(sd.dim, 2);
    assert_eq!(rbsys(&["star", "--system", &data("line-identity.json")]).code, 1);
}

// ---- deformations ----

fn line_system() -> RotaBaxterSystem {
    RotaBaxterSystem::new(
        line(Field::Rationals),
        Matrix::from_i64(Field::Rationals, &[&[-1]]),
        Matrix::from_i64(Field::Rationals, &[&[0]]),
    )
    .unwrap()
}

#[test]
fn constant_deformation_verifies() {
    let dir = TempDir::new().unwrap();
    let sys = line_system();
    let d = write(
        &dir,
        "d.json",
        Document::Deformation(DeformationDoc::from_deformation(&DeformationData::constant(&sys, 3), &sys)),
    );
    let run = rbsys(&["deform", "verify", "--system", &data("line-weight-one.json"), "--deformation", &d]);
    assert_eq!(run.code, 0, "{}", run.stdout);
}

#[test]
fn gauged_constant_rigidifies_and_echoes_the_gauge() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (k, (sys, file)) in [(line_system(), "line-weight-one.json"), (zero_f2_module().base().clone(), "f2-zero.json")]
        .into_iter()
        .enumerate()
    {
        let g = random_gauge(sys.field(), sys.dim(), 3, &mut rng);
        let def = apply_gauge(&DeformationData::constant(&sys, 3), &g).unwrap();
        let d = write(&dir, &format!("d{k}.json"), Document::Deformation(DeformationDoc::from_deformation(&def, &sys)));
        let gout = path_in(&dir, &format!("g{k}.json"));
        let run =
            rbsys(&["--json", "deform", "rigidify", "--system", &data(file), "--deformation", &d, "--out", &gout]);
        if run.code == 1 {
            // Over F_2 the greedy order-by-order step can stop at a non-trivial class.
            assert_eq!(sys.field(), Field::Prime(2));
            continue;
        }
        assert_eq!(run.code, 0, "{}", run.stdout);
        assert_eq!(run.json()["outcome"], "success");
        assert_eq!(run.json()["gauge"].as_array().unwrap().len(), 3);
        let Document::Gauge(gd) = read_document(Path::new(&gout)).unwrap() else { panic!() };
        let found = gd.to_gauge(&sys).unwrap();
        assert!(apply_gauge(&def, &found).unwrap().is_constant_through(3));
    }
}

#[test]
fn zero_structure_with_product_is_stuck_at_order_one() {
    let run = rbsys(&[
        "--json",
        "deform",
        "rigidify",
        "--system",
        &data("f2-zero.json"),
        "--deformation",
        &data("f2-zero-mu1.json"),
    ]);
    assert_eq!(run.code, 1);
    let v = run.json();
    assert_eq!(v["stuck_order"], 1);
    assert_eq!(v["class"], serde_json::json!([1, 0, 0]));

    let inf = rbsys(&[
        "--json",
        "deform",
        "infinitesimal",
        "--system",
        &data("f2-zero.json"),
        "--deformation",
        &data("f2-zero-mu1.json"),
    ]);
    assert_eq!(inf.code, 0);
    assert_eq!(inf.json()["coboundary"], false);
}

#[test]
fn broken_deformation_reports_order_and_equation() {
    let dir = TempDir::new().unwrap();
    let sys = line_system();
    let one = Matrix::from_i64(Field::Rationals, &[&[1]]);
    let zero = Matrix::from_i64(Field::Rationals, &[&[0]]);
    let def = DeformationData::first_order(&sys, zero, one.clone(), one).unwrap();
    let d = write(&dir, "d.json", Document::Deformation(DeformationDoc::from_deformation(&def, &sys)));
    let run = rbsys(&["--json", "deform", "verify", "--system", &data("line-weight-one.json"), "--deformation", &d]);
    assert_eq!(run.code, 1, "{}", run.stdout);
    assert_eq!(run.json()["witness"]["order"], 1);
    let wrong_system = rbsys(&["deform", "verify", "--system", &data("f2-zero.json"), "--deformation", &d]);
    assert_eq!(wrong_system.code, 2);
}

#[test]
fn operator_deformations() {
    let dir = TempDir::new().unwrap();
    let sys = line_system();
    let good = write(
        &dir,
        "good.json",
        Document::OperatorDeformation(OperatorDeformationDoc::from_operator_deformation(
            &OperatorDeformation::constant(&sys, 2),
            &sys,
        )),
    );
    let run =
        rbsys(&["--json", "deform", "op-verify", "--system", &data("line-weight-one.json"), "--deformation", &good]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.json()["infinitesimal_cocycle"], true);

    let q = Field::Rationals;
    let od = OperatorDeformation::new(
        vec![sys.r().clone(), Matrix::from_i64(q, &[&[0]])],
        vec![sys.s().clone(), Matrix::from_i64(q, &[&[1]])],
    )
    .unwrap();
    let bad = write(
        &dir,
        "bad.json",
        Document::OperatorDeformation(OperatorDeformationDoc::from_operator_deformation(&od, &sys)),
    );
    let run = rbsys(&["deform", "op-verify", "--system", &data("line-weight-one.json"), "--deformation", &bad]);
    assert_eq!(run.code, 1, "{}", run.stdout);
}

// ---- extensions ----

#[test]
fn zero_cocycle_builds_the_semidirect_product() {
    let dir = TempDir::new().unwrap();
    let module = RBSBimodule::regular(&line_system()).unwrap();
    let c = write(
        &dir,
        "c.json",
        Document::Cocycle(CocycleDoc::from_cocycle(&Cocycle2::zero(Field::Rationals, 1, 1), &module)),
    );
    let ext = path_in(&dir, "ext.json");
    assert_eq!(
        rbsys(&["extend", "build", "--system", &data("line-weight-one.json"), "--cocycle", &c, "--out", &ext]).code,
        0
    );
    let semi = path_in(&dir, "semi.json");
    assert_eq!(rbsys(&["semidirect", "--system", &data("line-weight-one.json"), "--out", &semi]).code, 0);
    let Document::Extension(ed) = read_document(Path::new(&ext)).unwrap() else { panic!() };
    let Document::System(sd) = read_document(Path::new(&semi)).unwrap() else { panic!() };
    assert_eq!(ed.hat.to_system().unwrap(), sd.to_system().unwrap());
    assert_eq!(rbsys(&["validate", &ext]).code, 0);
}

#[test]
fn extract_after_build_reproduces_the_cocycle_file() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (k, (module, file)) in
        [(zero_f2_module(), "f2-zero.json"), (RBSBimodule::regular(&line_system()).unwrap(), "line-weight-one.json")]
            .into_iter()
            .enumerate()
    {
        let cx = Complexes::new(&module).unwrap();
        for j in 0..4 {
            let c = random_cocycle(&cx, &mut rng);
            let cpath = write(&dir, &format!("c{k}{j}.json"), Document::Cocycle(CocycleDoc::from_cocycle(&c, &module)));
            let ext = path_in(&dir, &format!("e{k}{j}.json"));
            let back = path_in(&dir, &format!("b{k}{j}.json"));
            assert_eq!(
                rbsys(&["extend", "build", "--system", &data(file), "--cocycle", &cpath, "--out", &ext]).code,
                0
            );
            let run = rbsys(&["extend", "extract", "--extension", &ext, "--out", &back]);
            assert_eq!(run.code, 0, "{}", run.stdout);
            assert_eq!(std::fs::read_to_string(&cpath).unwrap(), std::fs::read_to_string(&back).unwrap());
        }
    }
}

#[test]
fn building_from_a_non_cocycle_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let module = RBSBimodule::regular(&line_system()).unwrap();
    let cx = Complexes::new(&module).unwrap();
    let c = random_non_cocycle(&cx, &mut rng).expect("the line has non-cocycles");
    let cpath = write(&dir, "c.json", Document::Cocycle(CocycleDoc::from_cocycle(&c, &module)));
    let run = rbsys(&["--json", "extend", "build", "--system", &data("line-weight-one.json"), "--cocycle", &cpath]);
    assert_eq!(run.code, 1, "{}", run.stdout);
    assert!(run.json()["witness"]["law"].as_str().unwrap().contains("cocycle"));
}

#[test]
fn census_of_the_f2_zero_structure() {
    let dir = TempDir::new().unwrap();
    let out = path_in(&dir, "census");
    let run = rbsys(&["--json", "extend", "census", "--system", &data("f2-zero.json"), "--out-dir", &out]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.json()["h2_dim"], 3);
    assert_eq!(run.json()["representatives"].as_array().unwrap().len(), 4);
    let files: Vec<PathBuf> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 8);
    let mut args = vec!["validate".to_string(), data("f2-zero.json")];
    args.extend(files.iter().map(|p| p.display().to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(rbsys(&refs).code, 0);

    let over_q = rbsys(&["extend", "census", "--system", &data("line-weight-one.json")]);
    assert_eq!(over_q.code, 2);
}

#[test]
fn check_iso_accepts_the_constructed_map_and_rejects_others() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let sys = line_system();
    let module = RBSBimodule::regular(&sys).unwrap();
    let cx = Complexes::new(&module).unwrap();
    let q = Field::Rationals;
    let c1 = random_cocycle(&cx, &mut rng);
    let gamma = random_matrix(q, 1, 1, &mut rng);
    let c2 = c1.add(&rbsys::extension::gauge_coboundary(&cx, &gamma).unwrap());
    let iso = iso_from_cohomologous(&module, &c1, &c2, &gamma).unwrap();
    let e1 = build_extension(&module, &c1).unwrap();
    let e2 = build_extension(&module, &c2).unwrap();
    let p1 = write(&dir, "e1.json", Document::Extension(rbsys_cli::doc::ExtensionDoc::from_extension(&e1)));
    let p2 = write(&dir, "e2.json", Document::Extension(rbsys_cli::doc::ExtensionDoc::from_extension(&e2)));
    let z = write(&dir, "z.json", Document::Map(MapDoc::from_matrix(&iso.zeta)));
    let run = rbsys(&["extend", "check-iso", "--first", &p1, "--second", &p2, "--zeta", &z]);
    assert_eq!(run.code, 0, "{}", run.stdout);

    let bogus =
        write(&dir, "bogus.json", Document::Map(MapDoc::from_matrix(&Matrix::from_i64(q, &[&[1, 0], &[0, 2]]))));
    let run = rbsys(&["extend", "check-iso", "--first", &p1, "--second", &p2, "--zeta", &bogus]);
    assert_eq!(run.code, 1, "{}", run.stdout);
    let shape = write(&dir, "shape.json", Document::Map(MapDoc::from_matrix(&Matrix::from_i64(q, &[&[1]]))));
    assert_eq!(rbsys(&["extend", "check-iso", "--first", &p1, "--second", &p2, "--zeta", &shape]).code, 2);
}

#[test]
fn wrong_document_kind_is_an_input_error() {
    let run = rbsys(&["cohomology", "--system", &data("f2-zero-mu1.json")]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("expected a system document"), "{}", run.stderr);
}
