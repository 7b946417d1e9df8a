//! The `rbs/v1` document format.
//!
//! Every file is one JSON object with `"schema": "rbs/v1"` and a `"kind"`.
//! Rational entries are written as strings (`"3"`, `"-1/2"`); residues mod `p`
//! as integers in `[0, p)`. On input, integers are accepted for either field
//! and strings for either field.
//!
//! Matrices are arrays of rows. A structure tensor `c[i][j][k]` means
//! `e_i e_j = Σ_k c[i][j][k] e_k`; action tensors follow the same pattern
//! (`left[i][u][v]`: `e_i f_u`, `right[u][i][v]`: `f_u e_i`). A multilinear
//! map `A^{⊗n} -> M` is an `m × d^n` matrix whose columns follow big-endian
//! basis tuples.
//!
//! Documents that depend on a system or bimodule carry the SHA-256 of that
//! object's canonical document, so mismatched inputs are rejected.

use std::path::Path;

use rbsys::algebra::{Algebra, BimoduleActions};
use rbsys::bimodule::RBSBimodule;
use rbsys::deformation::{DeformationData, GaugeSeries, OperatorDeformation};
use rbsys::extension::{Cocycle2, ExtensionData};
use rbsys::system::RotaBaxterSystem;
use rbsys::{Field, Matrix, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "rbs/v1";

pub type Rows = Vec<Vec<Value>>;
pub type Tensor = Vec<Vec<Vec<Value>>>;

/// `"Q"` or `{"Fp": p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

impl FieldSpec {
    pub fn to_field(&self) -> CliResult<Field> {
        match self {
            FieldSpec::Named(s) if s == "Q" => Ok(Field::Rationals),
            FieldSpec::Named(s) => Err(CliError::input(format!("unknown field {s:?}; use \"Q\" or {{\"Fp\": p}}"))),
            FieldSpec::Prime { p } => Ok(Field::prime(*p)?),
        }
    }
}

impl From<Field> for FieldSpec {
    fn from(f: Field) -> FieldSpec {
        match f {
            Field::Rationals => FieldSpec::Named("Q".into()),
            Field::Prime(p) => FieldSpec::Prime { p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemDoc {
    pub field: FieldSpec,
    pub dim: usize,
    pub mult: Tensor,
    #[serde(rename = "R")]
    pub r: Rows,
    #[serde(rename = "S")]
    pub s: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BimoduleDoc {
    pub field: FieldSpec,
    pub system_sha256: String,
    pub m: usize,
    pub left: Tensor,
    pub right: Tensor,
    #[serde(rename = "R_M")]
    pub r_m: Rows,
    #[serde(rename = "S_M")]
    pub s_m: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// `Ψ: A⊗A -> M` as `m × d²`, `χ_R`, `χ_S: A -> M` as `m × d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleDoc {
    pub field: FieldSpec,
    pub module_sha256: String,
    pub d: usize,
    pub m: usize,
    #[serde(rename = "Psi")]
    pub psi: Rows,
    #[serde(rename = "chiR")]
    pub chi_r: Rows,
    #[serde(rename = "chiS")]
    pub chi_s: Rows,
}

/// Coefficients of orders `1..=order`; order 0 is the referenced system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationDoc {
    pub field: FieldSpec,
    pub system_sha256: String,
    pub order: usize,
    pub mu: Vec<Tensor>,
    #[serde(rename = "R")]
    pub r: Vec<Rows>,
    #[serde(rename = "S")]
    pub s: Vec<Rows>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorDeformationDoc {
    pub field: FieldSpec,
    pub system_sha256: String,
    pub order: usize,
    #[serde(rename = "R")]
    pub r: Vec<Rows>,
    #[serde(rename = "S")]
    pub s: Vec<Rows>,
}

/// `0 -> M -i-> Â -p-> A -> 0` with an optional section `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionDoc {
    pub field: FieldSpec,
    pub d: usize,
    pub m: usize,
    pub base_sha256: String,
    pub base: SystemDoc,
    pub hat: SystemDoc,
    pub i: Rows,
    pub p: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Rows>,
}

/// `Ψ_t = Id + Σ_{k ≥ 1} Ψ_k t^k`; `Psi` lists orders `1..=order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeDoc {
    pub field: FieldSpec,
    pub system_sha256: String,
    pub order: usize,
    #[serde(rename = "Psi")]
    pub psi: Vec<Rows>,
}

/// A bare linear map, e.g. `ζ` between extensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    pub entries: Rows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum Document {
    System(SystemDoc),
    Bimodule(BimoduleDoc),
    Cocycle(CocycleDoc),
    Deformation(DeformationDoc),
    OperatorDeformation(OperatorDeformationDoc),
    Extension(ExtensionDoc),
    Gauge(GaugeDoc),
    Map(MapDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::System(_) => "system",
            Document::Bimodule(_) => "bimodule",
            Document::Cocycle(_) => "cocycle",
            Document::Deformation(_) => "deformation",
            Document::OperatorDeformation(_) => "operator-deformation",
            Document::Extension(_) => "extension",
            Document::Gauge(_) => "gauge",
            Document::Map(_) => "map",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: String,
    #[serde(flatten)]
    pub document: Document,
}

impl Envelope {
    pub fn new(document: Document) -> Envelope {
        Envelope { schema: SCHEMA.into(), document }
    }

    pub fn parse(text: &str, origin: &str) -> CliResult<Envelope> {
        let raw: Value = serde_json::from_str(text).map_err(|source| CliError::Json { path: origin.into(), source })?;
        match raw.get("schema") {
            Some(Value::String(s)) if s == SCHEMA => {}
            Some(other) => {
                return Err(CliError::input(format!("{origin}: unsupported schema {other}, expected {SCHEMA:?}")))
            }
            None => return Err(CliError::input(format!("{origin}: missing \"schema\": {SCHEMA:?}"))),
        }
        serde_json::from_value(raw).map_err(|source| CliError::Json { path: origin.into(), source })
    }

    pub fn to_pretty(&self) -> String {
        pretty(&serde_json::to_value(self).expect("documents serialize"))
    }
}

/// Nested objects one key per line, arrays of objects one element per line,
/// everything else on a single line.
pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    layout(v, 0, &mut out);
    out
}

fn layout(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Object(map) if map.values().any(|x| x.is_object() || x.is_array()) => {
            out.push_str("{\n");
            for (k, (key, val)) in map.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                layout(val, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                layout(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

pub fn read_document(path: &Path) -> CliResult<Document> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    Ok(Envelope::parse(&text, &shown)?.document)
}

pub fn write_document(path: &Path, doc: Document) -> CliResult<()> {
    let mut text = Envelope::new(doc).to_pretty();
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn sha256_of(doc: Document) -> String {
    let bytes = serde_json::to_vec(&Envelope::new(doc)).expect("documents serialize");
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the canonical system document (the name is not part of it).
pub fn system_hash(sys: &RotaBaxterSystem) -> String {
    sha256_of(Document::System(SystemDoc::from_system(sys, None)))
}

pub fn module_hash(module: &RBSBimodule) -> String {
    sha256_of(Document::Bimodule(BimoduleDoc::from_module(module, None)))
}

// ---- entries ----

pub fn scalar_to_value(s: &Scalar) -> Value {
    match s.as_residue() {
        Some(v) => Value::from(v),
        None => Value::String(s.to_string()),
    }
}

pub fn scalar_from_value(field: Field, v: &Value, what: &str) -> CliResult<Scalar> {
    match v {
        Value::String(s) => Ok(field.parse(s).map_err(|e| CliError::input(format!("{what}: {e}")))?),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                if let Field::Prime(p) = field {
                    if i < 0 || i as u64 >= p {
                        return Err(CliError::input(format!("{what}: residue {i} is not in [0, {p})")));
                    }
                }
                Ok(field.from_i64(i))
            } else if n.as_u64().is_some() {
                Ok(field.parse(&n.to_string())?)
            } else {
                Err(CliError::input(format!("{what}: {n} is not an integer; write fractions as \"p/q\"")))
            }
        }
        other => Err(CliError::input(format!("{what}: expected a number or a \"p/q\" string, found {other}"))),
    }
}

pub fn matrix_to_rows(m: &Matrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).iter().map(scalar_to_value).collect()).collect()
}

pub fn matrix_from_rows(field: Field, rows: usize, cols: usize, data: &Rows, what: &str) -> CliResult<Matrix> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(CliError::input(format!("{what}: expected a {rows}x{cols} array")));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in data.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            entries.push(scalar_from_value(field, v, &format!("{what}[{i}][{j}]"))?);
        }
    }
    Ok(Matrix::from_vec(field, rows, cols, entries)?)
}

fn tensor_to_values(t: &[Vec<Vec<Scalar>>]) -> Tensor {
    t.iter().map(|a| a.iter().map(|b| b.iter().map(scalar_to_value).collect()).collect()).collect()
}

fn tensor_from_values(
    field: Field,
    shape: (usize, usize, usize),
    data: &Tensor,
    what: &str,
) -> CliResult<Vec<Vec<Vec<Scalar>>>> {
    let (a, b, c) = shape;
    let ok = data.len() == a && data.iter().all(|x| x.len() == b && x.iter().all(|y| y.len() == c));
    if !ok {
        return Err(CliError::input(format!("{what}: expected a {a}x{b}x{c} array")));
    }
    data.iter()
        .enumerate()
        .map(|(i, x)| {
            x.iter()
                .enumerate()
                .map(|(j, y)| {
                    y.iter()
                        .enumerate()
                        .map(|(k, v)| scalar_from_value(field, v, &format!("{what}[{i}][{j}][{k}]")))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `c[i][j][k]` of a `d × d²` multiplication matrix.
fn mult_to_tensor(mult: &Matrix, d: usize) -> Tensor {
    (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| scalar_to_value(&mult[(k, i * d + j)])).collect()).collect()).collect()
}

fn mult_from_tensor(field: Field, d: usize, data: &Tensor, what: &str) -> CliResult<Matrix> {
    let c = tensor_from_values(field, (d, d, d), data, what)?;
    Ok(Matrix::from_fn(field, d, d * d, |k, col| c[col / d][col % d][k].clone()))
}

fn expect_field(spec: &FieldSpec, expected: Field, what: &str) -> CliResult<Field> {
    let f = spec.to_field()?;
    if f != expected {
        return Err(CliError::input(format!("{what} is over {f}, expected {expected}")));
    }
    Ok(f)
}

fn expect_hash(found: &str, expected: &str, what: &str) -> CliResult<()> {
    if found != expected {
        return Err(CliError::input(format!(
            "{what} refers to sha256 {found}, but the supplied object hashes to {expected}"
        )));
    }
    Ok(())
}

// ---- conversions ----

impl SystemDoc {
    pub fn from_system(sys: &RotaBaxterSystem, name: Option<String>) -> SystemDoc {
        SystemDoc {
            field: sys.field().into(),
            dim: sys.dim(),
            mult: tensor_to_values(&sys.algebra().constants()),
            r: matrix_to_rows(sys.r()),
            s: matrix_to_rows(sys.s()),
            name,
        }
    }

    /// Shapes and entries only; the axioms are checked by the commands.
    pub fn to_system(&self) -> CliResult<RotaBaxterSystem> {
        let f = self.field.to_field()?;
        let d = self.dim;
        if d == 0 {
            return Err(CliError::input("system dimension must be positive"));
        }
        let c = tensor_from_values(f, (d, d, d), &self.mult, "mult")?;
        let alg = Algebra::from_constants(f, &c)?;
        let r = matrix_from_rows(f, d, d, &self.r, "R")?;
        let s = matrix_from_rows(f, d, d, &self.s, "S")?;
        Ok(RotaBaxterSystem::new(alg, r, s)?)
    }
}

impl BimoduleDoc {
    pub fn from_module(module: &RBSBimodule, name: Option<String>) -> BimoduleDoc {
        let a = module.actions();
        BimoduleDoc {
            field: module.field().into(),
            system_sha256: system_hash(module.base()),
            m: module.dim(),
            left: tensor_to_values(&a.left_constants()),
            right: tensor_to_values(&a.right_constants()),
            r_m: matrix_to_rows(module.r_m()),
            s_m: matrix_to_rows(module.s_m()),
            name,
        }
    }

    pub fn to_module(&self, sys: &RotaBaxterSystem) -> CliResult<RBSBimodule> {
        let f = expect_field(&self.field, sys.field(), "bimodule")?;
        expect_hash(&self.system_sha256, &system_hash(sys), "bimodule")?;
        let (d, m) = (sys.dim(), self.m);
        let l = tensor_from_values(f, (d, m, m), &self.left, "left")?;
        let r = tensor_from_values(f, (m, d, m), &self.right, "right")?;
        let actions = BimoduleActions::from_constants(f, d, m, &l, &r)?;
        let r_m = matrix_from_rows(f, m, m, &self.r_m, "R_M")?;
        let s_m = matrix_from_rows(f, m, m, &self.s_m, "S_M")?;
        Ok(RBSBimodule::new(sys.clone(), actions, r_m, s_m)?)
    }
}

impl CocycleDoc {
    pub fn from_cocycle(c: &Cocycle2, module: &RBSBimodule) -> CocycleDoc {
        CocycleDoc {
            field: c.field().into(),
            module_sha256: module_hash(module),
            d: c.algebra_dim(),
            m: c.module_dim(),
            psi: matrix_to_rows(&c.psi),
            chi_r: matrix_to_rows(&c.chi_r),
            chi_s: matrix_to_rows(&c.chi_s),
        }
    }

    pub fn to_cocycle(&self, module: &RBSBimodule) -> CliResult<Cocycle2> {
        let f = expect_field(&self.field, module.field(), "cocycle")?;
        expect_hash(&self.module_sha256, &module_hash(module), "cocycle")?;
        let (d, m) = (module.algebra_dim(), module.dim());
        if (self.d, self.m) != (d, m) {
            return Err(CliError::input(format!(
                "cocycle has (d, m) = ({}, {}), bimodule has ({d}, {m})",
                self.d, self.m
            )));
        }
        Ok(Cocycle2::new(
            matrix_from_rows(f, m, d * d, &self.psi, "Psi")?,
            matrix_from_rows(f, m, d, &self.chi_r, "chiR")?,
            matrix_from_rows(f, m, d, &self.chi_s, "chiS")?,
        )?)
    }
}

fn check_order(order: usize, lens: &[usize], what: &str) -> CliResult<()> {
    if lens.iter().any(|&l| l != order) {
        return Err(CliError::input(format!(
            "{what}: every series must list {order} coefficients (orders 1..={order})"
        )));
    }
    Ok(())
}

impl DeformationDoc {
    pub fn from_deformation(def: &DeformationData, sys: &RotaBaxterSystem) -> DeformationDoc {
        let d = def.dim();
        DeformationDoc {
            field: def.field().into(),
            system_sha256: system_hash(sys),
            order: def.order(),
            mu: def.mus()[1..].iter().map(|m| mult_to_tensor(m, d)).collect(),
            r: def.rs()[1..].iter().map(matrix_to_rows).collect(),
            s: def.ss()[1..].iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn to_deformation(&self, sys: &RotaBaxterSystem) -> CliResult<DeformationData> {
        let f = expect_field(&self.field, sys.field(), "deformation")?;
        expect_hash(&self.system_sha256, &system_hash(sys), "deformation")?;
        check_order(self.order, &[self.mu.len(), self.r.len(), self.s.len()], "deformation")?;
        let d = sys.dim();
        let mut mus = vec![sys.algebra().mult().clone()];
        let mut rs = vec![sys.r().clone()];
        let mut ss = vec![sys.s().clone()];
        for k in 0..self.order {
            let n = k + 1;
            mus.push(mult_from_tensor(f, d, &self.mu[k], &format!("mu[order {n}]"))?);
            rs.push(matrix_from_rows(f, d, d, &self.r[k], &format!("R[order {n}]"))?);
            ss.push(matrix_from_rows(f, d, d, &self.s[k], &format!("S[order {n}]"))?);
        }
        Ok(DeformationData::new(mus, rs, ss)?)
    }
}

impl OperatorDeformationDoc {
    pub fn from_operator_deformation(od: &OperatorDeformation, sys: &RotaBaxterSystem) -> OperatorDeformationDoc {
        OperatorDeformationDoc {
            field: sys.field().into(),
            system_sha256: system_hash(sys),
            order: od.order(),
            r: od.rs()[1..].iter().map(matrix_to_rows).collect(),
            s: od.ss()[1..].iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn to_operator_deformation(&self, sys: &RotaBaxterSystem) -> CliResult<OperatorDeformation> {
        let f = expect_field(&self.field, sys.field(), "operator deformation")?;
        expect_hash(&self.system_sha256, &system_hash(sys), "operator deformation")?;
        check_order(self.order, &[self.r.len(), self.s.len()], "operator deformation")?;
        let d = sys.dim();
        let mut rs = vec![sys.r().clone()];
        let mut ss = vec![sys.s().clone()];
        for k in 0..self.order {
            let n = k + 1;
            rs.push(matrix_from_rows(f, d, d, &self.r[k], &format!("R[order {n}]"))?);
            ss.push(matrix_from_rows(f, d, d, &self.s[k], &format!("S[order {n}]"))?);
        }
        Ok(OperatorDeformation::new(rs, ss)?)
    }
}

impl ExtensionDoc {
    pub fn from_extension(ext: &ExtensionData) -> ExtensionDoc {
        ExtensionDoc {
            field: ext.field().into(),
            d: ext.base.dim(),
            m: ext.module_dim(),
            base_sha256: system_hash(&ext.base),
            base: SystemDoc::from_system(&ext.base, None),
            hat: SystemDoc::from_system(&ext.hat, None),
            i: matrix_to_rows(&ext.incl),
            p: matrix_to_rows(&ext.proj),
            t: ext.section.as_ref().map(matrix_to_rows),
        }
    }

    /// The retraction is not stored; it is recomputed from the section when needed.
    pub fn to_extension(&self) -> CliResult<ExtensionData> {
        let f = self.field.to_field()?;
        let base = self.base.to_system()?;
        let hat = self.hat.to_system()?;
        expect_field(&self.base.field, f, "extension base")?;
        expect_field(&self.hat.field, f, "extension total system")?;
        expect_hash(&self.base_sha256, &system_hash(&base), "extension base")?;
        let (d, m) = (self.d, self.m);
        if base.dim() != d || hat.dim() != d + m {
            return Err(CliError::input(format!(
                "extension declares d = {d}, m = {m} but has base dimension {} and total dimension {}",
                base.dim(),
                hat.dim()
            )));
        }
        let t = match &self.t {
            Some(rows) => Some(matrix_from_rows(f, d + m, d, rows, "t")?),
            None => None,
        };
        Ok(ExtensionData {
            base,
            hat,
            incl: matrix_from_rows(f, d + m, m, &self.i, "i")?,
            proj: matrix_from_rows(f, d, d + m, &self.p, "p")?,
            section: t,
            retraction: None,
        })
    }
}

impl GaugeDoc {
    pub fn from_gauge(g: &GaugeSeries, sys: &RotaBaxterSystem) -> GaugeDoc {
        GaugeDoc {
            field: sys.field().into(),
            system_sha256: system_hash(sys),
            order: g.order(),
            psi: g.psis()[1..].iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn to_gauge(&self, sys: &RotaBaxterSystem) -> CliResult<GaugeSeries> {
        let f = expect_field(&self.field, sys.field(), "gauge")?;
        expect_hash(&self.system_sha256, &system_hash(sys), "gauge")?;
        check_order(self.order, &[self.psi.len()], "gauge")?;
        let d = sys.dim();
        let mut psis = vec![Matrix::identity(f, d)];
        for (k, rows) in self.psi.iter().enumerate() {
            psis.push(matrix_from_rows(f, d, d, rows, &format!("Psi[order {}]", k + 1))?);
        }
        Ok(GaugeSeries::new(psis)?)
    }
}

impl MapDoc {
    pub fn from_matrix(m: &Matrix) -> MapDoc {
        MapDoc { field: m.field().into(), rows: m.rows(), cols: m.cols(), entries: matrix_to_rows(m) }
    }

    pub fn to_matrix(&self) -> CliResult<Matrix> {
        let f = self.field.to_field()?;
        matrix_from_rows(f, self.rows, self.cols, &self.entries, "entries")
    }
}
