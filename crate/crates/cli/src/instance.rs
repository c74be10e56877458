//! Instance files.
//!
//! ```json
//! {
//!   "kind": "curve", "p": 5, "f": 1,
//!   "graph": {
//!     "vertices": [{ "id": "v0", "genus": 0 }],
//!     "edges": [{ "id": "e0", "tail": "v0", "head": "v0" }]
//!   },
//!   "components": { "v0": { "type": "genus0" } }
//! }
//! ```
//!
//! Component sources are `{"type": "genus0"}`, `{"type": "elliptic", "a4": "1", "a6": "0"}`
//! or `{"type": "matrix", "entries": [["0", "-5"], ["1", "2"]]}`. Abelian-variety
//! instances use `"kind": "av"` with `torus_rank`, `gram` and `b_frobenius`.
//! Matrix entries and curve coefficients are decimal integer strings.

use std::collections::BTreeMap;

use frobmon::linalg::{big, QMatrix};
use frobmon::weil::{validate_weil, WeilMatrix};
use frobmon::{ComponentSource, CurveInstance, DualGraph, UniformizationData};
use num::{BigInt, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub type MatrixFile = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceFile {
    Curve(CurveFile),
    Av(AvFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub p: u64,
    pub f: u32,
    pub graph: GraphFile,
    pub components: BTreeMap<String, ComponentFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexFile>,
    pub edges: Vec<EdgeFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexFile {
    pub id: String,
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ComponentFile {
    Genus0,
    Elliptic { a4: String, a6: String },
    Matrix { entries: MatrixFile },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvFile {
    pub p: u64,
    pub f: u32,
    pub torus_rank: usize,
    pub gram: MatrixFile,
    pub b_frobenius: MatrixFile,
}

fn typed<T: for<'de> Deserialize<'de>>(value: Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::Input(format!("{path}: {}", e.into_inner()))
    })
}

/// Parses an instance file, naming the offending field on schema errors.
pub fn parse_instance(text: &str) -> Result<InstanceFile, CliError> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))?;
    let kind = match value.as_object_mut().map(|o| o.remove("kind")) {
        None => return Err(CliError::Input("instance must be a JSON object".into())),
        Some(None) => return Err(CliError::Input("kind: missing field".into())),
        Some(Some(k)) => k,
    };
    match kind.as_str() {
        Some("curve") => typed(value).map(InstanceFile::Curve),
        Some("av") => typed(value).map(InstanceFile::Av),
        _ => Err(CliError::Input(format!("kind: expected \"curve\" or \"av\", got {kind}"))),
    }
}

pub fn parse_integer(field: &str, s: &str) -> Result<BigInt, CliError> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| CliError::Input(format!("{field}: expected an integer string, got {s:?}")))
}

fn parse_small(field: &str, s: &str) -> Result<i64, CliError> {
    parse_integer(field, s)?
        .to_i64()
        .ok_or_else(|| CliError::Input(format!("{field}: {s} does not fit in 64 bits")))
}

pub fn parse_matrix(field: &str, rows: &MatrixFile) -> Result<QMatrix, CliError> {
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| parse_integer(&format!("{field}[{i}][{j}]"), s).map(big))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    QMatrix::from_rows(parsed).map_err(|e| CliError::Input(format!("{field}: {e}")))
}

pub fn matrix_to_file(m: &QMatrix) -> MatrixFile {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect()
}

impl CurveFile {
    pub fn to_instance(&self, prime_bound: u64) -> Result<CurveInstance, CliError> {
        let graph = DualGraph::new(
            self.graph.vertices.iter().map(|v| (v.id.clone(), v.genus)),
            self.graph.edges.iter().map(|e| (e.id.clone(), e.tail.clone(), e.head.clone())),
        )
        .map_err(|e| CliError::Input(format!("graph: {e}")))?;
        let mut sources = BTreeMap::new();
        for (id, c) in &self.components {
            let field = format!("components.{id}");
            let source = match c {
                ComponentFile::Genus0 => ComponentSource::Genus0,
                ComponentFile::Elliptic { a4, a6 } => ComponentSource::Elliptic {
                    a4: parse_small(&format!("{field}.a4"), a4)?,
                    a6: parse_small(&format!("{field}.a6"), a6)?,
                },
                ComponentFile::Matrix { entries } => {
                    ComponentSource::Matrix(parse_matrix(&format!("{field}.entries"), entries)?)
                }
            };
            sources.insert(id.clone(), source);
        }
        Ok(CurveInstance::new(graph, sources, self.p, self.f)?.with_prime_bound(prime_bound))
    }
}

impl AvFile {
    pub fn to_data(&self) -> Result<UniformizationData, CliError> {
        let gram = parse_matrix("gram", &self.gram)?;
        let b = parse_matrix("b_frobenius", &self.b_frobenius)?;
        let b = if b.rows() == 0 {
            WeilMatrix::empty(self.p, self.f)?
        } else {
            validate_weil(&b, self.p, self.f)?
        };
        Ok(UniformizationData::new(self.torus_rank, gram, b, self.p, self.f)?)
    }
}
