//! The `*.lattice.json` exchange format.
//!
//! ```json
//! {
//!   "version": "1",
//!   "n": 4,
//!   "covers": [[0,1],[0,2],[1,3],[2,3]],
//!   "labels": {"1": "a1", "2": "a2"},
//!   "realizer": [[0,1,2,3],[0,2,1,3]],
//!   "atoms_lr": [1,2],
//!   "meta": {}
//! }
//! ```
//!
//! Only `version`, `n` and `covers` are required. Indices are preserved
//! exactly, so reading a written document gives back the same lattice
//! element for element.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::lattice::{FiniteLattice, LatticeError};
use crate::planar::{left_right, LrRelation, Realizer};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum DocError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn schema(field: &str, message: impl Into<String>) -> DocError {
    DocError::Schema {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub version: String,
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<usize, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizer: Option<[Vec<usize>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms_lr: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

impl LatticeDoc {
    /// A document carrying the lattice's cover list and nothing else.
    pub fn from_lattice(lattice: &FiniteLattice) -> Self {
        LatticeDoc {
            version: FORMAT_VERSION.to_string(),
            n: lattice.len(),
            covers: lattice.covers().iter().map(|&(a, b)| [a, b]).collect(),
            ..LatticeDoc::default()
        }
    }

    pub fn with_realizer(mut self, lattice: &FiniteLattice, realizer: &Realizer) -> Self {
        let (p1, _) = realizer.positions();
        let mut atoms = lattice.atoms().to_vec();
        atoms.sort_by_key(|&a| p1[a]);
        self.realizer = Some([realizer.ext1.clone(), realizer.ext2.clone()]);
        self.atoms_lr = Some(atoms);
        self
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn with_meta(mut self, meta: Value) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn realizer(&self) -> Option<Realizer> {
        self.realizer.as_ref().map(|[a, b]| Realizer {
            ext1: a.clone(),
            ext2: b.clone(),
        })
    }

    /// Index of the element carrying `label`.
    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().find(|(_, l)| l.as_str() == label).map(|(&i, _)| i)
    }

    /// Builds the lattice and checks the optional fields against it.
    pub fn to_lattice(&self) -> Result<FiniteLattice, DocError> {
        if self.version != FORMAT_VERSION {
            return Err(schema("version", format!("unsupported version {:?}", self.version)));
        }
        let pairs: Vec<(usize, usize)> = self.covers.iter().map(|&[a, b]| (a, b)).collect();
        let lattice = FiniteLattice::from_covers(self.n, &pairs)?;
        if let Some(&i) = self.labels.keys().find(|&&i| i >= self.n) {
            return Err(schema("labels", format!("index {i} out of range")));
        }
        if let Some(r) = self.realizer() {
            r.validate(lattice.poset()).map_err(|e| schema("realizer", e.to_string()))?;
            if let Some(lr) = &self.atoms_lr {
                let mut expected = lattice.atoms().to_vec();
                let mut given = lr.clone();
                given.sort_unstable();
                expected.sort_unstable();
                if given != expected {
                    return Err(schema("atoms_lr", "does not list exactly the atoms"));
                }
                if lr.windows(2).any(|w| left_right(&lattice, &r, w[0], w[1]) != LrRelation::LeftOf) {
                    return Err(schema("atoms_lr", "not in left-right order"));
                }
            }
        } else if self.atoms_lr.is_some() {
            return Err(schema("atoms_lr", "requires a realizer"));
        }
        Ok(lattice)
    }

    /// Deterministic rendering with one cover pair per entry on a single line.
    pub fn to_json(&self) -> String {
        let mut fields: Vec<(&str, String)> = vec![
            ("version", compact(&self.version)),
            ("n", compact(&self.n)),
            ("covers", compact(&self.covers)),
        ];
        if !self.labels.is_empty() {
            fields.push(("labels", compact(&self.labels)));
        }
        if let Some(r) = &self.realizer {
            fields.push(("realizer", compact(r)));
        }
        if let Some(a) = &self.atoms_lr {
            fields.push(("atoms_lr", compact(a)));
        }
        if let Some(m) = &self.meta {
            let pretty = serde_json::to_string_pretty(m).expect("json value serializes");
            fields.push(("meta", pretty.replace('\n', "\n  ")));
        }
        let body: Vec<String> = fields.into_iter().map(|(k, v)| format!("  \"{k}\": {v}")).collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }
}

fn compact<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("value serializes")
}

fn field<T: for<'de> Deserialize<'de>>(obj: &serde_json::Map<String, Value>, name: &str) -> Result<Option<T>, DocError> {
    match obj.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| schema(name, e.to_string())),
    }
}

fn required<T: for<'de> Deserialize<'de>>(obj: &serde_json::Map<String, Value>, name: &str) -> Result<T, DocError> {
    field(obj, name)?.ok_or_else(|| schema(name, "missing"))
}

/// Parses a document without building the lattice.
pub fn parse_doc(bytes: &[u8]) -> Result<LatticeDoc, DocError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| DocError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    const KNOWN: [&str; 7] = ["version", "n", "covers", "labels", "realizer", "atoms_lr", "meta"];
    if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(schema(k, "unknown field"));
    }
    Ok(LatticeDoc {
        version: required(obj, "version")?,
        n: required(obj, "n")?,
        covers: required(obj, "covers")?,
        labels: field(obj, "labels")?.unwrap_or_default(),
        realizer: field(obj, "realizer")?,
        atoms_lr: field(obj, "atoms_lr")?,
        meta: obj.get("meta").cloned(),
    })
}

pub fn read_doc(bytes: &[u8]) -> Result<(FiniteLattice, LatticeDoc), DocError> {
    let doc = parse_doc(bytes)?;
    let lattice = doc.to_lattice()?;
    Ok((lattice, doc))
}

/// Writes `lattice` with the metadata carried by `template` (labels,
/// realizer, atom order, meta); the cover list always comes from `lattice`.
pub fn write_doc(lattice: &FiniteLattice, template: &LatticeDoc) -> Vec<u8> {
    let mut doc = template.clone();
    let fresh = LatticeDoc::from_lattice(lattice);
    doc.version = fresh.version;
    doc.n = fresh.n;
    doc.covers = fresh.covers;
    doc.to_json().into_bytes()
}
