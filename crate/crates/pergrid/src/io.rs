//! On-disk module format.
//!
//! One self-describing JSON document per module, designed so fixtures diff
//! cleanly and assertions can be bit-exact:
//!
//! ```json
//! {
//!   "field": { "kind": "prime", "p": 5 },
//!   "quiver": [
//!     { "size": 2, "orientation": "f" },
//!     { "size": 3, "orientation": "ff" }
//!   ],
//!   "dims": { "1,1": 1, "1,2": 2 },
//!   "maps": { "1,1->1,2": [["1"], ["3"]] }
//! }
//! ```
//!
//! Vertices are named by their coordinates, arrows as `source->target`.
//! Missing dims are zero; maps are omitted whenever either end has dimension
//! zero, and default to the zero map otherwise. Matrix entries are written in
//! canonical form: prime-field values as integers in `[0, p)`, rationals as
//! `a` or `a/b` in lowest terms with positive denominator. Parsing accepts
//! liberal scalars (`-3`, `4/6`, `7` mod p) but writing always re-canonicalizes,
//! so write-then-parse reproduces the representation exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::grid::{Dir, Factor, GridQuiver};
use crate::matrix::Matrix;
use crate::rep::Rep;

#[derive(Serialize, Deserialize)]
struct FieldDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct FactorDoc {
    size: usize,
    orientation: String,
}

#[derive(Serialize, Deserialize)]
struct ModuleDoc {
    field: FieldDoc,
    quiver: Vec<FactorDoc>,
    #[serde(default)]
    dims: BTreeMap<String, usize>,
    #[serde(default)]
    maps: BTreeMap<String, Vec<Vec<String>>>,
}

fn field_from_doc(doc: &FieldDoc) -> Result<FieldSpec> {
    match (doc.kind.as_str(), doc.p) {
        ("rational", None) => Ok(FieldSpec::Rational),
        ("rational", Some(_)) => {
            Err(Error::Parse("field kind \"rational\" takes no modulus".into()))
        }
        ("prime", Some(p)) => FieldSpec::prime(p),
        ("prime", None) => Err(Error::Parse("field kind \"prime\" needs \"p\"".into())),
        (other, _) => Err(Error::Parse(format!(
            "unknown field kind {other:?}; expected \"rational\" or \"prime\""
        ))),
    }
}

fn field_to_doc(field: FieldSpec) -> FieldDoc {
    match field {
        FieldSpec::Rational => FieldDoc { kind: "rational".into(), p: None },
        FieldSpec::Prime(p) => FieldDoc { kind: "prime".into(), p: Some(p) },
    }
}

fn quiver_from_doc(doc: &[FactorDoc]) -> Result<Arc<GridQuiver>> {
    let mut factors = Vec::with_capacity(doc.len());
    for (i, f) in doc.iter().enumerate() {
        let mut orientation = Vec::with_capacity(f.orientation.len());
        for ch in f.orientation.chars() {
            orientation.push(match ch {
                'f' => Dir::Forward,
                'b' => Dir::Backward,
                other => {
                    return Err(Error::Parse(format!(
                        "factor {}: orientation letter {other:?}, expected 'f' or 'b'",
                        i + 1
                    )))
                }
            });
        }
        factors.push(Factor { size: f.size, orientation });
    }
    GridQuiver::new(factors)
}

fn quiver_to_doc(q: &GridQuiver) -> Vec<FactorDoc> {
    q.factors()
        .iter()
        .map(|f| FactorDoc {
            size: f.size,
            orientation: f
                .orientation
                .iter()
                .map(|d| if *d == Dir::Forward { 'f' } else { 'b' })
                .collect(),
        })
        .collect()
}

/// Splits an arrow key `"u->v"` into the arrow id it names.
fn parse_arrow_key(q: &GridQuiver, key: &str) -> Result<usize> {
    let (u, v) = key
        .split_once("->")
        .ok_or_else(|| Error::Parse(format!("bad arrow name {key:?}, expected \"u->v\"")))?;
    let source = q.parse_vertex(u.trim())?;
    let target = q.parse_vertex(v.trim())?;
    q.arrow_between(source, target)
        .ok_or_else(|| Error::Parse(format!("{key:?} is not an arrow of the grid")))
}

/// Reads a representation from its textual form.
pub fn parse_module_str(text: &str) -> Result<Rep> {
    let doc: ModuleDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("module file: {e}")))?;
    let field = field_from_doc(&doc.field)?;
    let quiver = quiver_from_doc(&doc.quiver)?;

    let mut dims = vec![0usize; quiver.vertex_count()];
    for (name, &d) in &doc.dims {
        let v = quiver.parse_vertex(name)?;
        dims[v] = d;
    }

    let mut maps: Vec<Matrix> = quiver
        .arrows()
        .iter()
        .map(|a| Matrix::zero(field, dims[a.target], dims[a.source]))
        .collect();
    for (key, rows) in &doc.maps {
        let id = parse_arrow_key(&quiver, key)?;
        let arrow = quiver.arrow(id);
        let (r, c) = (dims[arrow.target], dims[arrow.source]);
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse(format!(
                "map on {key:?} must be {r}x{c} (target dim x source dim)"
            )));
        }
        let mut m = Matrix::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                m.set(
                    i,
                    j,
                    field
                        .parse_scalar(entry)
                        .map_err(|e| Error::Parse(format!("map on {key:?}, row {i}: {e}")))?,
                );
            }
        }
        maps[id] = m;
    }

    let rep = Rep::new(quiver, field, dims, maps)?;
    rep.validate()?;
    Ok(rep)
}

/// Renders a representation in the canonical textual form.
pub fn write_module_str(rep: &Rep) -> String {
    let q = rep.quiver();
    let mut dims = BTreeMap::new();
    for v in q.vertices() {
        if rep.dim(v) > 0 {
            dims.insert(q.vertex_name(v), rep.dim(v));
        }
    }
    let mut maps = BTreeMap::new();
    for (id, a) in q.arrows().iter().enumerate() {
        if rep.dim(a.source) == 0 || rep.dim(a.target) == 0 {
            continue;
        }
        let m = rep.map(id);
        let rows: Vec<Vec<String>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
            .collect();
        maps.insert(q.arrow_name(id), rows);
    }
    let doc = ModuleDoc {
        field: field_to_doc(rep.field()),
        quiver: quiver_to_doc(q),
        dims,
        maps,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    text.push('\n');
    text
}

/// Reads and validates a module file.
pub fn parse_module(path: &Path) -> Result<Rep> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_module_str(&text)
}

/// Writes a module file in canonical form.
pub fn write_module(rep: &Rep, path: &Path) -> Result<()> {
    fs::write(path, write_module_str(rep))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
