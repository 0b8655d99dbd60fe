//! JSON instance, partition, point and matrix formats.
//!
//! Edge keys are `"i,j"` with 1-based vertices; scalars are strings
//! (`"a"`, `"a/b"`, or a decimal residue).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::geometry::PointConfig;
use crate::linalg::KernelWitness;
use crate::partitions::Partition;
use crate::system::SystemMatrix;
use crate::tensor::{check_dimension, edge_count, edges, Edge, EdgeTensor};

/// `"rational"` or `{"prime": p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Named(String),
    Prime { prime: u64 },
}

impl FieldJson {
    pub fn to_spec(&self) -> Result<FieldSpec> {
        match self {
            FieldJson::Named(s) if s == "rational" => Ok(FieldSpec::rational()),
            FieldJson::Named(s) => Err(Error::Input(format!(
                "key \"field\": unknown field {s:?} (expected \"rational\" or {{\"prime\": p}})"
            ))),
            FieldJson::Prime { prime } => FieldSpec::prime(*prime),
        }
    }

    pub fn from_spec(f: FieldSpec) -> FieldJson {
        match f.modulus() {
            None => FieldJson::Named("rational".into()),
            Some(prime) => FieldJson::Prime { prime },
        }
    }
}

impl Default for FieldJson {
    fn default() -> Self {
        FieldJson::Named("rational".into())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    pub d: usize,
    #[serde(default)]
    pub field: FieldJson,
    pub vectors: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionJson {
    pub d: usize,
    pub colors: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsJson {
    pub d: usize,
    #[serde(default)]
    pub field: FieldJson,
    pub points: Vec<Vec<String>>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

/// Map every `"i,j"` key onto its edge, rejecting unknown keys and naming missing ones.
fn edge_keyed<V>(d: usize, map: &BTreeMap<String, V>) -> Result<Vec<&V>> {
    let mut slots: Vec<Option<&V>> = vec![None; edge_count(d)];
    for (key, v) in map {
        let e = Edge::parse_key(key, d)
            .map_err(|e| Error::Input(format!("key {key:?}: {e}")))?;
        if slots[e.index()].replace(v).is_some() {
            return Err(Error::Input(format!("key {key:?}: duplicate edge {e}")));
        }
    }
    edges(d)
        .zip(slots)
        .map(|(e, s)| s.ok_or_else(|| Error::Input(format!("missing edge key \"{}\"", e.key()))))
        .collect()
}

pub fn parse_instance(text: &str) -> Result<EdgeTensor> {
    let raw: InstanceJson = parse_json(text)?;
    check_dimension(raw.d).map_err(|e| Error::Input(format!("key \"d\": {e}")))?;
    let field = raw.field.to_spec()?;
    let d = raw.d;
    let mut slots = Vec::with_capacity(edge_count(d));
    for (e, v) in edges(d).zip(edge_keyed(d, &raw.vectors)?) {
        if v.len() != d {
            return Err(Error::Input(format!(
                "key \"{}\": vector has length {}, expected d={d}",
                e.key(),
                v.len()
            )));
        }
        let vec = v
            .iter()
            .map(|s| field.parse_scalar(s))
            .collect::<Result<Vec<Scalar>>>()
            .map_err(|err| Error::Input(format!("key \"{}\": {err}", e.key())))?;
        slots.push(vec);
    }
    EdgeTensor::new(d, field, slots)
}

pub fn instance_to_json(t: &EdgeTensor) -> Value {
    let vectors: Map<String, Value> = edges(t.d())
        .map(|e| {
            (
                e.key(),
                Value::from(t.get(e).iter().map(ToString::to_string).collect::<Vec<_>>()),
            )
        })
        .collect();
    json!({
        "d": t.d(),
        "field": FieldJson::from_spec(t.field()),
        "vectors": vectors,
    })
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let raw: PartitionJson = parse_json(text)?;
    check_dimension(raw.d).map_err(|e| Error::Input(format!("key \"d\": {e}")))?;
    let colors: Vec<usize> = edge_keyed(raw.d, &raw.colors)?.into_iter().copied().collect();
    Partition::new(raw.d, colors)
}

pub fn partition_to_json(p: &Partition) -> Value {
    let colors: Map<String, Value> = edges(p.d())
        .map(|e| (e.key(), Value::from(p.color(e))))
        .collect();
    json!({ "d": p.d(), "colors": colors })
}

pub fn parse_points(text: &str) -> Result<PointConfig> {
    let raw: PointsJson = parse_json(text)?;
    check_dimension(raw.d).map_err(|e| Error::Input(format!("key \"d\": {e}")))?;
    let field = raw.field.to_spec()?;
    if raw.points.len() != 2 * raw.d {
        return Err(Error::Input(format!(
            "key \"points\": expected {} points for d={}, got {}",
            2 * raw.d,
            raw.d,
            raw.points.len()
        )));
    }
    let mut points = Vec::with_capacity(raw.points.len());
    for (k, p) in raw.points.iter().enumerate() {
        if p.len() != raw.d {
            return Err(Error::Input(format!(
                "key \"points\"[{k}]: point has {} coordinates, expected d={}",
                p.len(),
                raw.d
            )));
        }
        points.push(
            p.iter()
                .map(|s| field.parse_scalar(s))
                .collect::<Result<Vec<Scalar>>>()
                .map_err(|err| Error::Input(format!("key \"points\"[{k}]: {err}")))?,
        );
    }
    PointConfig::new(raw.d, field, points)
}

pub fn points_to_json(c: &PointConfig) -> Value {
    json!({
        "d": c.d(),
        "field": FieldJson::from_spec(c.field()),
        "points": c.points().iter()
            .map(|p| p.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn witness_to_json(w: &KernelWitness) -> Value {
    Value::Object(
        w.to_pairs()
            .into_iter()
            .map(|(k, v)| (k, Value::from(v)))
            .collect(),
    )
}

pub fn matrix_to_json(m: &SystemMatrix) -> Value {
    json!({
        "rows": m.matrix().rows(),
        "cols": m.matrix().cols(),
        "entries": m.matrix().to_strings(),
        "row_blocks": m.row_blocks().iter().map(|b| json!({
            "equation": b.equation,
            "start": b.start + 1,
            "end": b.start + b.len,
        })).collect::<Vec<_>>(),
        "col_edges": m.col_edges().iter().map(Edge::key).collect::<Vec<_>>(),
    })
}
