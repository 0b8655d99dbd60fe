//! Edges of `K_{2d}`, the edge-indexed input tensor, and the canonical element `E_d`.
//!
//! Vertices are 1-based. Edges are ordered colexicographically:
//! `(1,2), (1,3), (2,3), (1,4), (2,4), (3,4), ...`, so edge `(i,j)` sits at
//! column `(j-1)(j-2)/2 + i` (1-based). The same order indexes tensor slots,
//! matrix columns and partition colors.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// An edge `(i, j)` of the complete graph, `1 <= i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    i: usize,
    j: usize,
}

impl Edge {
    /// Edge of `K_{2d}`; rejects `i >= j` and vertices outside `1..=2d`.
    pub fn new(i: usize, j: usize, d: usize) -> Result<Edge> {
        let n = 2 * d;
        if i == 0 || i >= j || j > n {
            return Err(Error::BadEdge { i, j, n });
        }
        Ok(Edge { i, j })
    }

    pub(crate) const fn new_unchecked(i: usize, j: usize) -> Edge {
        Edge { i, j }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// 0-based position in colex order.
    #[inline]
    pub fn index(&self) -> usize {
        (self.j - 1) * (self.j - 2) / 2 + self.i - 1
    }

    /// 1-based column position in colex order.
    pub fn column_index(&self) -> usize {
        self.index() + 1
    }

    /// Inverse of [`Edge::column_index`] for `K_{2d}`.
    pub fn from_column_index(index: usize, d: usize) -> Result<Edge> {
        let max = edge_count(d);
        if index == 0 || index > max {
            return Err(Error::BadColumn { index, max });
        }
        Ok(Edge::from_index(index - 1))
    }

    /// Inverse of [`Edge::index`].
    pub(crate) fn from_index(idx: usize) -> Edge {
        let mut j = 2;
        while (j - 1) * j / 2 <= idx {
            j += 1;
        }
        Edge {
            i: idx - (j - 1) * (j - 2) / 2 + 1,
            j,
        }
    }

    /// Parse the `"i,j"` key used in the JSON formats.
    pub fn parse_key(key: &str, d: usize) -> Result<Edge> {
        let bad = || Error::Input(format!("malformed edge key {key:?} (expected \"i,j\")"));
        let (a, b) = key.split_once(',').ok_or_else(bad)?;
        let i = a.trim().parse().map_err(|_| bad())?;
        let j = b.trim().parse().map_err(|_| bad())?;
        Edge::new(i, j, d)
    }

    pub fn key(&self) -> String {
        format!("{},{}", self.i, self.j)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.i == v || self.j == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Number of edges of `K_{2d}`, i.e. `d(2d-1)`.
pub const fn edge_count(d: usize) -> usize {
    d * (2 * d - 1)
}

/// All edges of `K_{2d}` in colex order.
pub fn edges(d: usize) -> impl Iterator<Item = Edge> {
    (0..edge_count(d)).map(Edge::from_index)
}

/// `(v_{i,j})` for all edges of `K_{2d}`: one length-`d` vector per edge.
///
/// Immutable; use [`EdgeTensor::with_slot`] to get a modified copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTensor {
    d: usize,
    field: FieldSpec,
    slots: Vec<Vec<Scalar>>,
}

impl EdgeTensor {
    /// Build from slots given in colex edge order.
    pub fn new(d: usize, field: FieldSpec, slots: Vec<Vec<Scalar>>) -> Result<EdgeTensor> {
        check_dimension(d)?;
        if slots.len() != edge_count(d) {
            return Err(Error::Shape(format!(
                "expected {} slots for d={d}, got {}",
                edge_count(d),
                slots.len()
            )));
        }
        for (idx, v) in slots.iter().enumerate() {
            check_vector(v, d, field, Edge::from_index(idx))?;
        }
        Ok(EdgeTensor { d, field, slots })
    }

    pub fn from_fn<F>(d: usize, field: FieldSpec, mut f: F) -> Result<EdgeTensor>
    where
        F: FnMut(Edge) -> Vec<Scalar>,
    {
        check_dimension(d)?;
        let slots = edges(d).map(&mut f).collect();
        EdgeTensor::new(d, field, slots)
    }

    pub fn zero(d: usize, field: FieldSpec) -> Result<EdgeTensor> {
        EdgeTensor::from_fn(d, field, |_| vec![field.zero(); d])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, e: Edge) -> &[Scalar] {
        &self.slots[e.index()]
    }

    /// Slots in colex order.
    pub fn slots(&self) -> &[Vec<Scalar>] {
        &self.slots
    }

    /// Copy of `self` with slot `e` replaced by `v`.
    pub fn with_slot(&self, e: Edge, v: Vec<Scalar>) -> Result<EdgeTensor> {
        Edge::new(e.i, e.j, self.d)?;
        check_vector(&v, self.d, self.field, e)?;
        let mut slots = self.slots.clone();
        slots[e.index()] = v;
        Ok(EdgeTensor {
            d: self.d,
            field: self.field,
            slots,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().flatten().all(Scalar::is_zero)
    }

    /// The color labeling `edge -> t` (colex order) when every slot is a
    /// standard basis vector `e_t`; `None` otherwise.
    pub fn basis_labeling(&self) -> Option<Vec<usize>> {
        self.slots.iter().map(|v| basis_index(v)).collect()
    }
}

/// `Some(t)` (1-based) when `v` is exactly the standard basis vector `e_t`.
pub(crate) fn basis_index(v: &[Scalar]) -> Option<usize> {
    let mut found = None;
    for (k, s) in v.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        if !s.is_one() || found.is_some() {
            return None;
        }
        found = Some(k + 1);
    }
    found
}

/// Standard basis vector `e_t` (1-based) of length `d`.
pub fn basis_vector(field: FieldSpec, d: usize, t: usize) -> Vec<Scalar> {
    (1..=d)
        .map(|k| if k == t { field.one() } else { field.zero() })
        .collect()
}

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    Ok(())
}

fn check_vector(v: &[Scalar], d: usize, field: FieldSpec, e: Edge) -> Result<()> {
    if v.len() != d {
        return Err(Error::Shape(format!(
            "slot {} has length {}, expected {d}",
            e.key(),
            v.len()
        )));
    }
    if let Some(s) = v.iter().find(|s| s.field() != field) {
        return Err(Error::FieldMismatch(s.field().to_string(), field.to_string()));
    }
    Ok(())
}

/// The basis indices `t` for which a case of the `E_d` rule assigns `e_t` to `(i, j)`.
///
/// Each of the four cases is tried for every `t` in `1..=d`; a well-formed
/// rule yields exactly one match per edge.
fn canonical_matches(i: usize, j: usize, d: usize) -> Vec<usize> {
    let mut hits = Vec::new();
    for t in 1..=d {
        let odd_t = 2 * t - 1;
        let even_t = 2 * t;
        let cases = [
            i < odd_t && i % 2 == 1 && j == odd_t,
            i < even_t && i % 2 == 0 && j == even_t,
            i == odd_t && j > odd_t && j % 2 == 0,
            i == even_t && j > even_t && j % 2 == 1,
        ];
        hits.extend(cases.iter().filter(|&&c| c).map(|_| t));
    }
    hits
}

/// The canonical basis tensor `E_d`.
///
/// Fails with an invariant error if the case analysis does not fire exactly
/// once for some edge.
pub fn build_ed(d: usize, field: FieldSpec) -> Result<EdgeTensor> {
    check_dimension(d)?;
    let mut slots = Vec::with_capacity(edge_count(d));
    for e in edges(d) {
        match canonical_matches(e.i, e.j, d).as_slice() {
            [t] => slots.push(basis_vector(field, d, *t)),
            hits => {
                return Err(Error::Invariant(format!(
                    "E_{d}: edge {e} matched {} cases ({hits:?})",
                    hits.len()
                )))
            }
        }
    }
    EdgeTensor::new(d, field, slots)
}
