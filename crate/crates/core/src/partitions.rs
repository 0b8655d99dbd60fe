//! `d`-partitions of `K_{2d}` as edge colorings.
//!
//! A partition is a total map from edges to colors `1..=d`, stored flat in
//! colex edge order, so it lines up slot-for-slot with basis tensors.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::det_s2_residues;
use crate::tensor::{basis_vector, check_dimension, edge_count, edges, Edge, EdgeTensor};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    d: usize,
    colors: Vec<u8>,
}

impl Partition {
    /// Colors are 1-based and listed in colex edge order.
    pub fn new(d: usize, colors: Vec<usize>) -> Result<Partition> {
        check_dimension(d)?;
        if d > u8::MAX as usize {
            return Err(Error::BadDimension(d));
        }
        if colors.len() != edge_count(d) {
            return Err(Error::Shape(format!(
                "expected {} edge colors for d={d}, got {}",
                edge_count(d),
                colors.len()
            )));
        }
        for (idx, &c) in colors.iter().enumerate() {
            if c == 0 || c > d {
                return Err(Error::BadColor {
                    color: c,
                    d,
                    edge: Edge::from_index(idx).key(),
                });
            }
        }
        Ok(Partition {
            d,
            colors: colors.into_iter().map(|c| c as u8).collect(),
        })
    }

    pub fn from_fn(d: usize, mut f: impl FnMut(Edge) -> usize) -> Result<Partition> {
        check_dimension(d)?;
        Partition::new(d, edges(d).map(&mut f).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn color(&self, e: Edge) -> usize {
        self.colors[e.index()] as usize
    }

    pub fn colors(&self) -> Vec<usize> {
        self.colors.iter().map(|&c| c as usize).collect()
    }

    /// Copy with edge `e` recolored.
    pub fn with_color(&self, e: Edge, color: usize) -> Result<Partition> {
        let mut colors = self.colors();
        Edge::new(e.i(), e.j(), self.d)?;
        colors[e.index()] = color;
        Partition::new(self.d, colors)
    }

    /// Edges of color class `c`.
    pub fn class(&self, c: usize) -> Vec<Edge> {
        edges(self.d).filter(|e| self.color(*e) == c).collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.d];
        for &c in &self.colors {
            sizes[c as usize - 1] += 1;
        }
        sizes
    }

    /// Acyclicity of each color class, by union-find.
    pub fn acyclic_by_color(&self) -> Vec<bool> {
        let n = 2 * self.d;
        let mut sets: Vec<UnionFind> = (0..self.d).map(|_| UnionFind::new(n)).collect();
        let mut acyclic = vec![true; self.d];
        for e in edges(self.d) {
            let c = self.color(e) - 1;
            if acyclic[c] && !sets[c].union(e.i() - 1, e.j() - 1) {
                acyclic[c] = false;
            }
        }
        acyclic
    }

    pub fn is_cycle_free(&self) -> bool {
        self.acyclic_by_color().iter().all(|&ok| ok)
    }

    /// Every color class has exactly `2d - 1` edges.
    pub fn is_homogeneous(&self) -> bool {
        self.class_sizes().iter().all(|&s| s == 2 * self.d - 1)
    }

    /// Small-integer slots of the associated basis tensor, for the residue fast path.
    pub(crate) fn integer_slots(&self) -> Vec<Vec<i64>> {
        self.colors
            .iter()
            .map(|&c| (1..=self.d).map(|k| (k == c as usize) as i64).collect())
            .collect()
    }
}

/// Basis tensor with slot `e` equal to `e_{color(e)}`.
pub fn partition_to_tensor(p: &Partition, field: FieldSpec) -> EdgeTensor {
    EdgeTensor::from_fn(p.d, field, |e| basis_vector(field, p.d, p.color(e)))
        .expect("partition dimension already validated")
}

/// Inverse of [`partition_to_tensor`]; fails unless every slot is a standard basis vector.
pub fn tensor_to_partition(t: &EdgeTensor) -> Result<Partition> {
    for e in edges(t.d()) {
        if crate::tensor::basis_index(t.get(e)).is_none() {
            return Err(Error::NotBasisTensor(e.key()));
        }
    }
    let labels = t.basis_labeling().expect("all slots checked");
    Partition::new(t.d(), labels)
}

/// Per-color acyclicity plus the overall verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub cycle_free: bool,
    pub per_color: Vec<bool>,
}

pub fn is_cycle_free(p: &Partition) -> CycleReport {
    let per_color = p.acyclic_by_color();
    CycleReport {
        cycle_free: per_color.iter().all(|&ok| ok),
        per_color,
    }
}

pub fn is_homogeneous(p: &Partition) -> bool {
    p.is_homogeneous()
}

/// The homogeneous cycle-free partition that agrees with `p` off the triangle
/// `{x,y,z}` and differs from it on at least two triangle edges.
///
/// All `d^3` recolorings of the triangle are searched. Zero or several
/// candidates is reported as an invariant violation.
pub fn triple_flip(p: &Partition, x: usize, y: usize, z: usize) -> Result<Partition> {
    let d = p.d;
    if !(1 <= x && x < y && y < z && z <= 2 * d) {
        return Err(Error::Input(format!(
            "triple ({x},{y},{z}) must satisfy 1 <= x < y < z <= {}",
            2 * d
        )));
    }
    if !p.is_homogeneous() || !p.is_cycle_free() {
        return Err(Error::Input(
            "triple flip needs a homogeneous cycle-free partition".into(),
        ));
    }
    let tri = [
        Edge::new_unchecked(x, y),
        Edge::new_unchecked(x, z),
        Edge::new_unchecked(y, z),
    ];
    let old: Vec<u8> = tri.iter().map(|e| p.colors[e.index()]).collect();
    let mut found = Vec::new();
    let mut q = p.clone();
    for a in 1..=d as u8 {
        for b in 1..=d as u8 {
            for c in 1..=d as u8 {
                let new = [a, b, c];
                let changed = new.iter().zip(&old).filter(|(n, o)| n != o).count();
                if changed < 2 {
                    continue;
                }
                for (e, &col) in tri.iter().zip(&new) {
                    q.colors[e.index()] = col;
                }
                if q.is_homogeneous() && q.is_cycle_free() {
                    found.push(q.clone());
                }
            }
        }
    }
    match found.len() {
        1 => Ok(found.pop().expect("one candidate")),
        n => Err(Error::Invariant(format!(
            "triple flip at ({x},{y},{z}) has {n} candidates for partition {:?}",
            p.colors()
        ))),
    }
}

/// All partitions reachable from `start` by at most `depth` triple flips (including `start`).
pub fn flip_neighborhood(start: &Partition, depth: usize) -> Result<Vec<Partition>> {
    let n = 2 * start.d;
    let mut seen: HashSet<Partition> = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    while let Some((p, dist)) = queue.pop_front() {
        if dist == depth {
            continue;
        }
        for x in 1..=n {
            for y in x + 1..=n {
                for z in y + 1..=n {
                    let f = triple_flip(&p, x, y, z)?;
                    if seen.insert(f.clone()) {
                        order.push(f.clone());
                        queue.push_back((f, dist + 1));
                    }
                }
            }
        }
    }
    Ok(order)
}

/// Total number of `d`-partitions, `d^{d(2d-1)}`, when it fits in a `u64`.
pub fn partition_count(d: usize) -> Option<u64> {
    (d as u64).checked_pow(edge_count(d) as u32)
}

/// The `index`-th partition in enumeration order: base-`d` digits of
/// `index`, least significant digit on the first edge.
pub fn partition_from_index(d: usize, mut index: u64) -> Partition {
    let colors = (0..edge_count(d))
        .map(|_| {
            let c = (index % d as u64) as u8 + 1;
            index /= d as u64;
            c
        })
        .collect();
    Partition { d, colors }
}

/// Every partition exactly once, in index order.
///
/// `d = 2` always runs. `d = 3` (14,348,907 partitions) needs `allow_large`.
/// Larger `d` is refused outright.
pub fn enumerate_partitions(d: usize, allow_large: bool) -> Result<impl Iterator<Item = Partition>> {
    check_dimension(d)?;
    if d >= 4 || (d == 3 && !allow_large) {
        return Err(Error::EnumerationTooLarge { d });
    }
    let total = partition_count(d).expect("small d");
    Ok((0..total).map(move |i| partition_from_index(d, i)))
}

/// `count` i.i.d. uniform colorings from a seeded generator.
pub fn sample_partitions(d: usize, count: usize, seed: u64) -> impl Iterator<Item = Partition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| random_partition(d, &mut rng))
}

pub fn random_partition<R: Rng>(d: usize, rng: &mut R) -> Partition {
    Partition {
        d,
        colors: (0..edge_count(d)).map(|_| rng.gen_range(1..=d as u8)).collect(),
    }
}

/// A uniformly random homogeneous coloring (each class gets `2d - 1` edges).
pub fn random_homogeneous<R: Rng>(d: usize, rng: &mut R) -> Partition {
    let mut colors: Vec<u8> = (1..=d as u8)
        .flat_map(|c| std::iter::repeat(c).take(2 * d - 1))
        .collect();
    colors.shuffle(rng);
    Partition { d, colors }
}

/// Homogeneous cycle-free partitions by rejection sampling.
pub fn sample_homogeneous_cycle_free(d: usize, count: usize, seed: u64) -> Vec<Partition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = random_homogeneous(d, &mut rng);
        if p.is_cycle_free() {
            out.push(p);
        }
    }
    out
}

/// Random coloring with the closed walk `cycle` (distinct vertices) forced into `color`.
pub fn plant_cycle<R: Rng>(d: usize, cycle: &[usize], color: usize, rng: &mut R) -> Result<Partition> {
    if cycle.len() < 3 {
        return Err(Error::Input("a cycle needs at least 3 vertices".into()));
    }
    let distinct: HashSet<usize> = cycle.iter().copied().collect();
    if distinct.len() != cycle.len() {
        return Err(Error::Input(format!("cycle {cycle:?} repeats a vertex")));
    }
    let mut p = random_partition(d, rng);
    if color == 0 || color > d {
        return Err(Error::BadColor {
            color,
            d,
            edge: "-".into(),
        });
    }
    for k in 0..cycle.len() {
        let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
        let e = Edge::new(a.min(b), a.max(b), d)?;
        p.colors[e.index()] = color as u8;
    }
    Ok(p)
}

/// 2x2 contingency table of (cycle-free, `det^S²` nonzero).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SurveyTable {
    pub cycle_free_det_nonzero: u64,
    pub cycle_free_det_zero: u64,
    pub cyclic_det_nonzero: u64,
    pub cyclic_det_zero: u64,
}

impl SurveyTable {
    pub fn record(&mut self, cycle_free: bool, det_nonzero: bool) {
        match (cycle_free, det_nonzero) {
            (true, true) => self.cycle_free_det_nonzero += 1,
            (true, false) => self.cycle_free_det_zero += 1,
            (false, true) => self.cyclic_det_nonzero += 1,
            (false, false) => self.cyclic_det_zero += 1,
        }
    }

    pub fn merge(mut self, other: SurveyTable) -> SurveyTable {
        self.cycle_free_det_nonzero += other.cycle_free_det_nonzero;
        self.cycle_free_det_zero += other.cycle_free_det_zero;
        self.cyclic_det_nonzero += other.cyclic_det_nonzero;
        self.cyclic_det_zero += other.cyclic_det_zero;
        self
    }

    pub fn total(&self) -> u64 {
        self.cycle_free_det_nonzero + self.cycle_free_det_zero + self.cyclic_det_nonzero + self.cyclic_det_zero
    }

    pub fn disagreements(&self) -> u64 {
        self.cycle_free_det_zero + self.cyclic_det_nonzero
    }

    pub fn cycle_free(&self) -> u64 {
        self.cycle_free_det_nonzero + self.cycle_free_det_zero
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub d: usize,
    pub prime: u64,
    pub table: SurveyTable,
    /// First few disagreeing partitions (colex colors), for replay.
    pub counterexamples: Vec<Vec<usize>>,
}

const MAX_COUNTEREXAMPLES: usize = 5;

fn classify(p: &Partition, prime: u64) -> (bool, bool) {
    let det = det_s2_residues(p.d, &p.integer_slots(), prime);
    (p.is_cycle_free(), det != 0)
}

/// Cycle-freeness versus `det^S² != 0` over GF(prime) on seeded samples.
pub fn survey_samples(d: usize, samples: usize, seed: u64, prime: u64) -> Result<SurveyReport> {
    check_dimension(d)?;
    FieldSpec::prime(prime)?;
    let mut table = SurveyTable::default();
    let mut counterexamples = Vec::new();
    for p in sample_partitions(d, samples, seed) {
        let (cf, nz) = classify(&p, prime);
        table.record(cf, nz);
        if cf != nz && counterexamples.len() < MAX_COUNTEREXAMPLES {
            counterexamples.push(p.colors());
        }
    }
    Ok(SurveyReport {
        d,
        prime,
        table,
        counterexamples,
    })
}

/// The same survey over every partition; parallel, with a deterministic result.
///
/// `progress` is called with the number of finished chunks out of `chunks`.
pub fn survey_exhaustive(
    d: usize,
    prime: u64,
    allow_large: bool,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> Result<SurveyReport> {
    let _ = enumerate_partitions(d, allow_large)?;
    FieldSpec::prime(prime)?;
    let total = partition_count(d).expect("checked above");
    const CHUNK: u64 = 1 << 16;
    let chunks = total.div_ceil(CHUNK) as usize;
    let done = std::sync::atomic::AtomicUsize::new(0);
    let parts: Vec<(SurveyTable, Vec<Vec<usize>>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut table = SurveyTable::default();
            let mut bad = Vec::new();
            let start = c as u64 * CHUNK;
            for i in start..(start + CHUNK).min(total) {
                let p = partition_from_index(d, i);
                let (cf, nz) = classify(&p, prime);
                table.record(cf, nz);
                if cf != nz && bad.len() < MAX_COUNTEREXAMPLES {
                    bad.push(p.colors());
                }
            }
            let n = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            if let Some(cb) = progress {
                cb(n, chunks);
            }
            (table, bad)
        })
        .collect();
    let mut table = SurveyTable::default();
    let mut counterexamples = Vec::new();
    for (t, bad) in parts {
        table = table.merge(t);
        for b in bad {
            if counterexamples.len() < MAX_COUNTEREXAMPLES {
                counterexamples.push(b);
            }
        }
    }
    Ok(SurveyReport {
        d,
        prime,
        table,
        counterexamples,
    })
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets of `a` and `b`; false if they were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}
