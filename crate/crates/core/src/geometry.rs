//! Point configurations and their difference tensors `v_{i,j} = p_j - p_i`.
//!
//! Such tensors always have `det^S² = 0`. [`geometric_witness`] builds an
//! explicit nonzero solution `λ_{i,j}` of the system, starting from a linear
//! dependence among the `2d - 1` vectors `v_{1,t}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{det_s2, kernel_basis, unsatisfied_equations, KernelWitness};
use crate::matrix::Matrix;
use crate::system::parity_sign;
use crate::tensor::{check_dimension, edge_count, edges, Edge, EdgeTensor};

/// `2d` points in a `d`-dimensional space over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    d: usize,
    field: FieldSpec,
    points: Vec<Vec<Scalar>>,
}

impl PointConfig {
    pub fn new(d: usize, field: FieldSpec, points: Vec<Vec<Scalar>>) -> Result<PointConfig> {
        check_dimension(d)?;
        if points.len() != 2 * d {
            return Err(Error::Shape(format!(
                "expected {} points for d={d}, got {}",
                2 * d,
                points.len()
            )));
        }
        for (k, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::Shape(format!(
                    "point {} has {} coordinates, expected {d}",
                    k + 1,
                    p.len()
                )));
            }
            if let Some(s) = p.iter().find(|s| s.field() != field) {
                return Err(Error::FieldMismatch(s.field().to_string(), field.to_string()));
            }
        }
        Ok(PointConfig { d, field, points })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Point `k`, 1-based.
    pub fn point(&self, k: usize) -> &[Scalar] {
        &self.points[k - 1]
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }
}

/// Slot `(i,j)` is `p_j - p_i`.
pub fn points_to_differences(c: &PointConfig) -> EdgeTensor {
    EdgeTensor::from_fn(c.d, c.field, |e| {
        c.point(e.j())
            .iter()
            .zip(c.point(e.i()))
            .map(|(a, b)| a - b)
            .collect()
    })
    .expect("validated configuration")
}

/// Which construction produced the witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessCase {
    /// `Λ = Σ (-1)^t λ_t ≠ 0`.
    #[serde(rename = "I")]
    I,
    /// `Λ = 0`; built around the first nonzero `λ_a`.
    #[serde(rename = "II")]
    II,
    /// All points coincide; any single edge works.
    #[serde(rename = "degenerate")]
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricWitness {
    pub witness: KernelWitness,
    pub case: WitnessCase,
    /// `λ_2, ..., λ_{2d}` from the dependence `Σ (-1)^t λ_t v_{1,t} = 0`.
    pub dependence: Vec<Scalar>,
}

/// Nonzero solution of the system of a difference tensor, verified before return.
pub fn geometric_witness(c: &PointConfig) -> Result<GeometricWitness> {
    let t = points_to_differences(c);
    let d = c.d;
    let n = 2 * d;
    let field = c.field;

    if t.is_zero() {
        let mut coeffs = vec![field.zero(); edge_count(d)];
        coeffs[0] = field.one();
        let witness = KernelWitness::new(d, coeffs)?;
        return Ok(GeometricWitness {
            witness,
            case: WitnessCase::Degenerate,
            dependence: Vec::new(),
        });
    }

    // Columns v_{1,2}, ..., v_{1,2d}: d rows, 2d - 1 > d columns, so the kernel is nonzero.
    let cols: Vec<&[Scalar]> = (2..=n).map(|k| t.get(Edge::new_unchecked(1, k))).collect();
    let m = Matrix::from_rows(
        field,
        (0..d)
            .map(|r| cols.iter().map(|v| v[r].clone()).collect())
            .collect(),
    )?;
    let kernel = kernel_basis(&m);
    let first = kernel
        .first()
        .ok_or_else(|| Error::Invariant("no dependence among 2d-1 vectors in dimension d".into()))?;

    // first[k] multiplies v_{1,k+2}; λ_t = (-1)^t · first[t-2].
    let lambda = |tt: usize| -> Scalar {
        let s = &first[tt - 2];
        if parity_sign(tt) < 0 {
            -s
        } else {
            s.clone()
        }
    };
    let dependence: Vec<Scalar> = (2..=n).map(lambda).collect();
    let lam = |tt: usize| &dependence[tt - 2];
    let big_lambda = (2..=n).fold(field.zero(), |acc, tt| {
        if parity_sign(tt) < 0 {
            &acc - lam(tt)
        } else {
            &acc + lam(tt)
        }
    });

    let mut coeffs = vec![field.zero(); edge_count(d)];
    let case = if !big_lambda.is_zero() {
        let inv = big_lambda.inverse()?;
        for e in edges(d) {
            coeffs[e.index()] = if e.i() == 1 {
                lam(e.j()).clone()
            } else {
                &(lam(e.i()) * lam(e.j())) * &inv
            };
        }
        WitnessCase::I
    } else {
        let a = (2..=n)
            .find(|&k| !lam(k).is_zero())
            .ok_or_else(|| Error::Invariant("dependence vector is zero".into()))?;
        let inv = lam(a).inverse()?;
        for e in edges(d).filter(|e| e.i() >= a) {
            coeffs[e.index()] = &(lam(e.i()) * lam(e.j())) * &inv;
        }
        WitnessCase::II
    };

    let witness = KernelWitness::new(d, coeffs)?;
    let failed = unsatisfied_equations(&t, &witness)?;
    if !failed.is_empty() || !witness.is_nontrivial() {
        return Err(Error::Invariant(format!(
            "geometric witness (case {case:?}) fails equations {failed:?}; points {:?}",
            c.points
                .iter()
                .map(|p| p.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        )));
    }
    Ok(GeometricWitness {
        witness,
        case,
        dependence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub det: Scalar,
    pub witness: GeometricWitness,
}

/// `det^S²` of the difference tensor, required to be exactly zero.
pub fn assert_vanishing(c: &PointConfig) -> Result<VanishingReport> {
    let det = det_s2(&points_to_differences(c));
    let witness = geometric_witness(c)?;
    if !det.is_zero() {
        return Err(Error::Invariant(format!(
            "difference tensor has det^S2 = {det}"
        )));
    }
    Ok(VanishingReport { det, witness })
}
