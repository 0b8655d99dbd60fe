//! Seeded generators for tensors, points and matrices.

use rand::Rng;

use crate::field::{FieldSpec, Scalar};
use crate::geometry::PointConfig;
use crate::matrix::Matrix;
use crate::tensor::EdgeTensor;

/// Uniform residue over GF(p); over Q a small fraction `n/m`, `|n| <= 9`, `1 <= m <= 5`.
pub fn random_scalar<R: Rng>(field: FieldSpec, rng: &mut R) -> Scalar {
    match field.modulus() {
        Some(p) => field.from_i64(rng.gen_range(0..p) as i64),
        None => field
            .from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
            .expect("nonzero denominator"),
    }
}

pub fn random_vector<R: Rng>(field: FieldSpec, d: usize, rng: &mut R) -> Vec<Scalar> {
    (0..d).map(|_| random_scalar(field, rng)).collect()
}

pub fn random_tensor<R: Rng>(d: usize, field: FieldSpec, rng: &mut R) -> EdgeTensor {
    EdgeTensor::from_fn(d, field, |_| random_vector(field, d, rng)).expect("d >= 2")
}

pub fn random_matrix<R: Rng>(field: FieldSpec, n: usize, rng: &mut R) -> Matrix {
    Matrix::from_rows(
        field,
        (0..n).map(|_| random_vector(field, n, rng)).collect(),
    )
    .expect("consistent shape")
}

/// Points with small coordinates (`-2..=2` over `1..=2` for Q), so
/// coincidences and special dependences occur with visible frequency.
pub fn random_points<R: Rng>(d: usize, field: FieldSpec, rng: &mut R) -> PointConfig {
    let points = (0..2 * d)
        .map(|_| {
            (0..d)
                .map(|_| match field.modulus() {
                    Some(p) => field.from_i64(rng.gen_range(0..p.min(5)) as i64),
                    None => field
                        .from_ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2))
                        .expect("nonzero denominator"),
                })
                .collect()
        })
        .collect();
    PointConfig::new(d, field, points).expect("well-formed")
}

/// Points with generic rational coordinates (`|n| <= 50`, `1 <= m <= 7`).
pub fn random_generic_points<R: Rng>(d: usize, field: FieldSpec, rng: &mut R) -> PointConfig {
    let points = (0..2 * d)
        .map(|_| {
            (0..d)
                .map(|_| match field.modulus() {
                    Some(_) => random_scalar(field, rng),
                    None => field
                        .from_ratio(rng.gen_range(-50..=50), rng.gen_range(1..=7))
                        .expect("nonzero denominator"),
                })
                .collect()
        })
        .collect();
    PointConfig::new(d, field, points).expect("well-formed")
}
