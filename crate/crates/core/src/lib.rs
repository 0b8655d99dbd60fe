//! Exact construction of the `det^S²` multilinear map on `V_d^{⊗ d(2d-1)}`.
//!
//! Inputs are assignments of a vector `v_{i,j}` in a `d`-dimensional space to
//! every edge of the complete graph `K_{2d}`. The map is the determinant of a
//! square signed block matrix built from those vectors; it vanishes whenever
//! the three edges of some triangle carry the same vector.

pub mod error;
pub mod field;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod partitions;
pub mod random;
pub mod system;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use geometry::{geometric_witness, points_to_differences, PointConfig, WitnessCase};
pub use linalg::{det_exact, det_s2, kernel_basis, KernelWitness};
pub use matrix::Matrix;
pub use partitions::{partition_to_tensor, tensor_to_partition, triple_flip, Partition};
pub use system::{build_a, build_at, build_mk, SystemMatrix};
pub use tensor::{build_ed, Edge, EdgeTensor};
