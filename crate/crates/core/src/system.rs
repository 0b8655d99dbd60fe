//! The linear system attached to an [`EdgeTensor`].
//!
//! Equation `k` (one per vertex of `K_{2d}`) reads
//!
//! ```text
//!   sum_{s<k} (-1)^(s-1) λ_{s,k} v_{s,k}  +  sum_{t>k} (-1)^t λ_{k,t} v_{k,t}  =  0
//! ```
//!
//! It contributes a `d x d(2d-1)` block `M_k`. Stacking all `2d` blocks gives
//! `A`; dropping block `t` gives the square matrix `A_t`.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::tensor::{edge_count, edges, Edge, EdgeTensor};

/// Rows contributed by one vector equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowBlock {
    /// 1-based equation (vertex) index `k`.
    pub equation: usize,
    /// 0-based first row.
    pub start: usize,
    pub len: usize,
}

/// A matrix built from the system, with block and column provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemMatrix {
    d: usize,
    matrix: Matrix,
    row_blocks: Vec<RowBlock>,
}

impl SystemMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn row_blocks(&self) -> &[RowBlock] {
        &self.row_blocks
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    /// Edge encoded by each column, in order.
    pub fn col_edges(&self) -> Vec<Edge> {
        edges(self.d).collect()
    }

    /// The rows of equation `k` as a standalone matrix, if present.
    pub fn block(&self, k: usize) -> Option<Matrix> {
        self.row_blocks
            .iter()
            .find(|b| b.equation == k)
            .map(|b| self.matrix.row_slice(b.start, b.len))
    }
}

/// `(-1)^n` as an integer.
#[inline]
pub fn parity_sign(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Coefficient attached to edge `e` in equation `k`, or `None` when `e` is not incident to `k`.
///
/// `(-1)^(s-1)` for `e = (s,k)`, `(-1)^t` for `e = (k,t)`.
pub fn equation_sign(e: Edge, k: usize) -> Option<i64> {
    if e.j() == k {
        Some(parity_sign(e.i() - 1))
    } else if e.i() == k {
        Some(parity_sign(e.j()))
    } else {
        None
    }
}

fn check_equation(k: usize, d: usize) -> Result<()> {
    if k == 0 || k > 2 * d {
        return Err(Error::BadEquation { k, max: 2 * d });
    }
    Ok(())
}

fn signed(s: &Scalar, sign: i64) -> Scalar {
    if sign < 0 {
        -s
    } else {
        s.clone()
    }
}

fn stack(t: &EdgeTensor, equations: impl Iterator<Item = usize>) -> SystemMatrix {
    let d = t.d();
    let equations: Vec<usize> = equations.collect();
    let mut matrix = Matrix::zeros(t.field(), d * equations.len(), edge_count(d));
    let mut row_blocks = Vec::with_capacity(equations.len());
    for (b, &k) in equations.iter().enumerate() {
        let start = b * d;
        row_blocks.push(RowBlock {
            equation: k,
            start,
            len: d,
        });
        for e in edges(d).filter(|e| e.contains(k)) {
            let sign = equation_sign(e, k).expect("edge is incident to k");
            for (r, s) in t.get(e).iter().enumerate() {
                if !s.is_zero() {
                    matrix.set(start + r, e.index(), signed(s, sign));
                }
            }
        }
    }
    SystemMatrix {
        d,
        matrix,
        row_blocks,
    }
}

/// `M_k`: the `d x d(2d-1)` matrix of equation `k`.
pub fn build_mk(t: &EdgeTensor, k: usize) -> Result<SystemMatrix> {
    check_equation(k, t.d())?;
    Ok(stack(t, std::iter::once(k)))
}

/// `A`: all blocks `M_1, ..., M_{2d}` stacked in order.
pub fn build_a(t: &EdgeTensor) -> SystemMatrix {
    stack(t, 1..=2 * t.d())
}

/// `A_t`: `A` with block `omit` removed; square of side `d(2d-1)`.
pub fn build_at(t: &EdgeTensor, omit: usize) -> Result<SystemMatrix> {
    check_equation(omit, t.d())?;
    Ok(stack(t, (1..=2 * t.d()).filter(|&k| k != omit)))
}

/// `sum_k (-1)^(k-1) M_k`; identically zero for every tensor.
pub fn signed_block_sum(t: &EdgeTensor) -> Matrix {
    let a = build_a(t);
    let d = t.d();
    let mut acc = Matrix::zeros(t.field(), d, edge_count(d));
    for block in a.row_blocks() {
        let sign = parity_sign(block.equation - 1);
        for r in 0..d {
            for c in 0..edge_count(d) {
                let term = signed(a.matrix().get(block.start + r, c), sign);
                let next = acc.get(r, c) + &term;
                acc.set(r, c, next);
            }
        }
    }
    acc
}

/// Column relation forced by `v_{x,y} = v_{x,z} = v_{y,z}`:
/// `(-1)^z c_{x,y} - (-1)^y c_{x,z} + (-1)^x c_{y,z} = 0`.
///
/// Returns the three edges with their integer coefficients.
pub fn triple_column_relation(x: usize, y: usize, z: usize) -> [(Edge, i64); 3] {
    assert!(x < y && y < z, "triple must be strictly increasing");
    [
        (Edge::new_unchecked(x, y), parity_sign(z)),
        (Edge::new_unchecked(x, z), -parity_sign(y)),
        (Edge::new_unchecked(y, z), parity_sign(x)),
    ]
}
