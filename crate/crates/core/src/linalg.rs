//! Exact determinants and kernels, and the `det^S²` map built on them.
//!
//! `det^S²(t)` is defined as `det(A_1(t))` with colex columns and blocks in
//! increasing equation order. Any other ordering flips signs, so the layout in
//! [`crate::system`] is part of the contract.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{inv_mod, mul_mod, sub_mod, Scalar};
use crate::matrix::Matrix;
use crate::system::{build_a, build_at, build_mk};
use crate::tensor::{edges, Edge, EdgeTensor};

/// Exact determinant of a square matrix.
///
/// Over Q each row is scaled to integers, the integer matrix goes through
/// Bareiss elimination and the scale factors are divided back out. Over a
/// prime field this is plain elimination. Pivots are the first nonzero entry
/// in the column.
pub fn det_exact(m: &Matrix) -> Result<Scalar> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    match m.field().modulus() {
        None => Ok(det_rational(m)),
        Some(p) => Ok(Scalar::from_residue(det_mod_p(residues(m), m.rows(), p), p)),
    }
}

fn residues(m: &Matrix) -> Vec<u64> {
    (0..m.rows())
        .flat_map(|r| m.row(r).iter().map(|s| s.residue().expect("prime-field entry")))
        .collect()
}

fn det_rational(m: &Matrix) -> Scalar {
    let n = m.rows();
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let entries: Vec<&BigRational> = m
            .row(r)
            .iter()
            .map(|s| s.as_rational().expect("rational entry"))
            .collect();
        let lcm = entries
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        rows.push(
            entries
                .iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect::<Vec<BigInt>>(),
        );
        scale *= lcm;
    }
    let det = bareiss(rows);
    Scalar::from_big_rational(BigRational::new(det, scale))
}

/// Fraction-free elimination; every division is exact.
pub(crate) fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let factor = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let mut v = &row[j] * pivot;
                if !factor.is_zero() {
                    v -= &factor * &pivot_row[j];
                }
                row[j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Determinant of a row-major `n x n` residue matrix modulo `p`.
pub(crate) fn det_mod_p(mut a: Vec<u64>, n: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| a[r * n + k] != 0) else {
            return 0;
        };
        if r != k {
            for c in k..n {
                a.swap(r * n + c, k * n + c);
            }
            det = sub_mod(0, det, p);
        }
        let pivot = a[k * n + k];
        det = mul_mod(det, pivot, p);
        let inv = inv_mod(pivot, p);
        for r in k + 1..n {
            let f = a[r * n + k];
            if f == 0 {
                continue;
            }
            let f = mul_mod(f, inv, p);
            for c in k + 1..n {
                let sub = mul_mod(f, a[k * n + c], p);
                a[r * n + c] = sub_mod(a[r * n + c], sub, p);
            }
            a[r * n + k] = 0;
        }
    }
    det
}

/// Reduced row echelon form: returns the reduced matrix and pivot columns.
fn rref(m: &Matrix) -> Result<(Vec<Vec<Scalar>>, Vec<usize>)> {
    let mut a: Vec<Vec<Scalar>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let inv = a[row][col].inverse()?;
        for c in col..m.cols() {
            a[row][c] = a[row][c].try_mul(&inv)?;
        }
        for r in 0..a.len() {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..m.cols() {
                let v = a[r][c].try_sub(&f.try_mul(&a[row][c])?)?;
                a[r][c] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    Ok((a, pivots))
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).map(|(_, p)| p.len()).unwrap_or(0)
}

/// Null-space basis from the reduced echelon form, one vector per free column.
///
/// Each vector is scaled so that its first nonzero coordinate is 1. The list
/// is empty exactly when the kernel is trivial.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    let field = m.field();
    let (a, pivots) = rref(m).expect("rref over a single field");
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); m.cols()];
        v[free] = field.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&a[r][free];
        }
        let lead = v.iter().find(|s| !s.is_zero()).cloned().expect("free entry is 1");
        let inv = lead.inverse().expect("nonzero lead");
        basis.push(v.iter().map(|s| s * &inv).collect());
    }
    basis
}

/// Coefficients `λ_{i,j}` (colex order) of a solution of the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelWitness {
    d: usize,
    coeffs: Vec<Scalar>,
}

impl KernelWitness {
    pub fn new(d: usize, coeffs: Vec<Scalar>) -> Result<KernelWitness> {
        let want = crate::tensor::edge_count(d);
        if coeffs.len() != want {
            return Err(Error::Shape(format!(
                "witness has {} coefficients, expected {want}",
                coeffs.len()
            )));
        }
        Ok(KernelWitness { d, coeffs })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, e: Edge) -> &Scalar {
        &self.coeffs[e.index()]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_nontrivial(&self) -> bool {
        self.coeffs.iter().any(|s| !s.is_zero())
    }

    /// Edges with a nonzero coefficient.
    pub fn support(&self) -> Vec<Edge> {
        edges(self.d)
            .filter(|e| !self.coeffs[e.index()].is_zero())
            .collect()
    }

    /// `"i,j" -> coefficient` pairs in colex order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        edges(self.d)
            .map(|e| (e.key(), self.coeffs[e.index()].to_string()))
            .collect()
    }
}

/// Kernel of the full matrix `A(t)` as witnesses.
pub fn system_kernel(t: &EdgeTensor) -> Vec<KernelWitness> {
    kernel_basis(build_a(t).matrix())
        .into_iter()
        .map(|coeffs| KernelWitness { d: t.d(), coeffs })
        .collect()
}

/// Indices `k` of the equations the witness fails to satisfy.
pub fn unsatisfied_equations(t: &EdgeTensor, w: &KernelWitness) -> Result<Vec<usize>> {
    if w.d != t.d() {
        return Err(Error::Shape(format!(
            "witness for d={} against tensor with d={}",
            w.d,
            t.d()
        )));
    }
    let mut failed = Vec::new();
    for k in 1..=2 * t.d() {
        let mk = build_mk(t, k)?;
        if !mk.matrix().mul_vec(&w.coeffs)?.iter().all(Scalar::is_zero) {
            failed.push(k);
        }
    }
    Ok(failed)
}

/// `det^S²(t) = det(A_1(t))`.
pub fn det_s2(t: &EdgeTensor) -> Scalar {
    det_at(t, 1).expect("equation 1 always exists")
}

/// `det(A_omit(t))`.
pub fn det_at(t: &EdgeTensor, omit: usize) -> Result<Scalar> {
    det_exact(build_at(t, omit)?.matrix())
}

/// `det(A_t)` for every `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub per_omit: Vec<Scalar>,
    /// The shared value when all agree.
    pub common: Option<Scalar>,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.common.is_some()
    }
}

pub fn det_s2_invariance_check(t: &EdgeTensor) -> InvarianceReport {
    let per_omit: Vec<Scalar> = (1..=2 * t.d())
        .map(|k| det_at(t, k).expect("k in range"))
        .collect();
    let common = per_omit
        .iter()
        .all(|v| *v == per_omit[0])
        .then(|| per_omit[0].clone());
    InvarianceReport { per_omit, common }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultilinearityReport {
    /// `det^S²` with slot `e := a·u + b·v`.
    pub combined: Scalar,
    /// `a·det^S²(e := u) + b·det^S²(e := v)`.
    pub expanded: Scalar,
    pub holds: bool,
}

/// Compare both sides of linearity in slot `e`.
pub fn multilinearity_check(
    t: &EdgeTensor,
    e: Edge,
    u: &[Scalar],
    v: &[Scalar],
    a: &Scalar,
    b: &Scalar,
) -> Result<MultilinearityReport> {
    let field = t.field();
    if u.len() != t.d() || v.len() != t.d() {
        return Err(Error::Shape(format!(
            "slot vectors must have length {}, got {} and {}",
            t.d(),
            u.len(),
            v.len()
        )));
    }
    for s in u.iter().chain(v).chain([a, b]) {
        if s.field() != field {
            return Err(Error::FieldMismatch(s.field().to_string(), field.to_string()));
        }
    }
    let mix: Vec<Scalar> = u.iter().zip(v).map(|(x, y)| &(a * x) + &(b * y)).collect();
    let combined = det_s2(&t.with_slot(e, mix)?);
    let expanded = &(a * &det_s2(&t.with_slot(e, u.to_vec())?))
        + &(b * &det_s2(&t.with_slot(e, v.to_vec())?));
    let holds = combined == expanded;
    Ok(MultilinearityReport {
        combined,
        expanded,
        holds,
    })
}

/// `det^S²` over GF(p) of a tensor whose entries are small integers.
///
/// Used by the partition survey hot loop; equals [`det_s2`] on the
/// corresponding prime-field tensor.
pub fn det_s2_residues(d: usize, slots: &[Vec<i64>], p: u64) -> u64 {
    let n = crate::tensor::edge_count(d);
    let mut a = vec![0u64; n * n];
    for (b, k) in (2..=2 * d).enumerate() {
        for e in edges(d).filter(|e| e.contains(k)) {
            let sign = crate::system::equation_sign(e, k).expect("incident");
            for (r, &x) in slots[e.index()].iter().enumerate() {
                a[(b * d + r) * n + e.index()] = (x * sign).rem_euclid(p as i64) as u64;
            }
        }
    }
    det_mod_p(a, n, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::tensor::build_ed;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    #[test]
    fn identity_and_repeated_rows() {
        for f in [q(), FieldSpec::prime(32003).unwrap()] {
            assert!(det_exact(&Matrix::identity(f, 6)).unwrap().is_one());
            let m = Matrix::from_i64(f, &[vec![1, 2, 3], vec![4, 5, 6], vec![1, 2, 3]]).unwrap();
            assert!(det_exact(&m).unwrap().is_zero());
            assert!(det_exact(&Matrix::identity(f, 0)).unwrap().is_one());
        }
    }

    #[test]
    fn small_known_determinants() {
        let m = Matrix::from_i64(q(), &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(det_exact(&m).unwrap(), q().from_i64(-1));
        let m = Matrix::from_i64(q(), &[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]).unwrap();
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(det_exact(&m).unwrap().is_zero());
        let m = Matrix::from_rows(
            q(),
            vec![
                vec![q().from_ratio(1, 2).unwrap(), q().from_ratio(1, 3).unwrap()],
                vec![q().from_ratio(1, 4).unwrap(), q().from_ratio(1, 5).unwrap()],
            ],
        )
        .unwrap();
        // 1/10 - 1/12 = 1/60
        assert_eq!(det_exact(&m).unwrap(), q().from_ratio(1, 60).unwrap());
        let gf = FieldSpec::prime(7).unwrap();
        let m = Matrix::from_i64(gf, &[vec![3, 5], vec![2, 6]]).unwrap();
        assert_eq!(det_exact(&m).unwrap(), gf.from_i64(18 - 10));
    }

    #[test]
    fn non_square_is_an_error() {
        let m = Matrix::zeros(q(), 2, 3);
        assert_eq!(det_exact(&m), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn kernel_shapes() {
        assert!(kernel_basis(&Matrix::identity(q(), 4)).is_empty());
        let z = Matrix::zeros(q(), 8, 6);
        let k = kernel_basis(&z);
        assert_eq!(k.len(), 6);
        for v in &k {
            assert!(v.iter().find(|s| !s.is_zero()).unwrap().is_one());
        }
        let m = Matrix::from_i64(q(), &[vec![1, 2, 3], vec![2, 4, 6]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn e2_value_and_invariance() {
        let e2 = build_ed(2, q()).unwrap();
        // Colex column order: the single surviving permutation is odd.
        assert_eq!(det_s2(&e2), q().from_i64(-1));
        let rep = det_s2_invariance_check(&e2);
        assert_eq!(rep.per_omit, vec![q().from_i64(-1); 4]);
        assert!(system_kernel(&e2).is_empty());
        assert!(kernel_basis(build_at(&e2, 1).unwrap().matrix()).is_empty());
    }

    #[test]
    fn zero_tensor() {
        let z = EdgeTensor::zero(3, q()).unwrap();
        let rep = det_s2_invariance_check(&z);
        assert!(rep.per_omit.iter().all(Scalar::is_zero));
        assert!(rep.holds());
        assert_eq!(system_kernel(&z).len(), 15);
    }

    #[test]
    fn residue_fast_path_matches() {
        let p = 32003;
        let gf = FieldSpec::prime(p).unwrap();
        for d in 2..=4 {
            let t = build_ed(d, gf).unwrap();
            let slots: Vec<Vec<i64>> = t
                .slots()
                .iter()
                .map(|v| v.iter().map(|s| s.residue().unwrap() as i64).collect())
                .collect();
            assert_eq!(Some(det_s2_residues(d, &slots, p)), det_s2(&t).residue());
        }
    }

    #[test]
    fn multilinearity_trivial_cases() {
        let e2 = build_ed(2, q()).unwrap();
        let e = Edge::new(2, 4, 2).unwrap();
        let u = vec![q().from_i64(3), q().from_i64(-1)];
        let v = vec![q().from_i64(2), q().from_i64(5)];
        let r = multilinearity_check(&e2, e, &u, &v, &q().one(), &q().zero()).unwrap();
        assert!(r.holds);
        assert_eq!(r.combined, det_s2(&e2.with_slot(e, u.clone()).unwrap()));
        let r = multilinearity_check(&e2, e, &u, &u, &q().one(), &-q().one()).unwrap();
        assert!(r.holds && r.combined.is_zero());
        assert!(multilinearity_check(&e2, e, &u[..1], &v, &q().one(), &q().one()).is_err());
    }
}
