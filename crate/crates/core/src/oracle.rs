//! Slow, independent reference implementations used to check the production paths.
//!
//! Nothing here shares elimination or graph-search code with [`crate::linalg`]
//! or [`crate::partitions`].

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::det_s2;
use crate::matrix::Matrix;
use crate::partitions::{enumerate_partitions, partition_to_tensor, Partition, SurveyTable};
use crate::system::build_at;
use crate::tensor::{build_ed, edges};

/// Default size cap for [`det_cofactor`].
pub const COFACTOR_CAP: usize = 8;
/// Cap when the override flag is set.
pub const COFACTOR_CAP_OVERRIDE: usize = 15;

/// Laplace expansion along successive rows, memoized on the set of used columns.
pub fn det_cofactor(m: &Matrix, allow_large: bool) -> Result<Scalar> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let cap = if allow_large {
        COFACTOR_CAP_OVERRIDE
    } else {
        COFACTOR_CAP
    };
    if n > cap {
        return Err(Error::OracleTooLarge { n, cap });
    }
    let mut memo: Vec<Option<Scalar>> = vec![None; 1 << n];
    Ok(minor(m, 0, &mut memo))
}

/// Determinant of rows `popcount(used)..n` against the columns not in `used`.
fn minor(m: &Matrix, used: usize, memo: &mut [Option<Scalar>]) -> Scalar {
    let n = m.rows();
    let row = used.count_ones() as usize;
    if row == n {
        return m.field().one();
    }
    if let Some(v) = &memo[used] {
        return v.clone();
    }
    let mut acc = m.field().zero();
    let mut position = 0;
    for c in 0..n {
        if used & (1 << c) != 0 {
            continue;
        }
        let a = m.get(row, c);
        if !a.is_zero() {
            let term = a * &minor(m, used | (1 << c), memo);
            acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        position += 1;
    }
    memo[used] = Some(acc.clone());
    acc
}

/// Textbook Gauss-Jordan over `BigRational` (no integer clearing, no Bareiss).
///
/// Used for golden values whose matrices are too large for the cofactor oracle.
pub fn det_gauss_rational(m: &Matrix) -> Result<Scalar> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.field().is_rational() {
        return Err(Error::Input("det_gauss_rational needs a rational matrix".into()));
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| m.row(r).iter().map(|s| s.as_rational().expect("Q").clone()).collect())
        .collect();
    let mut det = BigRational::from_integer(1.into());
    for col in 0..n {
        // Pivot on the last nonzero row, unlike the production path.
        let Some(p) = (col..n).rev().find(|&r| !a[r][col].is_zero()) else {
            return Ok(m.field().zero());
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    m.field().from_rational(&det)
}

/// Acyclicity of each color class by depth-first search.
pub fn dfs_cycle_check(p: &Partition) -> Vec<bool> {
    let n = 2 * p.d();
    (1..=p.d())
        .map(|color| {
            let mut adj = vec![Vec::new(); n + 1];
            for e in edges(p.d()).filter(|e| p.color(*e) == color) {
                adj[e.i()].push(e.j());
                adj[e.j()].push(e.i());
            }
            let mut seen = vec![false; n + 1];
            for root in 1..=n {
                if seen[root] {
                    continue;
                }
                // (vertex, parent)
                let mut stack = vec![(root, 0usize)];
                seen[root] = true;
                while let Some((v, parent)) = stack.pop() {
                    for &w in &adj[v] {
                        if w == parent {
                            continue;
                        }
                        if seen[w] {
                            return false;
                        }
                        seen[w] = true;
                        stack.push((w, v));
                    }
                }
            }
            true
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustiveReport {
    pub field: String,
    pub total: u64,
    pub table: SurveyTable,
    pub cycle_free_count: u64,
    pub passes: bool,
}

/// All 64 partitions of `K_4`: cycle-free (by DFS) against `det^S² != 0` over `field`.
pub fn exhaustive_d2_report(field: FieldSpec) -> ExhaustiveReport {
    let mut table = SurveyTable::default();
    for p in enumerate_partitions(2, false).expect("d=2 always enumerable") {
        let cycle_free = dfs_cycle_check(&p).iter().all(|&ok| ok);
        let nonzero = !det_s2(&partition_to_tensor(&p, field)).is_zero();
        table.record(cycle_free, nonzero);
    }
    ExhaustiveReport {
        field: field.to_string(),
        total: table.total(),
        cycle_free_count: table.cycle_free(),
        passes: table.disagreements() == 0,
        table,
    }
}

/// Committed reference values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenValues {
    pub generated_by: String,
    /// `det^S²(E_d)` over Q, keyed by `d`.
    pub det_s2_ed: BTreeMap<String, String>,
    /// How each entry was computed.
    pub method: BTreeMap<String, String>,
    /// Number of cycle-free 2-partitions of `K_4`.
    pub d2_cycle_free_count: u64,
}

pub const GOLDEN_COMMAND: &str = "s2det oracle regen --golden crates/core/golden/golden.json";
pub const GOLDEN_MAX_D: usize = 6;

/// The committed golden file.
pub fn committed_golden() -> GoldenValues {
    serde_json::from_str(include_str!("../golden/golden.json")).expect("golden.json parses")
}

/// Recompute every golden value with the oracles.
///
/// `d <= 3` uses the cofactor expansion, larger `d` the plain rational
/// elimination; each value is also checked against the production
/// determinant and a mismatch is an invariant violation.
pub fn generate_golden() -> Result<GoldenValues> {
    let q = FieldSpec::rational();
    let mut det_s2_ed = BTreeMap::new();
    let mut method = BTreeMap::new();
    for d in 2..=GOLDEN_MAX_D {
        let ed = build_ed(d, q)?;
        let a1 = build_at(&ed, 1)?.into_matrix();
        let (value, how) = if d <= 3 {
            (det_cofactor(&a1, true)?, "cofactor expansion of A_1(E_d)")
        } else {
            (det_gauss_rational(&a1)?, "rational Gaussian elimination of A_1(E_d)")
        };
        let production = det_s2(&ed);
        if production != value {
            return Err(Error::Invariant(format!(
                "d={d}: oracle gives {value}, production gives {production}"
            )));
        }
        det_s2_ed.insert(d.to_string(), value.to_string());
        method.insert(d.to_string(), how.to_string());
    }
    let report = exhaustive_d2_report(q);
    if !report.passes {
        return Err(Error::Invariant(format!(
            "d=2 exhaustive table has disagreements: {:?}",
            report.table
        )));
    }
    Ok(GoldenValues {
        generated_by: GOLDEN_COMMAND.to_string(),
        det_s2_ed,
        method,
        d2_cycle_free_count: report.cycle_free_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det_exact;
    use crate::partitions::{plant_cycle, sample_partitions, tensor_to_partition};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_caps() {
        let q = FieldSpec::rational();
        assert!(det_cofactor(&Matrix::identity(q, 8), false).unwrap().is_one());
        assert!(matches!(
            det_cofactor(&Matrix::identity(q, 9), false),
            Err(Error::OracleTooLarge { n: 9, cap: 8 })
        ));
        assert!(det_cofactor(&Matrix::identity(q, 15), true).unwrap().is_one());
        assert!(det_cofactor(&Matrix::identity(q, 16), true).is_err());
        assert!(det_cofactor(&Matrix::zeros(q, 2, 3), false).is_err());
    }

    #[test]
    fn a1_of_e2() {
        // A_1(E_2) has exactly one nonzero permutation term; its value is -1.
        let q = FieldSpec::rational();
        let a1 = build_at(&build_ed(2, q).unwrap(), 1).unwrap().into_matrix();
        let v = det_cofactor(&a1, false).unwrap();
        assert_eq!(v, q.from_i64(-1));
        assert_eq!(det_exact(&a1).unwrap(), v);
        assert_eq!(det_gauss_rational(&a1).unwrap(), v);
    }

    #[test]
    fn agrees_with_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [FieldSpec::rational(), FieldSpec::prime(32003).unwrap()] {
            for n in 1..=6 {
                let m = crate::random::random_matrix(f, n, &mut rng);
                assert_eq!(det_cofactor(&m, false).unwrap(), det_exact(&m).unwrap());
                if f.is_rational() {
                    assert_eq!(det_gauss_rational(&m).unwrap(), det_exact(&m).unwrap());
                }
            }
        }
    }

    #[test]
    fn dfs_matches_union_find() {
        let gamma = tensor_to_partition(&build_ed(3, FieldSpec::rational()).unwrap()).unwrap();
        assert_eq!(dfs_cycle_check(&gamma), vec![true; 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let four = plant_cycle(3, &[1, 4, 2, 6], 3, &mut rng).unwrap();
        assert!(!dfs_cycle_check(&four)[2]);
        for p in sample_partitions(3, 2000, 77) {
            assert_eq!(dfs_cycle_check(&p), p.acyclic_by_color());
        }
    }

    #[test]
    fn d2_report() {
        let rep = exhaustive_d2_report(FieldSpec::rational());
        assert_eq!(rep.total, 64);
        assert!(rep.passes);
        assert_eq!(rep.cycle_free_count, committed_golden().d2_cycle_free_count);
    }
}
