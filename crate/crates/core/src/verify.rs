//! Seeded property suites behind the `verify` command.
//!
//! Trial `i` of suite `s` draws from its own ChaCha stream `(s, i)`, so trials
//! can run in parallel and the report is identical for any thread count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::geometry::{geometric_witness, points_to_differences, WitnessCase};
use crate::io::{instance_to_json, partition_to_json, points_to_json};
use crate::linalg::{
    det_exact, det_s2, det_s2_invariance_check, kernel_basis, multilinearity_check, system_kernel,
};
use crate::oracle::{det_cofactor, dfs_cycle_check};
use crate::partitions::{
    partition_to_tensor, random_homogeneous, random_partition, triple_flip,
};
use crate::random::{random_matrix, random_points, random_scalar, random_tensor, random_vector};
use crate::system::{build_at, signed_block_sum, triple_column_relation};
use crate::tensor::{edge_count, Edge, EdgeTensor};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    /// Field for the random-tensor suites.
    pub field: FieldSpec,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// First failing instance, serialized for replay.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    /// Suite-specific counters.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub stats: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    pub field: String,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

/// Outcome of one trial: `Err` carries the counterexample.
type Trial = std::result::Result<Option<&'static str>, Value>;

pub fn trial_rng(seed: u64, suite: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite << 32) | trial);
    rng
}

fn run_suite<F>(name: &'static str, index: u64, cfg: &VerifyConfig, f: F) -> SuiteResult
where
    F: Fn(&mut ChaCha8Rng) -> Trial + Sync,
{
    let outcomes: Vec<Trial> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| f(&mut trial_rng(cfg.seed, index, i)))
        .collect();
    let mut failures = 0;
    let mut counterexample = None;
    let mut tags = std::collections::BTreeMap::<&str, usize>::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(Some(tag)) => *tags.entry(tag).or_default() += 1,
            Ok(None) => {}
            Err(v) => {
                failures += 1;
                if counterexample.is_none() {
                    counterexample = Some(json!({ "trial": i, "instance": v }));
                }
            }
        }
    }
    SuiteResult {
        name,
        trials: cfg.trials,
        failures,
        counterexample,
        stats: if tags.is_empty() { Value::Null } else { json!(tags) },
    }
}

fn random_triple<R: Rng>(d: usize, rng: &mut R) -> (usize, usize, usize) {
    let n = 2 * d;
    loop {
        let mut v = [rng.gen_range(1..=n), rng.gen_range(1..=n), rng.gen_range(1..=n)];
        v.sort_unstable();
        if v[0] < v[1] && v[1] < v[2] {
            return (v[0], v[1], v[2]);
        }
    }
}

/// Random tensor with the three slots of triangle `(x,y,z)` set to one random vector.
pub fn triple_equal_tensor<R: Rng>(
    d: usize,
    field: FieldSpec,
    (x, y, z): (usize, usize, usize),
    rng: &mut R,
) -> EdgeTensor {
    let mut t = random_tensor(d, field, rng);
    let w = random_vector(field, d, rng);
    for (e, _) in triple_column_relation(x, y, z) {
        t = t.with_slot(e, w.clone()).expect("valid slot");
    }
    t
}

pub fn block_dependence(cfg: &VerifyConfig) -> SuiteResult {
    run_suite("block_dependence", 1, cfg, |rng| {
        let t = random_tensor(cfg.d, cfg.field, rng);
        if signed_block_sum(&t).is_zero() {
            Ok(None)
        } else {
            Err(instance_to_json(&t))
        }
    })
}

pub fn invariance(cfg: &VerifyConfig) -> SuiteResult {
    run_suite("invariance", 2, cfg, |rng| {
        let t = random_tensor(cfg.d, cfg.field, rng);
        let rep = det_s2_invariance_check(&t);
        if rep.holds() {
            Ok(None)
        } else {
            Err(json!({ "tensor": instance_to_json(&t), "per_omit": rep.per_omit }))
        }
    })
}

pub fn vanishing(cfg: &VerifyConfig) -> SuiteResult {
    run_suite("vanishing", 3, cfg, |rng| {
        let triple = random_triple(cfg.d, rng);
        let t = triple_equal_tensor(cfg.d, cfg.field, triple, rng);
        let det = det_s2(&t);
        if det.is_zero() {
            Ok(None)
        } else {
            Err(json!({ "triple": [triple.0, triple.1, triple.2], "tensor": instance_to_json(&t), "det": det }))
        }
    })
}

pub fn multilinearity(cfg: &VerifyConfig) -> SuiteResult {
    run_suite("multilinearity", 4, cfg, |rng| {
        let d = cfg.d;
        let t = random_tensor(d, cfg.field, rng);
        let e = Edge::from_column_index(rng.gen_range(1..=edge_count(d)), d).expect("in range");
        let u = random_vector(cfg.field, d, rng);
        let v = random_vector(cfg.field, d, rng);
        let a = random_scalar(cfg.field, rng);
        let b = random_scalar(cfg.field, rng);
        match multilinearity_check(&t, e, &u, &v, &a, &b) {
            Ok(r) if r.holds => Ok(None),
            other => Err(json!({
                "tensor": instance_to_json(&t), "edge": e.key(),
                "u": u, "v": v, "a": a, "b": b,
                "report": other.ok(),
            })),
        }
    })
}

/// `det^S² = 0` iff `A_1` has a kernel iff `A` has a kernel, on a half-degenerate mix.
pub fn kernel_equivalence(cfg: &VerifyConfig) -> SuiteResult {
    run_suite("kernel_equivalence", 5, cfg, |rng| {
        let t = if rng.gen_bool(0.5) {
            let triple = random_triple(cfg.d, rng);
            triple_equal_tensor(cfg.d, cfg.field, triple, rng)
        } else {
            random_tensor(cfg.d, cfg.field, rng)
        };
        let zero = det_s2(&t).is_zero();
        let k1 = !kernel_basis(build_at(&t, 1).expect("omit 1").matrix()).is_empty();
        let ka = !system_kernel(&t).is_empty();
        if zero == k1 && k1 == ka {
            Ok(Some(if zero { "singular" } else { "regular" }))
        } else {
            Err(json!({ "tensor": instance_to_json(&t), "det_zero": zero, "kernel_a1": k1, "kernel_a": ka }))
        }
    })
}

pub fn geometry(cfg: &VerifyConfig) -> SuiteResult {
    run_suite("geometry", 6, cfg, |rng| {
        let c = random_points(cfg.d, cfg.field, rng);
        let det = det_s2(&points_to_differences(&c));
        match geometric_witness(&c) {
            Ok(w) if det.is_zero() => Ok(Some(match w.case {
                WitnessCase::I => "case_I",
                WitnessCase::II => "case_II",
                WitnessCase::Degenerate => "degenerate",
            })),
            other => Err(json!({
                "points": points_to_json(&c), "det": det,
                "witness_error": other.err().map(|e| e.to_string()),
            })),
        }
    })
}

pub fn partition_theorem(cfg: &VerifyConfig) -> SuiteResult {
    run_suite("partition_theorem", 7, cfg, |rng| {
        let p = random_partition(cfg.d, rng);
        let cf = p.is_cycle_free();
        let nz = !det_s2(&partition_to_tensor(&p, cfg.field)).is_zero();
        if cf == nz {
            Ok(Some(if cf { "cycle_free" } else { "cyclic" }))
        } else {
            Err(json!({ "partition": partition_to_json(&p), "cycle_free": cf, "det_nonzero": nz }))
        }
    })
}

/// Triple flips, always over Q since signs collapse in characteristic 2: existence, uniqueness, involution and sign reversal.
pub fn flip_antisymmetry(cfg: &VerifyConfig) -> SuiteResult {
    let q = FieldSpec::rational();
    run_suite("flip_antisymmetry", 8, cfg, |rng| {
        let p = loop {
            let p = random_homogeneous(cfg.d, rng);
            if p.is_cycle_free() {
                break p;
            }
        };
        let (x, y, z) = random_triple(cfg.d, rng);
        let fail = |why: String| json!({ "partition": partition_to_json(&p), "triple": [x, y, z], "error": why });
        let f = triple_flip(&p, x, y, z).map_err(|e| fail(e.to_string()))?;
        let back = triple_flip(&f, x, y, z).map_err(|e| fail(e.to_string()))?;
        if back != p {
            return Err(fail("flip is not an involution".into()));
        }
        let a = det_s2(&partition_to_tensor(&p, q));
        let b = det_s2(&partition_to_tensor(&f, q));
        if a != -&b || a.is_zero() {
            return Err(fail(format!("det {a} vs flipped {b}")));
        }
        Ok(None)
    })
}

pub fn oracle_agreement(cfg: &VerifyConfig) -> SuiteResult {
    run_suite("oracle_agreement", 9, cfg, |rng| {
        let n = rng.gen_range(2..=8);
        let m = random_matrix(cfg.field, n, rng);
        let fast = det_exact(&m).expect("square");
        let slow = det_cofactor(&m, false).expect("n <= 8");
        let p = random_partition(cfg.d, rng);
        if fast != slow {
            return Err(json!({ "matrix": m.to_strings(), "det_exact": fast, "det_cofactor": slow }));
        }
        if p.acyclic_by_color() != dfs_cycle_check(&p) {
            return Err(json!({ "partition": partition_to_json(&p) }));
        }
        Ok(None)
    })
}

/// Every suite, in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Result<VerifyReport> {
    crate::tensor::check_dimension(cfg.d)?;
    if cfg.d > 8 {
        return Err(Error::Input(format!("verify supports d <= 8, got {}", cfg.d)));
    }
    let suites = vec![
        block_dependence(cfg),
        invariance(cfg),
        vanishing(cfg),
        multilinearity(cfg),
        kernel_equivalence(cfg),
        geometry(cfg),
        partition_theorem(cfg),
        flip_antisymmetry(cfg),
        oracle_agreement(cfg),
    ];
    let passed = suites.iter().all(|s| s.failures == 0);
    Ok(VerifyReport {
        d: cfg.d,
        trials: cfg.trials,
        seed: cfg.seed,
        field: cfg.field.to_string(),
        suites,
        passed,
    })
}

/// Scalars serialize as strings; handy for building reports.
pub fn scalar_json(s: &Scalar) -> Value {
    Value::from(s.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_reproducible() {
        let cfg = VerifyConfig {
            d: 2,
            trials: 20,
            seed: 7,
            field: FieldSpec::prime(32003).unwrap(),
        };
        let a = run_all(&cfg).unwrap();
        assert!(a.passed, "{}", serde_json::to_string_pretty(&a).unwrap());
        let b = run_all(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn rejects_bad_dimension() {
        let cfg = VerifyConfig {
            d: 1,
            trials: 1,
            seed: 0,
            field: FieldSpec::rational(),
        };
        assert!(run_all(&cfg).is_err());
    }
}
