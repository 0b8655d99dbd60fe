//! Randomized invariants, driven by proptest seeds.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use s2det::field::FieldSpec;
use s2det::geometry::assert_vanishing;
use s2det::io::{instance_to_json, parse_instance};
use s2det::linalg::{det_s2_invariance_check, system_kernel, unsatisfied_equations};
use s2det::oracle::dfs_cycle_check;
use s2det::partitions::{partition_from_index, partition_to_tensor, tensor_to_partition};
use s2det::random::{random_points, random_tensor};
use s2det::system::signed_block_sum;
use s2det::verify::triple_equal_tensor;
use s2det::{det_s2, Edge};

fn field(prime: bool) -> FieldSpec {
    if prime {
        FieldSpec::prime(32003).unwrap()
    } else {
        FieldSpec::rational()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn block_sum_vanishes(seed in any::<u64>(), d in 2usize..=4, prime in any::<bool>()) {
        let t = random_tensor(d, field(prime), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(signed_block_sum(&t).is_zero());
    }

    #[test]
    fn every_omitted_block_gives_the_same_det(seed in any::<u64>(), d in 2usize..=3, prime in any::<bool>()) {
        let t = random_tensor(d, field(prime), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(det_s2_invariance_check(&t).holds());
    }

    #[test]
    fn equal_triangle_kills_det(seed in any::<u64>(), d in 2usize..=3, a in 1usize..=6, b in 1usize..=6, c in 1usize..=6) {
        let mut v = [a, b, c];
        v.sort_unstable();
        prop_assume!(v[0] < v[1] && v[1] < v[2] && v[2] <= 2 * d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = triple_equal_tensor(d, field(true), (v[0], v[1], v[2]), &mut rng);
        prop_assert!(det_s2(&t).is_zero());
        let kernel = system_kernel(&t);
        prop_assert!(!kernel.is_empty());
        for w in &kernel {
            prop_assert!(unsatisfied_equations(&t, w).unwrap().is_empty());
        }
    }

    #[test]
    fn difference_tensors_vanish(seed in any::<u64>(), d in 2usize..=3) {
        let c = random_points(d, field(false), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(assert_vanishing(&c).unwrap().det.is_zero());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), d in 2usize..=4, prime in any::<bool>()) {
        let t = random_tensor(d, field(prime), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_instance(&instance_to_json(&t).to_string()).unwrap(), t);
    }

    #[test]
    fn partitions_round_trip_through_tensors(index in 0u64..3u64.pow(15)) {
        let p = partition_from_index(3, index);
        let t = partition_to_tensor(&p, field(true));
        prop_assert_eq!(tensor_to_partition(&t).unwrap(), p.clone());
        prop_assert_eq!(p.acyclic_by_color(), dfs_cycle_check(&p));
    }

    #[test]
    fn column_index_round_trip(d in 2usize..=8, raw in 1usize..=120) {
        let n = d * (2 * d - 1);
        let idx = 1 + (raw - 1) % n;
        let e = Edge::from_column_index(idx, d).unwrap();
        prop_assert_eq!(e.column_index(), idx);
    }
}
