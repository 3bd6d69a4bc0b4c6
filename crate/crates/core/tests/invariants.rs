//! Cross-module invariants on small cases.

use parclass_core::classes::{parabolic_class_count, Counting, OrbitCache};
use parclass_core::cocentralizer::CocentShape;
use parclass_core::matproblem::{count_orbits, type_classify, TypeKind};
use parclass_core::oracle::{Oracle, DEFAULT_ORACLE_BUDGET};
use parclass_core::{Field, Partition};

const SHAPE_BUDGET: u64 = 1 << 20;

#[test]
fn finite_type_counts_agree_across_small_fields() {
    let fields: Vec<Field> = [2, 3, 4].iter().map(|&q| Field::of_order(q).unwrap()).collect();
    let parts: Vec<Partition> = (1..=5).flat_map(Partition::all).collect();
    let mut compared = 0;
    for mu in &parts {
        for nu in &parts {
            assert_eq!(type_classify(mu, nu).kind, TypeKind::Finite);
            let mut seen = None;
            for k in &fields {
                let shape = CocentShape::new(mu, nu, k).unwrap();
                let points = (k.order() as u64).checked_pow(shape.dim() as u32);
                if points.is_none_or(|p| p > SHAPE_BUDGET) {
                    continue;
                }
                let c = count_orbits(&shape, SHAPE_BUDGET).unwrap();
                assert_eq!(*seen.get_or_insert(c), c, "({mu})x({nu}) over F_{}", k.order());
                compared += 1;
            }
        }
    }
    assert!(compared > 300, "only {compared} comparisons");
}

#[test]
fn exact_and_field_independent_counting_agree() {
    for (m, n, q) in [(1, 2, 4), (2, 2, 4), (2, 3, 3), (1, 3, 5)] {
        let k = Field::of_order(q).unwrap();
        let exact = parabolic_class_count(m, n, &k, &mut OrbitCache::new(1 << 22, Counting::Exact)).unwrap();
        let fast = parabolic_class_count(m, n, &k, &mut OrbitCache::default()).unwrap();
        assert_eq!(exact, fast, "P^({m},{n})(F_{q})");
    }
}

#[test]
fn pipeline_matches_oracle_on_extra_cases() {
    for (m, n, q) in [(2, 1, 2), (2, 1, 3), (1, 1, 4), (1, 2, 3), (3, 1, 2)] {
        let k = Field::of_order(q).unwrap();
        let ours = parabolic_class_count(m, n, &k, &mut OrbitCache::default()).unwrap();
        let oracle = Oracle::parabolic(m, n, &k, DEFAULT_ORACLE_BUDGET).unwrap().count() as u128;
        assert_eq!(ours, oracle, "P^({m},{n})(F_{q})");
    }
}
