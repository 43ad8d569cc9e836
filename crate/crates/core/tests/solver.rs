mod common;

use posetdim::constructions::standard_example;
use posetdim::solver::{exact_dimension, has_valid_coloring, oracle_dimension};
use posetdim::{check_coloring, Poset};
use proptest::prelude::*;

fn order_strategy(max_n: usize) -> impl Strategy<Value = Poset> {
    (1..=max_n, any::<u64>(), 0.1f64..0.8).prop_map(|(n, seed, p)| {
        let mut rng = common::rng(seed);
        common::random_order(&mut rng, n, p)
    })
}

fn dual(p: &Poset) -> Poset {
    Poset::from_relations(p.len(), p.relations().map(|(a, b)| (b, a))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solver_matches_oracle(p in order_strategy(6)) {
        let (d, c) = exact_dimension(&p, None).unwrap();
        prop_assert_eq!(d, oracle_dimension(&p).unwrap());
        prop_assert!(check_coloring(&p, &c).unwrap().is_valid());
        prop_assert!(c.num_colors() <= d);
        prop_assert_eq!(c.len(), p.incomparable_pairs().len());
    }

    #[test]
    fn decision_threshold(p in order_strategy(7)) {
        let (d, _) = exact_dimension(&p, None).unwrap();
        if d > 1 {
            prop_assert!(has_valid_coloring(&p, d - 1).is_none());
        }
        let c = has_valid_coloring(&p, d).expect("coloring at the dimension");
        prop_assert!(check_coloring(&p, &c).unwrap().is_valid());
    }

    #[test]
    fn subposets_do_not_increase_dimension(p in order_strategy(8), mask in any::<u16>()) {
        let keep: Vec<usize> = (0..p.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let (sub, _) = p.induced(&keep);
        let d = exact_dimension(&p, None).unwrap().0;
        let ds = exact_dimension(&sub, None).unwrap().0;
        prop_assert!(ds <= d);
    }

    #[test]
    fn dual_has_same_dimension(p in order_strategy(8)) {
        prop_assert_eq!(exact_dimension(&p, None).unwrap().0, exact_dimension(&dual(&p), None).unwrap().0);
    }
}

#[test]
fn standard_examples_small() {
    for d in 2..=4 {
        let s = standard_example(d).unwrap().poset;
        assert_eq!(exact_dimension(&s, None).unwrap().0, d);
        if 2 * d <= posetdim::solver::ORACLE_MAX_ELEMENTS {
            assert_eq!(oracle_dimension(&s).unwrap(), d);
        }
    }
}

#[test]
fn budget_is_reported() {
    let s = standard_example(4).unwrap().poset;
    assert!(exact_dimension(&s, Some(3)).is_err());
}

#[test]
fn chains_and_antichains() {
    assert_eq!(exact_dimension(&Poset::chain(5), None).unwrap().0, 1);
    assert_eq!(exact_dimension(&Poset::antichain(5), None).unwrap().0, 2);
    assert_eq!(exact_dimension(&Poset::antichain(1), None).unwrap().0, 1);
}
