mod common;

use common::checks;
use posetdim::constructions::subset_poset;
use posetdim::decomp::{ChildOrder, PlantedTree, TreeDecomposition};
use posetdim::io::{parse_td, write_td};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn close_relation(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let inst = common::random_planted(&mut rng, 25, 3, 3);
        let s = inst.td.validate(&inst.poset.cover_graph()).unwrap().adhesion;
        let h = inst.poset.height().max(1);
        prop_assert_eq!(checks::close_properties(&inst.pt, 2 * h, s), Ok(()));
    }

    #[test]
    fn bag_colors_and_witnesses(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let inst = common::random_planted(&mut rng, 30, 4, 3);
        let h = inst.poset.height().max(1);
        prop_assert_eq!(checks::bag_sequence_properties(&inst.poset, &inst.pt, h), Ok(()));
    }

    #[test]
    fn generated_decompositions_validate(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (p, td) = common::random_instance(&mut rng, 40, 4, 3);
        let stats = td.validate(&p.cover_graph()).unwrap();
        prop_assert!(stats.adhesion <= 3);
        prop_assert_eq!(parse_td(&write_td(&td)).unwrap(), td);
    }
}

#[test]
fn both_child_orders_of_the_star() {
    let c = subset_poset(4).unwrap();
    let td = c.decomposition.unwrap();
    let a = PlantedTree::plant(&td, 0, &ChildOrder::Index).unwrap();
    let rev: Vec<usize> = (0..td.num_bags()).rev().collect();
    let b = PlantedTree::plant(&td, 0, &ChildOrder::Rank(rev)).unwrap();
    let leaves: Vec<usize> = (1..td.num_bags()).collect();
    for &x in &leaves {
        for &y in &leaves {
            if x < y {
                assert_eq!(a.left_rank(x) < a.left_rank(y), b.left_rank(x) > b.left_rank(y));
            }
        }
    }
    assert_eq!(checks::close_properties(&a, 4, 2), Ok(()));
}

#[test]
fn invalid_decompositions_are_rejected() {
    let p = posetdim::Poset::chain(3);
    // vertex 1 occurs in two bags that are not adjacent
    let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![0], vec![1, 2]], vec![(0, 1), (1, 2)]);
    assert!(td.validate(&p.cover_graph()).is_err());
    // edge 0-2 of the cover graph is missing from all bags
    let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
    let q = posetdim::Poset::from_relations(3, [(0, 2), (1, 2)]).unwrap();
    assert!(td.validate(&q.cover_graph()).is_err());
}
