mod common;

use posetdim::constructions::{subset_poset, kelly, standard_example};
use posetdim::io::{parse_coloring, parse_poset, parse_td, write_coloring, write_poset, write_td};
use posetdim::solver::exact_dimension;
use proptest::prelude::*;

proptest! {
    #[test]
    fn poset_files_round_trip(n in 1usize..12, seed in any::<u64>(), p in 0.0f64..0.7) {
        let mut rng = common::rng(seed);
        let q = common::random_order(&mut rng, n, p);
        let text = write_poset(&q);
        let back = parse_poset(&text).unwrap();
        prop_assert_eq!(&back, &q);
        prop_assert_eq!(write_poset(&back), text);
    }

    #[test]
    fn coloring_files_round_trip(n in 1usize..8, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let q = common::random_order(&mut rng, n, 0.3);
        let (_, c) = exact_dimension(&q, None).unwrap();
        let text = write_coloring(&c);
        prop_assert_eq!(parse_coloring(&text).unwrap(), c);
    }

    #[test]
    fn td_files_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (_, td) = common::random_instance(&mut rng, 30, 3, 3);
        let text = write_td(&td);
        prop_assert_eq!(parse_td(&text).unwrap(), td);
    }
}

#[test]
fn named_constructions_round_trip_with_labels() {
    for p in [
        standard_example(3).unwrap().poset,
        kelly(5).unwrap().poset,
        subset_poset(5).unwrap().poset,
    ] {
        let back = parse_poset(&write_poset(&p)).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.labels(), p.labels());
    }
}

#[test]
fn malformed_input_reports_line() {
    let err = parse_poset("p poset 3 1\nr 1 x\n").unwrap_err();
    assert!(err.to_string().contains('2'), "{err}");
    assert!(parse_td("s td 2 2 2\nb 1 1\nb 2 2\n1 3\n").is_err());
    assert!(parse_coloring("s colors 1\ni 1 2\n").is_err());
}
