mod common;

use posetdim::constructions::{subset_poset, standard_example};
use posetdim::pipeline::{
    apex_color, decompose_and_color, diameter_color, layer_posets, PipelineOptions,
};
use posetdim::{check_coloring, PairColoring, Poset};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn total_and_valid(p: &Poset, c: &PairColoring) -> bool {
    c.len() == p.incomparable_pairs().len() && check_coloring(p, c).unwrap().is_valid()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pipeline_colors_are_valid(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (p, td) = common::random_instance(&mut rng, 20, 3, 2);
        let (root, child_order) = common::random_planting(&mut rng, &td);
        let mut prec: Vec<usize> = (0..td.num_bags()).collect();
        prec.shuffle(&mut rng);
        let opts = PipelineOptions { root, child_order, prec: Some(prec), ..Default::default() };
        let (c, report) = decompose_and_color(&p, &td, &opts).unwrap();
        prop_assert!(total_and_valid(&p, &c));
        prop_assert!(report.valid);
        prop_assert_eq!(report.palette, 4 + report.signatures);
        prop_assert!(c.iter().all(|(_, col)| (col as usize) < report.palette));
    }

    #[test]
    fn layer_properties(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=12);
        let density = rng.random_range(0.1..0.6);
        let p = common::random_order(&mut rng, n, density);
        if !p.cover_graph().is_connected() {
            return Ok(());
        }
        let l = layer_posets(&p, None).unwrap();
        for x in 0..p.len() {
            for y in 0..p.len() {
                let (i, j) = (l.level_of[x], l.level_of[y]);
                if p.comparable(x, y) && x != y {
                    prop_assert!(i.abs_diff(j) <= 1);
                    // odd levels sit above the previous one, even levels below
                    if i == j + 1 {
                        prop_assert_eq!(p.lt(y, x), i % 2 == 1);
                    }
                }
            }
        }
        for layer in &l.layers {
            prop_assert!(layer.poset.height() <= p.height().max(3));
        }
    }

    #[test]
    fn reductions_are_valid(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=10);
        let density = rng.random_range(0.1..0.6);
        let p = common::random_order(&mut rng, n, density);
        let (c, r) = diameter_color(&p, None, None).unwrap();
        prop_assert!(total_and_valid(&p, &c));
        prop_assert!(r.colors_used <= r.bound);
        let a = rng.random_range(0..n);
        let (c, r) = apex_color(&p, a, None).unwrap();
        prop_assert!(total_and_valid(&p, &c));
        prop_assert!(r.colors_used <= r.bound);
    }
}

#[test]
fn dm_center_rooted_pipeline() {
    let c = subset_poset(4).unwrap();
    let td = c.decomposition.unwrap();
    for root in 0..td.num_bags() {
        let opts = PipelineOptions { root, ..Default::default() };
        let (col, report) = decompose_and_color(&c.poset, &td, &opts).unwrap();
        assert!(total_and_valid(&c.poset, &col));
        assert!(report.to_string().ends_with("valid: true"));
    }
}

#[test]
fn standard_example_reductions() {
    let s = standard_example(3).unwrap().poset;
    let (c, r) = diameter_color(&s, None, None).unwrap();
    assert!(total_and_valid(&s, &c));
    assert!(r.colors_used <= 2 * r.d + 2);
    let (c, r) = apex_color(&s, 0, None).unwrap();
    assert!(total_and_valid(&s, &c));
    assert!(r.colors_used <= r.bound);
}

#[test]
fn pipeline_is_deterministic() {
    let c = subset_poset(4).unwrap();
    let td = c.decomposition.unwrap();
    let opts = PipelineOptions { jobs: 3, ..Default::default() };
    let a = decompose_and_color(&c.poset, &td, &opts).unwrap().0;
    let b = decompose_and_color(&c.poset, &td, &PipelineOptions::default()).unwrap().0;
    assert_eq!(a, b);
}
