#![allow(dead_code)]

pub mod checks;

use posetdim::constructions::{random_poset, RandomConfig};
use posetdim::decomp::{ChildOrder, PlantedTree, TreeDecomposition};
use posetdim::Poset;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random order on `n` elements: each pair `i < j` is related with
/// probability `p`, closure taken.
pub fn random_order(rng: &mut impl Rng, n: usize, p: f64) -> Poset {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                arcs.push((i, j));
            }
        }
    }
    // relabel so that index order is not a linear extension
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Poset::from_relations(n, arcs.into_iter().map(|(a, b)| (perm[a], perm[b]))).unwrap()
}

/// Every poset on `n` labelled elements whose relation is a subset of a
/// fixed natural order, i.e. all transitively closed DAGs with `i < j` arcs.
pub fn all_orders(n: usize) -> Vec<Poset> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << slots.len()) {
        let arcs: Vec<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        let p = Poset::from_relations(n, arcs.iter().copied()).unwrap();
        if p.num_relations() == arcs.len() {
            out.push(p);
        }
    }
    out
}

/// Randomized poset with a companion decomposition, planted at a random
/// root with a random child order.
pub struct Planted {
    pub poset: Poset,
    pub td: TreeDecomposition,
    pub pt: PlantedTree,
}

pub fn random_instance(rng: &mut impl Rng, max_n: usize, height: usize, adhesion: usize) -> (Poset, TreeDecomposition) {
    let cfg = RandomConfig {
        seed: rng.random(),
        n: rng.random_range(1..=max_n),
        height: rng.random_range(1..=height),
        adhesion: rng.random_range(0..=adhesion),
        max_bag: 0,
        arc_prob: rng.random_range(0.2..0.9),
    };
    let cfg = RandomConfig {
        max_bag: rng.random_range(cfg.adhesion + 1..=cfg.adhesion + 3),
        ..cfg
    };
    let c = random_poset(&cfg).unwrap();
    (c.poset, c.decomposition.unwrap())
}

pub fn random_planting(rng: &mut impl Rng, td: &TreeDecomposition) -> (usize, ChildOrder) {
    let root = rng.random_range(0..td.num_bags());
    let mut rank: Vec<usize> = (0..td.num_bags()).collect();
    rank.shuffle(rng);
    (root, ChildOrder::Rank(rank))
}

pub fn random_planted(rng: &mut impl Rng, max_n: usize, height: usize, adhesion: usize) -> Planted {
    let (poset, td) = random_instance(rng, max_n, height, adhesion);
    let (root, order) = random_planting(rng, &td);
    let pt = PlantedTree::plant(&td, root, &order).unwrap();
    Planted { poset, td, pt }
}
