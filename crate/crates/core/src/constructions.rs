//! Named posets used as fixtures: standard examples, Kelly's planar posets,
//! the 1- and 2-element subsets of `[n]` with their star decomposition, and
//! random posets grown together with a tree decomposition.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::TreeDecomposition;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// A generated poset with symbolic element names and, when one is known, a
/// tree decomposition of its cover graph.
#[derive(Clone, Debug)]
pub struct NamedConstruction {
    pub poset: Poset,
    pub roles: Vec<String>,
    pub decomposition: Option<TreeDecomposition>,
}

impl NamedConstruction {
    fn new(poset: Poset, roles: Vec<String>, decomposition: Option<TreeDecomposition>) -> Self {
        let poset = poset.with_labels(roles.clone());
        NamedConstruction {
            poset,
            roles,
            decomposition,
        }
    }

    pub fn index_of(&self, role: &str) -> Option<usize> {
        self.roles.iter().position(|r| r == role)
    }
}

/// `S_d`: `a_1..a_d` (indices `0..d`) below `b_1..b_d` (indices `d..2d`),
/// with `a_i < b_j` iff `i != j`.
pub fn standard_example(d: usize) -> Result<NamedConstruction> {
    if d < 2 {
        return Err(Error::Domain(format!("standard example needs d >= 2, got {d}")));
    }
    let arcs = (0..d).flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, d + j)));
    let poset = Poset::from_relations(2 * d, arcs)?;
    let roles = (1..=d)
        .map(|i| format!("a{i}"))
        .chain((1..=d).map(|i| format!("b{i}")))
        .collect();
    Ok(NamedConstruction::new(poset, roles, None))
}

/// Kelly's planar poset containing `S_n`.
///
/// Layout: `a_i` at `i-1`, `b_i` at `n+i-1`, `z_i` at `2n+i-1` and `w_i` at
/// `3n-1+i-1`. Covers: `a_i < z_i`, `z_i < z_{i+1}`, `z_i < b_{i+1}`,
/// `a_{i+1} < w_i`, `w_{i+1} < w_i`, `w_i < b_i`.
pub fn kelly(n: usize) -> Result<NamedConstruction> {
    if n < 3 {
        return Err(Error::Domain(format!("Kelly's construction needs n >= 3, got {n}")));
    }
    let a = |i: usize| i - 1;
    let b = |i: usize| n + i - 1;
    let z = |i: usize| 2 * n + i - 1;
    let w = |i: usize| 3 * n - 1 + i - 1;
    let mut arcs = Vec::new();
    for i in 1..n {
        arcs.push((a(i), z(i)));
        arcs.push((z(i), b(i + 1)));
        arcs.push((a(i + 1), w(i)));
        arcs.push((w(i), b(i)));
        if i + 1 < n {
            arcs.push((z(i), z(i + 1)));
            arcs.push((w(i + 1), w(i)));
        }
    }
    let poset = Poset::from_relations(4 * n - 2, arcs)?;
    let roles: Vec<String> = (1..=n)
        .map(|i| format!("a{i}"))
        .chain((1..=n).map(|i| format!("b{i}")))
        .chain((1..n).map(|i| format!("z{i}")))
        .chain((1..n).map(|i| format!("w{i}")))
        .collect();
    for i in 0..n {
        for j in 0..n {
            if poset.lt(a(i + 1), b(j + 1)) != (i != j) {
                return Err(Error::Internal(format!(
                    "Kelly poset for n={n} does not contain S_n on a/b elements"
                )));
            }
        }
    }
    Ok(NamedConstruction::new(poset, roles, None))
}

/// The 1- and 2-element subsets of `{1..n}` ordered by inclusion.
///
/// Singletons occupy `0..n`; doubletons follow in lexicographic order. The
/// companion decomposition is a star whose center (bag 0) holds the
/// singletons and whose leaves are `{{i}, {j}, {i,j}}`.
pub fn subset_poset(n: usize) -> Result<NamedConstruction> {
    if n < 3 {
        return Err(Error::Domain(format!("subset poset needs n >= 3, got {n}")));
    }
    let mut roles: Vec<String> = (1..=n).map(|i| format!("{{{i}}}")).collect();
    let mut arcs = Vec::new();
    let mut bags = vec![(0..n).collect::<Vec<_>>()];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let id = roles.len();
            roles.push(format!("{{{},{}}}", i + 1, j + 1));
            arcs.push((i, id));
            arcs.push((j, id));
            bags.push(vec![i, j, id]);
            edges.push((0, bags.len() - 1));
        }
    }
    let total = roles.len();
    let poset = Poset::from_relations(total, arcs)?;
    let td = TreeDecomposition::new(total, bags, edges);
    Ok(NamedConstruction::new(poset, roles, Some(td)))
}

/// Knobs for [`random_poset`].
#[derive(Clone, Debug)]
pub struct RandomConfig {
    pub seed: u64,
    pub n: usize,
    /// Upper bound on the height of the generated poset.
    pub height: usize,
    /// Upper bound on the size of every adhesion set.
    pub adhesion: usize,
    /// Upper bound on the size of every bag.
    pub max_bag: usize,
    /// Probability of an arc between two elements of a bag on different
    /// levels.
    pub arc_prob: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            seed: 0,
            n: 10,
            height: 2,
            adhesion: 2,
            max_bag: 4,
            arc_prob: 0.5,
        }
    }
}

/// Grows a bag tree, fills bags with shared and fresh vertices, assigns each
/// vertex a level below `height` and samples arcs only inside bags from
/// lower to higher levels. The companion decomposition is valid by
/// construction.
pub fn random_poset(cfg: &RandomConfig) -> Result<NamedConstruction> {
    if cfg.n == 0 || cfg.height == 0 || cfg.max_bag == 0 {
        return Err(Error::Domain("n, height and max_bag must be positive".into()));
    }
    if cfg.adhesion >= cfg.max_bag {
        return Err(Error::Domain("adhesion must be smaller than max_bag".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let first = rng.random_range(1..=cfg.max_bag.min(cfg.n));
    let mut bags: Vec<Vec<usize>> = vec![(0..first).collect()];
    let mut edges = Vec::new();
    let mut next = first;
    while next < cfg.n {
        let parent = rng.random_range(0..bags.len());
        let mut pool = bags[parent].clone();
        pool.shuffle(&mut rng);
        let shared_max = cfg.adhesion.min(pool.len());
        let shared = rng.random_range(0..=shared_max);
        let fresh_max = (cfg.max_bag - shared).min(cfg.n - next);
        let fresh = rng.random_range(1..=fresh_max);
        let mut bag: Vec<usize> = pool[..shared].to_vec();
        bag.extend(next..next + fresh);
        next += fresh;
        bag.sort_unstable();
        bags.push(bag);
        edges.push((parent, bags.len() - 1));
    }
    let level: Vec<usize> = (0..cfg.n).map(|_| rng.random_range(0..cfg.height)).collect();
    let mut arcs = Vec::new();
    for bag in &bags {
        for &u in bag {
            for &v in bag {
                if level[u] < level[v] && rng.random_bool(cfg.arc_prob) {
                    arcs.push((u, v));
                }
            }
        }
    }
    arcs.sort_unstable();
    arcs.dedup();
    let poset = Poset::from_relations(cfg.n, arcs)?;
    let roles = (1..=cfg.n).map(|i| format!("v{i}")).collect();
    let td = TreeDecomposition::new(cfg.n, bags, edges);
    Ok(NamedConstruction::new(poset, roles, Some(td)))
}
