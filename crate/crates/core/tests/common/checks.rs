//! Independent checkers for the decomposition and gadget properties. Each
//! returns a description of the first violation found.

use posetdim::decomp::{color_bags, join_sequences, bag_sequence, PlantedTree};
use posetdim::gadget::{build_extensions, GadgetExtension};
use posetdim::Poset;

type Check = Result<(), String>;

/// Tree data recomputed from scratch: parent, depth and lowest bags.
pub struct TreeOracle {
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    pub low: Vec<usize>,
    bags: Vec<Vec<usize>>,
}

impl TreeOracle {
    pub fn new(pt: &PlantedTree) -> Self {
        let td = pt.decomposition();
        let m = td.num_bags();
        let adj = td.neighbors();
        let mut parent = vec![None; m];
        let mut depth = vec![usize::MAX; m];
        depth[pt.root()] = 0;
        let mut queue = std::collections::VecDeque::from([pt.root()]);
        while let Some(b) = queue.pop_front() {
            for &c in &adj[b] {
                if depth[c] == usize::MAX {
                    depth[c] = depth[b] + 1;
                    parent[c] = Some(b);
                    queue.push_back(c);
                }
            }
        }
        let low = (0..td.num_vertices)
            .map(|v| {
                (0..m)
                    .filter(|&b| td.bags[b].contains(&v))
                    .min_by_key(|&b| depth[b])
                    .expect("vertex in some bag")
            })
            .collect();
        TreeOracle { parent, depth, low, bags: td.bags.clone() }
    }

    /// `a` lies on the path from `b` to the root.
    pub fn below(&self, a: usize, mut b: usize) -> bool {
        loop {
            if a == b {
                return true;
            }
            match self.parent[b] {
                Some(c) => b = c,
                None => return false,
            }
        }
    }

    /// Bags reachable from `x` by sequences of at most `k` steps, each step
    /// moving to a bag `Z_i` through a shared vertex whose lowest bag is `Z_i`.
    pub fn reach(&self, k: usize, x: usize) -> Vec<bool> {
        let m = self.bags.len();
        let mut seen = vec![false; m];
        seen[x] = true;
        let mut frontier = vec![x];
        for _ in 0..k {
            let mut next = Vec::new();
            for &w in &frontier {
                for z in 0..m {
                    if seen[z] {
                        continue;
                    }
                    let ok = self.bags[w]
                        .iter()
                        .any(|v| self.bags[z].contains(v) && self.low[*v] == z);
                    if ok {
                        seen[z] = true;
                        next.push(z);
                    }
                }
            }
            frontier = next;
        }
        seen
    }
}

fn geometric(s: usize, k: usize) -> usize {
    (0..=k).map(|i| s.saturating_pow(i as u32)).fold(0usize, |a, b| a.saturating_add(b))
}

/// Agreement with the oracle plus the closeness properties of the balls for all
/// `k <= kmax`, and the ball size bound.
pub fn close_properties(pt: &PlantedTree, kmax: usize, s: usize) -> Check {
    let o = TreeOracle::new(pt);
    let m = pt.num_bags();
    for v in 0..o.low.len() {
        if pt.low(v) != o.low[v] {
            return Err(format!("low({v}) differs"));
        }
    }
    for a in 0..m {
        for b in 0..m {
            if pt.below(a, b) != o.below(a, b) {
                return Err(format!("tree order differs on {a},{b}"));
            }
        }
    }
    let reach: Vec<Vec<Vec<bool>>> = (0..=kmax).map(|k| (0..m).map(|x| o.reach(k, x)).collect()).collect();
    for k in 0..=kmax {
        for x in 0..m {
            let ball = pt.ball(k, x);
            let expect: Vec<usize> = (0..m).filter(|&y| reach[k][x][y]).collect();
            let mut got = ball.clone();
            got.sort_unstable();
            if got != expect {
                return Err(format!("B_{k}({x}) = {ball:?}, expected {expect:?}"));
            }
            if ball.windows(2).any(|w| o.depth[w[0]] <= o.depth[w[1]]) {
                return Err(format!("B_{k}({x}) not listed top to bottom"));
            }
            if ball.len() > geometric(s, k) {
                return Err(format!("|B_{k}({x})| = {} exceeds bound for s = {s}", ball.len()));
            }
            for y in 0..m {
                let c = reach[k][x][y];
                if k + 1 <= kmax && c && !reach[k + 1][x][y] {
                    return Err(format!("monotonicity fails at {k},{x},{y}"));
                }
                if k == 0 && c != (x == y) {
                    return Err("close_0 is not equality".into());
                }
                if c && !o.below(y, x) {
                    return Err(format!("{x} close_{k} {y} but {y} is not below"));
                }
            }
        }
    }
    for k in 0..=kmax {
        for l in 0..=kmax - k {
            for x in 0..m {
                for z in 0..m {
                    let via = (0..m).any(|y| reach[k][x][y] && reach[l][y][z]);
                    if via != reach[k + l][x][z] {
                        return Err(format!("composition fails for k={k} l={l} at {x},{z}"));
                    }
                }
            }
        }
    }
    for k in 0..=kmax {
        for x in 0..m {
            for z in 0..m {
                if !reach[k][x][z] {
                    continue;
                }
                for y in 0..m {
                    if o.below(y, x) && o.below(z, y) && !reach[k][y][z] {
                        return Err(format!("interval property fails at {x},{y},{z}"));
                    }
                }
                for y in 0..m {
                    if reach[k][x][y] && !reach[k][y][z] && !reach[k][z][y] {
                        return Err(format!("co-reachable bags {y},{z} unrelated"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Bag coloring separation, the joined-sequence suffix property and the
/// comparability witness, for height `h`.
pub fn bag_sequence_properties(p: &Poset, pt: &PlantedTree, h: usize) -> Check {
    let m = pt.num_bags();
    let bag_colors = color_bags(pt, h);
    for x in 0..m {
        let far = pt.ball(2 * h, x);
        for &y in &far {
            for &z in &far {
                if y != z && bag_colors.colors[y] == bag_colors.colors[z] {
                    return Err(format!("bags {y},{z} in B_2h({x}) share a color"));
                }
            }
        }
    }
    for x in 0..m {
        let bx = pt.ball(h, x);
        let tx = bag_sequence(pt, &bag_colors, h, x);
        for y in 0..m {
            let by = pt.ball(h, y);
            let common: Vec<u32> = bx.iter().filter(|b| by.contains(b)).map(|&b| bag_colors.colors[b]).collect();
            let joined = join_sequences(&tx, &bag_sequence(pt, &bag_colors, h, y));
            if !joined.ends_with(&common) {
                return Err(format!("common colors {common:?} not a suffix of {joined:?} for {x},{y}"));
            }
        }
    }
    for x in 0..p.len() {
        for y in 0..p.len() {
            if !p.le(x, y) {
                continue;
            }
            let (lx, ly) = (pt.low(x), pt.low(y));
            if pt.meet_bag(h.saturating_sub(1), lx, ly).is_none() {
                return Err(format!("B_(h-1) of {lx},{ly} disjoint for {x} <= {y}"));
            }
            let a = pt.meet_bag(h, lx, ly).ok_or("meet bag missing")?;
            let bag = &pt.decomposition().bags[a];
            if !bag.iter().any(|&z| p.le(x, z) && p.le(z, y)) {
                return Err(format!("no witness for {x} <= {y} in bag {a}"));
            }
        }
    }
    Ok(())
}

/// The four image properties of both extensions of every bag.
pub fn image_properties(p: &Poset, weak: &GadgetExtension, strong: &GadgetExtension, bag: &[usize]) -> Check {
    let (pw, ps) = (&weak.poset, &strong.poset);
    for x in 0..p.len() {
        for y in 0..p.len() {
            let (mx, ny) = (weak.lower_image(x), weak.upper_image(y));
            if (strong.lower_image(x), strong.upper_image(y)) != (mx, ny) {
                return Err("weak and strong images differ".into());
            }
            let same_side = !bag.contains(&x)
                && !bag.contains(&y)
                && weak.family.adhesion_of(x) == weak.family.adhesion_of(y);
            if p.incomparable(x, y) {
                if !pw.incomparable(mx, ny) {
                    return Err(format!("({x},{y}) comparable in weak extension"));
                }
                if !same_side && !ps.incomparable(mx, ny) {
                    return Err(format!("({x},{y}) comparable in strong extension"));
                }
            }
            if p.le(x, y) {
                if bag.iter().any(|&z| p.le(x, z) && p.le(z, y)) && !pw.le(mx, ny) {
                    return Err(format!("{x} <= {y} through bag not preserved in weak extension"));
                }
                if !ps.le(mx, ny) {
                    return Err(format!("{x} <= {y} not preserved in strong extension"));
                }
            }
        }
    }
    Ok(())
}

pub fn image_properties_all(p: &Poset, td: &posetdim::decomp::TreeDecomposition) -> Check {
    for z in 0..td.num_bags() {
        let (w, s) = build_extensions(p, td, z).map_err(|e| e.to_string())?;
        image_properties(p, &w, &s, &td.bags[z]).map_err(|e| format!("bag {z}: {e}"))?;
    }
    Ok(())
}
