//! Tree decompositions of cover graphs and the planted-tree machinery used to
//! color far-apart and nearby incomparable pairs: lowest bags, the
//! bounded-hop descent relation between bags, bag colorings and color
//! sequences.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::poset::CoverGraph;

/// A tree decomposition. Bags are identified by index; two bags may carry
/// the same vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub num_vertices: usize,
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

/// Summary returned by [`TreeDecomposition::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecompositionStats {
    pub adhesion: usize,
    pub width: usize,
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated on construction.
    pub fn new(num_vertices: usize, bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition {
            num_vertices,
            bags,
            edges,
        }
    }

    /// A single bag holding every vertex.
    pub fn trivial(num_vertices: usize) -> Self {
        Self::new(num_vertices, vec![(0..num_vertices).collect()], Vec::new())
    }

    pub fn num_bags(&self) -> usize {
        self.bags.len()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn adhesion_set(&self, a: usize, b: usize) -> Vec<usize> {
        intersect(&self.bags[a], &self.bags[b])
    }

    pub fn adhesion(&self) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| self.adhesion_set(a, b).len())
            .max()
            .unwrap_or(0)
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the tree shape, vertex coverage, edge coverage and the
    /// connectivity of every vertex's bag set.
    pub fn validate(&self, g: &CoverGraph) -> Result<DecompositionStats> {
        if g.n != self.num_vertices {
            return Err(Error::Decomposition(format!(
                "decomposition has {} vertices, graph has {}",
                self.num_vertices, g.n
            )));
        }
        self.check_tree()?;
        let mut holders = vec![Vec::new(); self.num_vertices];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= self.num_vertices {
                    return Err(Error::Decomposition(format!(
                        "bag {i} holds vertex {v} outside the graph"
                    )));
                }
                holders[v].push(i);
            }
        }
        if let Some(v) = holders.iter().position(|h| h.is_empty()) {
            return Err(Error::Decomposition(format!("vertex {v} lies in no bag")));
        }
        for &(u, v) in &g.edges {
            let covered = holders[u]
                .iter()
                .any(|&b| self.bags[b].binary_search(&v).is_ok());
            if !covered {
                return Err(Error::Decomposition(format!(
                    "edge {u}-{v} is not contained in any bag"
                )));
            }
        }
        let adj = self.neighbors();
        for (v, hs) in holders.iter().enumerate() {
            let inside: BTreeSet<usize> = hs.iter().copied().collect();
            let mut seen = BTreeSet::from([hs[0]]);
            let mut stack = vec![hs[0]];
            while let Some(b) = stack.pop() {
                for &c in &adj[b] {
                    if inside.contains(&c) && seen.insert(c) {
                        stack.push(c);
                    }
                }
            }
            if seen.len() != inside.len() {
                return Err(Error::Decomposition(format!(
                    "bags containing vertex {v} do not form a subtree"
                )));
            }
        }
        Ok(DecompositionStats {
            adhesion: self.adhesion(),
            width: self.width(),
        })
    }

    fn check_tree(&self) -> Result<()> {
        let m = self.bags.len();
        if m == 0 {
            return Err(Error::Decomposition("no bags".into()));
        }
        if self.edges.len() != m - 1 {
            return Err(Error::Decomposition(format!(
                "{} tree edges for {} bags",
                self.edges.len(),
                m
            )));
        }
        for &(a, b) in &self.edges {
            if a >= m || b >= m || a == b {
                return Err(Error::Decomposition(format!("bad tree edge {a}-{b}")));
            }
        }
        let adj = self.neighbors();
        let mut seen = vec![false; m];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(b) = stack.pop() {
            for &c in &adj[b] {
                if !seen[c] {
                    seen[c] = true;
                    count += 1;
                    stack.push(c);
                }
            }
        }
        if count != m {
            return Err(Error::Decomposition("tree edges do not connect all bags".into()));
        }
        Ok(())
    }

    /// Torso of bag `x`: the graph induced on the bag plus a clique on every
    /// adhesion set of `x`. Edges use original vertex ids, `(min, max)`.
    pub fn torso(&self, g: &CoverGraph, x: usize) -> Vec<(usize, usize)> {
        let bag = &self.bags[x];
        let mut edges = BTreeSet::new();
        for &(u, v) in &g.edges {
            if bag.binary_search(&u).is_ok() && bag.binary_search(&v).is_ok() {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        for &nb in &self.neighbors()[x] {
            let k = self.adhesion_set(x, nb);
            for (i, &a) in k.iter().enumerate() {
                for &b in &k[i + 1..] {
                    edges.insert((a, b));
                }
            }
        }
        edges.into_iter().collect()
    }

    /// Attaches one new bag `K ∪ X_K` per gadget to a bag containing `K`.
    ///
    /// `gadgets` lists `(K, X_K)` pairs; `num_vertices` is the vertex count
    /// of the enlarged graph.
    pub fn widen_with_gadget_bags(
        &self,
        num_vertices: usize,
        gadgets: &[(Vec<usize>, Vec<usize>)],
    ) -> Result<TreeDecomposition> {
        let mut bags = self.bags.clone();
        let mut edges = self.edges.clone();
        for (k, xs) in gadgets {
            let host = self
                .bags
                .iter()
                .position(|b| k.iter().all(|v| b.binary_search(v).is_ok()))
                .ok_or_else(|| {
                    Error::Precondition(format!("no bag contains adhesion set {k:?}"))
                })?;
            let mut bag: Vec<usize> = k.iter().chain(xs.iter()).copied().collect();
            bag.sort_unstable();
            bag.dedup();
            bags.push(bag);
            edges.push((host, bags.len() - 1));
        }
        Ok(TreeDecomposition::new(num_vertices, bags, edges))
    }
}

pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter()
        .copied()
        .filter(|v| b.binary_search(v).is_ok())
        .collect()
}

/// How the children of each bag are ordered from left to right.
#[derive(Clone, Debug, Default)]
pub enum ChildOrder {
    /// By bag index.
    #[default]
    Index,
    /// By ascending `rank[bag]`.
    Rank(Vec<usize>),
    /// Explicit per-bag child lists.
    Explicit(Vec<Vec<usize>>),
}

/// A rooted tree decomposition with a left-to-right order on children.
#[derive(Clone, Debug)]
pub struct PlantedTree {
    td: TreeDecomposition,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    tin: Vec<usize>,
    tout: Vec<usize>,
    left_rank: Vec<usize>,
    right_rank: Vec<usize>,
    low: Vec<usize>,
}

impl PlantedTree {
    /// Roots `td` at `root`. The decomposition is assumed valid.
    pub fn plant(td: &TreeDecomposition, root: usize, order: &ChildOrder) -> Result<PlantedTree> {
        let m = td.num_bags();
        if root >= m {
            return Err(Error::Domain(format!("root {root} out of range ({m} bags)")));
        }
        let adj = td.neighbors();
        let mut parent = vec![None; m];
        let mut depth = vec![0; m];
        let mut visited = vec![false; m];
        let mut bfs = VecDeque::from([root]);
        visited[root] = true;
        let mut children = vec![Vec::new(); m];
        while let Some(b) = bfs.pop_front() {
            for &c in &adj[b] {
                if !visited[c] {
                    visited[c] = true;
                    parent[c] = Some(b);
                    depth[c] = depth[b] + 1;
                    children[b].push(c);
                    bfs.push_back(c);
                }
            }
        }
        if visited.iter().any(|v| !v) {
            return Err(Error::Decomposition("tree is disconnected".into()));
        }
        match order {
            ChildOrder::Index => {}
            ChildOrder::Rank(rank) => {
                for ch in &mut children {
                    ch.sort_by_key(|&c| (rank[c], c));
                }
            }
            ChildOrder::Explicit(lists) => {
                for (b, ch) in children.iter_mut().enumerate() {
                    let mut want = lists.get(b).cloned().unwrap_or_default();
                    let mut have = ch.clone();
                    want.sort_unstable();
                    have.sort_unstable();
                    if want != have {
                        return Err(Error::Domain(format!(
                            "child order for bag {b} is not a permutation of its children"
                        )));
                    }
                    *ch = lists[b].clone();
                }
            }
        }

        let mut tin = vec![0; m];
        let mut tout = vec![0; m];
        let mut left_rank = vec![0; m];
        let mut clock = 0;
        let mut label = 0;
        // iterative preorder, children left to right
        let mut stack = vec![(root, 0usize)];
        left_rank[root] = label;
        label += 1;
        tin[root] = clock;
        clock += 1;
        while let Some(top) = stack.last_mut() {
            let (b, i) = *top;
            if i < children[b].len() {
                top.1 += 1;
                let c = children[b][i];
                left_rank[c] = label;
                label += 1;
                tin[c] = clock;
                clock += 1;
                stack.push((c, 0));
            } else {
                tout[b] = clock;
                clock += 1;
                stack.pop();
            }
        }
        let mut r = vec![0; m];
        let mut label = 0;
        let mut stack = vec![root];
        while let Some(b) = stack.pop() {
            r[b] = label;
            label += 1;
            // pushing left to right pops right to left
            for &c in &children[b] {
                stack.push(c);
            }
        }

        let mut low = vec![usize::MAX; td.num_vertices];
        for (b, bag) in td.bags.iter().enumerate() {
            for &v in bag {
                if low[v] == usize::MAX || depth[b] < depth[low[v]] {
                    low[v] = b;
                }
            }
        }
        if low.iter().any(|&b| b == usize::MAX) {
            return Err(Error::Decomposition("some vertex lies in no bag".into()));
        }
        Ok(PlantedTree {
            td: td.clone(),
            root,
            parent,
            children,
            depth,
            tin,
            tout,
            left_rank,
            right_rank: r,
            low,
        })
    }

    pub fn decomposition(&self) -> &TreeDecomposition {
        &self.td
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn num_bags(&self) -> usize {
        self.td.num_bags()
    }

    pub fn parent(&self, b: usize) -> Option<usize> {
        self.parent[b]
    }

    pub fn children(&self, b: usize) -> &[usize] {
        &self.children[b]
    }

    pub fn depth(&self, b: usize) -> usize {
        self.depth[b]
    }

    /// Left-to-right depth-first label.
    pub fn left_rank(&self, b: usize) -> usize {
        self.left_rank[b]
    }

    /// Right-to-left depth-first label.
    pub fn right_rank(&self, b: usize) -> usize {
        self.right_rank[b]
    }

    /// Lowest bag containing vertex `v`.
    pub fn low(&self, v: usize) -> usize {
        self.low[v]
    }

    /// `a <= b` in the tree order: `a` lies on the path from `b` to the root.
    pub fn below(&self, a: usize, b: usize) -> bool {
        self.tin[a] <= self.tin[b] && self.tout[b] <= self.tout[a]
    }

    /// Bags in order of non-decreasing distance from the root.
    pub fn bottom_up(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.num_bags()).collect();
        order.sort_by_key(|&b| (self.depth[b], b));
        order
    }

    fn step(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.td.bags[x].iter().map(move |&z| self.low[z])
    }

    /// The ball of radius `k` around bag `x`: every bag reachable in at most `k`
    /// descent steps, each step moving to the lowest bag of a vertex of the
    /// current bag. Listed top to bottom.
    pub fn ball(&self, k: usize, x: usize) -> Vec<usize> {
        let mut members = BTreeSet::from([x]);
        let mut frontier = vec![x];
        for _ in 0..k {
            let mut next = Vec::new();
            for &b in &frontier {
                for c in self.step(b) {
                    if members.insert(c) {
                        next.push(c);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        let mut out: Vec<usize> = members.into_iter().collect();
        out.sort_by_key(|&b| std::cmp::Reverse(self.depth[b]));
        out
    }

    /// `y` lies in the ball of radius `k` around `x`.
    pub fn close(&self, k: usize, x: usize, y: usize) -> bool {
        self.ball(k, x).contains(&y)
    }

    /// The highest bag common to the radius-`k` balls of `x` and `y`.
    pub fn meet_bag(&self, k: usize, x: usize, y: usize) -> Option<usize> {
        let bx = self.ball(k, x);
        let by = self.ball(k, y);
        meet_of(&bx, &by)
    }

    /// All balls of radius `k`, indexed by bag.
    pub fn balls(&self, k: usize) -> Vec<Vec<usize>> {
        (0..self.num_bags()).map(|b| self.ball(k, b)).collect()
    }
}

/// Highest common member of two top-to-bottom balls.
pub(crate) fn meet_of(bx: &[usize], by: &[usize]) -> Option<usize> {
    bx.iter().copied().find(|b| by.contains(b))
}

/// Coloring of bags in which distinct bags at descent distance at most `2h`
/// differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagColoring {
    pub colors: Vec<u32>,
    pub palette: usize,
}

/// Greedy bottom-up coloring: each bag avoids the colors of the other bags in
/// its radius-`2h` ball,
/// all of which lie below it and are therefore already colored.
pub fn color_bags(pt: &PlantedTree, h: usize) -> BagColoring {
    let m = pt.num_bags();
    let mut colors = vec![u32::MAX; m];
    for x in pt.bottom_up() {
        let used: BTreeSet<u32> = pt
            .ball(2 * h, x)
            .into_iter()
            .filter(|&y| y != x)
            .map(|y| colors[y])
            .collect();
        debug_assert!(!used.contains(&u32::MAX));
        colors[x] = (0..).find(|c| !used.contains(c)).expect("free color");
    }
    let palette = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    BagColoring { colors, palette }
}

/// Colors of the radius-`h` ball of `x`, from top to bottom.
pub fn bag_sequence(pt: &PlantedTree, bag_colors: &BagColoring, h: usize, x: usize) -> Vec<u32> {
    pt.ball(h, x).into_iter().map(|b| bag_colors.colors[b]).collect()
}

/// Keeps in each sequence only the colors occurring in the other, then
/// returns the longest common suffix.
pub fn join_sequences(t1: &[u32], t2: &[u32]) -> Vec<u32> {
    let a: Vec<u32> = t1.iter().copied().filter(|c| t2.contains(c)).collect();
    let b: Vec<u32> = t2.iter().copied().filter(|c| t1.contains(c)).collect();
    let common = a
        .iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(p, q)| p == q)
        .count();
    a[a.len() - common..].to_vec()
}

/// For a bag `z` in both radius-`h` balls of `x` and `y`: the color that
/// precedes `z`'s color in the joined sequence of `x` and `y`, and how the
/// two bags carrying that color compare.
///
/// `prec` ranks bags for a strict total order. Returns `None` when `z`'s
/// color comes first. The second value is 1 when the bag above `z` on the
/// `x` side ranks before the one on the `y` side, 2 when it ranks after, and
/// 3 when there is no preceding color or both sides share the bag.
pub fn predecessor_and_order(
    pt: &PlantedTree,
    bag_colors: &BagColoring,
    h: usize,
    prec: &[usize],
    x: usize,
    y: usize,
    z: usize,
) -> Result<(Option<u32>, u8)> {
    let bx = pt.ball(h, x);
    let by = pt.ball(h, y);
    predecessor_and_order_with(pt, bag_colors, prec, &bx, &by, z)
}

pub(crate) fn predecessor_and_order_with(
    pt: &PlantedTree,
    bag_colors: &BagColoring,
    prec: &[usize],
    bx: &[usize],
    by: &[usize],
    z: usize,
) -> Result<(Option<u32>, u8)> {
    if !bx.contains(&z) || !by.contains(&z) {
        return Err(Error::Precondition(format!(
            "bag {z} is not in both balls"
        )));
    }
    let tx: Vec<u32> = bx.iter().map(|&b| bag_colors.colors[b]).collect();
    let ty: Vec<u32> = by.iter().map(|&b| bag_colors.colors[b]).collect();
    let joined = join_sequences(&tx, &ty);
    let pos = joined
        .iter()
        .position(|&c| c == bag_colors.colors[z])
        .ok_or_else(|| Error::Internal(format!("color of bag {z} missing from joined sequence")))?;
    if pos == 0 {
        return Ok((None, 3));
    }
    let p = joined[pos - 1];
    let unique_above = |ball: &[usize]| -> Result<usize> {
        let hits: Vec<usize> = ball
            .iter()
            .copied()
            .filter(|&b| bag_colors.colors[b] == p && pt.depth(b) > pt.depth(z))
            .collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::Internal(format!(
                "expected exactly one bag of color {p} above bag {z}, found {}",
                hits.len()
            ))),
        }
    };
    let xp = unique_above(bx)?;
    let yp = unique_above(by)?;
    let t = if xp == yp {
        3
    } else if prec[xp] < prec[yp] {
        1
    } else {
        2
    };
    Ok((Some(p), t))
}
