//! Finite posets stored as dense strict up/down sets, together with the
//! alternating-cycle machinery that ties incomparable pairs to linear
//! extensions.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Color identifier used by pair colorings.
pub type Color = u32;

/// A finite poset on the elements `0..n`.
///
/// `up[x]` holds every `y` with `x < y`, `down[x]` every `y` with `y < x`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("lt", &self.relations().collect::<Vec<_>>())
            .finish()
    }
}

impl Poset {
    /// Builds the poset generated by `arcs` (the transitive closure).
    ///
    /// Fails with [`Error::Cycle`] if the arcs contain a directed cycle.
    pub fn from_relations<I>(n: usize, arcs: I) -> Result<Poset>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (u, v) in arcs {
            for e in [u, v] {
                if e >= n {
                    return Err(Error::OutOfRange { element: e, n });
                }
            }
            if u == v {
                return Err(Error::Cycle(u));
            }
            adj[u].push(v);
            indeg[v] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        while let Some(u) = queue.pop() {
            order.push(u);
            for &v in &adj[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push(v);
                }
            }
        }
        if order.len() < n {
            let culprit = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
            return Err(Error::Cycle(culprit));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &u in order.iter().rev() {
            let mut acc = FixedBitSet::with_capacity(n);
            for &v in &adj[u] {
                acc.insert(v);
                acc.union_with(&up[v]);
            }
            up[u] = acc;
        }
        Ok(Self::from_up_sets(up))
    }

    /// Builds a poset from already transitively closed strict up-sets.
    pub(crate) fn from_up_sets(up: Vec<FixedBitSet>) -> Poset {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, ups) in up.iter().enumerate() {
            for y in ups.ones() {
                down[y].insert(x);
            }
        }
        Poset {
            n,
            up,
            down,
            labels: None,
        }
    }

    pub fn antichain(n: usize) -> Poset {
        Self::from_up_sets(vec![FixedBitSet::with_capacity(n); n])
    }

    pub fn chain(n: usize) -> Poset {
        Self::from_relations(n, (1..n).map(|i| (i - 1, i))).expect("a chain is acyclic")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Poset {
        assert_eq!(labels.len(), self.n, "one label per element");
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of `x`; 1-based index when unlabelled.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => (x + 1).to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        x == y || self.up[x].contains(y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.lt(y, x)
    }

    #[inline]
    pub fn incomparable(&self, x: usize, y: usize) -> bool {
        !self.comparable(x, y)
    }

    /// Elements strictly above `x`.
    pub fn strict_up(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// Elements strictly below `x`.
    pub fn strict_down(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// `{y : y >= x}`, sorted.
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        let mut s = self.up[x].clone();
        s.insert(x);
        s.ones().collect()
    }

    /// `{y : y <= x}`, sorted.
    pub fn down_set(&self, x: usize) -> Vec<usize> {
        let mut s = self.down[x].clone();
        s.insert(x);
        s.ones().collect()
    }

    /// All strict comparabilities `(x, y)` with `x < y`.
    pub fn relations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| self.up[x].ones().map(move |y| (x, y)))
    }

    pub fn num_relations(&self) -> usize {
        self.up.iter().map(|s| s.count_ones(..)).sum()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.down[x].is_clear()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.up[x].is_clear()).collect()
    }

    /// A linear extension, smallest available index first.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut indeg: Vec<usize> = self.down.iter().map(|s| s.count_ones(..)).collect();
        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..self.n).filter(|&x| indeg[x] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(u)) = heap.pop() {
            order.push(u);
            for v in self.up[u].ones() {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    heap.push(Reverse(v));
                }
            }
        }
        order
    }

    /// Maximum size of a chain.
    pub fn height(&self) -> usize {
        let mut longest = vec![0usize; self.n];
        let mut best = 0;
        for x in self.topological_order() {
            let below = self.down[x].ones().map(|y| longest[y]).max().unwrap_or(0);
            longest[x] = below + 1;
            best = best.max(longest[x]);
        }
        best
    }

    /// Transitive reduction of the order.
    pub fn cover_graph(&self) -> CoverGraph {
        let mut edges = Vec::new();
        for x in 0..self.n {
            for y in self.up[x].ones() {
                if self.up[x].is_disjoint(&self.down[y]) {
                    edges.push((x, y));
                }
            }
        }
        CoverGraph { n: self.n, edges }
    }

    /// Subposet induced on `elements`; the returned map sends new indices to
    /// old ones.
    pub fn induced(&self, elements: &[usize]) -> (Poset, Vec<usize>) {
        let map: Vec<usize> = elements.to_vec();
        let k = map.len();
        let up = map
            .iter()
            .map(|&a| {
                let mut s = FixedBitSet::with_capacity(k);
                for (j, &b) in map.iter().enumerate() {
                    if self.lt(a, b) {
                        s.insert(j);
                    }
                }
                s
            })
            .collect();
        let mut sub = Self::from_up_sets(up);
        if let Some(labels) = &self.labels {
            sub.labels = Some(map.iter().map(|&a| labels[a].clone()).collect());
        }
        (sub, map)
    }

    /// `Inc(P)` in lexicographic order.
    pub fn incomparable_pairs(&self) -> Vec<IncPair> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if self.incomparable(x, y) {
                    out.push(IncPair::new(x, y));
                }
            }
        }
        out
    }

    /// Critical pairs: `(x, y)` incomparable with everything below `x` below
    /// `y` and everything above `y` above `x`. A family of linear extensions
    /// is a realizer iff it reverses every critical pair.
    pub fn critical_pairs(&self) -> Vec<IncPair> {
        self.incomparable_pairs()
            .into_iter()
            .filter(|p| {
                self.down[p.x].is_subset(&self.down[p.y]) && self.up[p.y].is_subset(&self.up[p.x])
            })
            .collect()
    }
}

/// Cover graph of a poset. Edges are stored oriented `(lower, upper)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl CoverGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        CoverGraph { n, edges }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges
            .iter()
            .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// An ordered incomparable pair `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IncPair {
    pub x: usize,
    pub y: usize,
}

impl IncPair {
    pub fn new(x: usize, y: usize) -> Self {
        IncPair { x, y }
    }

    pub fn dual(self) -> Self {
        IncPair::new(self.y, self.x)
    }
}

/// Assignment of colors to incomparable pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairColoring {
    assignment: BTreeMap<IncPair, Color>,
}

impl PairColoring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, pair: IncPair, color: Color) -> Option<Color> {
        self.assignment.insert(pair, color)
    }

    pub fn get(&self, pair: IncPair) -> Option<Color> {
        self.assignment.get(&pair).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (IncPair, Color)> + '_ {
        self.assignment.iter().map(|(&p, &c)| (p, c))
    }

    /// Number of distinct colors in use.
    pub fn num_colors(&self) -> usize {
        self.assignment.values().collect::<BTreeSet<_>>().len()
    }

    pub fn classes(&self) -> BTreeMap<Color, Vec<IncPair>> {
        let mut out: BTreeMap<Color, Vec<IncPair>> = BTreeMap::new();
        for (&p, &c) in &self.assignment {
            out.entry(c).or_default().push(p);
        }
        out
    }

    /// Renumbers colors densely from 0 in order of first occurrence.
    pub fn normalized(&self) -> PairColoring {
        let mut remap: BTreeMap<Color, Color> = BTreeMap::new();
        let mut out = PairColoring::new();
        for (&p, &c) in &self.assignment {
            let next = remap.len() as Color;
            let nc = *remap.entry(c).or_insert(next);
            out.insert(p, nc);
        }
        out
    }
}

impl FromIterator<(IncPair, Color)> for PairColoring {
    fn from_iter<T: IntoIterator<Item = (IncPair, Color)>>(iter: T) -> Self {
        PairColoring {
            assignment: iter.into_iter().collect(),
        }
    }
}

/// A linear extension, listed bottom to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearExtension {
    pub order: Vec<usize>,
}

impl LinearExtension {
    /// `position()[x]` is the rank of `x`.
    pub fn position(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &x) in self.order.iter().enumerate() {
            pos[x] = i;
        }
        pos
    }

    pub fn extends(&self, p: &Poset) -> bool {
        if self.order.len() != p.len() {
            return false;
        }
        let mut seen = vec![false; p.len()];
        for &x in &self.order {
            if x >= p.len() || std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        let pos = self.position();
        p.relations().all(|(x, y)| pos[x] < pos[y])
    }
}

/// Outcome of checking a pair coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// A monochromatic alternating cycle, listed so that
    /// `cycle[i].x <= cycle[i + 1].y` cyclically.
    Invalid { color: Color, cycle: Vec<IncPair> },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

fn check_membership(p: &Poset, pairs: &[IncPair]) -> Result<()> {
    for &q in pairs {
        for e in [q.x, q.y] {
            if e >= p.len() {
                return Err(Error::OutOfRange {
                    element: e,
                    n: p.len(),
                });
            }
        }
        if !p.incomparable(q.x, q.y) {
            return Err(Error::Membership(q));
        }
    }
    Ok(())
}

/// Searches `pairs` for an alternating cycle.
///
/// Works on the digraph with an arc `i -> j` whenever `pairs[i].x <= pairs[j].y`;
/// arcs are evaluated on demand. A directed cycle there is exactly an
/// alternating cycle.
pub fn find_alternating_cycle(p: &Poset, pairs: &[IncPair]) -> Result<Option<Vec<IncPair>>> {
    check_membership(p, pairs)?;
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let m = pairs.len();
    let mut state = vec![WHITE; m];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for start in 0..m {
        if state[start] != WHITE {
            continue;
        }
        state[start] = GRAY;
        stack.push((start, 0));
        while let Some(top) = stack.last_mut() {
            let (u, next) = *top;
            let mut j = next;
            while j < m && !p.le(pairs[u].x, pairs[j].y) {
                j += 1;
            }
            if j == m {
                state[u] = BLACK;
                stack.pop();
                continue;
            }
            top.1 = j + 1;
            match state[j] {
                WHITE => {
                    state[j] = GRAY;
                    stack.push((j, 0));
                }
                GRAY => {
                    let from = stack.iter().position(|&(v, _)| v == j).expect("gray on stack");
                    let cycle = stack[from..].iter().map(|&(v, _)| pairs[v]).collect();
                    return Ok(Some(cycle));
                }
                _ => {}
            }
        }
    }
    Ok(None)
}

/// Checks a coloring of `Inc(P)`: it must be total and no color class may
/// contain an alternating cycle.
pub fn check_coloring(p: &Poset, coloring: &PairColoring) -> Result<Verdict> {
    let colored: Vec<IncPair> = coloring.iter().map(|(q, _)| q).collect();
    check_membership(p, &colored)?;
    for q in p.incomparable_pairs() {
        if coloring.get(q).is_none() {
            return Err(Error::Totality(q));
        }
    }
    for (color, class) in coloring.classes() {
        if let Some(cycle) = find_alternating_cycle(p, &class)? {
            return Ok(Verdict::Invalid { color, cycle });
        }
    }
    Ok(Verdict::Valid)
}

/// A linear extension `L` of `P` with `x >_L y` for all `(x, y)` in `pairs`.
///
/// Topologically sorts the order together with the reversed arcs `y -> x`;
/// a cycle there means `pairs` contains an alternating cycle.
pub fn linear_extension_reversing(p: &Poset, pairs: &[IncPair]) -> Result<LinearExtension> {
    check_membership(p, pairs)?;
    let n = p.len();
    let mut extra: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg: Vec<usize> = (0..n).map(|x| p.strict_down(x).count_ones(..)).collect();
    for q in pairs {
        extra[q.y].push(q.x);
        indeg[q.x] += 1;
    }
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&x| indeg[x] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = heap.pop() {
        order.push(u);
        for v in p.strict_up(u).ones().chain(extra[u].iter().copied()) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                heap.push(Reverse(v));
            }
        }
    }
    if order.len() < n {
        let culprit = (0..n).find(|&x| indeg[x] > 0).unwrap_or(0);
        return Err(Error::Cycle(culprit));
    }
    let ext = LinearExtension { order };
    let pos = ext.position();
    if !ext.extends(p) || pairs.iter().any(|q| pos[q.x] < pos[q.y]) {
        return Err(Error::Internal("reversing extension failed post-check".into()));
    }
    Ok(ext)
}

/// One linear extension per color class; the family is checked to be a
/// realizer of `P`.
pub fn realizer_from_coloring(p: &Poset, coloring: &PairColoring) -> Result<Vec<LinearExtension>> {
    let colored: Vec<IncPair> = coloring.iter().map(|(q, _)| q).collect();
    check_membership(p, &colored)?;
    let inc = p.incomparable_pairs();
    if let Some(&q) = inc.iter().find(|&&q| coloring.get(q).is_none()) {
        return Err(Error::Totality(q));
    }
    let mut realizer = Vec::new();
    for class in coloring.classes().values() {
        realizer.push(linear_extension_reversing(p, class)?);
    }
    if realizer.is_empty() {
        realizer.push(linear_extension_reversing(p, &[])?);
    }
    let positions: Vec<Vec<usize>> = realizer.iter().map(|l| l.position()).collect();
    for q in &inc {
        if !positions.iter().any(|pos| pos[q.x] > pos[q.y]) {
            return Err(Error::Internal(format!(
                "pair ({}, {}) not reversed by the realizer",
                q.x, q.y
            )));
        }
    }
    Ok(realizer)
}
