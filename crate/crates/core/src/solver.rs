//! Exact dimension by partitioning incomparable pairs into reversible
//! classes, plus a brute-force oracle over sets of linear extensions.
//!
//! The search colors critical pairs only. Each color class keeps the
//! transitive closure of the order it forces (the poset plus `y < x` for
//! every member `(x, y)`); a pair fits a class unless the class already
//! forces `x < y`. Once the critical pairs are colored, every class yields a
//! linear extension and each incomparable pair joins the first class whose
//! extension reverses it.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::poset::{
    check_coloring, linear_extension_reversing, Color, IncPair, PairColoring, Poset, Verdict,
};

/// Largest poset accepted by [`oracle_dimension`].
pub const ORACLE_MAX_ELEMENTS: usize = 7;

#[derive(Clone)]
struct Class {
    /// `above[a]`: elements forced strictly above `a`.
    above: Vec<FixedBitSet>,
}

impl Class {
    fn new(p: &Poset) -> Self {
        Class {
            above: (0..p.len()).map(|x| p.strict_up(x).clone()).collect(),
        }
    }

    #[inline]
    fn accepts(&self, q: IncPair) -> bool {
        !self.above[q.x].contains(q.y)
    }

    /// Forces `q.y < q.x`.
    fn add(&mut self, q: IncPair) {
        let mut grow = self.above[q.x].clone();
        grow.insert(q.x);
        let n = self.above.len();
        for a in 0..n {
            if a == q.y || self.above[a].contains(q.y) {
                self.above[a].union_with(&grow);
            }
        }
    }
}

/// Tunables for the exact search.
#[derive(Clone, Debug, Default)]
pub struct SolverConfig {
    /// Give up once this many colors would be needed.
    pub max_d: Option<usize>,
    /// Abort a single decision search after this many nodes.
    pub node_limit: Option<u64>,
}

/// Searches for a valid coloring of `Inc(P)` with at most `d` colors.
pub fn has_valid_coloring(p: &Poset, d: usize) -> Option<PairColoring> {
    let comps = p.cover_graph().components();
    if comps.len() > 1 {
        if d < 2 {
            return None;
        }
        let mut parts = Vec::new();
        for elems in &comps {
            parts.push(has_valid_coloring(&p.induced(elems).0, d)?);
        }
        return Some(merge_components(p, &comps, &parts));
    }
    search_with_limit(p, d, None).ok().flatten()
}

/// Disjoint union: component colorings are kept, a pair across components
/// takes color 0 when its first member lies in the later component and 1
/// otherwise. Class 0 is reversed by the components in ascending order,
/// class 1 by the components in descending order.
fn merge_components(p: &Poset, comps: &[Vec<usize>], parts: &[PairColoring]) -> PairColoring {
    let mut comp = vec![0; p.len()];
    let mut local = vec![0; p.len()];
    for (c, elems) in comps.iter().enumerate() {
        for (i, &v) in elems.iter().enumerate() {
            comp[v] = c;
            local[v] = i;
        }
    }
    p.incomparable_pairs()
        .into_iter()
        .map(|q| {
            let color = match comp[q.x].cmp(&comp[q.y]) {
                std::cmp::Ordering::Greater => 0,
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Equal => parts[comp[q.x]]
                    .get(IncPair::new(local[q.x], local[q.y]))
                    .expect("component coloring is total"),
            };
            (q, color)
        })
        .collect()
}

fn search_with_limit(p: &Poset, d: usize, node_limit: Option<u64>) -> Result<Option<PairColoring>> {
    let crit = p.critical_pairs();
    if crit.is_empty() {
        return Ok(if d >= 1 { Some(PairColoring::new()) } else { None });
    }
    if d == 0 {
        return Ok(None);
    }
    let base = Class::new(p);
    let mut search = SearchState {
        pairs: &crit,
        limit: d,
        assigned: vec![None; crit.len()],
        classes: Vec::new(),
        base,
        nodes: 0,
        node_limit,
    };
    if !search.run()? {
        return Ok(None);
    }
    let mut classes: Vec<Vec<IncPair>> = vec![Vec::new(); search.classes.len()];
    for (i, c) in search.assigned.iter().enumerate() {
        classes[c.expect("complete assignment")].push(crit[i]);
    }
    Ok(Some(extend_to_all_pairs(p, &classes)?))
}

/// Turns a coloring of the critical pairs into a coloring of `Inc(P)`.
fn extend_to_all_pairs(p: &Poset, classes: &[Vec<IncPair>]) -> Result<PairColoring> {
    let positions: Vec<Vec<usize>> = classes
        .iter()
        .map(|class| linear_extension_reversing(p, class).map(|l| l.position()))
        .collect::<Result<_>>()?;
    let mut out = PairColoring::new();
    for q in p.incomparable_pairs() {
        let c = positions
            .iter()
            .position(|pos| pos[q.x] > pos[q.y])
            .ok_or_else(|| Error::Internal(format!("pair ({}, {}) not reversed", q.x, q.y)))?;
        out.insert(q, c as Color);
    }
    Ok(out)
}

struct SearchState<'a> {
    pairs: &'a [IncPair],
    limit: usize,
    assigned: Vec<Option<usize>>,
    classes: Vec<Class>,
    base: Class,
    nodes: u64,
    node_limit: Option<u64>,
}

impl SearchState<'_> {
    fn width(&self, options: usize) -> usize {
        options + usize::from(self.classes.len() < self.limit)
    }

    fn pick(&self) -> Option<(usize, Vec<usize>)> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (i, q) in self.pairs.iter().enumerate() {
            if self.assigned[i].is_some() {
                continue;
            }
            let options: Vec<usize> = (0..self.classes.len())
                .filter(|&c| self.classes[c].accepts(*q))
                .collect();
            let w = self.width(options.len());
            if best.as_ref().is_none_or(|(_, o)| w < self.width(o.len())) {
                best = Some((i, options));
                if w <= 1 {
                    break;
                }
            }
        }
        best
    }

    fn run(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.node_limit.is_some_and(|limit| self.nodes > limit) {
            return Err(Error::BudgetExceeded(self.limit));
        }
        let Some((i, options)) = self.pick() else {
            return Ok(true);
        };
        let q = self.pairs[i];
        for c in options {
            let saved = self.classes[c].clone();
            self.classes[c].add(q);
            self.assigned[i] = Some(c);
            if self.run()? {
                return Ok(true);
            }
            self.assigned[i] = None;
            self.classes[c] = saved;
        }
        // empty classes are interchangeable: only ever open the next one
        if self.classes.len() < self.limit {
            let mut fresh = self.base.clone();
            fresh.add(q);
            self.classes.push(fresh);
            self.assigned[i] = Some(self.classes.len() - 1);
            if self.run()? {
                return Ok(true);
            }
            self.assigned[i] = None;
            self.classes.pop();
        }
        Ok(false)
    }
}

/// Greedy lower bound: a set of critical pairs that pairwise form
/// alternating 2-cycles needs one color each.
fn clique_lower_bound(p: &Poset, crit: &[IncPair]) -> usize {
    let conflict = |a: IncPair, b: IncPair| p.le(a.x, b.y) && p.le(b.x, a.y);
    let mut best = 0;
    for start in 0..crit.len() {
        let mut clique = vec![crit[start]];
        for &q in &crit[start + 1..] {
            if clique.iter().all(|&c| conflict(c, q)) {
                clique.push(q);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// Exact dimension and a witness coloring with exactly that many colors.
pub fn exact_dimension(p: &Poset, max_d: Option<usize>) -> Result<(usize, PairColoring)> {
    exact_dimension_with(
        p,
        &SolverConfig {
            max_d,
            node_limit: None,
        },
        None,
    )
}

/// Exact dimension with an optional seed coloring. A seed is only used as an
/// upper bound after it has been checked valid.
pub fn exact_dimension_with(
    p: &Poset,
    cfg: &SolverConfig,
    seed: Option<&PairColoring>,
) -> Result<(usize, PairColoring)> {
    let crit = p.critical_pairs();
    if crit.is_empty() {
        return Ok((1, PairColoring::new()));
    }
    let comps = p.cover_graph().components();
    if comps.len() > 1 {
        // dimension of a disjoint union is max(2, dimensions of the parts)
        if cfg.max_d.is_some_and(|cap| cap < 2) {
            return Err(Error::BudgetExceeded(cfg.max_d.unwrap_or(0)));
        }
        let mut d = 2;
        let mut parts = Vec::new();
        for elems in &comps {
            let (k, c) = exact_dimension_with(&p.induced(elems).0, cfg, None)?;
            d = d.max(k);
            parts.push(c);
        }
        let c = merge_components(p, &comps, &parts).normalized();
        if c.num_colors() != d || check_coloring(p, &c)? != Verdict::Valid {
            return Err(Error::Internal("component merge produced a bad witness".into()));
        }
        return Ok((d, c));
    }
    let mut upper: Option<(usize, PairColoring)> = None;
    if let Some(seed) = seed {
        if let Ok(Verdict::Valid) = check_coloring(p, seed) {
            let s = seed.normalized();
            upper = Some((s.num_colors().max(1), s));
        }
    }
    let lower = clique_lower_bound(p, &crit).max(2);
    let mut d = lower;
    loop {
        if let Some((ub, seed)) = &upper {
            if d >= *ub {
                return Ok((*ub, seed.clone()));
            }
        }
        if cfg.max_d.is_some_and(|cap| d > cap) {
            return Err(Error::BudgetExceeded(d - 1));
        }
        if let Some(c) = search_with_limit(p, d, cfg.node_limit)? {
            let c = c.normalized();
            if c.num_colors() != d || check_coloring(p, &c)? != Verdict::Valid {
                return Err(Error::Internal("solver produced a bad witness".into()));
            }
            return Ok((d, c));
        }
        d += 1;
    }
}

/// Every linear extension of `p`, in lexicographic order of the sequence.
pub fn linear_extensions(p: &Poset) -> Vec<Vec<usize>> {
    fn rec(p: &Poset, placed: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if placed.len() == p.len() {
            out.push(placed.clone());
            return;
        }
        for x in 0..p.len() {
            if !used[x] && p.strict_down(x).ones().all(|y| used[y]) {
                used[x] = true;
                placed.push(x);
                rec(p, placed, used, out);
                placed.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(p, &mut Vec::new(), &mut vec![false; p.len()], &mut out);
    out
}

/// Smallest number of linear extensions whose intersection is the order,
/// by enumeration. Independent of the pair-coloring search.
pub fn oracle_dimension(p: &Poset) -> Result<usize> {
    if p.len() > ORACLE_MAX_ELEMENTS {
        return Err(Error::Domain(format!(
            "oracle is limited to {ORACLE_MAX_ELEMENTS} elements, got {}",
            p.len()
        )));
    }
    let n = p.len();
    // bit index for every ordered pair of distinct elements that is incomparable
    let mut bit = vec![vec![None; n]; n];
    let mut k = 0;
    for x in 0..n {
        for y in 0..n {
            if x != y && !p.lt(x, y) && !p.lt(y, x) {
                bit[x][y] = Some(k);
                k += 1;
            }
        }
    }
    if k == 0 {
        return Ok(1);
    }
    let full: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    // mask of ordered pairs (x, y) with y before x
    let mut masks: Vec<u64> = linear_extensions(p)
        .iter()
        .map(|order| {
            let mut m = 0u64;
            for (i, &a) in order.iter().enumerate() {
                for &b in &order[i + 1..] {
                    if let Some(j) = bit[b][a] {
                        m |= 1 << j;
                    }
                }
            }
            m
        })
        .collect();
    masks.sort_unstable();
    masks.dedup();
    let maximal: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == m))
        .collect();

    fn covers(masks: &[u64], from: usize, left: usize, acc: u64, full: u64) -> bool {
        if acc == full {
            return true;
        }
        if left == 0 {
            return false;
        }
        (from..masks.len()).any(|i| covers(masks, i + 1, left - 1, acc | masks[i], full))
    }
    let mut t = 1;
    loop {
        if covers(&maximal, 0, t, 0, full) {
            return Ok(t);
        }
        t += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::standard_example;

    #[test]
    fn chains_have_dimension_one() {
        let (d, c) = exact_dimension(&Poset::chain(4), None).unwrap();
        assert_eq!(d, 1);
        assert!(c.is_empty());
        assert!(has_valid_coloring(&Poset::chain(5), 1).is_some());
    }

    #[test]
    fn standard_example_four() {
        let s4 = standard_example(4).unwrap().poset;
        let (d, c) = exact_dimension(&s4, None).unwrap();
        assert_eq!(d, 4);
        assert_eq!(c.num_colors(), 4);
    }

    #[test]
    fn s3_decision_problem() {
        let s3 = standard_example(3).unwrap().poset;
        assert!(has_valid_coloring(&s3, 2).is_none());
        let c = has_valid_coloring(&s3, 3).unwrap();
        assert!(check_coloring(&s3, &c).unwrap().is_valid());
    }

    #[test]
    fn antichain_three() {
        // oracle value: no single order of 3 elements reverses every pair,
        // one order and its reverse do
        assert_eq!(oracle_dimension(&Poset::antichain(3)).unwrap(), 2);
        assert_eq!(exact_dimension(&Poset::antichain(3), None).unwrap().0, 2);
    }

    #[test]
    fn oracle_small_cases() {
        let s2 = standard_example(2).unwrap().poset;
        assert_eq!(linear_extensions(&s2).len(), 6);
        assert_eq!(oracle_dimension(&s2).unwrap(), 2);
        assert_eq!(oracle_dimension(&Poset::antichain(2)).unwrap(), 2);
        assert_eq!(oracle_dimension(&Poset::chain(3)).unwrap(), 1);
        assert!(oracle_dimension(&Poset::antichain(8)).is_err());
    }

    #[test]
    fn budget() {
        let s4 = standard_example(4).unwrap().poset;
        assert_eq!(exact_dimension(&s4, Some(3)), Err(Error::BudgetExceeded(3)));
    }

    #[test]
    fn seeds_are_checked() {
        let s3 = standard_example(3).unwrap().poset;
        let bogus: PairColoring = s3.incomparable_pairs().into_iter().map(|q| (q, 0)).collect();
        let (d, c) = exact_dimension_with(&s3, &SolverConfig::default(), Some(&bogus)).unwrap();
        assert_eq!(d, 3);
        assert!(check_coloring(&s3, &c).unwrap().is_valid());
    }
}
