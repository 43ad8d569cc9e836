//! Weak and strong gadget extensions of bag subposets.
//!
//! For a bag `Z`, every vertex outside `Z` is summarized by the adhesion set
//! through which it is reached and by its trace on `Z` (the part of `Z` above
//! it, or below it). Each distinct (adhesion set, trace) pair becomes one
//! gadget vertex: minimal `x` vertices for up-traces and maximal `y` vertices
//! for down-traces.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::decomp::{intersect, TreeDecomposition};
use crate::error::{Error, Result};
use crate::poset::{CoverGraph, Poset};

/// Adhesion sets of one bag and, for every vertex outside the bag, the
/// adhesion set on the tree path towards it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdhesionFamily {
    pub bag: usize,
    /// Sorted, deduplicated adhesion sets (as sorted vertex lists).
    pub sets: Vec<Vec<usize>>,
    /// `toward[v]`: index into `sets` for `v` outside the bag, `None` inside.
    pub toward: Vec<Option<usize>>,
}

impl AdhesionFamily {
    pub fn contains(&self, v: usize) -> bool {
        self.toward[v].is_none()
    }

    /// The adhesion set towards an outside vertex.
    pub fn adhesion_of(&self, v: usize) -> Option<&[usize]> {
        self.toward[v].map(|k| self.sets[k].as_slice())
    }

    /// 1 when both vertices are outside the bag behind the same adhesion
    /// set, 2 otherwise.
    pub fn side(&self, x: usize, y: usize) -> u8 {
        match (self.toward[x], self.toward[y]) {
            (Some(a), Some(b)) if a == b => 1,
            _ => 2,
        }
    }
}

/// Computes the adhesion family of bag `z`. Vertices reachable through
/// several neighbors, or through none, mean the decomposition is invalid.
pub fn adhesion_family(td: &TreeDecomposition, z: usize) -> Result<AdhesionFamily> {
    let adj = td.neighbors();
    let bag = &td.bags[z];
    let mut sets: Vec<Vec<usize>> = adj[z].iter().map(|&w| intersect(bag, &td.bags[w])).collect();
    sets.sort();
    sets.dedup();
    let mut toward = vec![None; td.num_vertices];
    let mut seen = vec![false; td.num_bags()];
    seen[z] = true;
    for &w in &adj[z] {
        let k = sets
            .binary_search(&intersect(bag, &td.bags[w]))
            .expect("adhesion set listed");
        let mut queue = VecDeque::from([w]);
        seen[w] = true;
        while let Some(b) = queue.pop_front() {
            for &v in &td.bags[b] {
                if bag.binary_search(&v).is_ok() {
                    continue;
                }
                match toward[v] {
                    None => toward[v] = Some(k),
                    Some(j) if j == k => {}
                    Some(_) => {
                        return Err(Error::Decomposition(format!(
                            "vertex {v} appears on two sides of bag {z}"
                        )))
                    }
                }
            }
            for &c in &adj[b] {
                if !seen[c] {
                    seen[c] = true;
                    queue.push_back(c);
                }
            }
        }
    }
    for (v, t) in toward.iter().enumerate() {
        if t.is_none() && bag.binary_search(&v).is_err() {
            return Err(Error::Decomposition(format!("vertex {v} lies in no bag")));
        }
    }
    Ok(AdhesionFamily {
        bag: z,
        sets,
        toward,
    })
}

fn trace(members: &fixedbitset::FixedBitSet, bag: &[usize]) -> Vec<usize> {
    bag.iter().copied().filter(|&v| members.contains(v)).collect()
}

/// `Z ∩ ↑x` for `x` outside the bag.
fn up_trace(p: &Poset, bag: &[usize], x: usize) -> Vec<usize> {
    trace(p.strict_up(x), bag)
}

/// `Z ∩ ↓y` for `y` outside the bag.
fn down_trace(p: &Poset, bag: &[usize], y: usize) -> Vec<usize> {
    trace(p.strict_down(y), bag)
}

/// Whether `u` (sorted, inside `bag`) is an up-set of `P[bag]` generated by
/// its elements in `k`.
pub fn is_k_up_set(p: &Poset, bag: &[usize], k: &[usize], u: &[usize]) -> bool {
    let generated: BTreeSet<usize> = u
        .iter()
        .filter(|v| k.contains(v))
        .flat_map(|&g| bag.iter().copied().filter(move |&w| p.le(g, w)))
        .collect();
    generated.into_iter().eq(u.iter().copied())
}

/// Dual of [`is_k_up_set`].
pub fn is_k_down_set(p: &Poset, bag: &[usize], k: &[usize], d: &[usize]) -> bool {
    let generated: BTreeSet<usize> = d
        .iter()
        .filter(|v| k.contains(v))
        .flat_map(|&g| bag.iter().copied().filter(move |&w| p.le(w, g)))
        .collect();
    generated.into_iter().eq(d.iter().copied())
}

fn realized(
    p: &Poset,
    td: &TreeDecomposition,
    fam: &AdhesionFamily,
    k: usize,
    kind: Kind,
) -> Result<Vec<Vec<usize>>> {
    let bag = &td.bags[fam.bag];
    let mut out = BTreeSet::new();
    for v in 0..p.len() {
        if fam.toward[v] != Some(k) {
            continue;
        }
        let s = match kind {
            Kind::Up => up_trace(p, bag, v),
            Kind::Down => down_trace(p, bag, v),
        };
        let ok = match kind {
            Kind::Up => is_k_up_set(p, bag, &fam.sets[k], &s),
            Kind::Down => is_k_down_set(p, bag, &fam.sets[k], &s),
        };
        if !ok {
            return Err(Error::Internal(format!(
                "trace of vertex {v} on bag {} is not generated by its adhesion set",
                fam.bag
            )));
        }
        out.insert(s);
    }
    Ok(out.into_iter().collect())
}

/// Up-traces realized by outside vertices behind adhesion set `k`, sorted.
pub fn realized_up_sets(
    p: &Poset,
    td: &TreeDecomposition,
    fam: &AdhesionFamily,
    k: usize,
) -> Result<Vec<Vec<usize>>> {
    realized(p, td, fam, k, Kind::Up)
}

/// Down-traces realized by outside vertices behind adhesion set `k`, sorted.
pub fn realized_down_sets(
    p: &Poset,
    td: &TreeDecomposition,
    fam: &AdhesionFamily,
    k: usize,
) -> Result<Vec<Vec<usize>>> {
    realized(p, td, fam, k, Kind::Down)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// A minimal vertex below its trace.
    Up,
    /// A maximal vertex above its trace.
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Weak,
    Strong,
}

/// Structural identity of a gadget vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GadgetKey {
    pub kind: Kind,
    /// Index into the adhesion family.
    pub k: usize,
    /// Trace on the bag, as sorted vertices of the original poset.
    pub set: Vec<usize>,
}

/// A bag subposet enriched with gadget vertices.
///
/// Vertex `i < base.len()` of [`GadgetExtension::poset`] is `base[i]`;
/// vertex `base.len() + j` is the gadget vertex `keys[j]`.
#[derive(Clone, Debug)]
pub struct GadgetExtension {
    pub variant: Variant,
    pub base: Vec<usize>,
    pub keys: Vec<GadgetKey>,
    pub poset: Poset,
    pub family: AdhesionFamily,
    lower_image: Vec<usize>,
    upper_image: Vec<usize>,
    gadget_id: Vec<Option<u32>>,
}

impl GadgetExtension {
    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// Image of `x` used as the first member of a pair.
    pub fn lower_image(&self, x: usize) -> usize {
        self.lower_image[x]
    }

    /// Image of `y` used as the second member of a pair.
    pub fn upper_image(&self, y: usize) -> usize {
        self.upper_image[y]
    }

    /// Identifier of an up-gadget vertex, unique among the up-gadgets of its
    /// adhesion set; `None` for other vertices.
    pub fn gadget_id(&self, v: usize) -> Option<u32> {
        self.gadget_id[v]
    }

    pub fn side(&self, x: usize, y: usize) -> u8 {
        self.family.side(x, y)
    }

    pub fn key_of(&self, v: usize) -> Option<&GadgetKey> {
        v.checked_sub(self.base.len()).map(|j| &self.keys[j])
    }

    /// For each adhesion set (as extension vertices), the gadget vertices
    /// attached to it. Sets without realized gadgets are omitted.
    pub fn gadget_layout(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let local = |v: usize| self.base.binary_search(&v).expect("adhesion inside bag");
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (j, key) in self.keys.iter().enumerate() {
            let k: Vec<usize> = self.family.sets[key.k].iter().map(|&v| local(v)).collect();
            let v = self.base.len() + j;
            match out.iter_mut().find(|(kk, _)| *kk == k) {
                Some((_, xs)) => xs.push(v),
                None => out.push((k, vec![v])),
            }
        }
        out
    }
}

fn key_label(p: &Poset, key: &GadgetKey, fam: &AdhesionFamily) -> String {
    let names = |s: &[usize]| s.iter().map(|&v| p.label(v)).collect::<Vec<_>>().join(",");
    let head = match key.kind {
        Kind::Up => "x",
        Kind::Down => "y",
    };
    format!("{head}[{};{}]", names(&fam.sets[key.k]), names(&key.set))
}

/// Builds the weak or strong gadget extension of bag `z`.
pub fn build_extension(
    p: &Poset,
    td: &TreeDecomposition,
    z: usize,
    variant: Variant,
) -> Result<GadgetExtension> {
    let fam = adhesion_family(td, z)?;
    build_with_family(p, td, fam, variant)
}

/// Builds both variants, sharing the vertex layout.
pub fn build_extensions(
    p: &Poset,
    td: &TreeDecomposition,
    z: usize,
) -> Result<(GadgetExtension, GadgetExtension)> {
    let fam = adhesion_family(td, z)?;
    let weak = build_with_family(p, td, fam.clone(), Variant::Weak)?;
    let strong = build_with_family(p, td, fam, Variant::Strong)?;
    Ok((weak, strong))
}

fn build_with_family(
    p: &Poset,
    td: &TreeDecomposition,
    fam: AdhesionFamily,
    variant: Variant,
) -> Result<GadgetExtension> {
    let base = td.bags[fam.bag].clone();
    let b = base.len();
    let mut keys = Vec::new();
    for k in 0..fam.sets.len() {
        for set in realized_up_sets(p, td, &fam, k)? {
            keys.push(GadgetKey {
                kind: Kind::Up,
                k,
                set,
            });
        }
        for set in realized_down_sets(p, td, &fam, k)? {
            keys.push(GadgetKey {
                kind: Kind::Down,
                k,
                set,
            });
        }
    }
    keys.sort();
    let total = b + keys.len();
    let local = |v: usize| base.binary_search(&v).expect("trace inside bag");

    let mut arcs = Vec::new();
    for (i, &u) in base.iter().enumerate() {
        for (j, &v) in base.iter().enumerate() {
            if p.lt(u, v) {
                arcs.push((i, j));
            }
        }
    }
    for (j, key) in keys.iter().enumerate() {
        for &v in &key.set {
            match key.kind {
                Kind::Up => arcs.push((b + j, local(v))),
                Kind::Down => arcs.push((local(v), b + j)),
            }
        }
    }
    for (i, kx) in keys.iter().enumerate() {
        if kx.kind != Kind::Up {
            continue;
        }
        for (j, ky) in keys.iter().enumerate() {
            if ky.kind != Kind::Down {
                continue;
            }
            let meet = kx.set.iter().any(|v| ky.set.binary_search(v).is_ok());
            let same = variant == Variant::Strong && kx.k == ky.k;
            if meet || same {
                arcs.push((b + i, b + j));
            }
        }
    }
    let declared = arcs.len();
    let labels: Vec<String> = base
        .iter()
        .map(|&v| p.label(v))
        .chain(keys.iter().map(|k| key_label(p, k, &fam)))
        .collect();
    let poset = Poset::from_relations(total, arcs)?.with_labels(labels);
    if poset.num_relations() != declared {
        return Err(Error::Internal(format!(
            "gadget relation of bag {} is not transitively closed",
            fam.bag
        )));
    }

    let key_index = |key: &GadgetKey| b + keys.binary_search(key).expect("realized key");
    let mut lower_image = vec![0; p.len()];
    let mut upper_image = vec![0; p.len()];
    for v in 0..p.len() {
        match fam.toward[v] {
            None => {
                lower_image[v] = local(v);
                upper_image[v] = local(v);
            }
            Some(k) => {
                lower_image[v] = key_index(&GadgetKey {
                    kind: Kind::Up,
                    k,
                    set: up_trace(p, &base, v),
                });
                upper_image[v] = key_index(&GadgetKey {
                    kind: Kind::Down,
                    k,
                    set: down_trace(p, &base, v),
                });
            }
        }
    }
    let mut gadget_id = vec![None; total];
    let mut counter = 0u32;
    let mut current = None;
    for (j, key) in keys.iter().enumerate() {
        if key.kind != Kind::Up {
            continue;
        }
        if current != Some(key.k) {
            current = Some(key.k);
            counter = 0;
        }
        counter += 1;
        gadget_id[b + j] = Some(counter);
    }
    Ok(GadgetExtension {
        variant,
        base,
        keys,
        poset,
        family: fam,
        lower_image,
        upper_image,
        gadget_id,
    })
}

/// Why a graph fails the bag-plus-gadgets structure check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureViolation {
    AdhesionTooLarge { set: Vec<usize> },
    GadgetTooLarge { set: Vec<usize>, size: usize },
    NotAPartition { vertex: usize },
    NotInBag { vertex: usize },
    Edge { u: usize, v: usize },
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureViolation::AdhesionTooLarge { set } => {
                write!(f, "adhesion set {set:?} is larger than allowed")
            }
            StructureViolation::GadgetTooLarge { set, size } => {
                write!(f, "gadget of {set:?} has {size} vertices, more than allowed")
            }
            StructureViolation::NotAPartition { vertex } => {
                write!(f, "vertex {vertex} is not in exactly one gadget")
            }
            StructureViolation::NotInBag { vertex } => {
                write!(f, "adhesion vertex {vertex} is not in the bag")
            }
            StructureViolation::Edge { u, v } => {
                write!(f, "edge {u}-{v} leaves its gadget")
            }
        }
    }
}

/// Checks that `g` consists of the bag `0..bag_len` plus, for each adhesion
/// set `K` in `layout`, a gadget `X_K` with `|K| <= s`, `|X_K| <= 2^(s+1)`,
/// the gadgets partitioning the remaining vertices, and every edge touching
/// `X_K` staying inside `K ∪ X_K`.
pub fn check_structure(
    g: &CoverGraph,
    bag_len: usize,
    layout: &[(Vec<usize>, Vec<usize>)],
    s: usize,
) -> std::result::Result<(), StructureViolation> {
    let mut owner = vec![None; g.n];
    for (i, (k, xs)) in layout.iter().enumerate() {
        if k.len() > s {
            return Err(StructureViolation::AdhesionTooLarge { set: k.clone() });
        }
        if let Some(&v) = k.iter().find(|&&v| v >= bag_len) {
            return Err(StructureViolation::NotInBag { vertex: v });
        }
        if xs.len() > 1 << (s + 1) {
            return Err(StructureViolation::GadgetTooLarge {
                set: k.clone(),
                size: xs.len(),
            });
        }
        for &v in xs {
            if v < bag_len || owner[v].is_some() {
                return Err(StructureViolation::NotAPartition { vertex: v });
            }
            owner[v] = Some(i);
        }
    }
    if let Some(v) = (bag_len..g.n).find(|&v| owner[v].is_none()) {
        return Err(StructureViolation::NotAPartition { vertex: v });
    }
    for &(u, v) in &g.edges {
        let fits = |a: usize, b: usize| match owner[a] {
            None => true,
            Some(i) => owner[b] == Some(i) || layout[i].0.contains(&b),
        };
        if !fits(u, v) || !fits(v, u) {
            return Err(StructureViolation::Edge { u, v });
        }
    }
    Ok(())
}

/// Runs [`check_structure`] on the cover graph of an extension with its own
/// layout.
pub fn check_extension_structure(
    ext: &GadgetExtension,
    s: usize,
) -> std::result::Result<(), StructureViolation> {
    check_structure(&ext.poset.cover_graph(), ext.base.len(), &ext.gadget_layout(), s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::subset_poset;
    use crate::poset::IncPair;

    fn dm(n: usize) -> (Poset, TreeDecomposition) {
        let c = subset_poset(n).unwrap();
        (c.poset, c.decomposition.unwrap())
    }

    #[test]
    fn single_bag_has_no_gadgets() {
        let p = Poset::chain(3);
        let td = TreeDecomposition::trivial(3);
        let fam = adhesion_family(&td, 0).unwrap();
        assert!(fam.sets.is_empty());
        let ext = build_extension(&p, &td, 0, Variant::Strong).unwrap();
        assert_eq!(ext.poset.relations().collect::<Vec<_>>(), p.relations().collect::<Vec<_>>());
        assert!(check_extension_structure(&ext, 0).is_ok());
    }

    #[test]
    fn dm_center_family() {
        let (p, td) = dm(3);
        let fam = adhesion_family(&td, 0).unwrap();
        assert_eq!(fam.sets, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        // {1,2} is element 3, {1,3} element 4, {2,3} element 5
        assert_eq!(fam.adhesion_of(3), Some(&[0, 1][..]));
        assert_eq!(fam.adhesion_of(5), Some(&[1, 2][..]));
        assert_eq!(realized_down_sets(&p, &td, &fam, 0).unwrap(), vec![vec![0, 1]]);
        // nothing outside sits above a doubleton, so its up-trace is empty
        assert_eq!(realized_up_sets(&p, &td, &fam, 0).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(fam.side(3, 3), 1);
        assert_eq!(fam.side(3, 4), 2);
        assert_eq!(fam.side(0, 3), 2);
    }

    #[test]
    fn dm_center_weak_extension() {
        let (p, td) = dm(3);
        let ext = build_extension(&p, &td, 0, Variant::Weak).unwrap();
        // 3 singletons, 3 y-gadgets and 3 empty-trace x-gadgets
        assert_eq!(ext.len(), 9);
        assert_eq!(ext.poset.height(), 2);
        for v in 3..6 {
            let y = ext.upper_image(v);
            assert_eq!(ext.key_of(y).unwrap().kind, Kind::Down);
            assert_eq!(ext.poset.strict_down(y).count_ones(..), 2);
            assert!(ext.poset.strict_up(y).is_clear());
        }
        assert_eq!(ext.lower_image(1), 1);
        for v in 0..ext.len() {
            if let Some(key) = ext.key_of(v) {
                match key.kind {
                    Kind::Up => assert!(ext.poset.strict_down(v).is_clear()),
                    Kind::Down => assert!(ext.poset.strict_up(v).is_clear()),
                }
            }
        }
        assert!(check_extension_structure(&ext, 2).is_ok());
        assert!(check_extension_structure(&ext, 1).is_err());
    }

    #[test]
    fn strong_differs_only_inside_gadgets() {
        let (p, td) = dm(4);
        let (weak, strong) = build_extensions(&p, &td, 0).unwrap();
        assert_eq!(weak.keys, strong.keys);
        for (u, v) in strong.poset.relations() {
            if !weak.poset.lt(u, v) {
                let (ku, kv) = (strong.key_of(u).unwrap(), strong.key_of(v).unwrap());
                assert_eq!((ku.kind, kv.kind), (Kind::Up, Kind::Down));
                assert_eq!(ku.k, kv.k);
                assert!(ku.set.iter().all(|x| !kv.set.contains(x)));
            }
        }
        assert!(weak.poset.relations().all(|(u, v)| strong.poset.lt(u, v)));
    }

    #[test]
    fn leaf_extension_and_ids() {
        let (p, td) = dm(4);
        for z in 1..td.num_bags() {
            let ext = build_extension(&p, &td, z, Variant::Weak).unwrap();
            assert_eq!(ext.family.sets.len(), 1);
            let ids: Vec<u32> = (0..ext.len()).filter_map(|v| ext.gadget_id(v)).collect();
            let expect: Vec<u32> = (1..=ids.len() as u32).collect();
            assert_eq!(ids, expect);
            assert!(ext.poset.height() <= p.height());
        }
    }

    #[test]
    fn images_of_incomparable_pairs() {
        let (p, td) = dm(4);
        for z in 0..td.num_bags() {
            let (weak, strong) = build_extensions(&p, &td, z).unwrap();
            for q in p.incomparable_pairs() {
                let img = IncPair::new(weak.lower_image(q.x), weak.upper_image(q.y));
                assert!(weak.poset.incomparable(img.x, img.y));
                if strong.side(q.x, q.y) == 2 {
                    assert!(strong.poset.incomparable(img.x, img.y));
                }
            }
            for (x, y) in p.relations() {
                assert!(strong.poset.le(strong.lower_image(x), strong.upper_image(y)));
            }
        }
    }

    #[test]
    fn structure_violation_is_reported() {
        // bag {0}, gadgets {1} on K={0} and {2} on K={0}, plus a 1-2 edge
        let g = CoverGraph::new(3, vec![(0, 1), (1, 2)]);
        let layout = vec![(vec![0], vec![1]), (vec![0], vec![2])];
        assert_eq!(
            check_structure(&g, 1, &layout, 1),
            Err(StructureViolation::Edge { u: 1, v: 2 })
        );
        let merged = vec![(vec![0], vec![1, 2])];
        assert!(check_structure(&g, 1, &merged, 1).is_ok());
    }
}
