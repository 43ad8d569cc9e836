//! Colorings of `Inc(P)` assembled from smaller pieces.
//!
//! [`decompose_and_color`] colors pairs whose lowest bags are far apart in
//! the planted tree with four reserved colors and every other pair by its
//! signature, a record built from bag colors and from colorings of the gadget
//! extensions of the bags near the pair. [`diameter_color`] and
//! [`apex_color`] are the layer and apex reductions. Every result is checked
//! with [`check_coloring`] before it is returned.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::decomp::{color_bags, meet_of, predecessor_and_order_with, BagColoring, ChildOrder, PlantedTree, TreeDecomposition};
use crate::error::{Error, Result};
use crate::gadget::{build_extensions, GadgetExtension};
use crate::poset::{check_coloring, Color, IncPair, PairColoring, Poset, Verdict};
use crate::solver::exact_dimension;

/// Exact colorings of both gadget extensions of one bag.
#[derive(Clone, Debug)]
pub struct BagSolution {
    pub weak: GadgetExtension,
    pub strong: GadgetExtension,
    pub weak_coloring: PairColoring,
    pub strong_coloring: PairColoring,
    pub weak_dim: usize,
    pub strong_dim: usize,
}

/// Builds both extensions of every bag and colors them exactly. The result
/// does not depend on the root or child order and can be reused across
/// plantings. `jobs > 1` solves bags on a thread pool of that size.
pub fn prepare_bag_solutions(
    p: &Poset,
    td: &TreeDecomposition,
    max_d: Option<usize>,
    jobs: usize,
) -> Result<Vec<BagSolution>> {
    let solve = |z: usize| -> Result<BagSolution> {
        let (weak, strong) = build_extensions(p, td, z)?;
        let (weak_dim, weak_coloring) = exact_dimension(&weak.poset, max_d)?;
        let (strong_dim, strong_coloring) = exact_dimension(&strong.poset, max_d)?;
        Ok(BagSolution {
            weak,
            strong,
            weak_coloring,
            strong_coloring,
            weak_dim,
            strong_dim,
        })
    };
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        pool.install(|| (0..td.num_bags()).into_par_iter().map(solve).collect())
    } else {
        (0..td.num_bags()).map(solve).collect()
    }
}

/// Root, child order and bag order for one run.
#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub root: usize,
    pub child_order: ChildOrder,
    /// Rank of each bag in the strict total order on bags; bag index when
    /// absent.
    pub prec: Option<Vec<usize>>,
    pub max_d: Option<usize>,
    pub jobs: usize,
}

/// Pairs colored by the position of their lowest bags alone.
#[derive(Clone, Debug, Default)]
pub struct FarSets {
    /// The four sets in full; a pair may lie in several.
    pub sets: [Vec<IncPair>; 4],
    /// Pairs in none of the four sets.
    pub rest: Vec<IncPair>,
}

impl FarSets {
    /// Index of the first set containing `q`.
    pub fn first_set(&self, q: IncPair) -> Option<usize> {
        self.sets.iter().position(|s| s.binary_search(&q).is_ok())
    }
}

/// Splits `Inc(P)` into the four far sets and the rest, and checks that
/// each far set is reversible and that every remaining pair has a common
/// bag within distance `h`.
pub fn far_pair_sets(p: &Poset, pt: &PlantedTree, h: usize) -> Result<FarSets> {
    let near = pt.balls(h.saturating_sub(1));
    let wide = pt.balls(h);
    let mut out = FarSets::default();
    for q in p.incomparable_pairs() {
        let (lx, ly) = (pt.low(q.x), pt.low(q.y));
        let tests = [
            near[ly].iter().all(|&b| pt.left_rank(lx) < pt.left_rank(b)),
            near[ly].iter().all(|&b| pt.right_rank(lx) < pt.right_rank(b)),
            near[lx].iter().all(|&b| pt.left_rank(ly) < pt.left_rank(b)),
            near[lx].iter().all(|&b| pt.right_rank(ly) < pt.right_rank(b)),
        ];
        let mut any = false;
        for (j, hit) in tests.into_iter().enumerate() {
            if hit {
                out.sets[j].push(q);
                any = true;
            }
        }
        if !any {
            if meet_of(&wide[lx], &wide[ly]).is_none() {
                return Err(Error::Internal(format!(
                    "pair ({}, {}) is near but its balls are disjoint",
                    q.x, q.y
                )));
            }
            out.rest.push(q);
        }
    }
    for (j, set) in out.sets.iter().enumerate() {
        if let Some(cycle) = crate::poset::find_alternating_cycle(p, set)? {
            return Err(Error::Internal(format!(
                "far set {} contains an alternating cycle of length {}",
                j + 1,
                cycle.len()
            )));
        }
    }
    Ok(out)
}

/// Per-bag component of a signature, keyed by the bag's color.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignatureRecord {
    pub bag_color: u32,
    pub weak_color: Color,
    /// `None` when both members lie behind the same adhesion set, where the
    /// image pair is comparable in the strong extension.
    pub strong_color: Option<Color>,
    pub side: u8,
    /// Rank comparison from [`crate::decomp::predecessor_and_order`].
    pub order: u8,
    /// Identifier of the image of the first member; `None` at its lowest bag.
    pub gadget_id: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub seq_x: Vec<u32>,
    pub seq_y: Vec<u32>,
    /// Sorted by bag color.
    pub records: Vec<SignatureRecord>,
}

impl Signature {
    /// Deterministic fixed-width little-endian encoding.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut put = |v: u32| out.extend_from_slice(&v.to_le_bytes());
        put(self.seq_x.len() as u32);
        self.seq_x.iter().for_each(|&c| put(c));
        put(self.seq_y.len() as u32);
        self.seq_y.iter().for_each(|&c| put(c));
        put(self.records.len() as u32);
        for r in &self.records {
            put(r.bag_color);
            put(r.weak_color);
            put(r.strong_color.unwrap_or(u32::MAX));
            put(u32::from(r.side));
            put(u32::from(r.order));
            put(r.gadget_id.unwrap_or(0));
        }
        out
    }
}

/// Everything needed to compute signatures for one planting.
pub struct SignatureContext<'a> {
    pub pt: PlantedTree,
    pub bag_colors: BagColoring,
    pub prec: Vec<usize>,
    pub h: usize,
    balls: Vec<Vec<usize>>,
    solutions: &'a [BagSolution],
}

impl<'a> SignatureContext<'a> {
    pub fn new(
        p: &Poset,
        td: &TreeDecomposition,
        solutions: &'a [BagSolution],
        opts: &PipelineOptions,
    ) -> Result<Self> {
        if solutions.len() != td.num_bags() {
            return Err(Error::Precondition(format!(
                "{} bag solutions for {} bags",
                solutions.len(),
                td.num_bags()
            )));
        }
        let pt = PlantedTree::plant(td, opts.root, &opts.child_order)?;
        let h = p.height();
        let bag_colors = color_bags(&pt, h);
        let prec = match &opts.prec {
            Some(rank) if rank.len() == td.num_bags() => rank.clone(),
            Some(_) => return Err(Error::Domain("bag order has the wrong length".into())),
            None => (0..td.num_bags()).collect(),
        };
        let balls = pt.balls(h);
        Ok(SignatureContext {
            pt,
            bag_colors,
            prec,
            h,
            balls,
            solutions,
        })
    }

    /// Bags in both radius-`h` balls of the lowest bags of `x` and `y`, top to
    /// bottom.
    pub fn common_bags(&self, x: usize, y: usize) -> Vec<usize> {
        let by = &self.balls[self.pt.low(y)];
        self.balls[self.pt.low(x)]
            .iter()
            .copied()
            .filter(|b| by.contains(b))
            .collect()
    }

    pub fn signature(&self, q: IncPair) -> Result<Signature> {
        let (lx, ly) = (self.pt.low(q.x), self.pt.low(q.y));
        let (bx, by) = (&self.balls[lx], &self.balls[ly]);
        let colors = |ball: &[usize]| ball.iter().map(|&b| self.bag_colors.colors[b]).collect::<Vec<_>>();
        let mut records = Vec::new();
        for z in self.common_bags(q.x, q.y) {
            let sol = &self.solutions[z];
            let image = IncPair::new(sol.weak.lower_image(q.x), sol.weak.upper_image(q.y));
            let weak_color = sol.weak_coloring.get(image).ok_or_else(|| {
                Error::Internal(format!("image of ({}, {}) at bag {z} is comparable", q.x, q.y))
            })?;
            let side = sol.weak.side(q.x, q.y);
            let strong_color = if side == 1 {
                None
            } else {
                let strong = IncPair::new(sol.strong.lower_image(q.x), sol.strong.upper_image(q.y));
                Some(sol.strong_coloring.get(strong).ok_or_else(|| {
                    Error::Internal(format!(
                        "strong image of ({}, {}) at bag {z} is comparable",
                        q.x, q.y
                    ))
                })?)
            };
            let (_, order) = predecessor_and_order_with(&self.pt, &self.bag_colors, &self.prec, bx, by, z)?;
            let gadget_id = if z == lx {
                None
            } else {
                Some(sol.weak.gadget_id(image.x).ok_or_else(|| {
                    Error::Internal(format!("vertex {} has no gadget at bag {z}", q.x))
                })?)
            };
            records.push(SignatureRecord {
                bag_color: self.bag_colors.colors[z],
                weak_color,
                strong_color,
                side,
                order,
                gadget_id,
            });
        }
        records.sort();
        Ok(Signature {
            seq_x: colors(bx),
            seq_y: colors(by),
            records,
        })
    }
}

/// Summary of one pipeline run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub height: usize,
    pub adhesion: usize,
    /// Largest dimension over both extensions of all bags.
    pub d: usize,
    /// `(weak, strong)` dimension per bag.
    pub bag_dims: Vec<(usize, usize)>,
    /// Vertex count of the extensions per bag.
    pub extension_sizes: Vec<usize>,
    pub root: usize,
    pub bag_palette: usize,
    pub far_sizes: [usize; 4],
    pub near_pairs: usize,
    pub signatures: usize,
    pub colors_used: usize,
    /// `4 + signatures`.
    pub palette: usize,
    pub valid: bool,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "height: {}", self.height)?;
        writeln!(f, "adhesion: {}", self.adhesion)?;
        writeln!(f, "d: {}", self.d)?;
        let dims: Vec<String> = self
            .bag_dims
            .iter()
            .map(|(w, s)| format!("{w}/{s}"))
            .collect();
        writeln!(f, "bag dims (weak/strong): {}", dims.join(" "))?;
        let sizes: Vec<String> = self.extension_sizes.iter().map(|s| s.to_string()).collect();
        writeln!(f, "extension sizes: {}", sizes.join(" "))?;
        writeln!(f, "root: {}", self.root + 1)?;
        writeln!(f, "bag colors: {}", self.bag_palette)?;
        let far: Vec<String> = self.far_sizes.iter().map(|s| s.to_string()).collect();
        writeln!(f, "far pairs: {}", far.join(" "))?;
        writeln!(f, "near pairs: {}", self.near_pairs)?;
        writeln!(f, "signatures: {}", self.signatures)?;
        writeln!(f, "palette: {}", self.palette)?;
        writeln!(f, "colors used: {}", self.colors_used)?;
        write!(f, "valid: {}", self.valid)
    }
}

fn verified(p: &Poset, coloring: PairColoring) -> Result<PairColoring> {
    match check_coloring(p, &coloring)? {
        Verdict::Valid => Ok(coloring),
        Verdict::Invalid { color, cycle } => Err(Error::Validity { color, cycle }),
    }
}

/// Validates `td`, solves every bag and colors `Inc(P)`.
pub fn decompose_and_color(
    p: &Poset,
    td: &TreeDecomposition,
    opts: &PipelineOptions,
) -> Result<(PairColoring, Report)> {
    td.validate(&p.cover_graph())?;
    let solutions = prepare_bag_solutions(p, td, opts.max_d, opts.jobs)?;
    color_with(p, td, &solutions, opts)
}

/// Colors `Inc(P)` from precomputed bag solutions. Colors `0..4` are the far
/// sets; signature classes follow in order of first occurrence.
pub fn color_with(
    p: &Poset,
    td: &TreeDecomposition,
    solutions: &[BagSolution],
    opts: &PipelineOptions,
) -> Result<(PairColoring, Report)> {
    let stats = td.validate(&p.cover_graph())?;
    let ctx = SignatureContext::new(p, td, solutions, opts)?;
    let far = far_pair_sets(p, &ctx.pt, ctx.h)?;
    let mut coloring = PairColoring::new();
    for (j, set) in far.sets.iter().enumerate() {
        for &q in set {
            if coloring.get(q).is_none() {
                coloring.insert(q, j as Color);
            }
        }
    }
    let mut ids: HashMap<Vec<u8>, Color> = HashMap::new();
    for &q in &far.rest {
        let key = ctx.signature(q)?.canonical_bytes();
        let next = ids.len() as Color;
        let id = *ids.entry(key).or_insert(next);
        coloring.insert(q, 4 + id);
    }
    let coloring = verified(p, coloring)?;
    let bag_dims: Vec<(usize, usize)> = solutions.iter().map(|s| (s.weak_dim, s.strong_dim)).collect();
    let report = Report {
        height: ctx.h,
        adhesion: stats.adhesion,
        d: bag_dims.iter().map(|&(w, s)| w.max(s)).max().unwrap_or(0),
        extension_sizes: solutions.iter().map(|s| s.weak.len()).collect(),
        bag_dims,
        root: opts.root,
        bag_palette: ctx.bag_colors.palette,
        far_sizes: [0, 1, 2, 3].map(|j| far.sets[j].len()),
        near_pairs: far.rest.len(),
        signatures: ids.len(),
        colors_used: coloring.num_colors(),
        palette: 4 + ids.len(),
        valid: true,
    };
    Ok((coloring, report))
}

/// One reduced poset of the layer reduction.
#[derive(Clone, Debug)]
pub struct Layer {
    /// Layer index `i >= 1`.
    pub index: usize,
    pub poset: Poset,
    /// Original element of each local vertex; `None` for the contracted
    /// vertex standing for all earlier layers.
    pub map: Vec<Option<usize>>,
}

impl Layer {
    pub fn local(&self, v: usize) -> Option<usize> {
        self.map.iter().position(|&m| m == Some(v))
    }
}

/// Distance layers of the comparability graph and the reduced posets.
#[derive(Clone, Debug)]
pub struct Layering {
    pub source: usize,
    pub levels: Vec<Vec<usize>>,
    pub level_of: Vec<usize>,
    /// `layers[i - 1]` is the reduced poset for index `i`.
    pub layers: Vec<Layer>,
}

/// Breadth-first layers of the comparability graph from a minimal element,
/// and the reduced poset for every layer index.
pub fn layer_posets(p: &Poset, source: Option<usize>) -> Result<Layering> {
    if p.is_empty() {
        return Err(Error::Domain("empty poset has no layers".into()));
    }
    if !p.cover_graph().is_connected() {
        return Err(Error::Connectivity);
    }
    let v = match source {
        Some(v) if v >= p.len() => return Err(Error::OutOfRange { element: v, n: p.len() }),
        Some(v) if !p.strict_down(v).is_clear() => {
            return Err(Error::Precondition(format!("source {v} is not minimal")))
        }
        Some(v) => v,
        None => p.minimal_elements()[0],
    };
    let n = p.len();
    let mut level_of = vec![usize::MAX; n];
    level_of[v] = 0;
    let mut levels = vec![vec![v]];
    loop {
        let mut next: Vec<usize> = Vec::new();
        for &x in levels.last().expect("nonempty") {
            for y in 0..n {
                if level_of[y] == usize::MAX && p.comparable(x, y) {
                    level_of[y] = levels.len();
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        levels.push(next);
    }
    check_layer_properties(p, &levels, &level_of)?;

    let mut layers = Vec::new();
    for i in 1..levels.len() {
        let mut map: Vec<Option<usize>> = Vec::new();
        if i >= 2 {
            map.push(None);
        }
        map.extend(levels[i - 1].iter().chain(&levels[i]).map(|&x| Some(x)));
        let mut arcs = Vec::new();
        for (a, &ma) in map.iter().enumerate() {
            for (b, &mb) in map.iter().enumerate() {
                match (ma, mb) {
                    (Some(x), Some(y)) if p.lt(x, y) => arcs.push((a, b)),
                    (None, Some(y)) if level_of[y] == i - 1 => {
                        if i % 2 == 0 {
                            arcs.push((a, b));
                        } else {
                            arcs.push((b, a));
                        }
                    }
                    _ => {}
                }
            }
        }
        let declared = arcs.len();
        let poset = Poset::from_relations(map.len(), arcs)?;
        if poset.num_relations() != declared {
            return Err(Error::Internal(format!("layer {i} relation is not closed")));
        }
        layers.push(Layer {
            index: i,
            poset,
            map,
        });
    }
    Ok(Layering {
        source: v,
        levels,
        level_of,
        layers,
    })
}

fn check_layer_properties(p: &Poset, levels: &[Vec<usize>], level_of: &[usize]) -> Result<()> {
    let fail = |what: &str| Err(Error::Internal(format!("layering: {what}")));
    for x in 0..p.len() {
        let i = level_of[x];
        for y in 0..p.len() {
            let j = level_of[y];
            if i.abs_diff(j) >= 2 && p.comparable(x, y) {
                return fail("comparable elements two layers apart");
            }
            if j + 1 == i && p.comparable(x, y) {
                let up = p.lt(y, x);
                if (i % 2 == 1) != up {
                    return fail("comparability against the parity rule");
                }
            }
        }
        if i >= 1 {
            let parent = levels[i - 1].iter().any(|&y| {
                if i % 2 == 1 {
                    p.lt(y, x)
                } else {
                    p.lt(x, y)
                }
            });
            if !parent {
                return fail("element without a neighbor in the previous layer");
            }
        }
    }
    Ok(())
}

/// Combines per-layer colorings (colors `0..d`) into a coloring of `Inc(P)`:
/// colors 0 and 1 for pairs two or more layers apart, `2 + c` for layers of
/// even index and `2 + d + c` for odd ones.
pub fn diameter_combine(
    p: &Poset,
    layering: &Layering,
    colorings: &[PairColoring],
    d: usize,
) -> Result<PairColoring> {
    if colorings.len() != layering.layers.len() {
        return Err(Error::Precondition("one coloring per layer is required".into()));
    }
    let mut out = PairColoring::new();
    for q in p.incomparable_pairs() {
        let (i, j) = (layering.level_of[q.x], layering.level_of[q.y]);
        let color = if i >= j + 2 {
            0
        } else if j >= i + 2 {
            1
        } else {
            let k = i.max(j);
            let layer = &layering.layers[k - 1];
            let local = |v: usize| layer.local(v).expect("element in its layer");
            let c = colorings[k - 1]
                .get(IncPair::new(local(q.x), local(q.y)))
                .ok_or(Error::Coverage(q))?;
            if c as usize >= d {
                return Err(Error::Precondition(format!("layer color {c} exceeds {d}")));
            }
            let offset = if k % 2 == 0 { 2 } else { 2 + d as Color };
            offset + c
        };
        out.insert(q, color);
    }
    verified(p, out)
}

/// Combines colorings of the components of `P` (element lists plus a
/// coloring of each induced subposet). Within-component pairs keep their
/// colors. A pair across components joins color 0 when the first element
/// lies in the later component and color 1 otherwise: listing the components
/// in order (each by its own color-0 extension) and then in reverse order
/// (each by its color-1 extension) realizes both enlarged classes.
pub fn components_combine(
    p: &Poset,
    components: &[Vec<usize>],
    colorings: &[PairColoring],
) -> Result<PairColoring> {
    let mut comp = vec![usize::MAX; p.len()];
    let mut local = vec![0; p.len()];
    for (c, elems) in components.iter().enumerate() {
        for (i, &v) in elems.iter().enumerate() {
            comp[v] = c;
            local[v] = i;
        }
    }
    let mut out = PairColoring::new();
    for q in p.incomparable_pairs() {
        let (a, b) = (comp[q.x], comp[q.y]);
        let color = match a.cmp(&b) {
            std::cmp::Ordering::Greater => 0,
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Equal => colorings[a]
                .get(IncPair::new(local[q.x], local[q.y]))
                .ok_or(Error::Coverage(q))?,
        };
        out.insert(q, color);
    }
    verified(p, out)
}

/// Outcome of the layer reduction.
#[derive(Clone, Debug)]
pub struct DiameterReport {
    pub components: usize,
    pub layers: usize,
    pub d: usize,
    pub colors_used: usize,
    pub bound: usize,
}

/// Layer reduction end to end: each component is layered, every layer is
/// colored exactly, and the results are combined.
pub fn diameter_color(
    p: &Poset,
    source: Option<usize>,
    max_d: Option<usize>,
) -> Result<(PairColoring, DiameterReport)> {
    let comps = p.cover_graph().components();
    if comps.len() > 1 && source.is_some() {
        return Err(Error::Connectivity);
    }
    let mut comp_colorings = Vec::new();
    let mut d_all = 1;
    let mut layer_count = 0;
    for elems in &comps {
        let (sub, _) = p.induced(elems);
        let layering = layer_posets(&sub, source)?;
        let mut colorings = Vec::new();
        let mut d = 1;
        for layer in &layering.layers {
            let (k, c) = exact_dimension(&layer.poset, max_d)?;
            d = d.max(k);
            colorings.push(c);
        }
        layer_count += layering.layers.len();
        d_all = d_all.max(d);
        comp_colorings.push(diameter_combine(&sub, &layering, &colorings, d)?);
    }
    let coloring = if comps.len() == 1 {
        comp_colorings.pop().expect("one component")
    } else {
        components_combine(p, &comps, &comp_colorings)?
    };
    let report = DiameterReport {
        components: comps.len(),
        layers: layer_count,
        d: d_all,
        colors_used: coloring.num_colors(),
        bound: 2 * d_all + 2,
    };
    Ok((coloring, report))
}

/// The two subposets of the apex reduction with their element maps.
#[derive(Clone, Debug)]
pub struct ApexSplit {
    /// `P` without the elements above or equal to the apex.
    pub without_up: (Poset, Vec<usize>),
    /// `P` without the elements below or equal to the apex.
    pub without_down: (Poset, Vec<usize>),
}

pub fn apex_split(p: &Poset, a: usize) -> Result<ApexSplit> {
    if a >= p.len() {
        return Err(Error::OutOfRange { element: a, n: p.len() });
    }
    let outside_up: Vec<usize> = (0..p.len()).filter(|&v| !p.le(a, v)).collect();
    let outside_down: Vec<usize> = (0..p.len()).filter(|&v| !p.le(v, a)).collect();
    Ok(ApexSplit {
        without_up: p.induced(&outside_up),
        without_down: p.induced(&outside_down),
    })
}

fn palette_of(c: &PairColoring) -> Color {
    c.iter().map(|(_, col)| col + 1).max().unwrap_or(0)
}

/// Pairs inside `P \ ↑a` keep their color from `up`, the remaining pairs
/// avoiding `a` take theirs from `down` (shifted past `up`'s palette), and
/// pairs with `a` first or second get one fresh color each.
pub fn apex_combine(
    p: &Poset,
    a: usize,
    split: &ApexSplit,
    up: &PairColoring,
    down: &PairColoring,
) -> Result<PairColoring> {
    let index = |map: &[usize], v: usize| map.binary_search(&v).ok();
    let (pu, up_map) = (&split.without_up.0, &split.without_up.1);
    let (pd, down_map) = (&split.without_down.0, &split.without_down.1);
    let shift = palette_of(up);
    let fresh = shift + palette_of(down);
    let mut out = PairColoring::new();
    for q in p.incomparable_pairs() {
        let color = if q.x == a {
            fresh
        } else if q.y == a {
            fresh + 1
        } else if let (Some(x), Some(y)) = (index(up_map, q.x), index(up_map, q.y)) {
            debug_assert!(pu.incomparable(x, y));
            up.get(IncPair::new(x, y)).ok_or(Error::Coverage(q))?
        } else if let (Some(x), Some(y)) = (index(down_map, q.x), index(down_map, q.y)) {
            debug_assert!(pd.incomparable(x, y));
            shift + down.get(IncPair::new(x, y)).ok_or(Error::Coverage(q))?
        } else {
            return Err(Error::Coverage(q));
        };
        out.insert(q, color);
    }
    verified(p, out)
}

/// Outcome of the apex reduction.
#[derive(Clone, Debug)]
pub struct ApexReport {
    pub up_dim: usize,
    pub down_dim: usize,
    pub colors_used: usize,
    pub bound: usize,
}

/// Apex reduction end to end with exact colorings of both subposets.
pub fn apex_color(p: &Poset, a: usize, max_d: Option<usize>) -> Result<(PairColoring, ApexReport)> {
    let split = apex_split(p, a)?;
    let (du, cu) = exact_dimension(&split.without_up.0, max_d)?;
    let (dd, cd) = exact_dimension(&split.without_down.0, max_d)?;
    let coloring = apex_combine(p, a, &split, &cu, &cd)?;
    let report = ApexReport {
        up_dim: du,
        down_dim: dd,
        colors_used: coloring.num_colors(),
        bound: palette_of(&cu) as usize + palette_of(&cd) as usize + 2,
    };
    Ok((coloring, report))
}
