//! Text formats: posets, pair colorings, tree decompositions (PACE `.td`)
//! and DOT export. Element and bag ids are 1-based in files.
//!
//! Poset files:
//!
//! ```text
//! c optional comment
//! c label 1 a1
//! p poset <n> <m>
//! r <u> <v>        (m lines, u below v)
//! ```
//!
//! Coloring files: `s colors <count>` then `i <x> <y> <color>` per pair.

use std::fmt::Write as _;

use crate::decomp::TreeDecomposition;
use crate::error::{Error, Result};
use crate::poset::{IncPair, PairColoring, Poset};

fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn number(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a number, got {tok:?}")))
}

fn one_based(tok: &str, line: usize, n: usize) -> Result<usize> {
    let v = number(tok, line)?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("id {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

/// Parses a poset file. Relations may be any generating set; the closure is
/// taken.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut labels: Vec<(usize, usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = tokens(raw);
        match t.first().copied() {
            None => {}
            Some("c") => {
                if t.get(1) == Some(&"label") && t.len() >= 4 {
                    let id = number(t[2], line)?;
                    let name = raw.trim_start()[1..]
                        .trim_start()
                        .strip_prefix("label")
                        .and_then(|r| r.trim_start().strip_prefix(t[2]))
                        .map(|r| r.trim().to_string())
                        .unwrap_or_default();
                    labels.push((line, id, name));
                }
            }
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line, "duplicate header"));
                }
                if t.len() != 4 || t[1] != "poset" {
                    return Err(Error::parse(line, "expected `p poset <n> <m>`"));
                }
                header = Some((number(t[2], line)?, number(t[3], line)?));
            }
            Some("r") => {
                let (n, _) = header.ok_or_else(|| Error::parse(line, "relation before header"))?;
                if t.len() != 3 {
                    return Err(Error::parse(line, "expected `r <u> <v>`"));
                }
                arcs.push((one_based(t[1], line, n)?, one_based(t[2], line, n)?));
            }
            Some(other) => return Err(Error::parse(line, format!("unknown line type {other:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing `p poset` header"))?;
    if arcs.len() != m {
        return Err(Error::parse(0, format!("header announces {m} relations, found {}", arcs.len())));
    }
    let mut p = Poset::from_relations(n, arcs)?;
    if !labels.is_empty() {
        let mut names = vec![None; n];
        for (line, id, name) in labels {
            if id == 0 || id > n {
                return Err(Error::parse(line, format!("label for unknown element {id}")));
            }
            names[id - 1] = Some(name);
        }
        let names: Vec<String> = names
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.unwrap_or_else(|| (i + 1).to_string()))
            .collect();
        p = p.with_labels(names);
    }
    Ok(p)
}

/// Writes the cover relations of `p`, with labels as comment lines.
pub fn write_poset(p: &Poset) -> String {
    let edges = p.cover_graph().edges;
    let mut out = String::new();
    if let Some(labels) = p.labels() {
        for (i, l) in labels.iter().enumerate() {
            writeln!(out, "c label {} {}", i + 1, l).unwrap();
        }
    }
    writeln!(out, "p poset {} {}", p.len(), edges.len()).unwrap();
    for (u, v) in edges {
        writeln!(out, "r {} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn parse_coloring(text: &str) -> Result<PairColoring> {
    let mut out = PairColoring::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = tokens(raw);
        match t.first().copied() {
            None | Some("c") => {}
            Some("s") => {
                if t.len() != 3 || t[1] != "colors" {
                    return Err(Error::parse(line, "expected `s colors <count>`"));
                }
                number(t[2], line)?;
                seen_header = true;
            }
            Some("i") => {
                if !seen_header {
                    return Err(Error::parse(line, "pair before header"));
                }
                if t.len() != 4 {
                    return Err(Error::parse(line, "expected `i <x> <y> <color>`"));
                }
                let x = one_based(t[1], line, usize::MAX)?;
                let y = one_based(t[2], line, usize::MAX)?;
                let c = u32::try_from(number(t[3], line)?)
                    .map_err(|_| Error::parse(line, "color too large"))?;
                if out.insert(IncPair::new(x, y), c).is_some() {
                    return Err(Error::parse(line, "pair colored twice"));
                }
            }
            Some(other) => return Err(Error::parse(line, format!("unknown line type {other:?}"))),
        }
    }
    if !seen_header {
        return Err(Error::parse(0, "missing `s colors` header"));
    }
    Ok(out)
}

pub fn write_coloring(c: &PairColoring) -> String {
    let mut out = String::new();
    writeln!(out, "s colors {}", c.num_colors()).unwrap();
    for (q, col) in c.iter() {
        writeln!(out, "i {} {} {}", q.x + 1, q.y + 1, col).unwrap();
    }
    out
}

/// Parses a PACE `.td` file.
pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = tokens(raw);
        match t.first().copied() {
            None | Some("c") => {}
            Some("s") => {
                if t.len() != 5 || t[1] != "td" {
                    return Err(Error::parse(line, "expected `s td <bags> <width+1> <vertices>`"));
                }
                let nb = number(t[2], line)?;
                number(t[3], line)?;
                header = Some((nb, number(t[4], line)?));
                bags = vec![None; nb];
            }
            Some("b") => {
                let (nb, nv) = header.ok_or_else(|| Error::parse(line, "bag before header"))?;
                if t.len() < 2 {
                    return Err(Error::parse(line, "expected `b <id> <vertices...>`"));
                }
                let id = one_based(t[1], line, nb)?;
                if bags[id].is_some() {
                    return Err(Error::parse(line, format!("bag {} listed twice", id + 1)));
                }
                let vs = t[2..]
                    .iter()
                    .map(|s| one_based(s, line, nv))
                    .collect::<Result<Vec<_>>>()?;
                bags[id] = Some(vs);
            }
            Some(_) => {
                let (nb, _) = header.ok_or_else(|| Error::parse(line, "edge before header"))?;
                if t.len() != 2 {
                    return Err(Error::parse(line, "expected `<bag> <bag>`"));
                }
                edges.push((one_based(t[0], line, nb)?, one_based(t[1], line, nb)?));
            }
        }
    }
    let (_, nv) = header.ok_or_else(|| Error::parse(0, "missing `s td` header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(0, format!("bag {} is missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(nv, bags, edges))
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    let width1 = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    writeln!(out, "s td {} {} {}", td.num_bags(), width1, td.num_vertices).unwrap();
    for (i, bag) in td.bags.iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Cover graph as a DOT digraph, edges pointing upwards.
pub fn poset_dot(p: &Poset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for v in 0..p.len() {
        writeln!(out, "  n{} [label={}];", v + 1, quote(&p.label(v))).unwrap();
    }
    for (u, v) in p.cover_graph().edges {
        writeln!(out, "  n{} -> n{};", u + 1, v + 1).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Decomposition tree as a DOT graph with bag contents as labels.
pub fn td_dot(td: &TreeDecomposition) -> String {
    let mut out = String::from("graph decomposition {\n");
    for (i, bag) in td.bags.iter().enumerate() {
        let names: Vec<String> = bag.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(out, "  b{} [label={}];", i + 1, quote(&format!("{}: {{{}}}", i + 1, names.join(",")))).unwrap();
    }
    for &(a, b) in &td.edges {
        writeln!(out, "  b{} -- b{};", a + 1, b + 1).unwrap();
    }
    out.push_str("}\n");
    out
}
