//! Poset dimension toolkit: exact dimension search, tree decompositions of
//! cover graphs, gadget extensions and the bounded-height coloring pipeline.

pub mod constructions;
pub mod decomp;
pub mod error;
pub mod gadget;
pub mod io;
pub mod pipeline;
pub mod poset;
pub mod solver;

pub use error::{Error, Result};
pub use poset::{
    check_coloring, find_alternating_cycle, linear_extension_reversing, realizer_from_coloring,
    Color, CoverGraph, IncPair, LinearExtension, PairColoring, Poset, Verdict,
};
