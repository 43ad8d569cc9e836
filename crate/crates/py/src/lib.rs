//! Python module `pyposetdim`: posets, tree decompositions, exact dimension,
//! coloring checks and the decomposition pipeline.
//!
//! Colorings cross the boundary as `dict[(x, y), color]` with 0-based
//! element ids.

use std::collections::HashMap;

use posetdim::constructions::{self, NamedConstruction, RandomConfig};
use posetdim::decomp::{ChildOrder, TreeDecomposition as CoreTd};
use posetdim::pipeline::{self, PipelineOptions};
use posetdim::{io, solver, IncPair, PairColoring, Verdict};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: posetdim::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type ColorMap = HashMap<(usize, usize), u32>;

fn to_map(c: &PairColoring) -> ColorMap {
    c.iter().map(|(q, col)| ((q.x, q.y), col)).collect()
}

fn from_map(m: &ColorMap) -> PairColoring {
    m.iter().map(|(&(x, y), &c)| (IncPair::new(x, y), c)).collect()
}

/// A finite poset on elements `0..n`.
#[pyclass(frozen, skip_from_py_object, module = "pyposetdim")]
#[derive(Clone)]
struct Poset {
    inner: posetdim::Poset,
}

#[pymethods]
impl Poset {
    /// Builds the order generated by `relations` (pairs `(u, v)` with `u < v`).
    #[new]
    fn new(n: usize, relations: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = posetdim::Poset::from_relations(n, relations).map_err(err)?;
        Ok(Poset { inner })
    }

    /// Parses the `p poset` text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Poset {
            inner: io::parse_poset(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        io::write_poset(&self.inner)
    }

    fn to_dot(&self) -> String {
        io::poset_dot(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Poset(n={}, relations={})",
            self.inner.len(),
            self.inner.num_relations()
        )
    }

    fn __eq__(&self, other: &Poset) -> bool {
        self.inner == other.inner
    }

    fn lt(&self, x: usize, y: usize) -> bool {
        self.inner.lt(x, y)
    }

    fn le(&self, x: usize, y: usize) -> bool {
        self.inner.le(x, y)
    }

    fn incomparable(&self, x: usize, y: usize) -> bool {
        self.inner.incomparable(x, y)
    }

    fn height(&self) -> usize {
        self.inner.height()
    }

    fn label(&self, x: usize) -> String {
        self.inner.label(x)
    }

    fn relations(&self) -> Vec<(usize, usize)> {
        self.inner.relations().collect()
    }

    fn cover_edges(&self) -> Vec<(usize, usize)> {
        self.inner.cover_graph().edges
    }

    fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        self.inner.incomparable_pairs().into_iter().map(|q| (q.x, q.y)).collect()
    }

    fn critical_pairs(&self) -> Vec<(usize, usize)> {
        self.inner.critical_pairs().into_iter().map(|q| (q.x, q.y)).collect()
    }

    /// The subposet on `elements`, in the given order.
    fn induced(&self, elements: Vec<usize>) -> Poset {
        Poset {
            inner: self.inner.induced(&elements).0,
        }
    }
}

/// A tree decomposition of a cover graph.
#[pyclass(frozen, skip_from_py_object, module = "pyposetdim")]
#[derive(Clone)]
struct TreeDecomposition {
    inner: CoreTd,
}

#[pymethods]
impl TreeDecomposition {
    #[new]
    fn new(num_vertices: usize, bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        TreeDecomposition {
            inner: CoreTd::new(num_vertices, bags, edges),
        }
    }

    /// Parses a PACE `.td` file.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(TreeDecomposition {
            inner: io::parse_td(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        io::write_td(&self.inner)
    }

    fn to_dot(&self) -> String {
        io::td_dot(&self.inner)
    }

    #[getter]
    fn bags(&self) -> Vec<Vec<usize>> {
        self.inner.bags.clone()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges.clone()
    }

    /// Checks the decomposition against the cover graph of `poset` and
    /// returns `(adhesion, width)`.
    fn validate(&self, poset: &Poset) -> PyResult<(usize, usize)> {
        let s = self.inner.validate(&poset.inner.cover_graph()).map_err(err)?;
        Ok((s.adhesion, s.width))
    }
}

fn named(c: NamedConstruction) -> (Poset, Option<TreeDecomposition>) {
    (
        Poset { inner: c.poset },
        c.decomposition.map(|inner| TreeDecomposition { inner }),
    )
}

#[pyfunction]
fn standard_example(d: usize) -> PyResult<Poset> {
    Ok(named(constructions::standard_example(d).map_err(err)?).0)
}

#[pyfunction]
fn kelly(n: usize) -> PyResult<Poset> {
    Ok(named(constructions::kelly(n).map_err(err)?).0)
}

/// The 1- and 2-element subsets of `[n]` with their star decomposition.
#[pyfunction]
fn subset_poset(n: usize) -> PyResult<(Poset, TreeDecomposition)> {
    let (p, td) = named(constructions::subset_poset(n).map_err(err)?);
    Ok((p, td.expect("star decomposition")))
}

#[pyfunction]
#[pyo3(signature = (n, height=3, adhesion=2, max_bag=4, arc_prob=0.5, seed=0))]
fn random_poset(
    n: usize,
    height: usize,
    adhesion: usize,
    max_bag: usize,
    arc_prob: f64,
    seed: u64,
) -> PyResult<(Poset, TreeDecomposition)> {
    let cfg = RandomConfig {
        seed,
        n,
        height,
        adhesion,
        max_bag,
        arc_prob,
    };
    let (p, td) = named(constructions::random_poset(&cfg).map_err(err)?);
    Ok((p, td.expect("companion decomposition")))
}

/// Exact dimension and a witness coloring.
#[pyfunction]
#[pyo3(signature = (poset, max_d=None))]
fn dimension(py: Python<'_>, poset: &Poset, max_d: Option<usize>) -> PyResult<(usize, ColorMap)> {
    let p = poset.inner.clone();
    let (d, c) = py
        .detach(move || solver::exact_dimension(&p, max_d))
        .map_err(err)?;
    Ok((d, to_map(&c)))
}

/// Dimension by enumerating linear extensions (small posets only).
#[pyfunction]
fn oracle_dimension(poset: &Poset) -> PyResult<usize> {
    solver::oracle_dimension(&poset.inner).map_err(err)
}

/// `None` for a valid coloring, otherwise `(color, cycle)` with a
/// monochromatic alternating cycle.
#[pyfunction]
fn check_coloring(poset: &Poset, coloring: ColorMap) -> PyResult<Option<(u32, Vec<(usize, usize)>)>> {
    match posetdim::check_coloring(&poset.inner, &from_map(&coloring)).map_err(err)? {
        Verdict::Valid => Ok(None),
        Verdict::Invalid { color, cycle } => {
            Ok(Some((color, cycle.into_iter().map(|q| (q.x, q.y)).collect())))
        }
    }
}

/// Runs the decomposition pipeline and returns `(coloring, report text)`.
#[pyfunction]
#[pyo3(signature = (poset, td, root=0, jobs=1, max_d=None))]
fn decompose_and_color(
    py: Python<'_>,
    poset: &Poset,
    td: &TreeDecomposition,
    root: usize,
    jobs: usize,
    max_d: Option<usize>,
) -> PyResult<(ColorMap, String)> {
    let (p, t) = (poset.inner.clone(), td.inner.clone());
    let opts = PipelineOptions {
        root,
        child_order: ChildOrder::Index,
        prec: None,
        max_d,
        jobs,
    };
    let (c, report) = py
        .detach(move || pipeline::decompose_and_color(&p, &t, &opts))
        .map_err(err)?;
    Ok((to_map(&c), report.to_string()))
}

/// Layer reduction: `(coloring, colors used, bound)`.
#[pyfunction]
#[pyo3(signature = (poset, source=None))]
fn layers_color(poset: &Poset, source: Option<usize>) -> PyResult<(ColorMap, usize, usize)> {
    let (c, r) = pipeline::diameter_color(&poset.inner, source, None).map_err(err)?;
    Ok((to_map(&c), r.colors_used, r.bound))
}

/// Apex reduction: `(coloring, colors used, bound)`.
#[pyfunction]
fn apex_color(poset: &Poset, apex: usize) -> PyResult<(ColorMap, usize, usize)> {
    let (c, r) = pipeline::apex_color(&poset.inner, apex, None).map_err(err)?;
    Ok((to_map(&c), r.colors_used, r.bound))
}

#[pymodule]
fn pyposetdim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poset>()?;
    m.add_class::<TreeDecomposition>()?;
    m.add_function(wrap_pyfunction!(standard_example, m)?)?;
    m.add_function(wrap_pyfunction!(kelly, m)?)?;
    m.add_function(wrap_pyfunction!(subset_poset, m)?)?;
    m.add_function(wrap_pyfunction!(random_poset, m)?)?;
    m.add_function(wrap_pyfunction!(dimension, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(check_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_and_color, m)?)?;
    m.add_function(wrap_pyfunction!(layers_color, m)?)?;
    m.add_function(wrap_pyfunction!(apex_color, m)?)?;
    Ok(())
}
