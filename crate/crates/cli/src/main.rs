use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use posetdim::constructions::{kelly, random_poset, standard_example, subset_poset, RandomConfig};
use posetdim::decomp::{ChildOrder, TreeDecomposition};
use posetdim::io;
use posetdim::pipeline::{apex_color, decompose_and_color, diameter_color, PipelineOptions};
use posetdim::solver::{exact_dimension, oracle_dimension, ORACLE_MAX_ELEMENTS};
use posetdim::{check_coloring, Error, PairColoring, Poset, Verdict};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Exact poset dimension, tree-decomposition based realizer coloring and
/// the layer and apex reductions.
#[derive(Parser)]
#[command(name = "posetdim", version)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named or random poset (and its decomposition, when known).
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Poset file; the decomposition goes next to it with extension `.td`.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Exact dimension.
    Dim {
        poset: PathBuf,
        /// Cross-check with linear extension enumeration (small posets only).
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        max_d: Option<usize>,
        /// Write the witness coloring here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Color Inc(P) from a tree decomposition of its cover graph.
    Decompose {
        poset: PathBuf,
        td: PathBuf,
        /// Root bag (1-based).
        #[arg(long, default_value_t = 1)]
        root: usize,
        /// Shuffle child order and bag order with this seed.
        #[arg(long)]
        order: Option<u64>,
        #[arg(long)]
        max_d: Option<usize>,
        /// Worker threads for per-bag solving.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a coloring; prints a monochromatic alternating cycle on failure.
    Check { poset: PathBuf, coloring: PathBuf },
    /// Layer reduction.
    Layers {
        poset: PathBuf,
        /// Minimal element to start from (1-based).
        #[arg(long)]
        source: Option<usize>,
        #[arg(long)]
        max_d: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apex reduction.
    Apex {
        poset: PathBuf,
        /// Apex element (1-based).
        #[arg(long)]
        apex: usize,
        #[arg(long)]
        max_d: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// DOT export of a poset or tree decomposition file.
    Dot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Standard example S_d.
    Standard {
        #[arg(long)]
        d: usize,
    },
    /// Kelly's planar poset.
    Kelly {
        #[arg(long)]
        n: usize,
    },
    /// 1- and 2-element subsets of [n] with the star decomposition.
    #[command(alias = "dm")]
    Subsets {
        #[arg(long)]
        n: usize,
    },
    /// Random bounded-height poset with a decomposition.
    Random {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        height: usize,
        #[arg(long, default_value_t = 2)]
        adhesion: usize,
        #[arg(long, default_value_t = 4)]
        max_bag: usize,
        #[arg(long, default_value_t = 0.5)]
        arc_prob: f64,
    },
}

enum Failure {
    /// Exit 1 with a message (verification failure or runtime error).
    Runtime(String),
    /// Exit 2: the input could not be used.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::Cycle(_)
            | Error::OutOfRange { .. }
            | Error::Decomposition(_)
            | Error::Domain(_) => Failure::Input(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn load_poset(path: &Path) -> Result<Poset, Failure> {
    io::parse_poset(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_td(path: &Path) -> Result<TreeDecomposition, Failure> {
    io::parse_td(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn one_based(v: usize, n: usize, what: &str) -> Result<usize, Failure> {
    if v == 0 || v > n {
        return Err(Failure::Input(format!("{what} {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

fn emit_coloring(output: &Option<PathBuf>, c: &PairColoring) -> Outcome {
    match output {
        Some(path) => write(path, &io::write_coloring(c)),
        None => Ok(()),
    }
}

fn gen(kind: &GenKind, output: &Option<PathBuf>, seed: u64) -> Outcome {
    let c = match *kind {
        GenKind::Standard { d } => standard_example(d)?,
        GenKind::Kelly { n } => kelly(n)?,
        GenKind::Subsets { n } => subset_poset(n)?,
        GenKind::Random {
            n,
            height,
            adhesion,
            max_bag,
            arc_prob,
        } => random_poset(&RandomConfig {
            seed,
            n,
            height,
            adhesion,
            max_bag,
            arc_prob,
        })?,
    };
    let text = io::write_poset(&c.poset);
    match output {
        Some(path) => {
            write(path, &text)?;
            if let Some(td) = &c.decomposition {
                write(&path.with_extension("td"), &io::write_td(td))?;
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn dim(poset: &Path, oracle: bool, max_d: Option<usize>, output: &Option<PathBuf>) -> Outcome {
    let p = load_poset(poset)?;
    let (d, c) = exact_dimension(&p, max_d)?;
    if oracle {
        if p.len() > ORACLE_MAX_ELEMENTS {
            return Err(Failure::Runtime(format!(
                "oracle is limited to {ORACLE_MAX_ELEMENTS} elements, poset has {}",
                p.len()
            )));
        }
        let o = oracle_dimension(&p)?;
        if o != d {
            return Err(Failure::Runtime(format!("solver says {d}, oracle says {o}")));
        }
    }
    println!("{d}");
    emit_coloring(output, &c)
}

#[allow(clippy::too_many_arguments)]
fn decompose(
    poset: &Path,
    td: &Path,
    root: usize,
    order: Option<u64>,
    max_d: Option<usize>,
    jobs: usize,
    output: &Option<PathBuf>,
) -> Outcome {
    let p = load_poset(poset)?;
    let td = load_td(td)?;
    let root = one_based(root, td.num_bags(), "root bag")?;
    let (child_order, prec) = match order {
        None => (ChildOrder::Index, None),
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let mut rank: Vec<usize> = (0..td.num_bags()).collect();
            rank.shuffle(&mut rng);
            let mut prec: Vec<usize> = (0..td.num_bags()).collect();
            prec.shuffle(&mut rng);
            (ChildOrder::Rank(rank), Some(prec))
        }
    };
    let opts = PipelineOptions {
        root,
        child_order,
        prec,
        max_d,
        jobs,
    };
    let (c, report) = decompose_and_color(&p, &td, &opts)?;
    println!("{report}");
    emit_coloring(output, &c)
}

fn check(poset: &Path, coloring: &Path) -> Outcome {
    let p = load_poset(poset)?;
    let c = io::parse_coloring(&read(coloring)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", coloring.display())))?;
    match check_coloring(&p, &c).map_err(|e| Failure::Runtime(e.to_string()))? {
        Verdict::Valid => {
            println!("valid");
            Ok(())
        }
        Verdict::Invalid { color, cycle } => {
            let pairs: Vec<String> = cycle
                .iter()
                .map(|q| format!("({}, {})", p.label(q.x), p.label(q.y)))
                .collect();
            println!("invalid: color {color} has alternating cycle {}", pairs.join(" "));
            Err(Failure::Runtime("coloring is not valid".into()))
        }
    }
}

fn layers(poset: &Path, source: Option<usize>, max_d: Option<usize>, output: &Option<PathBuf>) -> Outcome {
    let p = load_poset(poset)?;
    let source = source.map(|v| one_based(v, p.len(), "source")).transpose()?;
    let (c, r) = diameter_color(&p, source, max_d)?;
    println!("components: {}", r.components);
    println!("layers: {}", r.layers);
    println!("d: {}", r.d);
    println!("colors used: {}", r.colors_used);
    println!("bound: {}", r.bound);
    println!("valid: true");
    emit_coloring(output, &c)
}

fn apex(poset: &Path, a: usize, max_d: Option<usize>, output: &Option<PathBuf>) -> Outcome {
    let p = load_poset(poset)?;
    let a = one_based(a, p.len(), "apex")?;
    let (c, r) = apex_color(&p, a, max_d)?;
    println!("dim without up-set: {}", r.up_dim);
    println!("dim without down-set: {}", r.down_dim);
    println!("colors used: {}", r.colors_used);
    println!("bound: {}", r.bound);
    println!("valid: true");
    emit_coloring(output, &c)
}

fn dot(file: &Path, output: &Option<PathBuf>) -> Outcome {
    let text = read(file)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('c'))
        .unwrap_or("");
    let out = if first.starts_with("s td") {
        io::td_dot(&io::parse_td(&text)?)
    } else {
        io::poset_dot(&io::parse_poset(&text)?)
    };
    match output {
        Some(path) => write(path, &out),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Gen { kind, output } => gen(kind, output, cli.seed),
        Command::Dim {
            poset,
            oracle,
            max_d,
            output,
        } => dim(poset, *oracle, *max_d, output),
        Command::Decompose {
            poset,
            td,
            root,
            order,
            max_d,
            jobs,
            output,
        } => decompose(poset, td, *root, *order, *max_d, *jobs, output),
        Command::Check { poset, coloring } => check(poset, coloring),
        Command::Layers {
            poset,
            source,
            max_d,
            output,
        } => layers(poset, *source, *max_d, output),
        Command::Apex {
            poset,
            apex: a,
            max_d,
            output,
        } => apex(poset, *a, *max_d, output),
        Command::Dot { file, output } => dot(file, output),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(2)
        }
    }
}
