//! Size measurements for the bench harness: one row per (graph, w, mode).

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{clique, clique_of_cliques, default_blob, gnp, random_regular};
use crate::gomory_hu::{friendly_mincut_contraction, gomory_hu};
use crate::graph::{Graph, Weight};
use crate::sparsifier::{friendly_sparsify_oneshot, friendly_sparsify_traced, SparsifyConfig};

/// CSV columns, in order.
pub const CSV_HEADER: [&str; 10] = [
    "family",
    "n",
    "m",
    "w",
    "sparsifier_edges",
    "bound_nsqrtw",
    "bound_nlogn",
    "outer_edges",
    "wall_ms",
    "seed",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    /// Total edge weight of the input.
    pub m: Weight,
    pub w: Weight,
    /// Total edge weight of the sparsifier.
    pub sparsifier_edges: Weight,
    /// `n * sqrt(w)`.
    pub bound_nsqrtw: f64,
    /// `n * ln(n)`.
    pub bound_nlogn: f64,
    /// Inter-cluster weight summed over all decompositions; empty for the
    /// tree-based sparsifier and for the one-shot variant.
    pub outer_edges: Option<Weight>,
    pub wall_ms: u128,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Clique,
    /// The size is an upper bound on `base * blob`.
    CliqueOfCliques,
    Gnp(f64),
    RandomRegular(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Clique => write!(f, "clique"),
            Family::CliqueOfCliques => write!(f, "clique-of-cliques"),
            Family::Gnp(p) => write!(f, "gnp:{p}"),
            Family::RandomRegular(d) => write!(f, "random-regular:{d}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `clique`, `clique-of-cliques`, `gnp[:p]` (default 0.1) or
    /// `random-regular[:d]` (default 8).
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let bad = || Error::InvalidParameter(format!("bad family parameter in {s:?}"));
        match name {
            "clique" => Ok(Family::Clique),
            "clique-of-cliques" => Ok(Family::CliqueOfCliques),
            "gnp" => Ok(Family::Gnp(arg.map_or(Ok(0.1), |a| a.parse().map_err(|_| bad()))?)),
            "random-regular" => Ok(Family::RandomRegular(arg.map_or(Ok(8), |a| a.parse().map_err(|_| bad()))?)),
            _ => Err(Error::InvalidParameter(format!("unknown bench family {s:?}"))),
        }
    }
}

/// Largest clique-of-cliques base whose default instance has at most `size` nodes.
pub fn clique_of_cliques_base(size: usize) -> usize {
    let mut base = 1;
    while (base + 1) * default_blob(base + 1) <= size {
        base += 1;
    }
    base
}

pub fn family_graph(family: Family, size: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::Clique => clique(size),
        Family::CliqueOfCliques => clique_of_cliques(clique_of_cliques_base(size), None),
        Family::Gnp(p) => gnp(size, p, &mut rng),
        Family::RandomRegular(d) => random_regular(size, d, &mut rng),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Oneshot,
    Iterative,
    GhBased,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oneshot" => Ok(Mode::Oneshot),
            "iterative" => Ok(Mode::Iterative),
            "gh-based" => Ok(Mode::GhBased),
            _ => Err(Error::InvalidParameter(format!("unknown sparsifier mode {s:?}"))),
        }
    }
}

/// Sparsifies `g` once and records its size. `w` is ignored by the
/// tree-based mode.
pub fn measure(family: &str, g: &Graph, w: Weight, mode: Mode, cfg: &SparsifyConfig) -> Result<BenchRow> {
    let start = Instant::now();
    let (h, outer) = match mode {
        Mode::Oneshot => (friendly_sparsify_oneshot(g, w, cfg)?, None),
        Mode::Iterative => {
            let (h, trace) = friendly_sparsify_traced(g, w, cfg)?;
            (h, Some(trace.outer_edges()))
        }
        Mode::GhBased => {
            if !g.is_simple() {
                return Err(Error::NotSimple);
            }
            (friendly_mincut_contraction(g, &gomory_hu(g))?, None)
        }
    };
    let n = g.node_count();
    Ok(BenchRow {
        family: family.to_string(),
        n,
        m: g.total_weight(),
        w,
        sparsifier_edges: h.graph.total_weight(),
        bound_nsqrtw: n as f64 * (w as f64).sqrt(),
        bound_nlogn: n as f64 * (n.max(1) as f64).ln(),
        outer_edges: outer,
        wall_ms: start.elapsed().as_millis(),
        seed: cfg.seed,
    })
}

/// Every (size, w) combination for one family. The graph seed and the
/// sparsifier seed are both `cfg.seed`.
pub fn run(family: Family, sizes: &[usize], w_grid: &[Weight], mode: Mode, cfg: &SparsifyConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        let g = family_graph(family, size, cfg.seed)?;
        for &w in w_grid {
            rows.push(measure(&family.to_string(), &g, w, mode, cfg)?);
        }
    }
    Ok(rows)
}
