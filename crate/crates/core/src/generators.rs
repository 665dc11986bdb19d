//! Graph families used by the tests, the CLI and the bench harness.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Weight};
use crate::sparsifier::ceil_sqrt;

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

fn clique_edges(offset: usize, k: usize) -> impl Iterator<Item = (NodeId, NodeId)> {
    (0..k).flat_map(move |u| (u + 1..k).map(move |v| (offset + u, offset + v)))
}

pub fn clique(n: usize) -> Result<Graph> {
    Graph::from_unit_edges(n, clique_edges(0, n))
}

pub fn path(n: usize) -> Result<Graph> {
    need(n >= 1, || "path needs at least one node".into())?;
    Graph::from_unit_edges(n, (1..n).map(|i| (i - 1, i)))
}

pub fn cycle(n: usize) -> Result<Graph> {
    need(n >= 3, || "cycle needs at least 3 nodes".into())?;
    Graph::from_unit_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// `n` nodes in total: center 0 and leaves `1..n`.
pub fn star(n: usize) -> Result<Graph> {
    need(n >= 2, || "star needs at least 2 nodes".into())?;
    Graph::from_unit_edges(n, (1..n).map(|l| (0, l)))
}

/// Two `k`-cliques joined by the bridge `(k-1, k)`.
pub fn dumbbell(k: usize) -> Result<Graph> {
    need(k >= 2, || "dumbbell cliques need at least 2 nodes".into())?;
    let edges = clique_edges(0, k)
        .chain(clique_edges(k, k))
        .chain(std::iter::once((k - 1, k)));
    Graph::from_unit_edges(2 * k, edges)
}

/// Default blob size `ceil(10 * sqrt(base))`.
pub fn default_blob(base: usize) -> usize {
    ceil_sqrt(100 * base as u64) as usize
}

/// A `base`-clique with every node blown up into a `blob`-clique. Each
/// original edge lands on blob members chosen round-robin, so no member
/// carries more than `ceil((base-1)/blob)` of them.
pub fn clique_of_cliques(base: usize, blob: Option<usize>) -> Result<Graph> {
    need(base >= 1, || "base clique needs at least one node".into())?;
    let b = blob.unwrap_or_else(|| default_blob(base));
    need(b >= 1, || "blob size must be positive".into())?;
    let mut next = vec![0usize; base];
    let mut edges: Vec<(NodeId, NodeId)> = (0..base).flat_map(|i| clique_edges(i * b, b)).collect();
    for i in 0..base {
        for j in i + 1..base {
            let u = i * b + next[i] % b;
            let v = j * b + next[j] % b;
            next[i] += 1;
            next[j] += 1;
            edges.push((u, v));
        }
    }
    Graph::from_unit_edges(base * b, edges)
}

/// Weighted cycle on which every friendly minimum cut sparsifier is dense:
/// `w(v_i, v_{i+1})` is `n*scale` for odd `i` and `0.4*n*scale` for even
/// `i` (1-based), and `w(v_1, v_n) = 0.4*n*scale - 1`. Node `v_i` is `i-1`.
pub fn alt_cycle(n: usize, scale: Weight) -> Result<Graph> {
    need(n >= 4 && n.is_multiple_of(2), || format!("alt-cycle needs an even n >= 4, got {n}"))?;
    let big = n as Weight * scale;
    need(scale >= 1 && (2 * big).is_multiple_of(5), || {
        format!("0.4 * n * scale must be an integer (n = {n}, scale = {scale})")
    })?;
    let small = 2 * big / 5;
    need(small >= 2, || "closing edge weight would be zero".into())?;
    let mut edges: Vec<(NodeId, NodeId, Weight)> = (1..n)
        .map(|i| (i - 1, i, if i % 2 == 1 { big } else { small }))
        .collect();
    edges.push((0, n - 1, small - 1));
    Graph::from_edges(n, edges)
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    need((0.0..=1.0).contains(&p), || format!("edge probability {p} outside [0, 1]"))?;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_unit_edges(n, edges)
}

/// Simple `d`-regular graph: points are paired one random suitable pair at
/// a time (Steger-Wormald), restarting when no suitable pair is left.
pub fn random_regular<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Graph> {
    need(d < n, || format!("degree {d} needs more than {n} nodes"))?;
    need((n * d).is_multiple_of(2), || "n * d must be even".into())?;
    'attempt: for _ in 0..1000 {
        let mut points: Vec<NodeId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(points.len() / 2);
        while !points.is_empty() {
            let mut misses = 0;
            loop {
                let (i, j) = (rng.gen_range(0..points.len()), rng.gen_range(0..points.len()));
                let (u, v) = (points[i].min(points[j]), points[i].max(points[j]));
                if u != v && !seen.contains(&(u, v)) {
                    seen.insert((u, v));
                    edges.push((u, v));
                    let (hi, lo) = (i.max(j), i.min(j));
                    points.swap_remove(hi);
                    points.swap_remove(lo);
                    break;
                }
                misses += 1;
                if misses > 64 * points.len() {
                    let stuck = points.iter().all(|&a| {
                        points
                            .iter()
                            .all(|&b| a == b || seen.contains(&(a.min(b), a.max(b))))
                    });
                    if stuck {
                        continue 'attempt;
                    }
                    misses = 0;
                }
            }
        }
        return Graph::from_unit_edges(n, edges);
    }
    Err(Error::InvalidParameter(format!(
        "no simple {d}-regular graph on {n} nodes found after 1000 attempts"
    )))
}
