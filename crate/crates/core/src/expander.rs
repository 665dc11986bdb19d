//! Conductance and a practical expander decomposition.
//!
//! Clusters are split recursively along their lowest-conductance cut until
//! none falls below `phi`. Small clusters are searched exhaustively; larger
//! ones by a spectral sweep, singleton checks and randomized greedy growth.
//! The candidate cut at each cluster does not depend on `phi`, so lowering
//! `phi` only prunes the recursion.
//!
//! Inside a cluster `C` every node weighs `d(v) + w(v, V \ C)` when a
//! demand vector is given, and `deg(v) + extra(v)` otherwise (boundary edges
//! are treated as self-loops).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Weight};

pub type Phi = Ratio<u64>;

/// Node demands as integers over one common denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemandVector {
    scaled: Vec<u128>,
    denom: u128,
}

impl DemandVector {
    pub fn from_integers(d: Vec<u64>) -> Self {
        DemandVector {
            scaled: d.into_iter().map(u128::from).collect(),
            denom: 1,
        }
    }

    pub fn from_ratios(d: &[Ratio<u64>]) -> Result<Self> {
        let mut denom: u128 = 1;
        for r in d {
            denom = denom.lcm(&u128::from(*r.denom()));
        }
        let scaled = d
            .iter()
            .map(|r| {
                u128::from(*r.numer())
                    .checked_mul(denom / u128::from(*r.denom()))
                    .ok_or_else(|| Error::InvalidParameter("demand denominators too large".into()))
            })
            .collect::<Result<_>>()?;
        Ok(DemandVector { scaled, denom })
    }

    pub fn len(&self) -> usize {
        self.scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled.is_empty()
    }

    pub fn denom(&self) -> u128 {
        self.denom
    }

    pub fn scaled(&self, v: NodeId) -> u128 {
        self.scaled[v]
    }

    pub fn value(&self, v: NodeId) -> Ratio<u128> {
        Ratio::new(self.scaled[v], self.denom)
    }
}

/// Exact conductance; `Infinite` when the smaller side has zero weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Conductance {
    Finite(Ratio<u128>),
    Infinite,
}

impl Conductance {
    pub fn is_below(&self, phi: Phi) -> bool {
        Frac::from(*self).below(phi)
    }
}

// Unreduced fraction; `den == 0` means infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frac {
    num: u128,
    den: u128,
}

impl From<Conductance> for Frac {
    fn from(c: Conductance) -> Self {
        match c {
            Conductance::Finite(r) => Frac {
                num: *r.numer(),
                den: *r.denom(),
            },
            Conductance::Infinite => Frac { num: 1, den: 0 },
        }
    }
}

fn mul_cmp(a: u128, b: u128, c: u128, d: u128) -> Ordering {
    match (a.checked_mul(b), c.checked_mul(d)) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => (BigUint::from(a) * b).cmp(&(BigUint::from(c) * d)),
    }
}

impl Frac {
    fn new(cut: Weight, denom: u128, left: u128, right: u128) -> Frac {
        Frac {
            num: u128::from(cut) * denom,
            den: left.min(right),
        }
    }

    fn conductance(self) -> Conductance {
        if self.den == 0 {
            Conductance::Infinite
        } else {
            Conductance::Finite(Ratio::new(self.num, self.den))
        }
    }

    fn below(self, phi: Phi) -> bool {
        self.den != 0
            && mul_cmp(self.num, u128::from(*phi.denom()), u128::from(*phi.numer()), self.den) == Ordering::Less
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.den == 0, other.den == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => mul_cmp(self.num, other.den, other.num, self.den),
        }
    }
}

fn check_phi(phi: Phi) -> Result<()> {
    if *phi.numer() == 0 || phi > Phi::from_integer(1) {
        Err(Error::InvalidParameter(format!("phi = {phi} must lie in (0, 1]")))
    } else {
        Ok(())
    }
}

fn check_demand(g: &Graph, d: Option<&DemandVector>) -> Result<()> {
    match d {
        Some(d) if d.len() != g.node_count() => Err(Error::InvalidParameter(format!(
            "demand vector has {} entries for {} nodes",
            d.len(),
            g.node_count()
        ))),
        _ => Ok(()),
    }
}

/// `δ(S) / min(vol(S), vol(V \ S))` with volumes including extra volume.
/// A single-node graph has conductance 1.
pub fn conductance(g: &Graph, s: &[NodeId]) -> Result<Conductance> {
    if g.node_count() == 1 {
        return Ok(Conductance::Finite(Ratio::from_integer(1)));
    }
    let mask = g.membership(s)?;
    let cut = g.cut_value(s)?;
    let left = u128::from(g.volume_mask(&mask));
    let total = u128::from(g.volume_mask(&vec![true; g.node_count()]));
    Ok(Frac::new(cut, 1, left, total - left).conductance())
}

/// `δ(S) / min(d(S), d(V \ S))`.
pub fn demand_conductance(g: &Graph, d: &DemandVector, s: &[NodeId]) -> Result<Conductance> {
    check_demand(g, Some(d))?;
    let mask = g.membership(s)?;
    let cut = g.cut_value(s)?;
    let (mut left, mut right) = (0u128, 0u128);
    for v in 0..g.node_count() {
        if mask[v] {
            left += d.scaled(v);
        } else {
            right += d.scaled(v);
        }
    }
    Ok(Frac::new(cut, d.denom(), left, right).conductance())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Certification {
    /// Every internal cut was enumerated.
    Exact,
    /// Randomized search found no violating cut.
    Sampled,
    /// Cluster too large for the configured search.
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Largest cluster searched exhaustively (at most `EXACT_LIMIT_MAX`).
    pub exact_limit: usize,
    pub seed: u64,
    pub spectral_iterations: usize,
    pub growth_attempts: usize,
    /// Clusters above this size are left unsplit and `Unchecked`.
    pub search_limit: usize,
}

pub const EXACT_LIMIT_MAX: usize = 20;

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            exact_limit: 15,
            seed: 0,
            spectral_iterations: 64,
            growth_attempts: 4,
            search_limit: usize::MAX,
        }
    }
}

impl DecomposeOptions {
    fn validate(&self) -> Result<()> {
        if self.exact_limit > EXACT_LIMIT_MAX {
            return Err(Error::InvalidParameter(format!(
                "exact limit {} exceeds {EXACT_LIMIT_MAX}",
                self.exact_limit
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Sorted clusters, ordered by smallest member.
    pub clusters: Vec<Vec<NodeId>>,
    pub cluster_of: Vec<usize>,
    pub phi: Phi,
    pub outer_edges: Weight,
    pub certification: Vec<Certification>,
}

/// A cluster's induced subgraph with local ids and node weights.
struct Local {
    nodes: Vec<NodeId>,
    adj: Vec<Vec<(usize, Weight)>>,
    intdeg: Vec<Weight>,
    weight: Vec<u128>,
    denom: u128,
    total: u128,
}

impl Local {
    fn build(g: &Graph, nodes: Vec<NodeId>, d: Option<&DemandVector>, pos: &mut [usize]) -> Local {
        for (i, &v) in nodes.iter().enumerate() {
            pos[v] = i;
        }
        let k = nodes.len();
        let mut adj = vec![Vec::new(); k];
        let mut intdeg = vec![0; k];
        let mut weight = vec![0; k];
        for (i, &v) in nodes.iter().enumerate() {
            let mut boundary = 0;
            for &(u, w) in g.neighbors(v) {
                if pos[u] == usize::MAX {
                    boundary += w;
                } else {
                    adj[i].push((pos[u], w));
                    intdeg[i] += w;
                }
            }
            weight[i] = match d {
                Some(d) => d.scaled(v) + u128::from(boundary) * d.denom(),
                None => u128::from(g.degrees()[v] + g.extra_volume(v)),
            };
        }
        for &v in &nodes {
            pos[v] = usize::MAX;
        }
        let total = weight.iter().sum();
        Local {
            nodes,
            adj,
            intdeg,
            weight,
            denom: d.map_or(1, |d| d.denom()),
            total,
        }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn frac(&self, cut: Weight, side_weight: u128) -> Frac {
        Frac::new(cut, self.denom, side_weight, self.total - side_weight)
    }

    fn components(&self) -> Vec<Vec<NodeId>> {
        let k = self.len();
        let mut comp = vec![usize::MAX; k];
        let mut out = Vec::new();
        for s in 0..k {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![self.nodes[s]];
            comp[s] = c;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = c;
                        members.push(self.nodes[v]);
                        stack.push(v);
                    }
                }
            }
            out.push(members);
        }
        out
    }

    /// Lowest-conductance internal cut by Gray-code enumeration.
    fn exact_best(&self) -> Option<(Vec<bool>, Frac)> {
        let k = self.len();
        if k < 2 {
            return None;
        }
        let mut mask = vec![true; k];
        let mut cut: Weight = 0;
        let mut side = self.total;
        let mut best: Option<(u64, Frac)> = None;
        for step in 1u64..1 << (k - 1) {
            let x = step.trailing_zeros() as usize + 1;
            for &(y, w) in &self.adj[x] {
                if mask[x] == mask[y] {
                    cut += w;
                } else {
                    cut -= w;
                }
            }
            if mask[x] {
                side -= self.weight[x];
            } else {
                side += self.weight[x];
            }
            mask[x] = !mask[x];
            let f = self.frac(cut, side);
            if f.den != 0 && best.is_none_or(|(_, b)| f < b) {
                best = Some((step ^ (step >> 1), f));
            }
        }
        best.map(|(gray, f)| ((0..k).map(|i| i == 0 || gray >> (i - 1) & 1 == 0).collect(), f))
    }

    /// Best prefix cut of `order`.
    fn sweep(&self, order: &[usize]) -> Option<(usize, Frac)> {
        let k = self.len();
        let mut inside = vec![false; k];
        let mut cut: Weight = 0;
        let mut side: u128 = 0;
        let mut best: Option<(usize, Frac)> = None;
        for (i, &v) in order.iter().enumerate().take(k - 1) {
            let to_inside: Weight = self.adj[v].iter().filter(|&&(u, _)| inside[u]).map(|e| e.1).sum();
            cut = cut + self.intdeg[v] - 2 * to_inside;
            side += self.weight[v];
            inside[v] = true;
            let f = self.frac(cut, side);
            if f.den != 0 && best.is_none_or(|(_, b)| f < b) {
                best = Some((i + 1, f));
            }
        }
        best
    }

    fn spectral_order<R: Rng>(&self, iterations: usize, rng: &mut R) -> Vec<usize> {
        let k = self.len();
        let w: Vec<f64> = self.weight.iter().map(|&x| (x as f64).max(1.0)).collect();
        let sq: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
        let norm_sq: f64 = w.iter().sum();
        let c = 2.0
            * (0..k)
                .map(|i| self.intdeg[i] as f64 / w[i])
                .fold(0.0f64, f64::max)
                .max(f64::MIN_POSITIVE);
        let mut x: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() - 0.5).collect();
        let mut y = vec![0.0; k];
        let deflate = |x: &mut Vec<f64>| {
            let dot: f64 = x.iter().zip(&sq).map(|(a, b)| a * b).sum();
            for (xi, si) in x.iter_mut().zip(&sq) {
                *xi -= dot / norm_sq * si;
            }
            let len = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            if len > 0.0 {
                x.iter_mut().for_each(|a| *a /= len);
            }
        };
        deflate(&mut x);
        for _ in 0..iterations {
            // y = x - (1/c) D^{-1/2} L D^{-1/2} x
            for i in 0..k {
                let zi = x[i] / sq[i];
                let mut lz = self.intdeg[i] as f64 * zi;
                for &(j, wt) in &self.adj[i] {
                    lz -= wt as f64 * x[j] / sq[j];
                }
                y[i] = x[i] - lz / sq[i] / c;
            }
            std::mem::swap(&mut x, &mut y);
            deflate(&mut x);
        }
        let score: Vec<f64> = (0..k).map(|i| x[i] / sq[i]).collect();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));
        order
    }

    fn growth_order(&self, start: usize) -> Vec<usize> {
        let k = self.len();
        let mut conn = vec![0 as Weight; k];
        let mut taken = vec![false; k];
        let mut heap = BinaryHeap::from([(0 as Weight, std::cmp::Reverse(start))]);
        let mut order = Vec::with_capacity(k);
        while let Some((c, std::cmp::Reverse(v))) = heap.pop() {
            if taken[v] || c != conn[v] {
                continue;
            }
            taken[v] = true;
            order.push(v);
            for &(u, w) in &self.adj[v] {
                if !taken[u] {
                    conn[u] += w;
                    heap.push((conn[u], std::cmp::Reverse(u)));
                }
            }
        }
        order
    }

    fn heuristic_best(&self, opts: &DecomposeOptions, seed: u64) -> Option<(Vec<bool>, Frac)> {
        let k = self.len();
        if k < 2 {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let improves = |f: Frac, best: &Option<(Vec<bool>, Frac)>| {
            f.den != 0 && best.as_ref().is_none_or(|(_, b)| f < *b)
        };
        let mut best: Option<(Vec<bool>, Frac)> = None;
        for v in 0..k {
            let f = self.frac(self.intdeg[v], self.weight[v]);
            if improves(f, &best) {
                best = Some(((0..k).map(|u| u == v).collect(), f));
            }
        }
        let mut orders = vec![self.spectral_order(opts.spectral_iterations, &mut rng)];
        for _ in 0..opts.growth_attempts {
            orders.push(self.growth_order(rng.gen_range(0..k)));
        }
        for order in orders {
            if let Some((len, f)) = self.sweep(&order) {
                if improves(f, &best) {
                    let mut mask = vec![false; k];
                    order[..len].iter().for_each(|&v| mask[v] = true);
                    best = Some((mask, f));
                }
            }
        }
        best
    }
}

fn cluster_seed(seed: u64, nodes: &[NodeId]) -> u64 {
    // splitmix64 folded over the members
    let mix = |mut z: u64| {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    sorted.iter().fold(mix(seed), |h, &v| mix(h ^ v as u64))
}

fn split(nodes: &[NodeId], mask: &[bool]) -> (Vec<NodeId>, Vec<NodeId>) {
    let (a, b): (Vec<_>, Vec<_>) = nodes.iter().zip(mask).partition(|(_, &m)| m);
    (a.into_iter().map(|(&v, _)| v).collect(), b.into_iter().map(|(&v, _)| v).collect())
}

/// Partitions `g` into clusters in which no internal cut has conductance
/// below `phi` (exactly verified for clusters up to `opts.exact_limit`).
pub fn decompose(g: &Graph, phi: Phi, d: Option<&DemandVector>, opts: &DecomposeOptions) -> Result<Decomposition> {
    check_phi(phi)?;
    check_demand(g, d)?;
    opts.validate()?;
    let n = g.node_count();
    let mut pos = vec![usize::MAX; n];
    let mut work: Vec<Vec<NodeId>> = if n > 0 { vec![(0..n).collect()] } else { Vec::new() };
    let mut done: Vec<(Vec<NodeId>, Certification)> = Vec::new();
    while let Some(nodes) = work.pop() {
        if nodes.len() <= 1 {
            done.push((nodes, Certification::Exact));
            continue;
        }
        let loc = Local::build(g, nodes, d, &mut pos);
        let comps = loc.components();
        if comps.len() > 1 {
            work.extend(comps);
            continue;
        }
        let exact = loc.len() <= opts.exact_limit;
        if !exact && loc.len() > opts.search_limit {
            done.push((loc.nodes, Certification::Unchecked));
            continue;
        }
        let best = if exact {
            loc.exact_best()
        } else {
            loc.heuristic_best(opts, cluster_seed(opts.seed, &loc.nodes))
        };
        match best {
            Some((mask, f)) if f.below(phi) => {
                let (a, b) = split(&loc.nodes, &mask);
                work.push(a);
                work.push(b);
            }
            _ => done.push((
                loc.nodes,
                if exact {
                    Certification::Exact
                } else {
                    Certification::Sampled
                },
            )),
        }
    }
    for (c, _) in done.iter_mut() {
        c.sort_unstable();
    }
    done.sort_by_key(|(c, _)| c[0]);
    let mut cluster_of = vec![0; n];
    for (i, (c, _)) in done.iter().enumerate() {
        for &v in c {
            cluster_of[v] = i;
        }
    }
    let outer_edges = g
        .edges()
        .iter()
        .filter(|&&(u, v, _)| cluster_of[u] != cluster_of[v])
        .map(|e| e.2)
        .sum();
    let (clusters, certification) = done.into_iter().unzip();
    Ok(Decomposition {
        clusters,
        cluster_of,
        phi,
        outer_edges,
        certification,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifyMode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyOutcome {
    pub certified: bool,
    /// A side of an internal cut with conductance below `phi`, when found.
    pub witness: Option<Vec<NodeId>>,
    pub witness_conductance: Option<Conductance>,
}

/// Checks that no internal cut of `cluster` has conductance below `phi`.
/// Sampled mode only ever answers `false` with a witness.
pub fn certify_cluster(
    g: &Graph,
    cluster: &[NodeId],
    phi: Phi,
    d: Option<&DemandVector>,
    mode: CertifyMode,
    opts: &DecomposeOptions,
) -> Result<CertifyOutcome> {
    check_phi(phi)?;
    check_demand(g, d)?;
    opts.validate()?;
    let mut nodes = g.membership(cluster).map(|m| crate::graph::mask_to_nodes(&m))?;
    nodes.dedup();
    if mode == CertifyMode::Exact && nodes.len() > opts.exact_limit {
        return Err(Error::GuardExceeded {
            what: "exact cluster certification",
            n: nodes.len(),
            limit: opts.exact_limit,
        });
    }
    let pass = CertifyOutcome {
        certified: true,
        witness: None,
        witness_conductance: None,
    };
    if nodes.len() <= 1 {
        return Ok(pass);
    }
    let mut pos = vec![usize::MAX; g.node_count()];
    let loc = Local::build(g, nodes, d, &mut pos);
    let best = match mode {
        CertifyMode::Exact => loc.exact_best(),
        CertifyMode::Sampled => {
            let comps = loc.components();
            if comps.len() > 1 {
                let mask: Vec<bool> = loc.nodes.iter().map(|v| comps[0].contains(v)).collect();
                let side: u128 = (0..loc.len()).filter(|&i| mask[i]).map(|i| loc.weight[i]).sum();
                Some((mask.clone(), loc.frac(0, side)))
            } else {
                loc.heuristic_best(opts, cluster_seed(opts.seed ^ 0x5eed, &loc.nodes))
            }
        }
    };
    Ok(match best {
        Some((mask, f)) if f.below(phi) => {
            let (side, _) = split(&loc.nodes, &mask);
            CertifyOutcome {
                certified: false,
                witness: Some(side),
                witness_conductance: Some(f.conductance()),
            }
        }
        _ => pass,
    })
}
