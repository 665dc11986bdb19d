//! Friendly cut sparsifiers: a one-shot variant driven by node demands, an
//! iterative variant that halves `sqrt(w)` per round, and a terminal variant.
//!
//! Every variant decomposes the graph into expanders, shaves nodes of low
//! degree or with too much weight leaving their cluster, and contracts each
//! connected piece of what remains.

use num_bigint::BigUint;
use num_integer::Roots;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expander::{decompose, DecomposeOptions, Decomposition, DemandVector, Phi};
use crate::graph::{ContractionMap, Graph, NodeId, Sparsifier, Weight};
use crate::maxflow::max_flow;
use crate::oracle::for_each_cut;
use crate::unionfind::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsifyConfig {
    /// Defaults to `2^-floor(sqrt(log2 n))` one-shot and `1/(100 B)` iterative.
    pub phi: Option<Phi>,
    /// Nodes with degree below `factor * sqrt(w)` are shaved.
    pub low_degree_factor: u64,
    /// Nodes sending more than this fraction of their degree out of their
    /// cluster are shaved.
    pub outside_fraction: Ratio<u64>,
    /// `K` in the iterative size budget `K n sqrt(w_j)`; defaults to `100 B`.
    pub budget_factor: Option<u64>,
    pub seed: u64,
    pub decompose: DecomposeOptions,
}

impl Default for SparsifyConfig {
    fn default() -> Self {
        SparsifyConfig {
            phi: None,
            low_degree_factor: 10,
            outside_fraction: Ratio::new(1, 10),
            budget_factor: None,
            seed: 0,
            decompose: DecomposeOptions::default(),
        }
    }
}

impl SparsifyConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Rejects parameters for which shaving no longer protects friendly
    /// cuts: a kept node must keep `(0.4 - q) * f * sqrt(w) > sqrt(w)`
    /// neighbors on its own side.
    pub fn validate(&self) -> Result<()> {
        if let Some(phi) = self.phi {
            if *phi.numer() == 0 || phi > Phi::from_integer(1) {
                return Err(Error::InvalidParameter(format!("phi = {phi} must lie in (0, 1]")));
            }
        }
        let q = self.outside_fraction;
        let keep = Ratio::new(2u64, 5);
        if q >= keep {
            return Err(Error::InvalidParameter(format!("outside fraction {q} must be below 2/5")));
        }
        if (keep - q) * self.low_degree_factor <= Ratio::from_integer(1) {
            return Err(Error::InvalidParameter(format!(
                "(2/5 - {q}) * {} must exceed 1",
                self.low_degree_factor
            )));
        }
        if self.budget_factor == Some(0) {
            return Err(Error::InvalidParameter("budget factor must be positive".into()));
        }
        Ok(())
    }

    fn decompose_options(&self) -> DecomposeOptions {
        DecomposeOptions {
            seed: self.seed,
            ..self.decompose.clone()
        }
    }
}

/// Smallest integer `r` with `r^2 >= x`.
pub fn ceil_sqrt(x: u64) -> u64 {
    let r = x.sqrt();
    if r * r < x {
        r + 1
    } else {
        r
    }
}

/// Smallest integer `r` with `r^2 >= p / q`.
pub fn ceil_sqrt_ratio(x: Ratio<u128>) -> u128 {
    let (p, q) = (BigUint::from(*x.numer()), BigUint::from(*x.denom()));
    let mut r = (&p / &q).sqrt();
    while &r * &r * &q < p {
        r += 1u32;
    }
    r.try_into().expect("square root fits")
}

fn log2(n: usize) -> f64 {
    (n.max(1) as f64).log2()
}

/// `2^-floor(sqrt(log2 n))`.
pub fn default_oneshot_phi(n: usize) -> Phi {
    let k = log2(n).sqrt().floor() as u32;
    Phi::new(1, 1u64 << k.min(62))
}

/// `B = max(1, ceil(log2(n)^3))`.
pub fn default_budget_b(n: usize) -> u64 {
    (log2(n).powi(3).ceil() as u64).max(1)
}

fn require_simple(g: &Graph) -> Result<()> {
    if g.is_simple() {
        Ok(())
    } else {
        Err(Error::NotSimple)
    }
}

// `phi^-1 * value` as an exact ratio.
fn over_phi(phi: Phi, value: u64) -> Ratio<u64> {
    Ratio::new(phi.denom() * value, *phi.numer())
}

/// Shaves each cluster and contracts every connected piece of the rest.
/// `low_degree(v)` decides the degree rule; the outside rule is shared.
fn shave_and_contract<F>(g: &Graph, dec: &Decomposition, q: Ratio<u64>, mut low_degree: F) -> (ContractionMap, usize)
where
    F: FnMut(NodeId, Weight) -> bool,
{
    let n = g.node_count();
    let mut outside = vec![0 as Weight; n];
    for &(u, v, w) in g.edges() {
        if dec.cluster_of[u] != dec.cluster_of[v] {
            outside[u] += w;
            outside[v] += w;
        }
    }
    let shaved: Vec<bool> = (0..n)
        .map(|v| {
            let deg = g.degrees()[v];
            low_degree(v, deg) || u128::from(outside[v]) * u128::from(*q.denom()) > u128::from(*q.numer()) * u128::from(deg)
        })
        .collect();
    let mut uf = UnionFind::new(n);
    for &(u, v, _) in g.edges() {
        if !shaved[u] && !shaved[v] && dec.cluster_of[u] == dec.cluster_of[v] {
            uf.union(u, v);
        }
    }
    let (labels, _) = uf.labels();
    (ContractionMap::from_labels(&labels), shaved.iter().filter(|&&s| s).count())
}

fn demand_sparsify(g: &Graph, w: Weight, d: DemandVector, phi: Phi, cfg: &SparsifyConfig) -> Result<Sparsifier> {
    let dec = decompose(g, phi, Some(&d), &cfg.decompose_options())?;
    let f2w = u128::from(cfg.low_degree_factor).pow(2) * u128::from(w);
    let (map, _) = shave_and_contract(g, &dec, cfg.outside_fraction, |_, deg| {
        u128::from(deg) * u128::from(deg) < f2w
    });
    Sparsifier::from_map(g, map)
}

/// One decomposition with demand `phi^-1 ceil(sqrt w)` on every node.
pub fn friendly_sparsify_oneshot(g: &Graph, w: Weight, cfg: &SparsifyConfig) -> Result<Sparsifier> {
    require_simple(g)?;
    cfg.validate()?;
    let w = w.max(1);
    let phi = cfg.phi.unwrap_or_else(|| default_oneshot_phi(g.node_count()));
    let dv = over_phi(phi, ceil_sqrt(w));
    let d = DemandVector::from_ratios(&vec![dv; g.node_count()])?;
    demand_sparsify(g, w, d, phi, cfg)
}

/// Preserves every cut of value at most `w` that is a minimum cut between
/// two terminals. Terminals carry demand `3 phi^-1 w`.
pub fn terminal_sparsify(g: &Graph, terminals: &[NodeId], w: Weight, cfg: &SparsifyConfig) -> Result<Sparsifier> {
    require_simple(g)?;
    cfg.validate()?;
    if terminals.is_empty() {
        return Err(Error::InvalidParameter("terminal set is empty".into()));
    }
    let is_terminal = g.membership(terminals)?;
    let w = w.max(1);
    let phi = cfg.phi.unwrap_or_else(|| default_oneshot_phi(g.node_count()));
    let plain = over_phi(phi, ceil_sqrt(w));
    let heavy = over_phi(phi, 3 * w);
    let d: Vec<_> = is_terminal.iter().map(|&t| if t { heavy } else { plain }).collect();
    demand_sparsify(g, w, DemandVector::from_ratios(&d)?, phi, cfg)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationTrace {
    pub j: u32,
    /// `w_j` as numerator and denominator.
    pub w_j: (u128, u128),
    pub clusters: usize,
    pub outer_edges: Weight,
    pub shaved: usize,
    pub nodes: usize,
    pub weighted_edges: Weight,
    /// `K n sqrt(w_j)`, rounded up.
    pub budget: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparsifyTrace {
    pub phi: Phi,
    pub b: u64,
    pub k: u64,
    pub iterations: Vec<IterationTrace>,
}

impl SparsifyTrace {
    /// The `w_j` of the last round, or `(m/n)^2` when none ran.
    pub fn final_w(&self) -> Option<Ratio<u128>> {
        self.iterations.last().map(|it| Ratio::new(it.w_j.0, it.w_j.1))
    }

    pub fn outer_edges(&self) -> Weight {
        self.iterations.iter().map(|it| it.outer_edges).sum()
    }
}

/// Iterative sparsifier: round `j` targets `w_j = (m/n)^2 / 4^j` and runs
/// while `w_j >= w`.
pub fn friendly_sparsify(g: &Graph, w: Weight, cfg: &SparsifyConfig) -> Result<Sparsifier> {
    friendly_sparsify_traced(g, w, cfg).map(|(h, _)| h)
}

pub fn friendly_sparsify_traced(g: &Graph, w: Weight, cfg: &SparsifyConfig) -> Result<(Sparsifier, SparsifyTrace)> {
    require_simple(g)?;
    cfg.validate()?;
    let w = u128::from(w.max(1));
    let n = g.node_count();
    let b = default_budget_b(n);
    let phi = cfg.phi.unwrap_or_else(|| Phi::new(1, 100 * b));
    let k = cfg.budget_factor.unwrap_or(100 * b);
    let mut trace = SparsifyTrace {
        phi,
        b,
        k,
        iterations: Vec::new(),
    };
    let mut current = Sparsifier::identity(g);
    if n == 0 {
        return Ok((current, trace));
    }
    let m = u128::from(g.total_weight());
    let (num, den0) = (m * m, (n as u128) * (n as u128));
    let f2 = u128::from(cfg.low_degree_factor).pow(2);
    let opts = cfg.decompose_options();
    for j in 1u32.. {
        let den = den0 << (2 * j);
        // stop once w_j < w
        if num < w * den {
            break;
        }
        let w_j = Ratio::new(num, den);
        let root = ceil_sqrt_ratio(w_j);
        let cur = &current.graph;
        let sizes = current.map.sizes();
        let extra: Vec<Weight> = sizes
            .iter()
            .map(|&s| {
                let top = u128::from(*phi.denom()) * root * s as u128;
                top.div_ceil(u128::from(*phi.numer())) as Weight
            })
            .collect();
        let loaded = cur.clone().with_extra_volume(extra)?;
        let dec = decompose(&loaded, phi, None, &opts)?;
        let (step, shaved) = shave_and_contract(cur, &dec, cfg.outside_fraction, |v, deg| {
            let lhs = BigUint::from(deg).pow(2) * *w_j.denom();
            let rhs = BigUint::from(f2) * *w_j.numer() * BigUint::from(sizes[v]).pow(2);
            lhs < rhs
        });
        let graph = cur.contract(&step)?.without_extra_volume();
        let map = current.map.compose(&step)?;
        current = Sparsifier {
            graph,
            map,
            base_degrees: current.base_degrees,
        };
        trace.iterations.push(IterationTrace {
            j,
            w_j: (*w_j.numer(), *w_j.denom()),
            clusters: dec.clusters.len(),
            outer_edges: dec.outer_edges,
            shaved,
            nodes: current.graph.node_count(),
            weighted_edges: current.graph.total_weight(),
            budget: (u128::from(k) * n as u128) * root,
        });
    }
    Ok((current, trace))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Two nodes from opposite sides share a super-node.
    Crossed { side: Vec<NodeId>, value: Weight, pair: (NodeId, NodeId) },
    /// The image of the cut has a different value in the contracted graph.
    ValueChanged { side: Vec<NodeId>, value: Weight, contracted: Weight },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    /// Number of cuts that had to be preserved.
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl PreservationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_binding(g: &Graph, h: &Sparsifier) -> Result<()> {
    if h.map.original_count() != g.node_count() {
        return Err(Error::Mismatch(format!(
            "sparsifier covers {} nodes, graph has {}",
            h.map.original_count(),
            g.node_count()
        )));
    }
    Ok(())
}

fn verify_cuts<P>(g: &Graph, h: &Sparsifier, mut must_keep: P) -> Result<PreservationReport>
where
    P: FnMut(&crate::oracle::CutView) -> bool,
{
    check_binding(g, h)?;
    let mut report = PreservationReport {
        checked: 0,
        violations: Vec::new(),
    };
    for_each_cut(g, |c| {
        if !must_keep(c) {
            return;
        }
        report.checked += 1;
        if let Some(pair) = h.crosses(c.mask) {
            report.violations.push(Violation::Crossed {
                side: c.to_cut().side().to_vec(),
                value: c.value,
                pair,
            });
            return;
        }
        let contracted = h.graph.cut_value_mask(&h.image_mask(c.mask));
        if contracted != c.value {
            report.violations.push(Violation::ValueChanged {
                side: c.to_cut().side().to_vec(),
                value: c.value,
                contracted,
            });
        }
    })?;
    Ok(report)
}

/// Checks every friendly cut of `g` with value at most `w` against `h`.
pub fn verify_friendly_preservation(g: &Graph, h: &Sparsifier, w: Weight) -> Result<PreservationReport> {
    verify_cuts(g, h, |c| c.value <= w && c.is_friendly(g.degrees()))
}

/// Checks every cut of value at most `w` that is a minimum `s,t`-cut for
/// some pair of terminals.
pub fn verify_terminal_preservation(g: &Graph, h: &Sparsifier, terminals: &[NodeId], w: Weight) -> Result<PreservationReport> {
    let mut ts = g.membership(terminals).map(|m| crate::graph::mask_to_nodes(&m))?;
    ts.dedup();
    let mut lambda = vec![vec![0; ts.len()]; ts.len()];
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            let v = max_flow(g, ts[i], ts[j])?.value();
            lambda[i][j] = v;
            lambda[j][i] = v;
        }
    }
    verify_cuts(g, h, |c| {
        c.value <= w
            && (0..ts.len()).any(|i| {
                c.mask[ts[i]] && (0..ts.len()).any(|j| !c.mask[ts[j]] && lambda[i][j] == c.value)
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique, path};
    use crate::oracle::friendly_cuts_up_to;

    fn stress() -> SparsifyConfig {
        SparsifyConfig {
            low_degree_factor: 4,
            ..SparsifyConfig::default()
        }
    }

    #[test]
    fn roots_and_defaults() {
        assert_eq!((ceil_sqrt(0), ceil_sqrt(1), ceil_sqrt(2), ceil_sqrt(16), ceil_sqrt(17)), (0, 1, 2, 4, 5));
        assert_eq!(ceil_sqrt_ratio(Ratio::new(9, 4)), 2);
        assert_eq!(ceil_sqrt_ratio(Ratio::new(10, 4)), 2);
        assert_eq!(ceil_sqrt_ratio(Ratio::new(17, 4)), 3);
        assert_eq!(default_oneshot_phi(1 << 16), Phi::new(1, 16));
        assert_eq!(default_oneshot_phi(1), Phi::new(1, 1));
        assert_eq!(default_budget_b(8), 27);
        assert_eq!(default_budget_b(1), 1);
    }

    #[test]
    fn config_validation() {
        assert!(SparsifyConfig::default().validate().is_ok());
        assert!(stress().validate().is_ok());
        let weak = SparsifyConfig {
            low_degree_factor: 3,
            ..SparsifyConfig::default()
        };
        assert!(weak.validate().is_err());
        let bad_phi = SparsifyConfig {
            phi: Some(Phi::new(0, 1)),
            ..SparsifyConfig::default()
        };
        assert!(bad_phi.validate().is_err());
    }

    #[test]
    fn rejects_weighted_input() {
        let g = Graph::from_edges(2, [(0, 1, 2)]).unwrap();
        let cfg = SparsifyConfig::default();
        assert_eq!(friendly_sparsify_oneshot(&g, 1, &cfg), Err(Error::NotSimple));
        assert_eq!(friendly_sparsify(&g, 1, &cfg), Err(Error::NotSimple));
        assert_eq!(terminal_sparsify(&g, &[0], 1, &cfg), Err(Error::NotSimple));
    }

    #[test]
    fn clique_may_collapse() {
        let g = clique(8).unwrap();
        assert!(friendly_cuts_up_to(&g, 8).unwrap().is_empty());
        for cfg in [SparsifyConfig::default(), stress()] {
            let h = friendly_sparsify_oneshot(&g, 8, &cfg).unwrap();
            assert!(verify_friendly_preservation(&g, &h, 8).unwrap().passed());
        }
    }

    #[test]
    fn path_prefix_cuts_survive() {
        let g = path(10).unwrap();
        let friendly = friendly_cuts_up_to(&g, 2).unwrap();
        for i in 2..=8 {
            let prefix: Vec<_> = (0..i).collect();
            assert!(friendly.iter().any(|c| c.side() == &prefix[..]));
        }
        let h = friendly_sparsify_oneshot(&g, 2, &stress()).unwrap();
        let report = verify_friendly_preservation(&g, &h, 2).unwrap();
        assert!(report.passed() && report.checked >= 7);
        for v in 1..8 {
            assert_ne!(h.map.super_of(v), h.map.super_of(v + 1));
        }
    }

    #[test]
    fn component_cut_survives() {
        let g = Graph::from_unit_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        for w in [1, 4, 16] {
            for h in [
                friendly_sparsify_oneshot(&g, w, &stress()).unwrap(),
                friendly_sparsify(&g, w, &stress()).unwrap(),
            ] {
                assert!((0..3).all(|a| (3..6).all(|b| h.map.super_of(a) != h.map.super_of(b))));
                assert!(verify_friendly_preservation(&g, &h, w).unwrap().passed());
            }
        }
    }

    #[test]
    fn identity_when_w_exceeds_density() {
        let g = path(6).unwrap();
        let (h, trace) = friendly_sparsify_traced(&g, 4, &SparsifyConfig::default()).unwrap();
        assert!(trace.iterations.is_empty());
        assert_eq!(h, Sparsifier::identity(&g));
    }

    #[test]
    fn iterations_end_within_factor_four() {
        let g = clique(40).unwrap();
        let (h, trace) = friendly_sparsify_traced(&g, 10, &SparsifyConfig::default()).unwrap();
        let last = trace.final_w().unwrap();
        assert!(last >= Ratio::from_integer(10) && last < Ratio::from_integer(40));
        for pair in trace.iterations.windows(2) {
            assert_eq!(Ratio::new(pair[0].w_j.0, pair[0].w_j.1), Ratio::new(pair[1].w_j.0, pair[1].w_j.1) * 4);
        }
        assert!(h.graph.total_weight() <= g.total_weight());
    }

    #[test]
    fn verify_reports_crossing_witness() {
        let g = path(4).unwrap();
        let h = Sparsifier::from_map(&g, ContractionMap::new(vec![0, 1, 0, 2]).unwrap()).unwrap();
        let report = verify_friendly_preservation(&g, &h, 2).unwrap();
        assert!(report.violations.iter().any(|v| matches!(v,
            Violation::Crossed { side, .. } if side == &[0, 1]
        )));
        let id = Sparsifier::identity(&g);
        assert!(verify_friendly_preservation(&g, &id, 100).unwrap().passed());
    }

    #[test]
    fn terminal_examples() {
        let cfg = stress();
        let star = crate::generators::star(6).unwrap();
        let h = terminal_sparsify(&star, &[1, 2], 2, &cfg).unwrap();
        assert_ne!(h.map.super_of(1), h.map.super_of(0));
        assert_ne!(h.map.super_of(2), h.map.super_of(0));
        let (a, b) = (h.map.super_of(1), h.map.super_of(2));
        assert_eq!(max_flow(&h.graph, a, b).unwrap().value(), 1);
        assert!(verify_terminal_preservation(&star, &h, &[1, 2], 2).unwrap().passed());

        let p = path(8).unwrap();
        let h = terminal_sparsify(&p, &[0, 7], 1, &cfg).unwrap();
        assert!(verify_terminal_preservation(&p, &h, &[0, 7], 1).unwrap().passed());
        let (a, b) = (h.map.super_of(0), h.map.super_of(7));
        assert_eq!(max_flow(&h.graph, a, b).unwrap().value(), 1);

        let k = clique(8).unwrap();
        let h = terminal_sparsify(&k, &[2, 5], 8, &cfg).unwrap();
        let (a, b) = (h.map.super_of(2), h.map.super_of(5));
        assert_eq!(h.map.size_of(a), 1);
        assert_eq!(h.map.size_of(b), 1);
        assert_eq!(max_flow(&h.graph, a, b).unwrap().value(), 7);

        assert!(terminal_sparsify(&k, &[], 8, &cfg).is_err());
    }
}
