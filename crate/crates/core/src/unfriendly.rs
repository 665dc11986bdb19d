//! Single-source minimum cuts that are exact for every `v` having an
//! unfriendly minimum `p,v`-cut.
//!
//! Starting from `(1+eps)`-approximate estimates, terminals are grouped by
//! estimate level and each group is passed to the isolating-cuts procedure.
//! If `v`'s minimum cut is unfriendly, every other node on one side of it
//! has a much smaller estimate, so at the right level the cut isolates `v`
//! (or the source) among the terminals.

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{crosses_too_much, Cut, Graph, NodeId, Weight};
use crate::isolating::isolating_cuts;
use crate::maxflow::max_flow;

/// Per-node upper bounds on `λ(p, v)` with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EstimateTable {
    pub source: NodeId,
    /// `None` at the source.
    pub estimate: Vec<Option<Weight>>,
    /// Side containing `v` (and not `p`) of a cut with value `estimate[v]`.
    pub witness: Vec<Option<Cut>>,
}

impl EstimateTable {
    pub fn value(&self, v: NodeId) -> Option<Weight> {
        self.estimate[v]
    }

    pub fn witness(&self, v: NodeId) -> Option<&Cut> {
        self.witness[v].as_ref()
    }

    fn offer(&mut self, v: NodeId, cut: Cut) {
        if self.estimate[v].is_none_or(|e| cut.value() < e) {
            self.estimate[v] = Some(cut.value());
            self.witness[v] = Some(cut);
        }
    }

    /// Entry-wise minimum with another table for the same source.
    pub fn merge_min(&mut self, other: &EstimateTable) -> Result<()> {
        if other.source != self.source || other.estimate.len() != self.estimate.len() {
            return Err(Error::Mismatch("estimate tables differ in source or size".into()));
        }
        for v in 0..self.estimate.len() {
            if let Some(c) = &other.witness[v] {
                self.offer(v, c.clone());
            }
        }
        Ok(())
    }

    /// Checks every witness: contains `v`, excludes `p`, has the stated value.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let p = self.source;
        for v in 0..g.node_count() {
            if v == p {
                continue;
            }
            let (Some(e), Some(c)) = (self.estimate[v], &self.witness[v]) else {
                return Err(Error::Mismatch(format!("node {v} has no estimate")));
            };
            if !c.contains(v) || c.contains(p) {
                return Err(Error::Mismatch(format!("witness for {v} does not separate it from {p}")));
            }
            let actual = g.cut_value(c.side())?;
            if actual != e || c.value() != e {
                return Err(Error::Mismatch(format!(
                    "witness for {v} has value {actual}, estimate is {e}"
                )));
            }
        }
        Ok(())
    }
}

/// Source of the initial `(1+eps)`-approximate estimates.
pub trait SingleSourceEstimator {
    /// Guaranteed ratio between estimate and true value.
    fn eps(&self) -> Ratio<u64>;
    fn estimate(&self, g: &Graph, p: NodeId) -> Result<EstimateTable>;
}

/// `n - 1` max-flows; exact, hence valid for every `eps`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactEstimator;

impl SingleSourceEstimator for ExactEstimator {
    fn eps(&self) -> Ratio<u64> {
        Ratio::from_integer(0)
    }

    fn estimate(&self, g: &Graph, p: NodeId) -> Result<EstimateTable> {
        g.check_node(p)?;
        let n = g.node_count();
        let mut table = EstimateTable {
            source: p,
            estimate: vec![None; n],
            witness: vec![None; n],
        };
        for v in (0..n).filter(|&v| v != p) {
            table.offer(v, max_flow(g, v, p)?);
        }
        Ok(table)
    }
}

/// Runs `estimator` and checks that its witnesses are genuine cuts.
pub fn approx_single_source(g: &Graph, p: NodeId, estimator: &dyn SingleSourceEstimator) -> Result<EstimateTable> {
    let table = estimator.estimate(g, p)?;
    if table.source != p || table.estimate.len() != g.node_count() {
        return Err(Error::Mismatch("estimator returned a table for another instance".into()));
    }
    table.validate(g)?;
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnfriendlyConfig {
    pub eps: Ratio<u64>,
    pub delta: Ratio<u64>,
}

impl Default for UnfriendlyConfig {
    fn default() -> Self {
        UnfriendlyConfig {
            eps: Ratio::new(1, 100),
            delta: Ratio::new(1, 100),
        }
    }
}

impl UnfriendlyConfig {
    /// Levels only separate a node from its cut-mates when
    /// `0.8 (1+eps)(1+delta) <= 1`.
    pub fn validate(&self) -> Result<()> {
        let one = Ratio::from_integer(1);
        if *self.delta.numer() == 0 {
            return Err(Error::InvalidParameter("delta must be positive".into()));
        }
        if Ratio::new(4, 5) * (one + self.eps) * (one + self.delta) > one {
            return Err(Error::InvalidParameter(format!(
                "eps = {} and delta = {} are too coarse to separate levels",
                self.eps, self.delta
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingleSourceRun {
    pub table: EstimateTable,
    /// Thresholds `ceil((1+delta)^i)` whose terminal sets were processed.
    pub thresholds: Vec<Weight>,
    pub isolating_calls: usize,
}

/// Largest allowed edge weight: `n^4`.
pub fn weight_bound(n: usize) -> Weight {
    (n as Weight).saturating_pow(4)
}

pub fn single_source_unfriendly(
    g: &Graph,
    p: NodeId,
    estimator: &dyn SingleSourceEstimator,
    cfg: &UnfriendlyConfig,
) -> Result<SingleSourceRun> {
    g.check_node(p)?;
    cfg.validate()?;
    if estimator.eps() > cfg.eps {
        return Err(Error::InvalidParameter(format!(
            "estimator guarantees 1 + {}, configuration assumes 1 + {}",
            estimator.eps(),
            cfg.eps
        )));
    }
    let n = g.node_count();
    let bound = weight_bound(n);
    if g.max_weight() > bound {
        return Err(Error::WeightsNotPolynomial {
            max: g.max_weight(),
            bound,
        });
    }
    let mut table = approx_single_source(g, p, estimator)?;
    let initial: Vec<Weight> = table.estimate.iter().map(|e| e.unwrap_or(0)).collect();
    let top = (0..n).filter(|&v| v != p).map(|v| initial[v]).max().unwrap_or(0);
    let mut run = SingleSourceRun {
        table: table.clone(),
        thresholds: Vec::new(),
        isolating_calls: 0,
    };
    let (num, den) = (BigUint::from(*cfg.delta.denom() + *cfg.delta.numer()), BigUint::from(*cfg.delta.denom()));
    let (mut pow_num, mut pow_den) = (BigUint::from(1u32), BigUint::from(1u32));
    let mut last_size = usize::MAX;
    loop {
        let tau = (&pow_num + &pow_den - 1u32) / &pow_den;
        let Ok(tau) = Weight::try_from(tau) else { break };
        if tau > top {
            break;
        }
        pow_num *= &num;
        pow_den *= &den;
        let terminals: Vec<NodeId> = (0..n).filter(|&v| v == p || initial[v] >= tau).collect();
        if terminals.len() == last_size {
            continue;
        }
        last_size = terminals.len();
        if terminals.len() < 2 {
            continue;
        }
        run.thresholds.push(tau);
        run.isolating_calls += 1;
        let iso = isolating_cuts(g, &terminals)?;
        let s_p = iso.get(p).expect("source is a terminal").complement(n);
        for (v, s_v) in iso.cuts {
            if v != p {
                table.offer(v, s_v);
                table.offer(v, s_p.clone());
            }
        }
    }
    run.table = table;
    Ok(run)
}

fn check_min_cut(g: &Graph, p: NodeId, v: NodeId, s: &Cut) -> Result<Weight> {
    g.check_node(p)?;
    g.check_node(v)?;
    if p == v {
        return Err(Error::SameEndpoints(p));
    }
    if !s.contains(v) || s.contains(p) {
        return Err(Error::Precondition(format!("cut must contain {v} and exclude {p}")));
    }
    let value = g.cut_value(s.side())?;
    let lambda = max_flow(g, p, v)?.value();
    if value != lambda {
        return Err(Error::Precondition(format!(
            "cut has value {value} but the minimum {p},{v}-cut is {lambda}"
        )));
    }
    Ok(value)
}

fn edges_to(g: &Graph, x: NodeId, mask: &[bool], inside: bool) -> Weight {
    g.neighbors(x).iter().filter(|&&(y, _)| mask[y] == inside).map(|e| e.1).sum()
}

/// For a minimum `p,v`-cut `S` (v-side) where `v` sends more than 0.6 of its
/// degree across: checks `δ(S \ {v}) <= 0.8 δ(S)`.
pub fn lemma_unfriendly_v(g: &Graph, p: NodeId, v: NodeId, s: &Cut) -> Result<bool> {
    let value = check_min_cut(g, p, v, s)?;
    let mask = s.mask(g.node_count());
    if !crosses_too_much(edges_to(g, v, &mask, false), g.degrees()[v]) {
        return Err(Error::Precondition(format!("{v} does not send more than 0.6 of its degree across")));
    }
    if s.side().len() == 1 {
        return Err(Error::Precondition("S \\ {v} is empty".into()));
    }
    let rest: Vec<_> = s.side().iter().copied().filter(|&x| x != v).collect();
    Ok(5 * g.cut_value(&rest)? <= 4 * value)
}

/// For a minimum `p,v`-cut `S` (v-side) where `p` sends more than 0.6 of its
/// degree into `S`: checks `δ((V \ S) \ {p}) <= 0.8 δ(S)`.
pub fn lemma_unfriendly_p(g: &Graph, p: NodeId, v: NodeId, s: &Cut) -> Result<bool> {
    let value = check_min_cut(g, p, v, s)?;
    let mask = s.mask(g.node_count());
    if !crosses_too_much(edges_to(g, p, &mask, true), g.degrees()[p]) {
        return Err(Error::Precondition(format!("{p} does not send more than 0.6 of its degree across")));
    }
    let rest: Vec<_> = (0..g.node_count()).filter(|&x| !mask[x] && x != p).collect();
    if rest.is_empty() {
        return Err(Error::Precondition("(V \\ S) \\ {p} is empty".into()));
    }
    Ok(5 * g.cut_value(&rest)? <= 4 * value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique, dumbbell, path};

    fn run(g: &Graph, p: NodeId) -> EstimateTable {
        single_source_unfriendly(g, p, &ExactEstimator, &UnfriendlyConfig::default())
            .unwrap()
            .table
    }

    #[test]
    fn exact_estimates() {
        let t = approx_single_source(&clique(4).unwrap(), 1, &ExactEstimator).unwrap();
        assert_eq!(t.estimate, vec![Some(3), None, Some(3), Some(3)]);
        let t = approx_single_source(&path(5).unwrap(), 0, &ExactEstimator).unwrap();
        assert!(t.estimate[1..].iter().all(|&e| e == Some(1)));
        let g = dumbbell(5).unwrap();
        let t = approx_single_source(&g, 0, &ExactEstimator).unwrap();
        assert_eq!(t.estimate[1..5], [Some(4); 4]);
        assert_eq!(t.estimate[5..], [Some(1); 5]);
    }

    #[test]
    fn unfriendly_examples() {
        let t = run(&clique(6).unwrap(), 2);
        assert!((0..6).filter(|&v| v != 2).all(|v| t.value(v) == Some(5)));
        let t = run(&path(6).unwrap(), 0);
        assert!((1..6).all(|v| t.value(v) == Some(1)));
        let g = dumbbell(5).unwrap();
        let t = run(&g, 0);
        t.validate(&g).unwrap();
        assert!((5..10).all(|v| t.value(v).unwrap() >= 1));
    }

    #[test]
    fn weight_guard() {
        let g = Graph::from_edges(2, [(0, 1, 17)]).unwrap();
        assert!(matches!(
            single_source_unfriendly(&g, 0, &ExactEstimator, &UnfriendlyConfig::default()),
            Err(Error::WeightsNotPolynomial { max: 17, bound: 16 })
        ));
    }

    #[test]
    fn coarse_parameters_rejected() {
        let cfg = UnfriendlyConfig {
            eps: Ratio::new(1, 10),
            delta: Ratio::new(1, 2),
        };
        assert!(cfg.validate().is_err());
        let ok = UnfriendlyConfig {
            eps: Ratio::new(1, 10),
            delta: Ratio::new(1, 10),
        };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn lemma_guards() {
        let k4 = clique(4).unwrap();
        let single = Cut::new(&k4, &[1]).unwrap();
        assert!(matches!(lemma_unfriendly_v(&k4, 0, 1, &single), Err(Error::Precondition(_))));
        // not a minimum cut
        let pair = Cut::new(&k4, &[1, 2]).unwrap();
        assert!(matches!(lemma_unfriendly_v(&k4, 0, 1, &pair), Err(Error::Precondition(_))));
    }

    #[test]
    fn lemma_examples() {
        // node 1 has three edges into the triangle {0, 3, 4} and a pendant 2
        let g = Graph::from_unit_edges(5, [(0, 3), (0, 4), (3, 4), (0, 1), (1, 3), (1, 4), (1, 2)]).unwrap();
        let s = Cut::new(&g, &[1, 2]).unwrap();
        assert!(lemma_unfriendly_v(&g, 0, 1, &s).unwrap());
        let t = Cut::new(&g, &[0, 3, 4]).unwrap();
        assert!(lemma_unfriendly_p(&g, 1, 0, &t).unwrap());
    }
}
