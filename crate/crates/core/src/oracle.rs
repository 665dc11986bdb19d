//! Brute-force ground truth for small graphs.
//!
//! Cuts are enumerated in Gray-code order so that each step flips one node
//! and the cut value and per-node crossing weights update in O(deg).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{crosses_too_much, Cut, Graph, NodeId, Weight};
use crate::maxflow::max_flow;

pub const ENUMERATION_LIMIT: usize = 20;
pub const CLASSIFICATION_LIMIT: usize = 16;

/// Borrowed view of the current cut during enumeration.
pub struct CutView<'a> {
    /// `mask[v]` is true iff `v` is on the side containing node 0.
    pub mask: &'a [bool],
    pub value: Weight,
    /// Weight each node sends across the cut.
    pub cross: &'a [Weight],
}

impl CutView<'_> {
    pub fn is_friendly(&self, degrees: &[Weight]) -> bool {
        !self
            .cross
            .iter()
            .zip(degrees)
            .any(|(&c, &d)| crosses_too_much(c, d))
    }

    pub fn to_cut(&self) -> Cut {
        Cut::from_parts(
            (0..self.mask.len()).filter(|&v| self.mask[v]).collect(),
            self.value,
        )
    }
}

fn guard(g: &Graph, what: &'static str, limit: usize) -> Result<()> {
    if g.node_count() > limit {
        Err(Error::GuardExceeded {
            what,
            n: g.node_count(),
            limit,
        })
    } else {
        Ok(())
    }
}

/// Calls `f` once for each of the `2^(n-1) - 1` cuts whose side contains node 0.
pub fn for_each_cut<F: FnMut(&CutView)>(g: &Graph, mut f: F) -> Result<()> {
    guard(g, "cut enumeration", ENUMERATION_LIMIT)?;
    let n = g.node_count();
    if n < 2 {
        return Ok(());
    }
    let mut mask = vec![true; n];
    let mut cross = vec![0; n];
    let mut value: Weight = 0;
    for k in 1u64..1 << (n - 1) {
        let x = k.trailing_zeros() as usize + 1;
        for &(y, w) in g.neighbors(x) {
            if mask[x] == mask[y] {
                value += w;
                cross[x] += w;
                cross[y] += w;
            } else {
                value -= w;
                cross[x] -= w;
                cross[y] -= w;
            }
        }
        mask[x] = !mask[x];
        f(&CutView {
            mask: &mask,
            value,
            cross: &cross,
        });
    }
    Ok(())
}

/// Every cut whose side contains node 0.
pub fn enumerate_cuts(g: &Graph) -> Result<Vec<Cut>> {
    let mut out = Vec::new();
    for_each_cut(g, |c| out.push(c.to_cut()))?;
    Ok(out)
}

/// Friendly cuts of value at most `w`, judged against `g`'s own degrees.
pub fn friendly_cuts_up_to(g: &Graph, w: Weight) -> Result<Vec<Cut>> {
    let mut out = Vec::new();
    for_each_cut(g, |c| {
        if c.value <= w && c.is_friendly(g.degrees()) {
            out.push(c.to_cut());
        }
    })?;
    Ok(out)
}

/// `λ[s][t]` from one max-flow per unordered pair; the diagonal is 0.
pub fn all_pairs_min_cut(g: &Graph) -> Vec<Vec<Weight>> {
    let n = g.node_count();
    let mut lambda = vec![vec![0; n]; n];
    for s in 0..n {
        for t in s + 1..n {
            let v = max_flow(g, s, t).expect("distinct in-range pair").value();
            lambda[s][t] = v;
            lambda[t][s] = v;
        }
    }
    lambda
}

/// `λ[s][t]` by enumeration; independent of max-flow.
pub fn all_pairs_min_cut_enumerated(g: &Graph) -> Result<Vec<Vec<Weight>>> {
    let n = g.node_count();
    let mut lambda = vec![vec![Weight::MAX; n]; n];
    for_each_cut(g, |c| {
        for s in (0..n).filter(|&s| c.mask[s]) {
            for t in (0..n).filter(|&t| !c.mask[t]) {
                if c.value < lambda[s][t] {
                    lambda[s][t] = c.value;
                    lambda[t][s] = c.value;
                }
            }
        }
    })?;
    for (s, row) in lambda.iter_mut().enumerate() {
        row[s] = 0;
    }
    Ok(lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FriendlinessClass {
    AllFriendly,
    AllUnfriendly,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinCutFriendliness {
    pub class: FriendlinessClass,
    pub value: Weight,
    pub min_cuts: usize,
}

impl MinCutFriendliness {
    pub fn has_unfriendly(&self) -> bool {
        self.class != FriendlinessClass::AllFriendly
    }

    pub fn has_friendly(&self) -> bool {
        self.class != FriendlinessClass::AllUnfriendly
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    value: Weight,
    friendly: usize,
    unfriendly: usize,
}

impl Tally {
    fn report(&self) -> MinCutFriendliness {
        let class = match (self.friendly > 0, self.unfriendly > 0) {
            (true, false) => FriendlinessClass::AllFriendly,
            (false, true) => FriendlinessClass::AllUnfriendly,
            _ => FriendlinessClass::Mixed,
        };
        MinCutFriendliness {
            class,
            value: self.value,
            min_cuts: self.friendly + self.unfriendly,
        }
    }

    fn add(&mut self, friendly: bool) {
        if friendly {
            self.friendly += 1;
        } else {
            self.unfriendly += 1;
        }
    }
}

/// Classifies all minimum `s,t`-cuts by friendliness.
pub fn min_cut_friendliness(g: &Graph, s: NodeId, t: NodeId) -> Result<MinCutFriendliness> {
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    guard(g, "friendliness classification", CLASSIFICATION_LIMIT)?;
    let mut tally = Tally {
        value: Weight::MAX,
        ..Tally::default()
    };
    for_each_cut(g, |c| {
        if c.mask[s] == c.mask[t] || c.value > tally.value {
            return;
        }
        if c.value < tally.value {
            tally = Tally {
                value: c.value,
                ..Tally::default()
            };
        }
        tally.add(c.is_friendly(g.degrees()));
    })?;
    Ok(tally.report())
}

/// Classification for every unordered pair from a single enumeration.
/// Entry `[s][t]` is `None` on the diagonal.
pub fn classify_all_pairs(g: &Graph) -> Result<Vec<Vec<Option<MinCutFriendliness>>>> {
    guard(g, "friendliness classification", CLASSIFICATION_LIMIT)?;
    let n = g.node_count();
    let lambda = all_pairs_min_cut_enumerated(g)?;
    let top = lambda.iter().flatten().copied().max().unwrap_or(0);
    let mut tallies = vec![vec![Tally::default(); n]; n];
    for (s, row) in tallies.iter_mut().enumerate() {
        for (t, cell) in row.iter_mut().enumerate() {
            cell.value = lambda[s][t];
        }
    }
    let mut inside = Vec::with_capacity(n);
    let mut outside = Vec::with_capacity(n);
    for_each_cut(g, |c| {
        if c.value > top {
            return;
        }
        inside.clear();
        outside.clear();
        for v in 0..n {
            if c.mask[v] {
                inside.push(v);
            } else {
                outside.push(v);
            }
        }
        let mut friendly = None;
        for &s in &inside {
            for &t in &outside {
                if lambda[s][t] == c.value {
                    let f = *friendly.get_or_insert_with(|| c.is_friendly(g.degrees()));
                    tallies[s.min(t)][s.max(t)].add(f);
                }
            }
        }
    })?;
    let mut out = vec![vec![None; n]; n];
    for s in 0..n {
        for t in s + 1..n {
            let r = tallies[s][t].report();
            out[s][t] = Some(r);
            out[t][s] = Some(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique, dumbbell, path};

    #[test]
    fn enumeration_examples() {
        let tri = clique(3).unwrap();
        let cuts = enumerate_cuts(&tri).unwrap();
        assert_eq!(cuts.len(), 3);
        assert!(cuts.iter().all(|c| c.value() == 2));

        let p = path(3).unwrap();
        let mut got: Vec<_> = enumerate_cuts(&p)
            .unwrap()
            .into_iter()
            .map(|c| (c.side().to_vec(), c.value()))
            .collect();
        got.sort();
        assert_eq!(got, vec![(vec![0], 1), (vec![0, 1], 1), (vec![0, 2], 2)]);

        let k4 = enumerate_cuts(&clique(4).unwrap()).unwrap();
        assert_eq!(k4.len(), 7);
        assert_eq!(k4.iter().filter(|c| c.value() == 3).count(), 4);
        assert_eq!(k4.iter().filter(|c| c.value() == 4).count(), 3);
    }

    #[test]
    fn enumeration_matches_direct_values() {
        let g = dumbbell(5).unwrap();
        let cuts = enumerate_cuts(&g).unwrap();
        assert_eq!(cuts.len(), (1 << 9) - 1);
        for c in &cuts {
            assert!(c.contains(0));
            assert_eq!(c.value(), g.cut_value(c.side()).unwrap());
        }
    }

    #[test]
    fn guards_are_hard_errors() {
        let g = path(21).unwrap();
        assert!(matches!(enumerate_cuts(&g), Err(Error::GuardExceeded { .. })));
        let g = path(17).unwrap();
        assert!(matches!(min_cut_friendliness(&g, 0, 1), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn all_pairs_examples() {
        let l = all_pairs_min_cut(&clique(4).unwrap());
        assert!((0..4).all(|s| (0..4).all(|t| l[s][t] == if s == t { 0 } else { 3 })));
        let l = all_pairs_min_cut(&path(5).unwrap());
        assert!((0..5).all(|s| (0..5).all(|t| l[s][t] == u64::from(s != t))));

        let g = dumbbell(5).unwrap();
        let l = all_pairs_min_cut(&g);
        assert_eq!(l, all_pairs_min_cut_enumerated(&g).unwrap());
        assert_eq!(l[0][9], 1);
        assert_eq!(l[0][1], 4);
        // the bridge endpoints have degree 5 but their pair is still limited by the other clique nodes
        assert_eq!(l[4][3], 4);
    }

    #[test]
    fn friendliness_examples() {
        let r = min_cut_friendliness(&clique(6).unwrap(), 0, 3).unwrap();
        assert_eq!((r.class, r.value), (FriendlinessClass::AllUnfriendly, 5));

        let r = min_cut_friendliness(&dumbbell(5).unwrap(), 0, 9).unwrap();
        assert_eq!((r.class, r.value, r.min_cuts), (FriendlinessClass::AllFriendly, 1, 1));

        // both min cuts {a} and {a,b} leave an endpoint sending its whole degree across
        let r = min_cut_friendliness(&path(3).unwrap(), 0, 2).unwrap();
        assert_eq!((r.class, r.value, r.min_cuts), (FriendlinessClass::AllUnfriendly, 1, 2));
    }

    #[test]
    fn bulk_classification_matches_per_pair() {
        for g in [dumbbell(4).unwrap(), path(6).unwrap(), clique(5).unwrap()] {
            let all = classify_all_pairs(&g).unwrap();
            for s in 0..g.node_count() {
                for t in 0..g.node_count() {
                    if s != t {
                        assert_eq!(all[s][t], Some(min_cut_friendliness(&g, s, t).unwrap()));
                    }
                }
            }
        }
    }
}
