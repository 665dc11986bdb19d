//! Minimum isolating cuts: for each terminal `v` in `R`, a minimum cut
//! separating `v` from `R \ {v}`, using `ceil(log2 |R|)` max-flows on the
//! whole graph plus one max-flow per terminal on disjoint pieces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Cut, Graph, NodeId};
use crate::maxflow::{min_cut_between_sets, FlowNetwork};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatingCuts {
    /// `(v, S_v)` in terminal order; each side is the inclusion-minimal one.
    pub cuts: Vec<(NodeId, Cut)>,
    pub global_flow_calls: usize,
    pub local_flow_calls: usize,
}

impl IsolatingCuts {
    pub fn get(&self, v: NodeId) -> Option<&Cut> {
        self.cuts.iter().find(|(t, _)| *t == v).map(|(_, c)| c)
    }
}

fn terminals(g: &Graph, r: &[NodeId]) -> Result<Vec<NodeId>> {
    let mut seen = vec![false; g.node_count()];
    let mut out = Vec::with_capacity(r.len());
    for &v in r {
        g.check_node(v)?;
        if !seen[v] {
            seen[v] = true;
            out.push(v);
        }
    }
    if out.len() < 2 {
        return Err(Error::TooFewTerminals(out.len()));
    }
    Ok(out)
}

/// Number of bipartitions needed to separate `k` terminals.
pub fn bipartition_count(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

pub fn isolating_cuts(g: &Graph, r: &[NodeId]) -> Result<IsolatingCuts> {
    let r = terminals(g, r)?;
    let n = g.node_count();
    let k = r.len();
    let bits = bipartition_count(k);
    // label[v] collects, bit by bit, which side of each bipartition v is on
    let mut label = vec![0usize; n];
    for b in 0..bits {
        let (zero, one): (Vec<_>, Vec<_>) = (0..k).partition(|i| i >> b & 1 == 0);
        let a: Vec<_> = zero.iter().map(|&i| r[i]).collect();
        let bb: Vec<_> = one.iter().map(|&i| r[i]).collect();
        let x = min_cut_between_sets(g, &a, &bb)?.mask(n);
        for v in 0..n {
            label[v] |= usize::from(!x[v]) << b;
        }
    }
    let mut region: Vec<Vec<NodeId>> = vec![Vec::new(); k];
    for v in 0..n {
        if label[v] < k {
            region[label[v]].push(v);
        }
    }
    let mut pos = vec![usize::MAX; n];
    let mut cuts = Vec::with_capacity(k);
    for (i, &t) in r.iter().enumerate() {
        let u = &region[i];
        debug_assert!(u.contains(&t));
        for (j, &v) in u.iter().enumerate() {
            pos[v] = j;
        }
        let sink = u.len();
        let mut net = FlowNetwork::new(u.len() + 1);
        for (j, &v) in u.iter().enumerate() {
            for &(y, w) in g.neighbors(v) {
                if pos[y] == usize::MAX {
                    net.add_undirected(j, sink, w);
                } else if v < y {
                    net.add_undirected(j, pos[y], w);
                }
            }
        }
        let value = net.max_flow(pos[t], sink);
        let side = net.source_side(pos[t]);
        let members: Vec<_> = u.iter().enumerate().filter(|&(j, _)| side[j]).map(|(_, &v)| v).collect();
        for &v in u {
            pos[v] = usize::MAX;
        }
        cuts.push((t, Cut::from_parts(members, value)));
    }
    Ok(IsolatingCuts {
        cuts,
        global_flow_calls: bits,
        local_flow_calls: k,
    })
}

/// One max-flow per terminal against all other terminals at once.
pub fn isolating_cuts_direct(g: &Graph, r: &[NodeId]) -> Result<IsolatingCuts> {
    let r = terminals(g, r)?;
    let mut cuts = Vec::with_capacity(r.len());
    for (i, &t) in r.iter().enumerate() {
        let others: Vec<_> = r.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
        cuts.push((t, min_cut_between_sets(g, &[t], &others)?));
    }
    Ok(IsolatingCuts {
        global_flow_calls: r.len(),
        local_flow_calls: 0,
        cuts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{path, star};

    #[test]
    fn call_counts() {
        assert_eq!(
            (2..=9).map(bipartition_count).collect::<Vec<_>>(),
            vec![1, 2, 2, 3, 3, 3, 3, 4]
        );
    }

    #[test]
    fn star_leaves() {
        let g = star(6).unwrap();
        let res = isolating_cuts(&g, &[1, 3, 5]).unwrap();
        for (v, c) in &res.cuts {
            assert_eq!((c.side(), c.value()), (&[*v][..], 1));
        }
        assert_eq!((res.global_flow_calls, res.local_flow_calls), (2, 3));
    }

    #[test]
    fn path_terminals() {
        let g = path(5).unwrap();
        let fast = isolating_cuts(&g, &[0, 2, 4]).unwrap();
        let direct = isolating_cuts_direct(&g, &[0, 2, 4]).unwrap();
        let values: Vec<_> = fast.cuts.iter().map(|(_, c)| c.value()).collect();
        assert_eq!(values, vec![1, 2, 1]);
        assert_eq!(fast.get(0).unwrap().side(), &[0]);
        assert_eq!(fast.get(4).unwrap().side(), &[4]);
        assert_eq!(fast.get(2).unwrap().side(), &[2]);
        assert_eq!(fast.cuts, direct.cuts);
    }

    #[test]
    fn weighted_cycle_two_terminals() {
        let g = Graph::from_edges(4, [(0, 1, 10), (1, 2, 4), (2, 3, 10), (0, 3, 3)]).unwrap();
        let fast = isolating_cuts(&g, &[0, 2]).unwrap();
        assert_eq!(fast.get(0).unwrap().value(), 7);
        assert_eq!(fast.get(2).unwrap().value(), 7);
        assert_eq!(fast.cuts, isolating_cuts_direct(&g, &[0, 2]).unwrap().cuts);
    }

    #[test]
    fn too_few_terminals() {
        let g = path(3).unwrap();
        assert_eq!(isolating_cuts(&g, &[1, 1]), Err(Error::TooFewTerminals(1)));
        assert_eq!(isolating_cuts_direct(&g, &[]), Err(Error::TooFewTerminals(0)));
    }
}
