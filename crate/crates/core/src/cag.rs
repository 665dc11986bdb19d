//! Partition trees and their auxiliary graphs (CAGs): the graph seen by one
//! super-node when every subtree hanging off it is contracted.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ContractionMap, Graph, NodeId, Sparsifier, Weight};
use crate::unionfind::UnionFind;

/// Super-nodes partitioning `0..n`, joined by a weighted spanning tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTree {
    n: usize,
    parts: Vec<Vec<NodeId>>,
    edges: Vec<(usize, usize, Weight)>,
    part_of: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl PartitionTree {
    pub fn new(n: usize, parts: Vec<Vec<NodeId>>, edges: Vec<(usize, usize, Weight)>) -> Result<Self> {
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidPartition(format!("super-node {i} is empty")));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::NodeOutOfRange { node: v, n });
                }
                if part_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("node {v} appears twice")));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {v} is in no super-node")));
        }
        let k = parts.len();
        if edges.len() + 1 != k {
            return Err(Error::InvalidTree(format!("{} edges over {k} super-nodes", edges.len())));
        }
        let mut uf = UnionFind::new(k);
        let mut adj = vec![Vec::new(); k];
        for &(a, b, _) in &edges {
            if a >= k || b >= k || a == b || !uf.union(a, b) {
                return Err(Error::InvalidTree(format!("edge {a} {b} is out of range or closes a cycle")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parts = parts;
        for part in &mut parts {
            part.sort_unstable();
        }
        Ok(PartitionTree {
            n,
            parts,
            edges,
            part_of,
            adj,
        })
    }

    /// One super-node holding everything.
    pub fn trivial(n: usize) -> Self {
        Self::new(n, vec![(0..n).collect()], Vec::new()).expect("single part")
    }

    /// Random partition into `k` non-empty parts with a random tree on top;
    /// each tree edge is weighted by the value of the cut it induces in `g`.
    pub fn random<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Result<Self> {
        let n = g.node_count();
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("k = {k} parts for {n} nodes")));
        }
        let mut order: Vec<NodeId> = (0..n).collect();
        order.shuffle(rng);
        let mut parts: Vec<Vec<NodeId>> = order[..k].iter().map(|&v| vec![v]).collect();
        for &v in &order[k..] {
            parts[rng.gen_range(0..k)].push(v);
        }
        let mut edges: Vec<(usize, usize, Weight)> = (1..k).map(|i| (rng.gen_range(0..i), i, 0)).collect();
        let pt = Self::new(n, parts.clone(), edges.clone())?;
        for e in &mut edges {
            let side: Vec<NodeId> = pt.edge_side(e.0, e.1);
            e.2 = g.cut_value(&side)?;
        }
        Self::new(n, parts, edges)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<NodeId>] {
        &self.parts
    }

    pub fn edges(&self) -> &[(usize, usize, Weight)] {
        &self.edges
    }

    pub fn part_of(&self, v: NodeId) -> usize {
        self.part_of[v]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Original nodes on `a`'s side of tree edge `{a, b}`.
    pub fn edge_side(&self, a: usize, b: usize) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![(a, b)];
        while let Some((x, from)) = stack.pop() {
            out.extend_from_slice(&self.parts[x]);
            stack.extend(self.adj[x].iter().filter(|&&y| y != from).map(|&y| (y, x)));
        }
        out.sort_unstable();
        out
    }

    /// Per-node class token for the CAG of part `i`: members of `V_i` get
    /// their own token, every component of the tree minus `i` shares one.
    fn tokens(&self, i: usize) -> Result<Vec<usize>> {
        if i >= self.parts.len() {
            return Err(Error::InvalidParameter(format!(
                "super-node {i} out of range ({} parts)",
                self.parts.len()
            )));
        }
        let mut token = vec![usize::MAX; self.n];
        for &v in &self.parts[i] {
            token[v] = v;
        }
        for &y in &self.adj[i] {
            // n + y is unique per branch and never collides with a node id
            for v in self.edge_side(y, i) {
                token[v] = self.n + y;
            }
        }
        Ok(token)
    }
}

/// Map from `g`'s nodes to the CAG of part `i`, classes ranked by their
/// smallest original node.
pub fn cag_map(pt: &PartitionTree, i: usize) -> Result<ContractionMap> {
    Ok(ContractionMap::from_labels(&pt.tokens(i)?))
}

pub fn build_cag(g: &Graph, pt: &PartitionTree, i: usize) -> Result<Graph> {
    if pt.node_count() != g.node_count() {
        return Err(Error::Mismatch("partition tree and graph sizes differ".into()));
    }
    g.contract(&cag_map(pt, i)?)
}

/// Map from `h`'s super-nodes to the sparsified CAG of part `i`. Branches
/// that share a super-node of `h` end up in one class.
pub fn sparsified_cag_map(h: &Sparsifier, pt: &PartitionTree, i: usize) -> Result<ContractionMap> {
    let n = pt.node_count();
    if h.map.original_count() != n {
        return Err(Error::Mismatch(format!(
            "sparsifier covers {} nodes, partition tree {n}",
            h.map.original_count()
        )));
    }
    let tokens = pt.tokens(i)?;
    let k = h.map.super_count();
    let mut uf = UnionFind::new(k + 2 * n);
    for (v, &t) in tokens.iter().enumerate() {
        uf.union(h.map.super_of(v), k + t);
    }
    let labels: Vec<usize> = (0..k).map(|s| uf.find(s)).collect();
    Ok(ContractionMap::from_labels(&labels))
}

pub fn build_sparsified_cag(h: &Sparsifier, pt: &PartitionTree, i: usize) -> Result<Graph> {
    h.graph.contract(&sparsified_cag_map(h, pt, i)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CagTotals {
    pub nodes: usize,
    pub edges: usize,
    pub weight: Weight,
}

/// Sums over every super-node's sparsified CAG.
pub fn cag_totals(h: &Sparsifier, pt: &PartitionTree) -> Result<CagTotals> {
    let mut t = CagTotals::default();
    for i in 0..pt.part_count() {
        let c = build_sparsified_cag(h, pt, i)?;
        t.nodes += c.node_count();
        t.edges += c.edge_count();
        t.weight += c.total_weight();
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique, path, star};

    #[test]
    fn cag_examples() {
        let g = path(4).unwrap();
        assert_eq!(build_cag(&g, &PartitionTree::trivial(4), 0).unwrap(), g);

        let pt = PartitionTree::new(4, vec![vec![0], vec![1, 2], vec![3]], vec![(0, 1, 1), (1, 2, 1)]).unwrap();
        let c = build_cag(&g, &pt, 1).unwrap();
        assert_eq!(c, g);
        let c = build_cag(&g, &pt, 0).unwrap();
        assert_eq!(c.edges(), &[(0, 1, 1)]);

        let s = star(5).unwrap();
        let pt = PartitionTree::new(
            5,
            vec![vec![0], vec![1], vec![2], vec![3], vec![4]],
            vec![(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)],
        )
        .unwrap();
        let c = build_cag(&s, &pt, 2).unwrap();
        assert_eq!(c.node_count(), 2);
        assert_eq!(c.edges(), &[(0, 1, 1)]);
        assert!(build_cag(&s, &pt, 5).is_err());
    }

    #[test]
    fn sparsified_cag_examples() {
        let g = path(4).unwrap();
        let pt = PartitionTree::new(4, vec![vec![0], vec![1], vec![2], vec![3]], vec![(0, 1, 1), (1, 2, 1), (2, 3, 1)])
            .unwrap();
        let id = Sparsifier::identity(&g);
        for i in 0..4 {
            assert_eq!(build_sparsified_cag(&id, &pt, i).unwrap(), build_cag(&g, &pt, i).unwrap());
        }
        let full = Sparsifier::from_map(&g, ContractionMap::new(vec![0; 4]).unwrap()).unwrap();
        assert_eq!(build_sparsified_cag(&full, &pt, 1).unwrap().node_count(), 1);

        // star tree around part 1 = {1}; h joins 0 and 2, which sit in different branches
        let k4 = clique(4).unwrap();
        let pt = PartitionTree::new(4, vec![vec![0], vec![1], vec![2], vec![3]], vec![(1, 0, 3), (1, 2, 3), (1, 3, 3)])
            .unwrap();
        let h = Sparsifier::from_map(&k4, ContractionMap::new(vec![0, 1, 0, 2]).unwrap()).unwrap();
        let c = build_sparsified_cag(&h, &pt, 1).unwrap();
        assert_eq!(c.node_count(), 3);
        assert_eq!(build_cag(&k4, &pt, 1).unwrap().node_count(), 4);
    }

    #[test]
    fn totals_examples() {
        let g = path(4).unwrap();
        let t = cag_totals(&Sparsifier::identity(&g), &PartitionTree::trivial(4)).unwrap();
        assert_eq!((t.nodes, t.edges), (4, 3));
        let pt = PartitionTree::new(4, vec![vec![0], vec![1], vec![2], vec![3]], vec![(0, 1, 1), (1, 2, 1), (2, 3, 1)])
            .unwrap();
        let t = cag_totals(&Sparsifier::identity(&g), &pt).unwrap();
        assert!(t.nodes <= 12);
    }

    #[test]
    fn edge_sum_exceeds_graph_on_triangle() {
        // the middle part sees the whole triangle, the ends see one merged edge each
        let g = clique(3).unwrap();
        let pt = PartitionTree::new(3, vec![vec![0], vec![1], vec![2]], vec![(0, 1, 2), (1, 2, 2)]).unwrap();
        let t = cag_totals(&Sparsifier::identity(&g), &pt).unwrap();
        assert_eq!((t.nodes, t.edges, t.weight), (7, 5, 7));
        assert!(t.edges > g.edge_count());
    }

    #[test]
    fn partition_validation() {
        assert!(PartitionTree::new(3, vec![vec![0], vec![1]], vec![(0, 1, 1)]).is_err());
        assert!(PartitionTree::new(2, vec![vec![0, 1], vec![1]], vec![(0, 1, 1)]).is_err());
        assert!(PartitionTree::new(2, vec![vec![0], vec![1]], vec![]).is_err());
    }
}
