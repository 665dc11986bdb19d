//! Weighted undirected multigraphs, cuts, friendliness and contraction.
//!
//! Parallel edges are stored as a single entry whose weight is their
//! multiplicity. Self-loop mass never appears as an edge: it lives in a
//! per-node `extra_volume` that counts toward volume but not degree.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

pub type NodeId = usize;
pub type Weight = u64;

/// A node is unfriendly to a cut when strictly more than
/// `UNFRIENDLY_CROSS_NUM / UNFRIENDLY_CROSS_DEN` of its degree crosses it.
pub const UNFRIENDLY_CROSS_NUM: u64 = 3;
pub const UNFRIENDLY_CROSS_DEN: u64 = 5;

/// `cross > 0.6 * degree`, evaluated exactly.
#[inline]
pub fn crosses_too_much(cross: Weight, degree: Weight) -> bool {
    (cross as u128) * UNFRIENDLY_CROSS_DEN as u128 > (degree as u128) * UNFRIENDLY_CROSS_NUM as u128
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(NodeId, NodeId, Weight)>,
    adj: Vec<Vec<(NodeId, Weight)>>,
    degree: Vec<Weight>,
    extra_volume: Vec<Weight>,
}

impl Graph {
    /// Graph on `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            degree: vec![0; n],
            extra_volume: vec![0; n],
        }
    }

    /// Builds a graph from `(u, v, weight)` triples. Parallel entries are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Weight)>,
    {
        let mut merged: HashMap<(NodeId, NodeId), Weight> = HashMap::new();
        for (u, v, w) in edges {
            if u >= n {
                return Err(Error::NodeOutOfRange { node: u, n });
            }
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if w == 0 {
                return Err(Error::ZeroWeight { u, v });
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0) += w;
        }
        let mut list: Vec<_> = merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        list.sort_unstable();
        Ok(Self::from_canonical(n, list, vec![0; n]))
    }

    /// Unit-weight graph from an edge list.
    pub fn from_unit_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1)))
    }

    // `edges` must be sorted, merged, with u < v and positive weights.
    fn from_canonical(n: usize, edges: Vec<(NodeId, NodeId, Weight)>, extra_volume: Vec<Weight>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut degree = vec![0; n];
        for &(u, v, w) in &edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
            degree[u] += w;
            degree[v] += w;
        }
        Graph {
            n,
            edges,
            adj,
            degree,
            extra_volume,
        }
    }

    pub fn with_extra_volume(mut self, extra: Vec<Weight>) -> Result<Self> {
        if extra.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "extra volume has {} entries for {} nodes",
                extra.len(),
                self.n
            )));
        }
        self.extra_volume = extra;
        Ok(self)
    }

    pub fn without_extra_volume(mut self) -> Self {
        self.extra_volume = vec![0; self.n];
        self
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of distinct adjacent pairs.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges counting multiplicity.
    pub fn total_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn max_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.2).max().unwrap_or(0)
    }

    /// Edges as `(u, v, weight)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId, Weight)] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, Weight)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> Result<Weight> {
        self.check_node(v)?;
        Ok(self.degree[v])
    }

    pub fn degrees(&self) -> &[Weight] {
        &self.degree
    }

    pub fn extra_volume(&self, v: NodeId) -> Weight {
        self.extra_volume[v]
    }

    pub fn extra_volumes(&self) -> &[Weight] {
        &self.extra_volume
    }

    /// Unit weights and no self-loop mass.
    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|e| e.2 == 1) && self.extra_volume.iter().all(|&x| x == 0)
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v >= self.n {
            Err(Error::NodeOutOfRange { node: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Membership vector of `s`; duplicates are tolerated.
    pub fn membership(&self, s: &[NodeId]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        for &v in s {
            self.check_node(v)?;
            mask[v] = true;
        }
        Ok(mask)
    }

    fn proper_membership(&self, s: &[NodeId]) -> Result<Vec<bool>> {
        let mask = self.membership(s)?;
        check_proper(&mask)?;
        Ok(mask)
    }

    /// Sum of degree plus extra volume over `s`.
    pub fn volume(&self, s: &[NodeId]) -> Result<Weight> {
        let mask = self.membership(s)?;
        Ok(self.volume_mask(&mask))
    }

    pub fn volume_mask(&self, mask: &[bool]) -> Weight {
        (0..self.n)
            .filter(|&v| mask[v])
            .map(|v| self.degree[v] + self.extra_volume[v])
            .sum()
    }

    /// Total weight of edges with exactly one endpoint in `s`.
    pub fn cut_value(&self, s: &[NodeId]) -> Result<Weight> {
        let mask = self.proper_membership(s)?;
        Ok(self.cut_value_mask(&mask))
    }

    pub fn cut_value_mask(&self, mask: &[bool]) -> Weight {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| mask[u] != mask[v])
            .map(|e| e.2)
            .sum()
    }

    /// Per-node weight crossing the cut given by `mask`.
    pub fn crossing_weights(&self, mask: &[bool]) -> Vec<Weight> {
        let mut cross = vec![0; self.n];
        for &(u, v, w) in &self.edges {
            if mask[u] != mask[v] {
                cross[u] += w;
                cross[v] += w;
            }
        }
        cross
    }

    /// A cut is friendly unless some node, on either side, sends strictly
    /// more than 0.6 of its degree across. `base_degrees` replaces the
    /// graph's own degrees (used for contracted graphs).
    pub fn is_friendly(&self, s: &[NodeId], base_degrees: Option<&[Weight]>) -> Result<bool> {
        let mask = self.proper_membership(s)?;
        if let Some(b) = base_degrees {
            if b.len() != self.n {
                return Err(Error::InvalidParameter(format!(
                    "degree table has {} entries for {} nodes",
                    b.len(),
                    self.n
                )));
            }
        }
        Ok(self.is_friendly_mask(&mask, base_degrees))
    }

    pub fn is_friendly_mask(&self, mask: &[bool], base_degrees: Option<&[Weight]>) -> bool {
        let degrees = base_degrees.unwrap_or(&self.degree);
        let cross = self.crossing_weights(mask);
        !(0..self.n).any(|v| crosses_too_much(cross[v], degrees[v]))
    }

    /// Quotient graph: merged endpoints drop their edge, parallel edges add
    /// up and extra volume is summed per class.
    pub fn contract(&self, map: &ContractionMap) -> Result<Graph> {
        if map.original_count() != self.n {
            return Err(Error::InvalidPartition(format!(
                "map covers {} nodes, graph has {}",
                map.original_count(),
                self.n
            )));
        }
        let k = map.super_count();
        let mut merged: HashMap<(NodeId, NodeId), Weight> = HashMap::new();
        for &(u, v, w) in &self.edges {
            let (a, b) = (map.super_of(u), map.super_of(v));
            if a != b {
                *merged.entry((a.min(b), a.max(b))).or_insert(0) += w;
            }
        }
        let mut extra = vec![0; k];
        for v in 0..self.n {
            extra[map.super_of(v)] += self.extra_volume[v];
        }
        let mut list: Vec<_> = merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        list.sort_unstable();
        Ok(Self::from_canonical(k, list, extra))
    }

    /// Connected component label per node and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.n);
        for &(u, v, _) in &self.edges {
            uf.union(u, v);
        }
        uf.labels()
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }
}

fn check_proper(mask: &[bool]) -> Result<()> {
    if !mask.iter().any(|&b| b) {
        return Err(Error::EmptySide);
    }
    if mask.iter().all(|&b| b) {
        return Err(Error::FullSide);
    }
    Ok(())
}

/// One side of a bipartition together with its crossing weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cut {
    side: Vec<NodeId>,
    value: Weight,
}

impl Cut {
    /// Evaluates the cut of `side` in `g`.
    pub fn new(g: &Graph, side: &[NodeId]) -> Result<Cut> {
        let mask = g.proper_membership(side)?;
        Ok(Self::from_mask(g, &mask))
    }

    pub fn from_mask(g: &Graph, mask: &[bool]) -> Cut {
        Cut {
            side: (0..mask.len()).filter(|&v| mask[v]).collect(),
            value: g.cut_value_mask(mask),
        }
    }

    /// A cut whose value was computed elsewhere (e.g. from a cut tree).
    pub fn from_parts(mut side: Vec<NodeId>, value: Weight) -> Cut {
        side.sort_unstable();
        side.dedup();
        Cut { side, value }
    }

    pub fn side(&self) -> &[NodeId] {
        &self.side
    }

    pub fn value(&self) -> Weight {
        self.value
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.side.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.side {
            m[v] = true;
        }
        m
    }

    /// The other side of the same bipartition.
    pub fn complement(&self, n: usize) -> Cut {
        let m = self.mask(n);
        Cut {
            side: (0..n).filter(|&v| !m[v]).collect(),
            value: self.value,
        }
    }
}

/// Partition of the original nodes into super-nodes `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionMap {
    super_of: Vec<usize>,
    size_of: Vec<usize>,
}

impl ContractionMap {
    pub fn identity(n: usize) -> Self {
        ContractionMap {
            super_of: (0..n).collect(),
            size_of: vec![1; n],
        }
    }

    /// Requires `super_of` to be surjective onto `0..k` for some `k`.
    pub fn new(super_of: Vec<usize>) -> Result<Self> {
        let k = super_of.iter().map(|&s| s + 1).max().unwrap_or(0);
        let mut size_of = vec![0; k];
        for &s in &super_of {
            size_of[s] += 1;
        }
        if let Some(empty) = size_of.iter().position(|&c| c == 0) {
            return Err(Error::InvalidPartition(format!("super-node {empty} has no members")));
        }
        Ok(ContractionMap { super_of, size_of })
    }

    /// Relabels arbitrary class labels to `0..k` in order of first appearance.
    pub fn from_labels<L: Eq + std::hash::Hash + Copy>(labels: &[L]) -> Self {
        let mut ids: HashMap<L, usize> = HashMap::new();
        let super_of: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        let mut size_of = vec![0; ids.len()];
        for &s in &super_of {
            size_of[s] += 1;
        }
        ContractionMap { super_of, size_of }
    }

    /// Classes given explicitly; every node must appear exactly once.
    pub fn from_classes(n: usize, classes: &[Vec<NodeId>]) -> Result<Self> {
        let mut super_of = vec![usize::MAX; n];
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidPartition(format!("class {i} is empty")));
            }
            for &v in class {
                if v >= n {
                    return Err(Error::NodeOutOfRange { node: v, n });
                }
                if super_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("node {v} appears twice")));
                }
                super_of[v] = i;
            }
        }
        if let Some(v) = super_of.iter().position(|&s| s == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {v} is not covered")));
        }
        Self::new(super_of)
    }

    pub fn original_count(&self) -> usize {
        self.super_of.len()
    }

    pub fn super_count(&self) -> usize {
        self.size_of.len()
    }

    pub fn super_of(&self, v: NodeId) -> usize {
        self.super_of[v]
    }

    pub fn super_of_all(&self) -> &[usize] {
        &self.super_of
    }

    pub fn size_of(&self, s: usize) -> usize {
        self.size_of[s]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.size_of
    }

    pub fn is_identity(&self) -> bool {
        self.super_count() == self.original_count()
    }

    /// Members of every super-node, each sorted.
    pub fn members(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.super_count()];
        for (v, &s) in self.super_of.iter().enumerate() {
            out[s].push(v);
        }
        out
    }

    /// `self` maps originals to intermediate nodes, `next` maps those onward.
    pub fn compose(&self, next: &ContractionMap) -> Result<ContractionMap> {
        if next.original_count() != self.super_count() {
            return Err(Error::InvalidPartition(format!(
                "cannot compose: {} super-nodes vs map over {}",
                self.super_count(),
                next.original_count()
            )));
        }
        ContractionMap::new(self.super_of.iter().map(|&s| next.super_of(s)).collect())
    }

    /// Splits every class into its connected pieces in `g`, so that the
    /// contraction is a minor.
    pub fn refine_connected(&self, g: &Graph) -> Result<ContractionMap> {
        if g.node_count() != self.original_count() {
            return Err(Error::InvalidPartition("graph and map sizes differ".into()));
        }
        let mut uf = UnionFind::new(g.node_count());
        for &(u, v, _) in g.edges() {
            if self.super_of[u] == self.super_of[v] {
                uf.union(u, v);
            }
        }
        let labels: Vec<usize> = (0..g.node_count()).map(|v| uf.find(v)).collect();
        Ok(ContractionMap::from_labels(&labels))
    }

    /// Lifts a set of super-nodes to the original nodes they contain.
    pub fn preimage(&self, supers: &[bool]) -> Vec<NodeId> {
        (0..self.original_count()).filter(|&v| supers[self.super_of[v]]).collect()
    }
}

/// A contracted graph together with the map from the base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sparsifier {
    pub graph: Graph,
    pub map: ContractionMap,
    pub base_degrees: Vec<Weight>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub nodes: usize,
    pub weighted_edges: Weight,
}

impl Sparsifier {
    pub fn identity(g: &Graph) -> Self {
        Sparsifier {
            graph: g.clone().without_extra_volume(),
            map: ContractionMap::identity(g.node_count()),
            base_degrees: g.degrees().to_vec(),
        }
    }

    pub fn from_map(g: &Graph, map: ContractionMap) -> Result<Self> {
        let graph = g.contract(&map)?.without_extra_volume();
        Ok(Sparsifier {
            graph,
            map,
            base_degrees: g.degrees().to_vec(),
        })
    }

    pub fn size_report(&self) -> SizeReport {
        SizeReport {
            nodes: self.graph.node_count(),
            weighted_edges: self.graph.total_weight(),
        }
    }

    /// Base degrees summed per super-node.
    pub fn super_base_degrees(&self) -> Vec<Weight> {
        let mut out = vec![0; self.map.super_count()];
        for (v, &d) in self.base_degrees.iter().enumerate() {
            out[self.map.super_of(v)] += d;
        }
        out
    }

    /// True if some super-node holds nodes from both sides of `mask`.
    pub fn crosses(&self, mask: &[bool]) -> Option<(NodeId, NodeId)> {
        let mut seen: Vec<[Option<NodeId>; 2]> = vec![[None, None]; self.map.super_count()];
        for (v, &inside) in mask.iter().enumerate() {
            let slot = &mut seen[self.map.super_of(v)];
            slot[inside as usize].get_or_insert(v);
            if let [Some(a), Some(b)] = *slot {
                return Some((b, a));
            }
        }
        None
    }

    /// Image of an uncrossed side in the contracted graph.
    pub fn image_mask(&self, mask: &[bool]) -> Vec<bool> {
        let mut img = vec![false; self.map.super_count()];
        for (v, &inside) in mask.iter().enumerate() {
            if inside {
                img[self.map.super_of(v)] = true;
            }
        }
        img
    }
}

/// Unit sizes of `s` written as a node list.
pub fn mask_to_nodes(mask: &[bool]) -> Vec<NodeId> {
    (0..mask.len()).filter(|&v| mask[v]).collect()
}
