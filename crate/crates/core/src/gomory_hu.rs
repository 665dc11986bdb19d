//! Gomory-Hu (cut-equivalent) trees: classical construction, queries, the
//! friendly minimum-cut sparsifier read off a tree, and an accelerated
//! single-source / all-pairs pipeline built on friendly sparsification.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{crosses_too_much, ContractionMap, Cut, Graph, NodeId, Sparsifier, Weight};
use crate::maxflow::FlowNetwork;
use crate::sparsifier::{friendly_sparsify, SparsifyConfig};
use crate::unfriendly::{single_source_unfriendly, EstimateTable, ExactEstimator, UnfriendlyConfig};
use crate::unionfind::UnionFind;

/// A weighted forest on the original nodes. Pairs in different trees have
/// minimum cut 0.
#[derive(Clone, Debug, Serialize)]
pub struct GhTree {
    n: usize,
    edges: Vec<(NodeId, NodeId, Weight)>,
    #[serde(skip)]
    adj: Vec<Vec<(NodeId, Weight)>>,
    #[serde(skip)]
    component: Vec<usize>,
    components: usize,
}

impl PartialEq for GhTree {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for GhTree {}

impl GhTree {
    /// Validates that `edges` form a forest on `0..n`.
    pub fn new(n: usize, edges: Vec<(NodeId, NodeId, Weight)>) -> Result<GhTree> {
        let mut uf = UnionFind::new(n);
        let mut adj = vec![Vec::new(); n];
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidTree(format!("edge {u} {v} out of range (n = {n})")));
            }
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at {u}")));
            }
            if !uf.union(u, v) {
                return Err(Error::InvalidTree(format!("edge {u} {v} closes a cycle")));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
            norm.push((u.min(v), u.max(v), w));
        }
        norm.sort_unstable();
        let (component, components) = uf.labels();
        Ok(GhTree {
            n,
            edges: norm,
            adj,
            component,
            components,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn edges(&self) -> &[(NodeId, NodeId, Weight)] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, Weight)] {
        &self.adj[v]
    }

    pub fn component_of(&self, v: NodeId) -> usize {
        self.component[v]
    }

    /// Nodes reachable from `from` without crossing the edge `{a, b}`.
    fn side_without(&self, from: NodeId, a: NodeId, b: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.n];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adj[x] {
                if !seen[y] && !((x == a && y == b) || (x == b && y == a)) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        crate::graph::mask_to_nodes(&seen)
    }

    /// Side of tree edge `{u, v}` containing `u`.
    pub fn edge_side(&self, u: NodeId, v: NodeId) -> Vec<NodeId> {
        self.side_without(u, u, v)
    }

    /// Minimum `s,t`-cut read off the tree: the lightest edge on the path,
    /// the one nearest `s` among ties; the side contains `s`.
    pub fn query(&self, s: NodeId, t: NodeId) -> Result<Cut> {
        for x in [s, t] {
            if x >= self.n {
                return Err(Error::NodeOutOfRange { node: x, n: self.n });
            }
        }
        if s == t {
            return Err(Error::SameEndpoints(s));
        }
        if self.component[s] != self.component[t] {
            let side = (0..self.n).filter(|&v| self.component[v] == self.component[s]).collect();
            return Ok(Cut::from_parts(side, 0));
        }
        let mut parent = vec![(usize::MAX, 0); self.n];
        parent[s] = (s, 0);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &(y, w) in &self.adj[x] {
                if parent[y].0 == usize::MAX {
                    parent[y] = (x, w);
                    stack.push(y);
                }
            }
        }
        // walk t -> s; `<=` keeps the last minimum seen, i.e. the one nearest s
        let (mut best, mut x) = ((usize::MAX, usize::MAX, Weight::MAX), t);
        while x != s {
            let (px, w) = parent[x];
            if w <= best.2 {
                best = (px, x, w);
            }
            x = px;
        }
        Ok(Cut::from_parts(self.side_without(s, best.0, best.1), best.2))
    }
}

/// Minimum `s,t`-cut value and side from a tree.
pub fn gh_query(t: &GhTree, s: NodeId, u: NodeId) -> Result<Cut> {
    t.query(s, u)
}

/// Classical construction: split super-nodes one max-flow at a time, each
/// on the graph with every subtree hanging off the super-node contracted.
pub fn gomory_hu(g: &Graph) -> GhTree {
    let n = g.node_count();
    if n == 0 {
        return GhTree::new(0, Vec::new()).expect("empty forest");
    }
    let mut members: Vec<Vec<NodeId>> = vec![(0..n).collect()];
    let mut tree: Vec<Vec<(usize, Weight)>> = vec![Vec::new()];
    let mut label = vec![0usize; n];
    let mut pending = vec![0usize];
    let mut net = FlowNetwork::new(0);
    while let Some(x) = pending.pop() {
        if members[x].len() < 2 {
            continue;
        }
        let (s, t) = (members[x][0], members[x][1]);
        // auxiliary graph: members of x stay, each hanging subtree becomes one node
        let mut next = 0;
        for &v in &members[x] {
            label[v] = next;
            next += 1;
        }
        let mut branch_of: Vec<(usize, usize)> = Vec::new();
        for &(y, _) in &tree[x] {
            let token = next;
            next += 1;
            branch_of.push((y, token));
            let mut stack = vec![(y, x)];
            while let Some((z, from)) = stack.pop() {
                for &v in &members[z] {
                    label[v] = token;
                }
                for &(z2, _) in &tree[z] {
                    if z2 != from {
                        stack.push((z2, z));
                    }
                }
            }
        }
        net.reset(next);
        for &(u, v, w) in g.edges() {
            if label[u] != label[v] {
                net.add_undirected(label[u], label[v], w);
            }
        }
        let value = net.max_flow(label[s], label[t]);
        let inside = net.source_side(label[s]);
        let (keep, moved): (Vec<_>, Vec<_>) = members[x].iter().partition(|&&v| inside[label[v]]);
        let y = members.len();
        members[x] = keep;
        members.push(moved);
        tree.push(Vec::new());
        let old = std::mem::take(&mut tree[x]);
        for ((z, w), (_, token)) in old.into_iter().zip(branch_of) {
            let owner = if inside[token] { x } else { y };
            tree[owner].push((z, w));
            for e in tree[z].iter_mut() {
                if e.0 == x {
                    e.0 = owner;
                }
            }
        }
        tree[x].push((y, value));
        tree[y].push((x, value));
        pending.push(x);
        pending.push(y);
    }
    let mut edges = Vec::new();
    for (x, adj) in tree.iter().enumerate() {
        for &(y, w) in adj {
            if x < y && w > 0 {
                edges.push((members[x][0], members[y][0], w));
            }
        }
    }
    GhTree::new(n, edges).expect("construction yields a forest")
}

/// Structural checks plus, for every tree edge, that its induced cut has
/// the edge's weight in `g`, and that tree components are graph components.
pub fn check_tree_consistency(g: &Graph, t: &GhTree) -> Result<()> {
    if t.node_count() != g.node_count() {
        return Err(Error::Mismatch(format!(
            "tree has {} nodes, graph has {}",
            t.node_count(),
            g.node_count()
        )));
    }
    let (labels, count) = g.components();
    if count != t.component_count() {
        return Err(Error::Mismatch(format!(
            "tree has {} components, graph has {count}",
            t.component_count()
        )));
    }
    for &(u, v, _) in t.edges() {
        if labels[u] != labels[v] {
            return Err(Error::Mismatch(format!("tree edge {u} {v} joins two graph components")));
        }
    }
    for &(u, v, w) in t.edges() {
        let side = t.edge_side(u, v);
        let actual = g.cut_value(&side)?;
        if actual != w {
            return Err(Error::Mismatch(format!(
                "tree edge {u} {v} has weight {w} but its cut has value {actual}"
            )));
        }
    }
    Ok(())
}

/// Depth-first intervals of a rooted forest: `x` is below tree edge
/// `(parent[c], c)` iff `tin[c] <= tin[x] < tout[c]`.
struct Rooted {
    parent: Vec<usize>,
    weight: Vec<Weight>,
    tin: Vec<usize>,
    tout: Vec<usize>,
}

impl Rooted {
    fn new(t: &GhTree) -> Rooted {
        let n = t.node_count();
        let mut r = Rooted {
            parent: vec![usize::MAX; n],
            weight: vec![0; n],
            tin: vec![0; n],
            tout: vec![0; n],
        };
        let mut clock = 0;
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            r.tin[root] = clock;
            clock += 1;
            while let Some(&mut (x, ref mut i)) = stack.last_mut() {
                if let Some(&(y, w)) = t.neighbors(x).get(*i) {
                    *i += 1;
                    if !seen[y] {
                        seen[y] = true;
                        r.parent[y] = x;
                        r.weight[y] = w;
                        r.tin[y] = clock;
                        clock += 1;
                        stack.push((y, 0));
                    }
                } else {
                    r.tout[x] = clock;
                    stack.pop();
                }
            }
        }
        r
    }

    fn below(&self, c: usize, x: usize) -> bool {
        self.tin[c] <= self.tin[x] && self.tin[x] < self.tout[c]
    }
}

/// Contracts every component of the tree formed by tree edges whose
/// induced cut is unfriendly in `g`. Accepts weighted graphs.
pub fn friendly_mincut_contraction(g: &Graph, t: &GhTree) -> Result<Sparsifier> {
    if t.node_count() != g.node_count() {
        return Err(Error::Mismatch("tree and graph sizes differ".into()));
    }
    let n = g.node_count();
    let rooted = Rooted::new(t);
    let mut uf = UnionFind::new(n);
    let mut cross = vec![0 as Weight; n];
    let mut touched = Vec::new();
    for c in (0..n).filter(|&c| rooted.parent[c] != usize::MAX) {
        for &(u, v, w) in g.edges() {
            if rooted.below(c, u) != rooted.below(c, v) {
                if cross[u] == 0 {
                    touched.push(u);
                }
                if cross[v] == 0 {
                    touched.push(v);
                }
                cross[u] += w;
                cross[v] += w;
            }
        }
        let unfriendly = touched.iter().any(|&x| crosses_too_much(cross[x], g.degrees()[x]));
        for &x in &touched {
            cross[x] = 0;
        }
        touched.clear();
        if unfriendly {
            uf.union(c, rooted.parent[c]);
        }
    }
    let (labels, _) = uf.labels();
    Sparsifier::from_map(g, ContractionMap::from_labels(&labels))
}

/// Friendly minimum-cut sparsifier of a simple graph from its tree.
pub fn friendly_mincut_sparsifier_from_gh(g: &Graph, t: &GhTree) -> Result<Sparsifier> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    check_tree_consistency(g, t)?;
    friendly_mincut_contraction(g, t)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AcceleratedConfig {
    pub sparsify: SparsifyConfig,
    pub unfriendly: UnfriendlyConfig,
}

/// A friendly `n`-cut sparsifier of `g` and a cut tree of it, shared by all
/// single-source queries.
#[derive(Clone, Debug)]
pub struct AcceleratedContext<'g> {
    g: &'g Graph,
    pub sparsifier: Sparsifier,
    pub tree: GhTree,
    cfg: AcceleratedConfig,
}

impl<'g> AcceleratedContext<'g> {
    pub fn new(g: &'g Graph, cfg: &AcceleratedConfig) -> Result<Self> {
        if !g.is_simple() {
            return Err(Error::NotSimple);
        }
        let sparsifier = friendly_sparsify(g, g.node_count() as Weight, &cfg.sparsify)?;
        let tree = gomory_hu(&sparsifier.graph);
        Ok(AcceleratedContext {
            g,
            sparsifier,
            tree,
            cfg: cfg.clone(),
        })
    }

    /// Exact `λ(p, v)` for every `v`: friendly minimum cuts survive in the
    /// sparsifier, unfriendly ones are found directly; the smaller wins.
    pub fn single_source(&self, p: NodeId) -> Result<EstimateTable> {
        let g = self.g;
        let mut table = single_source_unfriendly(g, p, &ExactEstimator, &self.cfg.unfriendly)?.table;
        let map = &self.sparsifier.map;
        let sp = map.super_of(p);
        let mut from_tree = EstimateTable {
            source: p,
            estimate: vec![None; g.node_count()],
            witness: vec![None; g.node_count()],
        };
        let mut cache: HashMap<usize, Cut> = HashMap::new();
        for v in (0..g.node_count()).filter(|&v| v != p) {
            let sv = map.super_of(v);
            if sv == sp {
                continue;
            }
            let cut = match cache.get(&sv) {
                Some(c) => c.clone(),
                None => {
                    let q = self.tree.query(sv, sp)?;
                    let side = map.preimage(&q.mask(map.super_count()));
                    let c = Cut::from_parts(side, q.value());
                    cache.insert(sv, c.clone());
                    c
                }
            };
            from_tree.estimate[v] = Some(cut.value());
            from_tree.witness[v] = Some(cut);
        }
        table.merge_min(&from_tree)?;
        Ok(table)
    }
}

pub fn accelerated_single_source(g: &Graph, p: NodeId, cfg: &AcceleratedConfig) -> Result<EstimateTable> {
    g.check_node(p)?;
    AcceleratedContext::new(g, cfg)?.single_source(p)
}

/// Cut tree from Gusfield's schedule, with every `(s, p[s])` cut supplied
/// by the accelerated single-source routine.
pub fn accelerated_gomory_hu(g: &Graph, cfg: &AcceleratedConfig) -> Result<GhTree> {
    let n = g.node_count();
    let ctx = AcceleratedContext::new(g, cfg)?;
    let mut tables: HashMap<NodeId, EstimateTable> = HashMap::new();
    let mut p = vec![0usize; n];
    let mut fl = vec![0 as Weight; n];
    for s in 1..n {
        let t = p[s];
        if let std::collections::hash_map::Entry::Vacant(e) = tables.entry(t) {
            e.insert(ctx.single_source(t)?);
        }
        let cut = tables[&t].witness(s).expect("every non-source node has a witness").clone();
        let x = cut.mask(n);
        fl[s] = cut.value();
        for i in 0..n {
            if i != s && x[i] && p[i] == t {
                p[i] = s;
            }
        }
        if x[p[t]] {
            p[s] = p[t];
            p[t] = s;
            fl[s] = fl[t];
            fl[t] = cut.value();
        }
    }
    let edges = (1..n).filter(|&s| fl[s] > 0).map(|s| (s, p[s], fl[s])).collect();
    GhTree::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique, dumbbell, path};
    use crate::oracle::all_pairs_min_cut;

    fn assert_valid(g: &Graph, t: &GhTree) {
        let lambda = all_pairs_min_cut(g);
        for s in 0..g.node_count() {
            for u in 0..g.node_count() {
                if s != u {
                    let c = t.query(s, u).unwrap();
                    assert_eq!(c.value(), lambda[s][u], "pair {s} {u}");
                    assert!(c.contains(s) && !c.contains(u));
                    assert_eq!(g.cut_value(c.side()).unwrap(), c.value());
                }
            }
        }
        check_tree_consistency(g, t).unwrap();
    }

    #[test]
    fn classical_examples() {
        for g in [path(5).unwrap(), clique(4).unwrap(), dumbbell(5).unwrap()] {
            assert_valid(&g, &gomory_hu(&g));
        }
        let w = Graph::from_edges(4, [(0, 1, 10), (1, 2, 4), (2, 3, 10), (0, 3, 3)]).unwrap();
        assert_valid(&w, &gomory_hu(&w));
    }

    #[test]
    fn disconnected_forest() {
        let g = Graph::from_unit_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let t = gomory_hu(&g);
        assert_eq!(t.component_count(), 2);
        assert_valid(&g, &t);
        let c = t.query(4, 0).unwrap();
        assert_eq!((c.value(), c.side()), (0, &[3, 4][..]));
    }

    #[test]
    fn query_examples() {
        let star = GhTree::new(4, vec![(0, 1, 3), (0, 2, 3), (0, 3, 3)]).unwrap();
        assert_eq!(gh_query(&star, 1, 2).unwrap().value(), 3);
        let p = GhTree::new(4, vec![(0, 1, 1), (1, 2, 5), (2, 3, 1)]).unwrap();
        let c = p.query(0, 3).unwrap();
        assert_eq!((c.value(), c.side()), (1, &[0][..]));
        let c = p.query(3, 0).unwrap();
        assert_eq!((c.value(), c.side()), (1, &[3][..]));
        assert_eq!(p.query(1, 1), Err(Error::SameEndpoints(1)));
        assert!(GhTree::new(3, vec![(0, 1, 1), (1, 2, 1), (2, 0, 1)]).is_err());
    }

    #[test]
    fn tree_sparsifier_examples() {
        let k8 = clique(8).unwrap();
        let h = friendly_mincut_sparsifier_from_gh(&k8, &gomory_hu(&k8)).unwrap();
        assert_eq!(h.size_report().nodes, 1);

        let db = dumbbell(5).unwrap();
        let h = friendly_mincut_sparsifier_from_gh(&db, &gomory_hu(&db)).unwrap();
        assert_eq!(h.graph.node_count(), 2);
        assert_eq!(h.graph.edges(), &[(0, 1, 1)]);

        let p6 = path(6).unwrap();
        let h = friendly_mincut_sparsifier_from_gh(&p6, &gomory_hu(&p6)).unwrap();
        assert_eq!(h.graph.node_count(), 4);
        assert_eq!(h.map.super_of(0), h.map.super_of(1));
        assert_eq!(h.map.super_of(4), h.map.super_of(5));
    }

    #[test]
    fn tree_sparsifier_rejects_bad_input() {
        let g = path(4).unwrap();
        let wrong = GhTree::new(4, vec![(0, 1, 1), (1, 2, 2), (2, 3, 1)]).unwrap();
        assert!(matches!(friendly_mincut_sparsifier_from_gh(&g, &wrong), Err(Error::Mismatch(_))));
        let weighted = Graph::from_edges(2, [(0, 1, 3)]).unwrap();
        let t = gomory_hu(&weighted);
        assert_eq!(friendly_mincut_sparsifier_from_gh(&weighted, &t), Err(Error::NotSimple));
    }

    #[test]
    fn accelerated_examples() {
        let cfg = AcceleratedConfig::default();
        for g in [clique(6).unwrap(), dumbbell(5).unwrap(), path(5).unwrap(), clique(4).unwrap()] {
            let lambda = all_pairs_min_cut(&g);
            for p in 0..g.node_count() {
                let t = accelerated_single_source(&g, p, &cfg).unwrap();
                t.validate(&g).unwrap();
                for v in (0..g.node_count()).filter(|&v| v != p) {
                    assert_eq!(t.value(v), Some(lambda[p][v]));
                }
            }
            assert_valid(&g, &accelerated_gomory_hu(&g, &cfg).unwrap());
        }
    }
}
