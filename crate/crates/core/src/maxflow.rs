//! Dinic blocking-flow max-flow on undirected graphs, returning the
//! inclusion-minimal source side of a minimum cut.

use crate::error::{Error, Result};
use crate::graph::{Cut, Graph, NodeId, Weight};

/// Capacity used for arcs that must never be cut.
pub const INF: Weight = u64::MAX / 4;

/// Residual network in compressed adjacency form; `rev[a]` is the reverse
/// of arc `a`. Arcs are staged and laid out before the first flow.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    staged: Vec<(usize, usize, Weight, Weight)>,
    start: Vec<usize>,
    to: Vec<usize>,
    rev: Vec<usize>,
    cap: Vec<Weight>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

const UNSEEN: u32 = u32::MAX;

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            staged: Vec::new(),
            start: vec![0; n + 1],
            to: Vec::new(),
            rev: Vec::new(),
            cap: Vec::new(),
            level: vec![UNSEEN; n],
            iter: vec![0; n],
        }
    }

    pub fn from_graph(g: &Graph, extra_nodes: usize) -> Self {
        let mut net = FlowNetwork::new(g.node_count() + extra_nodes);
        net.staged.reserve(g.edge_count());
        for &(u, v, w) in g.edges() {
            net.add_undirected(u, v, w);
        }
        net
    }

    pub fn node_count(&self) -> usize {
        self.level.len()
    }

    /// Drops every arc and resizes to `n` nodes, keeping allocations.
    pub fn reset(&mut self, n: usize) {
        self.staged.clear();
        self.start.clear();
        self.start.resize(n + 1, 0);
        self.to.clear();
        self.rev.clear();
        self.cap.clear();
        self.level.clear();
        self.level.resize(n, UNSEEN);
        self.iter.clear();
        self.iter.resize(n, 0);
    }

    /// Directed arc `u -> v` with capacity `c`.
    pub fn add_arc(&mut self, u: usize, v: usize, c: Weight) {
        self.staged.push((u, v, c, 0));
    }

    /// Undirected edge: both directions carry `c`.
    pub fn add_undirected(&mut self, u: usize, v: usize, c: Weight) {
        self.staged.push((u, v, c, c));
    }

    // Lays out staged arcs, keeping the residual of arcs already placed.
    fn layout(&mut self) {
        if self.staged.is_empty() {
            return;
        }
        let n = self.node_count();
        let mut pairs = std::mem::take(&mut self.staged);
        for u in 0..n {
            for a in self.start[u]..self.start[u + 1] {
                if a < self.rev[a] {
                    pairs.push((u, self.to[a], self.cap[a], self.cap[self.rev[a]]));
                }
            }
        }
        let mut fill = vec![0usize; n + 1];
        for &(u, v, _, _) in &pairs {
            fill[u + 1] += 1;
            fill[v + 1] += 1;
        }
        for i in 0..n {
            fill[i + 1] += fill[i];
        }
        self.start.clone_from(&fill);
        let total = 2 * pairs.len();
        for buf in [&mut self.to, &mut self.rev] {
            buf.clear();
            buf.resize(total, 0);
        }
        self.cap.clear();
        self.cap.resize(total, 0);
        for &(u, v, cu, cv) in &pairs {
            let (a, b) = (fill[u], fill[v]);
            fill[u] += 1;
            fill[v] += 1;
            self.to[a] = v;
            self.cap[a] = cu;
            self.rev[a] = b;
            self.to[b] = u;
            self.cap[b] = cv;
            self.rev[b] = a;
        }
        pairs.clear();
        self.staged = pairs;
    }

    // Levels up to t's; nodes further out cannot lie on a shortest path.
    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(UNSEEN);
        self.level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if self.level[t] != UNSEEN && self.level[u] >= self.level[t] {
                break;
            }
            for a in self.start[u]..self.start[u + 1] {
                let v = self.to[a];
                if self.cap[a] > 0 && self.level[v] == UNSEEN {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] != UNSEEN
    }

    // One augmenting path in the level graph, found without recursion.
    fn augment(&mut self, s: usize, t: usize, path: &mut Vec<usize>) -> Weight {
        path.clear();
        let mut u = s;
        loop {
            if u == t {
                let f = path.iter().map(|&a| self.cap[a]).min().unwrap_or(0);
                for &a in path.iter() {
                    self.cap[a] -= f;
                    self.cap[self.rev[a]] += f;
                }
                return f;
            }
            let mut advanced = false;
            while self.iter[u] < self.start[u + 1] {
                let a = self.iter[u];
                let v = self.to[a];
                if self.cap[a] > 0 && self.level[v] == self.level[u] + 1 {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                self.iter[u] += 1;
            }
            if !advanced {
                // dead end: prune u and retreat
                self.level[u] = UNSEEN;
                match path.pop() {
                    None => return 0,
                    Some(a) => {
                        u = self.to[self.rev[a]];
                        self.iter[u] += 1;
                    }
                }
            }
        }
    }

    /// Maximum flow value from `s` to `t`; the network keeps the residual.
    pub fn max_flow(&mut self, s: usize, t: usize) -> Weight {
        self.layout();
        let mut total: Weight = 0;
        let mut path = Vec::new();
        while self.bfs(s, t) {
            let n = self.level.len();
            self.iter.copy_from_slice(&self.start[..n]);
            loop {
                let f = self.augment(s, t, &mut path);
                if f == 0 {
                    break;
                }
                total = total.saturating_add(f);
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual network left by `max_flow`.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for a in self.start[u]..self.start[u + 1] {
                let v = self.to[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// Minimum `s,t`-cut; the side contains `s` and is inclusion-minimal.
pub fn max_flow(g: &Graph, s: NodeId, t: NodeId) -> Result<Cut> {
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    let mut net = FlowNetwork::from_graph(g, 0);
    let value = net.max_flow(s, t);
    let side = net.source_side(s);
    Ok(Cut::from_parts(
        (0..g.node_count()).filter(|&v| side[v]).collect(),
        value,
    ))
}

/// Minimum cut separating all of `a` from all of `b`; the side contains `a`
/// and is inclusion-minimal.
pub fn min_cut_between_sets(g: &Graph, a: &[NodeId], b: &[NodeId]) -> Result<Cut> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySide);
    }
    let in_a = g.membership(a)?;
    let in_b = g.membership(b)?;
    if let Some(v) = (0..g.node_count()).find(|&v| in_a[v] && in_b[v]) {
        return Err(Error::Overlap(v));
    }
    let n = g.node_count();
    let (src, snk) = (n, n + 1);
    let mut net = FlowNetwork::from_graph(g, 2);
    for v in 0..n {
        if in_a[v] {
            net.add_arc(src, v, INF);
        }
        if in_b[v] {
            net.add_arc(v, snk, INF);
        }
    }
    let value = net.max_flow(src, snk);
    let side = net.source_side(src);
    Ok(Cut::from_parts((0..n).filter(|&v| side[v]).collect(), value))
}
