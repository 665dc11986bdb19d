//! Plain-text formats: edge lists, node subsets, cut trees and sparsifiers.
//!
//! Blank lines and lines starting with `#` are ignored everywhere. Errors
//! carry the 1-based line number of the offending line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gomory_hu::GhTree;
use crate::graph::{ContractionMap, Graph, NodeId, Sparsifier, Weight};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next meaningful line as `(line_number, tokens)`.
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((i + 1, t.split_whitespace().collect()));
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        self.next_tokens().ok_or_else(|| Error::Parse {
            line: self.last + 1,
            msg: format!("unexpected end of input, expected {what}"),
        })
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.next_tokens() {
            None => Ok(()),
            Some((line, _)) => Err(Error::Parse {
                line,
                msg: "unexpected trailing content".into(),
            }),
        }
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} '{tok}'"),
    })
}

fn arity(line: usize, toks: &[&str], allowed: &[usize], what: &str) -> Result<()> {
    if allowed.contains(&toks.len()) {
        Ok(())
    } else {
        Err(Error::Parse {
            line,
            msg: format!("malformed {what}: expected {allowed:?} fields, found {}", toks.len()),
        })
    }
}

fn edge_line(line: usize, toks: &[&str], n: usize, weight_optional: bool) -> Result<(NodeId, NodeId, Weight)> {
    let allowed: &[usize] = if weight_optional { &[2, 3] } else { &[3] };
    arity(line, toks, allowed, "edge line")?;
    let u: NodeId = num(line, toks[0], "node id")?;
    let v: NodeId = num(line, toks[1], "node id")?;
    let w: Weight = match toks.get(2) {
        Some(t) if t.starts_with('-') => {
            return Err(Error::Parse {
                line,
                msg: format!("non-positive weight '{t}'"),
            })
        }
        Some(t) => num(line, t, "weight")?,
        None => 1,
    };
    let fail = |msg: String| Err(Error::Parse { line, msg });
    if u >= n || v >= n {
        return fail(format!("node id {} out of range (n = {n})", u.max(v)));
    }
    if u == v {
        return fail(format!("self-loop on node {u}"));
    }
    if w == 0 {
        return fail("non-positive weight '0'".into());
    }
    Ok((u, v, w))
}

fn edge_block(lines: &mut Lines, n: usize, m: usize, weight_optional: bool) -> Result<Vec<(NodeId, NodeId, Weight)>> {
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, toks) = lines.expect("edge line")?;
        edges.push(edge_line(line, &toks, n, weight_optional)?);
    }
    Ok(edges)
}

fn header<'a>(lines: &mut Lines<'a>, what: &str) -> Result<(usize, Vec<&'a str>)> {
    lines.expect(what)
}

/// Parses `n m` followed by `m` lines `u v [w]`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = Lines::new(text);
    let (line, toks) = header(&mut lines, "header 'n m'")?;
    arity(line, &toks, &[2], "header")?;
    let n: usize = num(line, toks[0], "node count")?;
    let m: usize = num(line, toks[1], "edge count")?;
    let edges = edge_block(&mut lines, n, m, true)?;
    lines.expect_end()?;
    Graph::from_edges(n, edges)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.node_count(), g.edge_count());
    for &(u, v, w) in g.edges() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

/// One node id per line.
pub fn parse_subset(text: &str, n: usize) -> Result<Vec<NodeId>> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while let Some((line, toks)) = lines.next_tokens() {
        arity(line, &toks, &[1], "subset line")?;
        let v: NodeId = num(line, toks[0], "node id")?;
        if v >= n {
            return Err(Error::Parse {
                line,
                msg: format!("node id {v} out of range (n = {n})"),
            });
        }
        out.push(v);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn serialize_subset(s: &[NodeId]) -> String {
    s.iter().map(|v| format!("{v}\n")).collect()
}

/// `n c` (node and component counts) then `n - c` lines `u v w`.
pub fn parse_gh_tree(text: &str) -> Result<GhTree> {
    let mut lines = Lines::new(text);
    let (line, toks) = header(&mut lines, "header 'n c'")?;
    arity(line, &toks, &[2], "tree header")?;
    let n: usize = num(line, toks[0], "node count")?;
    let c: usize = num(line, toks[1], "component count")?;
    if c > n || (c == 0 && n > 0) {
        return Err(Error::Parse {
            line,
            msg: format!("component count {c} impossible for {n} nodes"),
        });
    }
    let mut edges = Vec::with_capacity(n - c);
    for _ in 0..n - c {
        let (line, toks) = lines.expect("tree edge")?;
        arity(line, &toks, &[3], "tree edge")?;
        let u: NodeId = num(line, toks[0], "node id")?;
        let v: NodeId = num(line, toks[1], "node id")?;
        let w: Weight = num(line, toks[2], "weight")?;
        if u >= n || v >= n || u == v {
            return Err(Error::Parse {
                line,
                msg: format!("bad tree edge {u} {v}"),
            });
        }
        edges.push((u, v, w));
    }
    lines.expect_end()?;
    GhTree::new(n, edges)
}

pub fn serialize_gh_tree(t: &GhTree) -> String {
    let mut out = format!("{} {}\n", t.node_count(), t.component_count());
    for &(u, v, w) in t.edges() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

/// A sparsifier as stored on disk; base degrees are recovered from the
/// base graph when verifying.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsifierFile {
    pub mode: String,
    pub w: Weight,
    pub map: ContractionMap,
    pub graph: Graph,
}

impl SparsifierFile {
    /// Attaches `base`, checking that the stored graph is its contraction.
    pub fn bind(&self, base: &Graph) -> Result<Sparsifier> {
        if self.map.original_count() != base.node_count() {
            return Err(Error::Mismatch(format!(
                "sparsifier maps {} nodes, graph has {}",
                self.map.original_count(),
                base.node_count()
            )));
        }
        let expected = base.contract(&self.map)?.without_extra_volume();
        if expected != self.graph {
            return Err(Error::Mismatch(first_graph_difference(&expected, &self.graph)));
        }
        Ok(Sparsifier {
            graph: self.graph.clone(),
            map: self.map.clone(),
            base_degrees: base.degrees().to_vec(),
        })
    }
}

fn first_graph_difference(want: &Graph, got: &Graph) -> String {
    if want.node_count() != got.node_count() {
        return format!("{} super-nodes expected, {} stored", want.node_count(), got.node_count());
    }
    for (a, b) in want.edges().iter().zip(got.edges()) {
        if a != b {
            return format!("expected edge {} {} {}, stored {} {} {}", a.0, a.1, a.2, b.0, b.1, b.2);
        }
    }
    format!("{} edges expected, {} stored", want.edge_count(), got.edge_count())
}

/// `sparsifier <mode> <w> <n> <k> <m>`, `n` super-node ids, `m` edges.
pub fn parse_sparsifier(text: &str) -> Result<SparsifierFile> {
    let mut lines = Lines::new(text);
    let (line, toks) = header(&mut lines, "sparsifier header")?;
    arity(line, &toks, &[6], "sparsifier header")?;
    if toks[0] != "sparsifier" {
        return Err(Error::Parse {
            line,
            msg: "header must start with 'sparsifier'".into(),
        });
    }
    let mode = toks[1].to_string();
    let w: Weight = num(line, toks[2], "w")?;
    let n: usize = num(line, toks[3], "node count")?;
    let k: usize = num(line, toks[4], "super-node count")?;
    let m: usize = num(line, toks[5], "edge count")?;
    let mut super_of = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, toks) = lines.expect("super-node id")?;
        arity(line, &toks, &[1], "super-node line")?;
        let s: usize = num(line, toks[0], "super-node id")?;
        if s >= k {
            return Err(Error::Parse {
                line,
                msg: format!("super-node id {s} out of range (k = {k})"),
            });
        }
        super_of.push(s);
    }
    let map = ContractionMap::new(super_of)?;
    if map.super_count() != k {
        return Err(Error::InvalidPartition(format!(
            "header declares {k} super-nodes, {} used",
            map.super_count()
        )));
    }
    let edges = edge_block(&mut lines, k, m, false)?;
    lines.expect_end()?;
    Ok(SparsifierFile {
        mode,
        w,
        map,
        graph: Graph::from_edges(k, edges)?,
    })
}

pub fn serialize_sparsifier(h: &Sparsifier, mode: &str, w: Weight) -> String {
    let mut out = format!(
        "sparsifier {mode} {w} {} {} {}\n",
        h.map.original_count(),
        h.map.super_count(),
        h.graph.edge_count()
    );
    for &s in h.map.super_of_all() {
        let _ = writeln!(out, "{s}");
    }
    for &(u, v, w) in h.graph.edges() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}
