//! Browser bindings for the demo page in `www/`.
//!
//! Every view takes a graph in the edge-list text format and returns a
//! JSON string; errors come back as thrown strings.

use friendly_cuts::expander::{decompose, DecomposeOptions, Phi};
use friendly_cuts::gomory_hu::{friendly_mincut_sparsifier_from_gh, gomory_hu};
use friendly_cuts::io::parse_graph;
use friendly_cuts::sparsifier::{friendly_sparsify_oneshot, friendly_sparsify_traced, SparsifyConfig};
use friendly_cuts::{Graph, Sparsifier};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest graph the page will process.
pub const MAX_NODES: usize = 400;

fn graph(text: &str) -> Result<Graph, String> {
    let g = parse_graph(text).map_err(|e| e.to_string())?;
    if g.node_count() > MAX_NODES {
        return Err(format!("the demo is limited to {MAX_NODES} nodes"));
    }
    Ok(g)
}

fn base(g: &Graph) -> Value {
    json!({ "n": g.node_count(), "edges": g.edges() })
}

fn sparsifier_json(g: &Graph, h: &Sparsifier) -> Value {
    json!({
        "graph": base(g),
        "groups": h.map.super_of_all(),
        "group_count": h.map.super_count(),
        "contracted_edges": h.graph.edges(),
    })
}

/// `mode` is `iterative`, `oneshot` or `gh-based`. A `factor` of 0 keeps
/// the default shaving threshold.
pub fn sparsify_json(text: &str, w: u64, mode: &str, seed: u64, factor: u64) -> Result<String, String> {
    let g = graph(text)?;
    let mut cfg = SparsifyConfig::default().with_seed(seed);
    if factor > 0 {
        cfg.low_degree_factor = factor;
    }
    let (h, rounds) = match mode {
        "iterative" => {
            let (h, trace) = friendly_sparsify_traced(&g, w, &cfg).map_err(|e| e.to_string())?;
            (h, trace.iterations.len())
        }
        "oneshot" => (friendly_sparsify_oneshot(&g, w, &cfg).map_err(|e| e.to_string())?, 1),
        "gh-based" => (friendly_mincut_sparsifier_from_gh(&g, &gomory_hu(&g)).map_err(|e| e.to_string())?, 1),
        other => return Err(format!("unknown mode {other}")),
    };
    let mut out = sparsifier_json(&g, &h);
    out["rounds"] = json!(rounds);
    Ok(out.to_string())
}

pub fn gomory_hu_json(text: &str) -> Result<String, String> {
    let g = graph(text)?;
    let t = gomory_hu(&g);
    let out = json!({
        "graph": base(&g),
        "tree": t.edges(),
        "groups": (0..g.node_count()).map(|v| t.component_of(v)).collect::<Vec<_>>(),
        "group_count": t.component_count(),
    });
    Ok(out.to_string())
}

pub fn decompose_json(text: &str, phi_num: u64, phi_den: u64, seed: u64) -> Result<String, String> {
    let g = graph(text)?;
    if phi_num == 0 || phi_den == 0 || phi_num > phi_den {
        return Err(format!("phi = {phi_num}/{phi_den} must lie in (0, 1]"));
    }
    let opts = DecomposeOptions { seed, ..DecomposeOptions::default() };
    let dec = decompose(&g, Phi::new(phi_num, phi_den), None, &opts).map_err(|e| e.to_string())?;
    let out = json!({
        "graph": base(&g),
        "groups": dec.cluster_of,
        "group_count": dec.clusters.len(),
        "outer_edges": dec.outer_edges,
        "certification": dec.certification,
    });
    Ok(out.to_string())
}

#[wasm_bindgen]
pub fn sparsify_view(text: &str, w: u64, mode: &str, seed: u64, factor: u64) -> Result<String, JsValue> {
    sparsify_json(text, w, mode, seed, factor).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn gomory_hu_view(text: &str) -> Result<String, JsValue> {
    gomory_hu_json(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decompose_view(text: &str, phi_num: u64, phi_den: u64, seed: u64) -> Result<String, JsValue> {
    decompose_json(text, phi_num, phi_den, seed).map_err(|e| JsValue::from_str(&e))
}
