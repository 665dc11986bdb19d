use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use friendly_cuts::bench::{self, Family, Mode};
use friendly_cuts::generators;
use friendly_cuts::gomory_hu::{
    accelerated_gomory_hu, accelerated_single_source, check_tree_consistency, friendly_mincut_sparsifier_from_gh,
    gomory_hu, AcceleratedConfig, GhTree,
};
use friendly_cuts::io::{parse_gh_tree, parse_graph, parse_sparsifier, parse_subset, serialize_gh_tree, serialize_graph, serialize_sparsifier};
use friendly_cuts::maxflow::max_flow;
use friendly_cuts::oracle::{all_pairs_min_cut_enumerated, classify_all_pairs, FriendlinessClass, ENUMERATION_LIMIT};
use friendly_cuts::sparsifier::{
    friendly_sparsify_oneshot, friendly_sparsify_traced, terminal_sparsify, verify_friendly_preservation,
    verify_terminal_preservation, PreservationReport, SparsifyConfig,
};
use friendly_cuts::unfriendly::{approx_single_source, single_source_unfriendly, EstimateTable, ExactEstimator, UnfriendlyConfig};
use friendly_cuts::{Error, Graph, NodeId, Sparsifier};

use crate::{BenchArgs, Command, GenArgs, GenFamily, GhAlgo, GhtreeArgs, SparsifyArgs, SparsifyMode, SscutArgs, SscutMode, VerifyArgs};

pub const EXIT_IO: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_GUARD: u8 = 4;
pub const EXIT_INPUT: u8 = 5;
pub const EXIT_USAGE: u8 = 6;

/// A property did not hold; the message carries the witness.
#[derive(Debug)]
pub struct VerifyFailed(pub String);

impl fmt::Display for VerifyFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerifyFailed {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<VerifyFailed>() {
            return EXIT_VERIFY;
        }
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::Parse { .. } => EXIT_PARSE,
                Error::GuardExceeded { .. } => EXIT_GUARD,
                Error::Mismatch(_) => EXIT_VERIFY,
                _ => EXIT_INPUT,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<csv::Error>() {
            return EXIT_IO;
        }
    }
    EXIT_INPUT
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Sparsify(a) => sparsify(a),
        Command::Ghtree(a) => ghtree(a),
        Command::Sscut(a) => sscut(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => run_bench(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing graph {}", path.display()))
}

fn read_terminals(path: &Option<PathBuf>, n: usize) -> Result<Vec<NodeId>> {
    let path = path
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("--terminals is required for terminal sparsifiers".into()))?;
    parse_subset(&read(path)?, n).with_context(|| format!("parsing terminals {}", path.display()))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn required<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!(Error::InvalidParameter(format!("{family} needs --{flag}"))))
}

fn gen(a: GenArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let g = match a.family {
        GenFamily::Clique => generators::clique(required(a.n, "n", "clique")?),
        GenFamily::CliqueOfCliques => generators::clique_of_cliques(required(a.base, "base", "clique-of-cliques")?, a.blob),
        GenFamily::AltCycle => generators::alt_cycle(required(a.n, "n", "alt-cycle")?, a.scale),
        GenFamily::Gnp => generators::gnp(required(a.n, "n", "gnp")?, required(a.p, "p", "gnp")?, &mut rng),
        GenFamily::Path => generators::path(required(a.n, "n", "path")?),
        GenFamily::Star => generators::star(required(a.n, "n", "star")?),
        GenFamily::Dumbbell => generators::dumbbell(required(a.k, "k", "dumbbell")?),
        GenFamily::RandomRegular => {
            generators::random_regular(required(a.n, "n", "random-regular")?, required(a.d, "d", "random-regular")?, &mut rng)
        }
    }?;
    write_out(&a.out, &serialize_graph(&g))
}

fn sparsify(a: SparsifyArgs) -> Result<()> {
    let g = read_graph(&a.input)?;
    let cfg = SparsifyConfig::default().with_seed(a.seed);
    let mut trace = None;
    let h = match a.mode {
        SparsifyMode::Oneshot => friendly_sparsify_oneshot(&g, a.w, &cfg)?,
        SparsifyMode::Iterative => {
            let (h, t) = friendly_sparsify_traced(&g, a.w, &cfg)?;
            trace = Some(t);
            h
        }
        SparsifyMode::Terminal => terminal_sparsify(&g, &read_terminals(&a.terminals, g.node_count())?, a.w, &cfg)?,
        SparsifyMode::GhBased => friendly_mincut_sparsifier_from_gh(&g, &gomory_hu(&g))?,
    };
    write_out(&a.out, &serialize_sparsifier(&h, a.mode.name(), a.w))?;
    if let Some(path) = &a.report {
        let report = json!({
            "mode": a.mode.name(),
            "w": a.w,
            "seed": a.seed,
            "input": { "nodes": g.node_count(), "weighted_edges": g.total_weight() },
            "output": h.size_report(),
            "trace": trace,
        });
        fs::write(path, serde_json::to_string_pretty(&report)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn accelerated_config(seed: u64) -> AcceleratedConfig {
    AcceleratedConfig {
        sparsify: SparsifyConfig::default().with_seed(seed),
        unfriendly: UnfriendlyConfig::default(),
    }
}

fn ghtree(a: GhtreeArgs) -> Result<()> {
    let g = read_graph(&a.input)?;
    let t = match a.algo {
        GhAlgo::Classical => gomory_hu(&g),
        GhAlgo::Accelerated => accelerated_gomory_hu(&g, &accelerated_config(a.seed))?,
    };
    write_out(&a.out, &serialize_gh_tree(&t))
}

fn format_table(t: &EstimateTable) -> String {
    let mut out = format!("# source {}\n# v value side\n", t.source);
    for v in 0..t.estimate.len() {
        if let (Some(e), Some(c)) = (t.estimate[v], &t.witness[v]) {
            let side: Vec<String> = c.side().iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("{v} {e} {}\n", side.join(" ")));
        }
    }
    out
}

fn sscut(a: SscutArgs) -> Result<()> {
    let g = read_graph(&a.input)?;
    g.check_node(a.source)?;
    let table = match a.mode {
        SscutMode::Exact => approx_single_source(&g, a.source, &ExactEstimator)?,
        SscutMode::Unfriendly => single_source_unfriendly(&g, a.source, &ExactEstimator, &UnfriendlyConfig::default())?.table,
        SscutMode::Accelerated => accelerated_single_source(&g, a.source, &accelerated_config(a.seed))?,
    };
    write_out(&a.out, &format_table(&table))
}

fn first_violation(report: &PreservationReport) -> Result<()> {
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(VerifyFailed(format!("{} of {} cuts violated; first: {v:?}", report.violations.len(), report.checked)).into()),
    }
}

fn verify_sparsifier(g: &Graph, text: &str, a: &VerifyArgs) -> Result<String> {
    let file = parse_sparsifier(text).context("parsing sparsifier")?;
    let h: Sparsifier = file.bind(g)?;
    let w = a.w.unwrap_or(file.w);
    let n = g.node_count();
    if n > ENUMERATION_LIMIT {
        return Ok(format!(
            "ok: sparsifier is a contraction of the graph ({} super-nodes); cut enumeration skipped for n = {n} > {ENUMERATION_LIMIT}",
            h.graph.node_count()
        ));
    }
    match file.mode.as_str() {
        "terminal" => {
            let ts = read_terminals(&a.terminals, n)?;
            let report = verify_terminal_preservation(g, &h, &ts, w)?;
            first_violation(&report)?;
            Ok(format!("ok: {} terminal minimum cuts of value <= {w} preserved", report.checked))
        }
        "gh-based" => {
            let classes = classify_all_pairs(g)?;
            let mut pairs = 0;
            for s in 0..n {
                for t in s + 1..n {
                    let c = classes[s][t].expect("off-diagonal");
                    if c.class != FriendlinessClass::AllFriendly {
                        continue;
                    }
                    pairs += 1;
                    let (x, y) = (h.map.super_of(s), h.map.super_of(t));
                    let kept = if x == y { None } else { Some(max_flow(&h.graph, x, y)?.value()) };
                    if kept != Some(c.value) {
                        bail!(VerifyFailed(format!(
                            "pair {s},{t} has only friendly minimum cuts of value {}, sparsifier gives {kept:?}",
                            c.value
                        )));
                    }
                }
            }
            Ok(format!("ok: {pairs} all-friendly pairs keep their minimum cut"))
        }
        _ => {
            let report = verify_friendly_preservation(g, &h, w)?;
            first_violation(&report)?;
            Ok(format!("ok: {} friendly cuts of value <= {w} preserved", report.checked))
        }
    }
}

fn verify_tree(g: &Graph, t: &GhTree, a: &VerifyArgs) -> Result<String> {
    check_tree_consistency(g, t)?;
    let n = g.node_count();
    let check = |s: NodeId, u: NodeId, lambda: u64| -> Result<()> {
        let c = t.query(s, u)?;
        let induced = g.cut_value(c.side())?;
        if c.value() != lambda || induced != lambda {
            bail!(VerifyFailed(format!(
                "pair {s},{u}: tree gives {}, its cut has value {induced}, minimum cut is {lambda}",
                c.value()
            )));
        }
        Ok(())
    };
    if n <= ENUMERATION_LIMIT {
        let lambda = all_pairs_min_cut_enumerated(g)?;
        for s in 0..n {
            for u in s + 1..n {
                check(s, u, lambda[s][u])?;
            }
        }
        return Ok(format!("ok: all {} pairs match the enumerated minimum cuts", n * n.saturating_sub(1) / 2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    for _ in 0..a.spot_checks {
        let s = rng.gen_range(0..n);
        let u = rng.gen_range(0..n);
        if s != u {
            check(s, u, max_flow(g, s, u)?.value())?;
        }
    }
    Ok(format!("ok: tree edges consistent, {} pairs spot-checked with max-flow", a.spot_checks))
}

fn verify(a: VerifyArgs) -> Result<()> {
    let g = read_graph(&a.input)?;
    let text = read(&a.artifact)?;
    let is_sparsifier = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("sparsifier"));
    let msg = if is_sparsifier {
        verify_sparsifier(&g, &text, &a)?
    } else {
        let t = parse_gh_tree(&text).context("parsing cut tree")?;
        verify_tree(&g, &t, &a)?
    };
    println!("{msg}");
    Ok(())
}

fn run_bench(a: BenchArgs) -> Result<()> {
    let family: Family = a.family.parse()?;
    let mode = match a.mode {
        SparsifyMode::Oneshot => Mode::Oneshot,
        SparsifyMode::Iterative => Mode::Iterative,
        SparsifyMode::GhBased => Mode::GhBased,
        SparsifyMode::Terminal => bail!(Error::InvalidParameter("bench does not support the terminal mode".into())),
    };
    let cfg = SparsifyConfig::default().with_seed(a.seed);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.threads.max(1)).build()?;
    let rows = pool.install(|| -> Result<Vec<bench::BenchRow>> {
        let graphs: Vec<Graph> = a
            .sizes
            .par_iter()
            .map(|&size| bench::family_graph(family, size, a.seed))
            .collect::<Result<_, _>>()?;
        let jobs: Vec<(usize, u64)> = (0..graphs.len()).flat_map(|i| a.w_grid.iter().map(move |&w| (i, w))).collect();
        let name = family.to_string();
        Ok(jobs
            .par_iter()
            .map(|&(i, w)| bench::measure(&name, &graphs[i], w, mode, &cfg))
            .collect::<Result<_, _>>()?)
    })?;
    let sink: Box<dyn Write> = match &a.csv {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
