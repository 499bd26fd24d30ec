//! Seeded case studies on generated graphs: a 100-vertex small-world network
//! and a sparse 20-vertex network.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, WeightedGraph};
use crate::mas::{self, CandidateRecord, LccModel, SweepOptions, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SelfLoopPolicy {
    /// Unit self-loop on every interface vertex.
    #[default]
    Interface,
    None,
    /// Unit self-loop on every vertex.
    All,
}

impl std::str::FromStr for SelfLoopPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interface" => Ok(Self::Interface),
            "none" => Ok(Self::None),
            "all" => Ok(Self::All),
            other => Err(Error::InvalidParameter(format!("self-loop policy {other:?}; expected interface, none or all"))),
        }
    }
}

pub fn apply_self_loops(g: &WeightedGraph, policy: SelfLoopPolicy, interface: &[usize]) -> Result<WeightedGraph> {
    match policy {
        SelfLoopPolicy::None => Ok(g.clone()),
        SelfLoopPolicy::Interface => g.with_self_loops(interface, 1.0),
        SelfLoopPolicy::All => g.with_self_loops(&(1..=g.n).collect::<Vec<_>>(), 1.0),
    }
}

/// `k` interface vertices spread evenly over `1..=n`.
pub fn spread_interface(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| 1 + i * n / k.max(1)).collect()
}

/// Orders `r = n − round(depth · n)`, deduplicated, in decreasing `r`, and
/// restricted to `1 ≤ r < n` and to at most `max_contractions` contractions.
pub fn orders_for_depths(n: usize, depths: &[f64], max_contractions: usize) -> Vec<usize> {
    let mut orders: Vec<usize> = depths
        .iter()
        .map(|d| (d * n as f64).round() as usize)
        .filter(|&c| c >= 1 && c <= max_contractions && c < n)
        .map(|c| n - c)
        .collect();
    orders.sort_unstable_by(|a, b| b.cmp(a));
    orders.dedup();
    orders
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseStudyConfig {
    pub n: usize,
    pub k: usize,
    pub beta: f64,
    pub interface_count: usize,
    pub trials: usize,
    pub seed: u64,
    pub depths: Vec<f64>,
    pub self_loops: SelfLoopPolicy,
    pub true_error: bool,
}

impl Default for CaseStudyConfig {
    fn default() -> Self {
        Self {
            n: 100,
            k: 4,
            beta: 0.15,
            interface_count: 5,
            trials: 50,
            seed: 1,
            depths: vec![0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
            self_loops: SelfLoopPolicy::Interface,
            true_error: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseStudy {
    pub graph_seed: u64,
    pub n: usize,
    pub edges: usize,
    pub interface: Vec<usize>,
    pub model_norm: f64,
    /// Largest reachable `(n − r) / n` with tree candidates.
    pub max_depth: f64,
    pub rows: Vec<SweepRow>,
    pub selected_edges: Vec<Vec<usize>>,
    pub candidate_log: Vec<CandidateRecord>,
    #[serde(skip)]
    pub graph: WeightedGraph,
}

fn run_sweep(model: &LccModel, graph_seed: u64, cfg: &CaseStudyConfig) -> Result<CaseStudy> {
    let n = model.n();
    let tree = graph::spanning_tree(&model.graph)?;
    let max = mas::max_contractions(model, &tree);
    let orders = orders_for_depths(n, &cfg.depths, max);
    let skipped = cfg.depths.iter().filter(|d| (*d * n as f64).round() as usize > max).count();
    if skipped > 0 {
        log::warn!("{skipped} requested depth(s) exceed the reachable depth {:.3} and were dropped", max as f64 / n as f64);
    }
    let opts = SweepOptions { true_error: cfg.true_error, trials: cfg.trials, seed: cfg.seed, ..Default::default() };
    let results = mas::depth_sweep(model, &tree, &orders, opts)?;
    Ok(CaseStudy {
        graph_seed,
        n,
        edges: model.graph.edges.len(),
        interface: model.interface.clone(),
        model_norm: model.norm()?,
        max_depth: max as f64 / n as f64,
        rows: results.iter().map(|x| x.1).collect(),
        selected_edges: results.iter().map(|x| x.0.selected_edges.clone()).collect(),
        candidate_log: results.first().map(|x| x.0.candidate_log.clone()).unwrap_or_default(),
        graph: model.graph.clone(),
    })
}

/// Watts–Strogatz LCC, TBIB depth sweep and random baselines.
pub fn small_world(cfg: &CaseStudyConfig) -> Result<(LccModel, CaseStudy)> {
    let (g, graph_seed) = graph::watts_strogatz_connected(cfg.n, cfg.k, cfg.beta, cfg.seed)?;
    let interface = spread_interface(cfg.n, cfg.interface_count);
    let g = apply_self_loops(&g, cfg.self_loops, &interface)?;
    let model = mas::build_lcc(g, &interface, &interface)?;
    let study = run_sweep(&model, graph_seed, cfg)?;
    Ok((model, study))
}

/// Sparse random connected LCC (20 vertices, 23 edges, 2 interface vertices by default).
pub fn sparse(cfg: &CaseStudyConfig, m: usize) -> Result<(LccModel, CaseStudy)> {
    let g = graph::random_connected_graph(cfg.n, m, cfg.seed)?;
    let interface = spread_interface(cfg.n, cfg.interface_count);
    let g = apply_self_loops(&g, cfg.self_loops, &interface)?;
    let model = mas::build_lcc(g, &interface, &interface)?;
    let study = run_sweep(&model, cfg.seed, cfg)?;
    Ok((model, study))
}

pub fn sparse_config() -> CaseStudyConfig {
    CaseStudyConfig { n: 20, interface_count: 2, trials: 0, ..Default::default() }
}

/// True normalized error of every single-edge contraction that avoids the interface.
pub fn single_edge_errors(model: &LccModel) -> Result<Vec<(usize, f64, f64)>> {
    use rayon::prelude::*;
    let norm = model.norm()?;
    let ids: Vec<usize> = (0..model.graph.edges.len())
        .filter(|&id| {
            let e = model.graph.edges[id];
            !e.is_loop() && !model.in_interface(e.u) && !model.in_interface(e.v)
        })
        .collect();
    ids.par_iter()
        .map(|&id| {
            let p = graph::edge_induced_partition(&model.graph, &[id])?;
            let mut res = mas::partition_prom(model, &p)?;
            let err = res.compute_true_error(model)?;
            Ok((id, res.bound.bound / norm, err / norm))
        })
        .collect()
}
