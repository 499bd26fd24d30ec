//! Laplacian controlled consensus models and partition-based interface-invariant
//! reduction.
//!
//! `ẋ = −L(𝒢)x + B(𝒰)u`, `y = C(𝒴)x`. Contracting edges away from the
//! interface `ℐ = 𝒰 ∪ 𝒴` yields a strongly invariant partition whose PPM gives
//! an interface-invariant PROM.

use std::sync::OnceLock;

use faer::Mat;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, Partition, UnionFind, WeightedGraph};
use crate::linalg;
use crate::lti::{self, StateSpace, DEFAULT_RTOL};
use crate::projection::{self, BoundMethod, BoundReport, Projection};
use crate::random;

/// Interface tolerance for the IIPROM residual check on PPMs.
pub const IIPROM_TOL: f64 = 1e-10;
/// Enumeration ceiling for [`brute_force_best_partition`].
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;
pub const BRUTE_FORCE_MAX_N: usize = 10;

#[derive(Debug)]
pub struct LccModel {
    pub graph: WeightedGraph,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    /// `𝒰 ∪ 𝒴`, sorted.
    pub interface: Vec<usize>,
    pub sys: StateSpace,
    pub stable: bool,
    norm: OnceLock<f64>,
}

pub fn build_lcc(graph: WeightedGraph, inputs: &[usize], outputs: &[usize]) -> Result<LccModel> {
    build_lcc_with_agent_dim(graph, inputs, outputs, 1)
}

/// Agents with `d_x`-dimensional state; only `d_x = 1` is supported.
pub fn build_lcc_with_agent_dim(graph: WeightedGraph, inputs: &[usize], outputs: &[usize], dx: usize) -> Result<LccModel> {
    if dx != 1 {
        return Err(Error::Unsupported(format!("agent state dimension {dx}; only scalar agents (d_x = 1) are implemented")));
    }
    let n = graph.n;
    for &x in inputs.iter().chain(outputs) {
        if x == 0 || x > n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    let mut interface: Vec<usize> = inputs.iter().chain(outputs).copied().collect();
    interface.sort_unstable();
    interface.dedup();
    if interface.is_empty() {
        return Err(Error::InvalidParameter("interface (inputs ∪ outputs) is empty".into()));
    }
    let a = -graph::laplacian(&graph)?;
    let b = Mat::from_fn(n, inputs.len(), |i, j| if inputs[j] == i + 1 { 1.0 } else { 0.0 });
    let c = Mat::from_fn(outputs.len(), n, |i, j| if outputs[i] == j + 1 { 1.0 } else { 0.0 });
    let sys = StateSpace::new(a, b, c, Mat::zeros(outputs.len(), inputs.len()))?;
    let stable = lti::is_hurwitz(sys.a())?;
    if !stable {
        log::warn!("LCC state matrix -L is not Hurwitz; add self-loops (grounding) before reducing");
    }
    Ok(LccModel {
        graph,
        inputs: inputs.to_vec(),
        outputs: outputs.to_vec(),
        interface,
        sys,
        stable,
        norm: OnceLock::new(),
    })
}

impl LccModel {
    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn in_interface(&self, x: usize) -> bool {
        self.interface.binary_search(&x).is_ok()
    }

    /// `‖Σ‖_H∞`, computed once.
    pub fn norm(&self) -> Result<f64> {
        if let Some(&v) = self.norm.get() {
            return Ok(v);
        }
        lti::require_hurwitz(self.sys.a(), "A")?;
        let v = lti::hinf_norm(&self.sys, DEFAULT_RTOL)?.value;
        Ok(*self.norm.get_or_init(|| v))
    }

    fn require_stable(&self) -> Result<()> {
        if self.stable {
            Ok(())
        } else {
            lti::require_hurwitz(self.sys.a(), "A")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateRecord {
    pub edge_id: usize,
    pub u: usize,
    pub v: usize,
    /// Touches the interface (or is a self-loop) and was not evaluated.
    pub skipped: bool,
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionResult {
    pub n: usize,
    pub r: usize,
    pub partition: Partition,
    #[serde(skip)]
    pub projection: Projection,
    #[serde(skip)]
    pub reduced: StateSpace,
    pub bound: BoundReport,
    pub model_norm: f64,
    pub bound_norm: f64,
    pub true_error: Option<f64>,
    pub error_norm: Option<f64>,
    pub selected_edges: Vec<usize>,
    /// Telescoping bound of the sequential (re-scored) variant.
    pub sequence_bound: Option<f64>,
    pub candidate_log: Vec<CandidateRecord>,
}

impl ReductionResult {
    pub fn compute_true_error(&mut self, model: &LccModel) -> Result<f64> {
        let err = if self.r == self.n {
            0.0
        } else {
            lti::hinf_norm(&lti::subtract(&model.sys, &self.reduced)?, DEFAULT_RTOL)?.value
        };
        self.true_error = Some(err);
        self.error_norm = Some(err / self.model_norm);
        Ok(err)
    }
}

/// Orthonormal projection whose range is spanned by the partition's PPM.
pub fn partition_projection(p: &Partition) -> Result<Projection> {
    projection::make_projection(graph::partition_matrices(p).ppm.as_ref())
}

fn bound_method(model: &LccModel) -> BoundMethod {
    if linalg::asymmetry(model.sys.a()) <= projection::SYMMETRY_TOL {
        BoundMethod::Symmetric
    } else {
        BoundMethod::General
    }
}

fn check_partition(model: &LccModel, p: &Partition) -> Result<()> {
    if p.n() != model.n() {
        return Err(Error::DimensionMismatch(format!("partition covers {} vertices, graph has {}", p.n(), model.n())));
    }
    if !p.is_strongly_invariant(&model.interface) {
        let bad = p
            .cells()
            .iter()
            .find(|c| c.len() > 1 && c.iter().any(|x| model.in_interface(*x)))
            .cloned()
            .unwrap_or_default();
        return Err(Error::InterfaceViolation(format!("cell {bad:?} merges an interface vertex")));
    }
    Ok(())
}

/// Bound for a strongly interface-invariant partition, without assembling a result.
pub fn partition_bound(model: &LccModel, p: &Partition) -> Result<BoundReport> {
    check_partition(model, p)?;
    model.require_stable()?;
    if p.r() == model.n() {
        return Ok(BoundReport::zero());
    }
    let proj = partition_projection(p)?;
    projection::bound_with(&model.sys, &proj, bound_method(model))
}

/// IIPROM of `model` for partition `p`.
pub fn partition_prom(model: &LccModel, p: &Partition) -> Result<ReductionResult> {
    check_partition(model, p)?;
    model.require_stable()?;
    let proj = partition_projection(p)?;
    let (c_res, b_res) = projection::interface_residuals(&model.sys, &proj);
    if c_res > IIPROM_TOL || b_res > IIPROM_TOL {
        return Err(Error::InterfaceViolation(format!("interface residuals ({c_res:e}, {b_res:e}) exceed {IIPROM_TOL:e}")));
    }
    let bound = if p.r() == model.n() {
        BoundReport::zero()
    } else {
        projection::bound_with(&model.sys, &proj, bound_method(model))?
    };
    let reduced = projection::build_prom(&model.sys, &proj)?;
    let model_norm = model.norm()?;
    Ok(ReductionResult {
        n: model.n(),
        r: p.r(),
        partition: p.clone(),
        projection: proj,
        reduced,
        bound,
        model_norm,
        bound_norm: bound.bound / model_norm,
        true_error: None,
        error_norm: None,
        selected_edges: Vec::new(),
        sequence_bound: None,
        candidate_log: Vec::new(),
    })
}

fn edge_partition(model: &LccModel, edge_ids: &[usize]) -> Result<Partition> {
    graph::edge_induced_partition(&model.graph, edge_ids)
}

fn is_usable(model: &LccModel, e: &graph::Edge) -> bool {
    !e.is_loop() && !model.in_interface(e.u) && !model.in_interface(e.v)
}

/// Single-edge contraction bound for every candidate, in candidate order.
pub fn score_candidates(model: &LccModel, candidates: &[usize]) -> Result<Vec<CandidateRecord>> {
    model.require_stable()?;
    candidates
        .par_iter()
        .map(|&id| {
            let e = *model
                .graph
                .edges
                .get(id)
                .ok_or_else(|| Error::InvalidParameter(format!("candidate edge id {id} out of range")))?;
            let mut rec = CandidateRecord { edge_id: id, u: e.u, v: e.v, skipped: true, bound: None };
            if is_usable(model, &e) {
                rec.skipped = false;
                rec.bound = Some(partition_bound(model, &edge_partition(model, &[id])?)?.bound);
            }
            Ok(rec)
        })
        .collect()
}

/// Lowest-bound usable edges (ties by id) until `n − r` acyclic edges are chosen.
pub fn select_edges(model: &LccModel, log: &[CandidateRecord], r: usize) -> Result<Vec<usize>> {
    let n = model.n();
    if r == 0 || r >= n {
        return Err(Error::InvalidParameter(format!("target order r = {r} must satisfy 1 <= r < n = {n}")));
    }
    let needed = n - r;
    let mut ranked: Vec<(f64, usize)> = log.iter().filter_map(|c| c.bound.map(|b| (b, c.edge_id))).collect();
    if ranked.len() < needed {
        return Err(Error::InsufficientCandidates { needed, available: ranked.len() });
    }
    ranked.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut uf = UnionFind::new(n);
    let mut chosen = Vec::with_capacity(needed);
    for (_, id) in ranked {
        let e = model.graph.edges[id];
        if uf.union(e.u - 1, e.v - 1) {
            chosen.push(id);
            if chosen.len() == needed {
                return Ok(chosen);
            }
        }
    }
    Err(Error::InsufficientCandidates { needed, available: chosen.len() })
}

/// Reduction from a precomputed candidate log; lets depth sweeps score once.
pub fn geib_from_log(model: &LccModel, log: &[CandidateRecord], r: usize) -> Result<ReductionResult> {
    let chosen = select_edges(model, log, r)?;
    let p = edge_partition(model, &chosen)?;
    let mut res = partition_prom(model, &p)?;
    res.selected_edges = chosen;
    res.candidate_log = log.to_vec();
    Ok(res)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GeibOptions {
    /// Re-score remaining edges on the current reduced model after every contraction.
    pub rescore: bool,
}

/// Greedy edge selection by single-contraction bounds.
pub fn geib(model: &LccModel, candidates: &[usize], r: usize) -> Result<ReductionResult> {
    geib_with(model, candidates, r, GeibOptions::default())
}

pub fn geib_with(model: &LccModel, candidates: &[usize], r: usize, opts: GeibOptions) -> Result<ReductionResult> {
    let n = model.n();
    if r == 0 || r >= n {
        return Err(Error::InvalidParameter(format!("target order r = {r} must satisfy 1 <= r < n = {n}")));
    }
    model.require_stable()?;
    if opts.rescore {
        geib_rescored(model, candidates, r)
    } else {
        let log = score_candidates(model, candidates)?;
        geib_from_log(model, &log, r)
    }
}

/// `r_k × (r_k − 1)` orthonormal matrix merging PPM columns `i < j` of a
/// partition with the given cell sizes.
fn merge_matrix(sizes: &[usize], i: usize, j: usize) -> Mat<f64> {
    let rk = sizes.len();
    let total = (sizes[i] + sizes[j]) as f64;
    let (wi, wj) = ((sizes[i] as f64 / total).sqrt(), (sizes[j] as f64 / total).sqrt());
    // Column index in the merged partition of old cell `c` (cell j is removed).
    let col = |c: usize| if c < j { c } else { c - 1 };
    let mut t = Mat::<f64>::zeros(rk, rk - 1);
    for c in 0..rk {
        if c == i {
            t[(c, col(i))] = wi;
        } else if c == j {
            t[(c, col(i))] = wj;
        } else {
            t[(c, col(c))] = 1.0;
        }
    }
    t
}

/// Sequential variant: at each step contract the edge whose singleton
/// reduction of the current model has the smallest bound; the stage bounds
/// add up to a telescoping bound on the final error.
fn geib_rescored(model: &LccModel, candidates: &[usize], r: usize) -> Result<ReductionResult> {
    let n = model.n();
    let usable: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&id| model.graph.edges.get(id).is_some_and(|e| is_usable(model, e)))
        .collect();
    if usable.len() < n - r {
        return Err(Error::InsufficientCandidates { needed: n - r, available: usable.len() });
    }
    let method = bound_method(model);
    let mut chosen: Vec<usize> = Vec::with_capacity(n - r);
    let mut current = model.sys.clone();
    let mut partition = Partition::singletons(n);
    let mut total = 0.0;
    let mut first_log = None;
    while partition.r() > r {
        let cell_of = {
            let mut v = vec![0usize; n];
            for (c, cell) in partition.cells().iter().enumerate() {
                for &x in cell {
                    v[x - 1] = c;
                }
            }
            v
        };
        let sizes: Vec<usize> = partition.cells().iter().map(Vec::len).collect();
        let scored: Vec<CandidateRecord> = usable
            .par_iter()
            .map(|&id| {
                let e = model.graph.edges[id];
                let (ci, cj) = (cell_of[e.u - 1], cell_of[e.v - 1]);
                let mut rec = CandidateRecord { edge_id: id, u: e.u, v: e.v, skipped: false, bound: None };
                if ci != cj {
                    let t = merge_matrix(&sizes, ci.min(cj), ci.max(cj));
                    let proj = projection::make_projection(t.as_ref())?;
                    let b = projection::bound_with(&current, &proj, method)
                        .map_err(|e| Error::Stage { stage: chosen.len() + 1, source: Box::new(e) })?;
                    rec.bound = Some(b.bound);
                }
                Ok(rec)
            })
            .collect::<Result<_>>()?;
        let best = scored
            .iter()
            .filter_map(|c| c.bound.map(|b| (b, c.edge_id)))
            .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let Some((b, id)) = best else {
            return Err(Error::InsufficientCandidates { needed: n - r, available: chosen.len() });
        };
        if first_log.is_none() {
            let mut log: Vec<CandidateRecord> = candidates
                .iter()
                .filter_map(|&id| model.graph.edges.get(id).map(|e| CandidateRecord { edge_id: id, u: e.u, v: e.v, skipped: true, bound: None }))
                .collect();
            for rec in &mut log {
                if let Some(s) = scored.iter().find(|s| s.edge_id == rec.edge_id) {
                    *rec = *s;
                }
            }
            first_log = Some(log);
        }
        let e = model.graph.edges[id];
        let (ci, cj) = (cell_of[e.u - 1], cell_of[e.v - 1]);
        let t = merge_matrix(&sizes, ci.min(cj), ci.max(cj));
        let proj = projection::make_projection(t.as_ref())?;
        current = projection::build_prom(&current, &proj)?;
        total += b;
        chosen.push(id);
        partition = edge_partition(model, &chosen)?;
    }
    let mut res = partition_prom(model, &partition)?;
    res.selected_edges = chosen;
    res.sequence_bound = Some(total);
    res.candidate_log = first_log.unwrap_or_default();
    Ok(res)
}

/// GEIB over the edges of the BFS spanning tree.
pub fn tbib(model: &LccModel, r: usize) -> Result<ReductionResult> {
    tbib_with(model, r, GeibOptions::default())
}

pub fn tbib_with(model: &LccModel, r: usize, opts: GeibOptions) -> Result<ReductionResult> {
    let tree = graph::spanning_tree(&model.graph)?;
    geib_with(model, &tree, r, opts)
}

/// Exhaustive minimizer of the bound over strongly invariant `r`-partitions.
pub fn brute_force_best_partition(model: &LccModel, r: usize) -> Result<ReductionResult> {
    let n = model.n();
    if r == 0 || r > n {
        return Err(Error::InvalidParameter(format!("target order r = {r} must satisfy 1 <= r <= n = {n}")));
    }
    let count = graph::count_partitions(n.min(30), r)?;
    if n > BRUTE_FORCE_MAX_N || count > BRUTE_FORCE_LIMIT.into() {
        return Err(Error::TooLarge { count: count.to_string(), limit: BRUTE_FORCE_LIMIT });
    }
    model.require_stable()?;
    let parts = graph::strongly_invariant_partitions(n, &model.interface, r)?;
    if parts.is_empty() {
        return Err(Error::Infeasible(format!("no strongly interface-invariant {r}-partition exists")));
    }
    let bounds = parts
        .par_iter()
        .map(|p| Ok(partition_bound(model, p)?.bound))
        .collect::<Result<Vec<f64>>>()?;
    let best = (0..parts.len())
        .min_by(|&x, &y| bounds[x].total_cmp(&bounds[y]).then(x.cmp(&y)))
        .expect("nonempty");
    partition_prom(model, &parts[best])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Baselines {
    pub mean_random_iiprom_error: f64,
    pub mean_random_edge_iiprom_error: f64,
}

/// Random IIPROM: interface coordinate vectors plus an orthonormal basis of a
/// random subspace of the non-interface coordinates.
pub fn random_iiprom_projection(model: &LccModel, r: usize, rng: &mut impl Rng) -> Result<Projection> {
    let n = model.n();
    let k = model.interface.len();
    if r < k || r >= n {
        return Err(Error::Infeasible(format!("random IIPROM needs |I| = {k} <= r < n = {n}, got r = {r}")));
    }
    let free: Vec<usize> = (1..=n).filter(|x| !model.in_interface(*x)).collect();
    let g = random::orthonormal(rng, free.len(), r - k)?;
    let mut p = Mat::<f64>::zeros(n, r);
    for (j, &x) in model.interface.iter().enumerate() {
        p[(x - 1, j)] = 1.0;
    }
    for (row, &x) in free.iter().enumerate() {
        for j in 0..r - k {
            p[(x - 1, k + j)] = g[(row, j)];
        }
    }
    projection::make_projection(p.as_ref())
}

/// Random acyclic set of `n − r` usable edges (uniform edge order, greedy forest).
pub fn random_edge_partition(model: &LccModel, r: usize, rng: &mut impl Rng) -> Result<Partition> {
    let n = model.n();
    let mut usable: Vec<usize> = (0..model.graph.edges.len()).filter(|&id| is_usable(model, &model.graph.edges[id])).collect();
    for i in (1..usable.len()).rev() {
        usable.swap(i, rng.random_range(0..=i));
    }
    let mut uf = UnionFind::new(n);
    let mut chosen = Vec::with_capacity(n - r);
    for id in usable {
        if chosen.len() == n - r {
            break;
        }
        let e = model.graph.edges[id];
        if uf.union(e.u - 1, e.v - 1) {
            chosen.push(id);
        }
    }
    if chosen.len() < n - r {
        return Err(Error::Infeasible(format!("only {} acyclic non-interface edges; need {}", chosen.len(), n - r)));
    }
    edge_partition(model, &chosen)
}

/// Mean true error of random IIPROMs and of random edge-induced IIPROMs,
/// `trials` each. Trial `t` draws from streams `2t` and `2t + 1` of `seed`.
pub fn random_baselines(model: &LccModel, r: usize, trials: usize, seed: u64) -> Result<Baselines> {
    let n = model.n();
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if r == 0 || r >= n {
        return Err(Error::InvalidParameter(format!("target order r = {r} must satisfy 1 <= r < n = {n}")));
    }
    model.require_stable()?;
    let errors = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let proj = random_iiprom_projection(model, r, &mut random::rng(seed, 2 * t))?;
            let red = projection::build_prom(&model.sys, &proj)?;
            let e_p = lti::hinf_norm(&lti::subtract(&model.sys, &red)?, DEFAULT_RTOL)?.value;
            let part = random_edge_partition(model, r, &mut random::rng(seed, 2 * t + 1))?;
            let proj = partition_projection(&part)?;
            let red = projection::build_prom(&model.sys, &proj)?;
            let e_eps = lti::hinf_norm(&lti::subtract(&model.sys, &red)?, DEFAULT_RTOL)?.value;
            Ok((e_p, e_eps))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let k = trials as f64;
    Ok(Baselines {
        mean_random_iiprom_error: errors.iter().map(|e| e.0).sum::<f64>() / k,
        mean_random_edge_iiprom_error: errors.iter().map(|e| e.1).sum::<f64>() / k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub r: usize,
    pub depth: f64,
    pub bound_norm: f64,
    pub error_norm: Option<f64>,
    pub mu_p: Option<f64>,
    pub mu_eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub true_error: bool,
    /// Random-baseline trials per row; 0 skips the baselines.
    pub trials: usize,
    pub seed: u64,
    pub geib: GeibOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { true_error: true, trials: 0, seed: 0, geib: GeibOptions::default() }
    }
}

/// Reductions over the candidate set for each `r` in `orders` (listed in the
/// given order), scoring candidates once for the non-sequential variant.
pub fn depth_sweep(model: &LccModel, candidates: &[usize], orders: &[usize], opts: SweepOptions) -> Result<Vec<(ReductionResult, SweepRow)>> {
    let n = model.n();
    model.require_stable()?;
    let log = if opts.geib.rescore { None } else { Some(score_candidates(model, candidates)?) };
    let model_norm = model.norm()?;
    orders
        .iter()
        .map(|&r| {
            let mut res = match &log {
                Some(log) => geib_from_log(model, log, r)?,
                None => geib_with(model, candidates, r, opts.geib)?,
            };
            if opts.true_error {
                res.compute_true_error(model)?;
            }
            let (mu_p, mu_eps) = if opts.trials > 0 {
                let b = random_baselines(model, r, opts.trials, opts.seed.wrapping_add(r as u64))?;
                (Some(b.mean_random_iiprom_error / model_norm), Some(b.mean_random_edge_iiprom_error / model_norm))
            } else {
                (None, None)
            };
            let row = SweepRow {
                r,
                depth: (n - r) as f64 / n as f64,
                bound_norm: res.bound_norm,
                error_norm: res.error_norm,
                mu_p,
                mu_eps,
            };
            Ok((res, row))
        })
        .collect()
}

/// Largest reduction depth reachable with the given candidates: `n − r_min`
/// where `r_min` is the vertex count minus the size of a maximal usable forest.
pub fn max_contractions(model: &LccModel, candidates: &[usize]) -> usize {
    let mut uf = UnionFind::new(model.n());
    candidates
        .iter()
        .filter_map(|&id| model.graph.edges.get(id))
        .filter(|e| is_usable(model, e))
        .filter(|e| uf.union(e.u - 1, e.v - 1))
        .count()
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub const SWEEP_CSV_HEADER: &str = "r,depth,bound_norm,error_norm,mu_P,mu_eps";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.r,
            fmt_f64(row.depth),
            fmt_f64(row.bound_norm),
            fmt_opt(row.error_norm),
            fmt_opt(row.mu_p),
            fmt_opt(row.mu_eps)
        ));
    }
    out
}

pub fn candidate_csv(log: &[CandidateRecord]) -> String {
    let mut out = String::from("edge_id,u,v,skipped,bound\n");
    for c in log {
        out.push_str(&format!("{},{},{},{},{}\n", c.edge_id, c.u, c.v, c.skipped, fmt_opt(c.bound)));
    }
    out
}
