//! Weighted undirected multigraphs with self-loops, vertex partitions and the
//! matrices built from them.
//!
//! Vertices are 1-based throughout; edge ids are 0-based indices into
//! [`WeightedGraph::edges`].

use std::collections::{BTreeMap, VecDeque};

use faer::Mat;
use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, f64)", into = "(usize, usize, f64)")]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: f64) -> Self {
        Self { u, v, w }
    }

    pub fn unit(u: usize, v: usize) -> Self {
        Self::new(u, v, 1.0)
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

impl From<(usize, usize, f64)> for Edge {
    fn from((u, v, w): (usize, usize, f64)) -> Self {
        Self { u, v, w }
    }
}

impl From<Edge> for (usize, usize, f64) {
    fn from(e: Edge) -> Self {
        (e.u, e.v, e.w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let g = Self { n, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("graph needs at least one vertex".into()));
        }
        for e in &self.edges {
            check_vertex(e.u, self.n)?;
            check_vertex(e.v, self.n)?;
            if !e.w.is_finite() {
                return Err(Error::NonFinite("edge weight"));
            }
        }
        Ok(())
    }

    pub fn path(n: usize) -> Self {
        Self { n, edges: (1..n).map(|u| Edge::unit(u, u + 1)).collect() }
    }

    /// Copy with a self-loop of weight `w` appended at every vertex in `at`.
    pub fn with_self_loops(&self, at: &[usize], w: f64) -> Result<Self> {
        let mut g = self.clone();
        for &x in at {
            check_vertex(x, self.n)?;
            g.edges.push(Edge::new(x, x, w));
        }
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self.n, self.edges.iter().copied()).map_or(false, |p| p.r() == 1)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

fn check_vertex(x: usize, n: usize) -> Result<()> {
    if x == 0 || x > n {
        return Err(Error::VertexOutOfRange { vertex: x, n });
    }
    Ok(())
}

/// `L` with multigraph aggregation; a self-loop adds its weight once to the diagonal.
pub fn laplacian(g: &WeightedGraph) -> Result<Mat<f64>> {
    g.validate()?;
    let mut l = Mat::<f64>::zeros(g.n, g.n);
    for (id, e) in g.edges.iter().enumerate() {
        if !(e.w > 0.0) {
            return Err(Error::NonPositiveWeight { edge: id, weight: e.w });
        }
        let (u, v) = (e.u - 1, e.v - 1);
        if u == v {
            l[(u, u)] += e.w;
        } else {
            l[(u, u)] += e.w;
            l[(v, v)] += e.w;
            l[(u, v)] -= e.w;
            l[(v, u)] -= e.w;
        }
    }
    Ok(l)
}

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n], sets: n }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.sets -= 1;
        true
    }

    pub fn sets(&self) -> usize {
        self.sets
    }
}

/// Cells of the graph `({1..n}, edges)`; isolated vertices become singletons.
pub fn connected_components(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Partition> {
    let mut uf = UnionFind::new(n);
    for e in edges {
        check_vertex(e.u, n)?;
        check_vertex(e.v, n)?;
        uf.union(e.u - 1, e.v - 1);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let root = uf.find(x);
        groups.entry(root).or_default().push(x + 1);
    }
    Partition::new(n, groups.into_values().collect())
}

/// Partition induced by a subset of the graph's edges, given by id.
pub fn edge_induced_partition(g: &WeightedGraph, edge_ids: &[usize]) -> Result<Partition> {
    let edges = edge_ids
        .iter()
        .map(|&id| {
            g.edges
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("edge id {id} out of range (graph has {} edges)", g.edges.len())))
        })
        .collect::<Result<Vec<_>>>()?;
    connected_components(g.n, edges)
}

/// Disjoint nonempty cells covering `1..=n`, sorted by minimum vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, mut cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for cell in &mut cells {
            if cell.is_empty() {
                return Err(Error::InvalidParameter("partition has an empty cell".into()));
            }
            cell.sort_unstable();
            for &x in cell.iter() {
                check_vertex(x, n)?;
                if std::mem::replace(&mut seen[x - 1], true) {
                    return Err(Error::InvalidParameter(format!("vertex {x} appears in two cells")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidParameter(format!("vertex {} is not covered", missing + 1)));
        }
        cells.sort_unstable_by_key(|c| c[0]);
        Ok(Self { n, cells })
    }

    pub fn singletons(n: usize) -> Self {
        Self { n, cells: (1..=n).map(|x| vec![x]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// At most one interface vertex per cell.
    pub fn is_invariant(&self, interface: &[usize]) -> bool {
        self.cells.iter().all(|c| c.iter().filter(|x| interface.contains(x)).count() <= 1)
    }

    /// Every cell meeting the interface is a singleton.
    pub fn is_strongly_invariant(&self, interface: &[usize]) -> bool {
        self.cells.iter().all(|c| c.len() == 1 || !c.iter().any(|x| interface.contains(x)))
    }
}

/// Serialized as a list of cells.
impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.cells.serialize(serializer)
    }
}

pub fn is_strongly_invariant(p: &Partition, interface: &[usize]) -> bool {
    p.is_strongly_invariant(interface)
}

#[derive(Debug, Clone)]
pub struct PartitionMatrices {
    /// `n × r` characteristic matrix.
    pub m: Mat<f64>,
    /// Cell sizes, the diagonal of `D(π) = MᵀM`.
    pub sizes: Vec<usize>,
    /// `M · D^{−1/2}`, column-orthonormal.
    pub ppm: Mat<f64>,
}

impl PartitionMatrices {
    pub fn d(&self) -> Mat<f64> {
        let r = self.sizes.len();
        Mat::from_fn(r, r, |i, j| if i == j { self.sizes[i] as f64 } else { 0.0 })
    }
}

pub fn partition_matrices(p: &Partition) -> PartitionMatrices {
    let (n, r) = (p.n(), p.r());
    let mut m = Mat::<f64>::zeros(n, r);
    let mut ppm = Mat::<f64>::zeros(n, r);
    let sizes: Vec<usize> = p.cells().iter().map(Vec::len).collect();
    for (j, cell) in p.cells().iter().enumerate() {
        let s = 1.0 / (cell.len() as f64).sqrt();
        for &x in cell {
            m[(x - 1, j)] = 1.0;
            ppm[(x - 1, j)] = s;
        }
    }
    PartitionMatrices { m, sizes, ppm }
}

/// BFS from vertex 1, scanning incident edges in index order; self-loops ignored.
/// Returns edge ids.
pub fn spanning_tree(g: &WeightedGraph) -> Result<Vec<usize>> {
    g.validate()?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    for (id, e) in g.edges.iter().enumerate() {
        if !e.is_loop() {
            incident[e.u - 1].push(id);
            incident[e.v - 1].push(id);
        }
    }
    let mut visited = vec![false; g.n];
    let mut tree = Vec::with_capacity(g.n - 1);
    let mut queue = VecDeque::from([0usize]);
    visited[0] = true;
    while let Some(x) = queue.pop_front() {
        for &id in &incident[x] {
            let e = g.edges[id];
            let y = if e.u - 1 == x { e.v - 1 } else { e.u - 1 };
            if !visited[y] {
                visited[y] = true;
                tree.push(id);
                queue.push_back(y);
            }
        }
    }
    if tree.len() + 1 != g.n {
        return Err(Error::Disconnected);
    }
    Ok(tree)
}

/// Ring lattice with `k/2` neighbours per side, each edge rewired with
/// probability `beta` to a uniform target avoiding self-loops and duplicates.
pub fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<WeightedGraph> {
    if k == 0 || k % 2 != 0 || k >= n {
        return Err(Error::InvalidParameter(format!("watts_strogatz needs an even k with 0 < k < n, got k = {k}, n = {n}")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!("rewiring probability {beta} outside [0, 1]")));
    }
    let mut rng = random::rng(seed, 0);
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::with_capacity(n * k / 2);
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            adj[u][v] = true;
            adj[v][u] = true;
            edges.push((u, v));
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            let idx = (j - 1) * n + u;
            let (a, b) = edges[idx];
            if rng.random::<f64>() >= beta {
                continue;
            }
            // Vertices still available as a new endpoint for `a`.
            if adj[a].iter().filter(|&&x| x).count() >= n - 1 {
                continue;
            }
            let target = loop {
                let t = rng.random_range(0..n);
                if t != a && !adj[a][t] {
                    break t;
                }
            };
            adj[a][b] = false;
            adj[b][a] = false;
            adj[a][target] = true;
            adj[target][a] = true;
            edges[idx] = (a, target);
        }
    }
    let edges = edges.into_iter().map(|(u, v)| Edge::unit(u + 1, v + 1)).collect();
    WeightedGraph::new(n, edges)
}

/// [`watts_strogatz`] retried with `seed + 1, seed + 2, …` (at most 50 attempts)
/// until connected. Returns the graph and the seed that produced it.
pub fn watts_strogatz_connected(n: usize, k: usize, beta: f64, seed: u64) -> Result<(WeightedGraph, u64)> {
    for attempt in 0..50 {
        let s = seed.wrapping_add(attempt);
        let g = watts_strogatz(n, k, beta, s)?;
        if g.is_connected() {
            return Ok((g, s));
        }
    }
    Err(Error::Disconnected)
}

/// Uniform random spanning tree skeleton (random attachment) plus extra
/// distinct non-loop edges, unit weights. Always connected.
pub fn random_connected_graph(n: usize, m: usize, seed: u64) -> Result<WeightedGraph> {
    if n == 0 || m + 1 < n || m > n * (n - 1) / 2 {
        return Err(Error::InvalidParameter(format!("cannot build a simple connected graph with n = {n}, m = {m}")));
    }
    let mut rng = random::rng(seed, 0);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::with_capacity(m);
    for i in 1..n {
        let (a, b) = (order[i], order[rng.random_range(0..i)]);
        adj[a][b] = true;
        adj[b][a] = true;
        edges.push((a.min(b), a.max(b)));
    }
    while edges.len() < m {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b && !adj[a][b] {
            adj[a][b] = true;
            adj[b][a] = true;
            edges.push((a.min(b), a.max(b)));
        }
    }
    WeightedGraph::new(n, edges.into_iter().map(|(u, v)| Edge::unit(u + 1, v + 1)).collect())
}

/// Stirling number of the second kind `S(n, r)`, `1 ≤ r ≤ n ≤ 30`.
pub fn count_partitions(n: usize, r: usize) -> Result<BigUint> {
    if !(1 <= r && r <= n && n <= 30) {
        return Err(Error::InvalidParameter(format!("count_partitions needs 1 <= r <= n <= 30, got n = {n}, r = {r}")));
    }
    // row[j] = S(i, j) for the current i.
    let mut row = vec![BigUint::from(0u32); r + 1];
    row[0] = BigUint::from(1u32);
    for i in 1..=n {
        for j in (1..=r.min(i)).rev() {
            row[j] = &row[j] * BigUint::from(j) + &row[j - 1];
        }
        row[0] = BigUint::from(0u32);
    }
    Ok(row[r].clone())
}

/// Calls `visit` for every partition of `vertices` into exactly `r` cells
/// (restricted growth strings). `visit` returns false to stop early.
pub fn for_each_partition(vertices: &[usize], r: usize, mut visit: impl FnMut(&[Vec<usize>]) -> bool) {
    fn rec(vertices: &[usize], i: usize, r: usize, cells: &mut Vec<Vec<usize>>, visit: &mut dyn FnMut(&[Vec<usize>]) -> bool) -> bool {
        let remaining = vertices.len() - i;
        if cells.len() + remaining < r {
            return true;
        }
        if i == vertices.len() {
            return cells.len() != r || visit(cells);
        }
        for c in 0..cells.len() {
            cells[c].push(vertices[i]);
            let go = rec(vertices, i + 1, r, cells, visit);
            cells[c].pop();
            if !go {
                return false;
            }
        }
        if cells.len() < r {
            cells.push(vec![vertices[i]]);
            let go = rec(vertices, i + 1, r, cells, visit);
            cells.pop();
            if !go {
                return false;
            }
        }
        true
    }
    if r == 0 || r > vertices.len() {
        return;
    }
    rec(vertices, 0, r, &mut Vec::with_capacity(r), &mut visit);
}

/// All strongly `interface`-invariant `r`-partitions of `1..=n`: interface
/// vertices are singletons and the rest are split into `r − |interface|` cells.
pub fn strongly_invariant_partitions(n: usize, interface: &[usize], r: usize) -> Result<Vec<Partition>> {
    let mut iface: Vec<usize> = interface.to_vec();
    iface.sort_unstable();
    iface.dedup();
    for &x in &iface {
        check_vertex(x, n)?;
    }
    let rest: Vec<usize> = (1..=n).filter(|x| !iface.contains(x)).collect();
    if r < iface.len() || r - iface.len() > rest.len() {
        return Ok(Vec::new());
    }
    let k = r - iface.len();
    let singles: Vec<Vec<usize>> = iface.iter().map(|&x| vec![x]).collect();
    if k == 0 {
        return Ok(if rest.is_empty() { vec![Partition::new(n, singles)?] } else { Vec::new() });
    }
    let mut out = Vec::new();
    let mut err = None;
    for_each_partition(&rest, k, |cells| {
        let mut all = singles.clone();
        all.extend(cells.iter().cloned());
        match Partition::new(n, all) {
            Ok(p) => {
                out.push(p);
                true
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{example, linalg};

    fn dense(rows: &[&[f64]]) -> Mat<f64> {
        Mat::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
    }

    #[test]
    fn path_laplacian() {
        let l = laplacian(&WeightedGraph::path(3)).unwrap();
        let expected = dense(&[&[1.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 1.0]]);
        assert_eq!(linalg::max_abs_diff(l.as_ref(), expected.as_ref()), 0.0);
    }

    #[test]
    fn grounded_path_laplacian_is_the_example() {
        let g = WeightedGraph::path(3).with_self_loops(&[1], 1.0).unwrap();
        let l = laplacian(&g).unwrap();
        let expected = dense(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 1.0]]);
        assert_eq!(linalg::max_abs_diff(l.as_ref(), expected.as_ref()), 0.0);
        assert_eq!(linalg::max_abs_diff((-l).as_ref(), example::system().a()), 0.0);
    }

    #[test]
    fn laplacian_edge_cases() {
        let g = WeightedGraph::new(3, vec![]).unwrap();
        assert_eq!(linalg::frobenius(laplacian(&g).unwrap().as_ref()), 0.0);
        let multi = WeightedGraph::new(2, vec![Edge::new(1, 2, 1.0), Edge::new(2, 1, 2.5)]).unwrap();
        let l = laplacian(&multi).unwrap();
        assert_eq!(l[(0, 1)], -3.5);
        assert_eq!(l[(1, 1)], 3.5);
        let bad = WeightedGraph::new(2, vec![Edge::new(1, 2, 1.0), Edge::new(1, 2, 0.0)]).unwrap();
        assert!(matches!(laplacian(&bad), Err(Error::NonPositiveWeight { edge: 1, .. })));
        assert!(matches!(WeightedGraph::new(2, vec![Edge::unit(1, 3)]), Err(Error::VertexOutOfRange { vertex: 3, n: 2 })));
    }

    #[test]
    fn components_of_edge_subset() {
        let p = connected_components(6, [Edge::unit(1, 2), Edge::unit(4, 5), Edge::unit(5, 6)]).unwrap();
        assert_eq!(p.cells(), &[vec![1, 2], vec![3], vec![4, 5, 6]]);
        let p = connected_components(4, []).unwrap();
        assert_eq!(p.r(), 4);
        let p = connected_components(4, [Edge::unit(1, 2), Edge::unit(2, 3), Edge::unit(1, 3)]).unwrap();
        assert_eq!(p.cells(), &[vec![1, 2, 3], vec![4]]);
    }

    #[test]
    fn invariance_predicates() {
        assert!(Partition::singletons(5).is_strongly_invariant(&[1, 3]));
        let p = Partition::new(6, vec![vec![1], vec![2], vec![3, 4], vec![5, 6]]).unwrap();
        assert!(p.is_strongly_invariant(&[1, 2]));
        let p = Partition::new(3, vec![vec![1, 2], vec![3]]).unwrap();
        assert!(!is_strongly_invariant(&p, &[1]));
        assert!(p.is_invariant(&[1]));
        assert!(!p.is_invariant(&[1, 2]));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(Partition::new(3, vec![vec![1, 2, 3], vec![]]).is_err());
        let p = Partition::new(3, vec![vec![3], vec![2, 1]]).unwrap();
        assert_eq!(p.cells(), &[vec![1, 2], vec![3]]);
    }

    #[test]
    fn characteristic_and_projection_matrices() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pm = partition_matrices(&Partition::new(3, vec![vec![1, 2], vec![3]]).unwrap());
        assert_eq!(linalg::max_abs_diff(pm.m.as_ref(), dense(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).as_ref()), 0.0);
        assert!(linalg::max_abs_diff(pm.ppm.as_ref(), dense(&[&[s, 0.0], &[s, 0.0], &[0.0, 1.0]]).as_ref()) < 1e-15);
        assert_eq!(linalg::max_abs_diff(pm.d().as_ref(), (pm.m.transpose() * &pm.m).as_ref()), 0.0);

        let pm = partition_matrices(&Partition::singletons(4));
        assert_eq!(linalg::max_abs_diff(pm.ppm.as_ref(), Mat::<f64>::identity(4, 4).as_ref()), 0.0);
        assert_eq!(linalg::max_abs_diff(pm.m.as_ref(), Mat::<f64>::identity(4, 4).as_ref()), 0.0);

        let pm = partition_matrices(&Partition::new(3, vec![vec![1, 2, 3]]).unwrap());
        assert!((pm.ppm[(0, 0)] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(linalg::orthonormality_residual(pm.ppm.as_ref()) < 1e-15);
    }

    #[test]
    fn spanning_trees() {
        let path = WeightedGraph::path(5);
        assert_eq!(spanning_tree(&path).unwrap(), vec![0, 1, 2, 3]);
        let tri = WeightedGraph::new(3, vec![Edge::unit(1, 2), Edge::unit(2, 3), Edge::unit(1, 3)]).unwrap();
        assert_eq!(spanning_tree(&tri).unwrap(), vec![0, 2]);
        let k4_edges: Vec<Edge> = (1..=4).flat_map(|u| (u + 1..=4).map(move |v| Edge::unit(u, v))).collect();
        let k4 = WeightedGraph::new(4, k4_edges).unwrap();
        let t = spanning_tree(&k4).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(edge_induced_partition(&k4, &t).unwrap().r(), 1);
        let split = WeightedGraph::new(4, vec![Edge::unit(1, 2), Edge::unit(3, 4), Edge::unit(1, 1)]).unwrap();
        assert!(matches!(spanning_tree(&split), Err(Error::Disconnected)));
    }

    #[test]
    fn ring_lattice_without_rewiring() {
        let g = watts_strogatz(10, 4, 0.0, 1).unwrap();
        assert_eq!(g.edges.len(), 20);
        for u in 1..=10 {
            assert_eq!(g.edges.iter().filter(|e| e.touches(u)).count(), 4);
        }
    }

    #[test]
    fn full_rewiring_stays_simple() {
        let g = watts_strogatz(100, 4, 1.0, 3).unwrap();
        assert_eq!(g.edges.len(), 200);
        let mut seen = std::collections::HashSet::new();
        for e in &g.edges {
            assert!(!e.is_loop());
            assert!(seen.insert((e.u.min(e.v), e.u.max(e.v))));
        }
    }

    #[test]
    fn small_world_is_connected_and_deterministic() {
        let (g, seed) = watts_strogatz_connected(100, 4, 0.15, 1).unwrap();
        assert!(g.is_connected());
        let (h, _) = watts_strogatz_connected(100, 4, 0.15, 1).unwrap();
        assert_eq!(g, h);
        assert_eq!(watts_strogatz(100, 4, 0.15, seed).unwrap(), g);
        assert!(watts_strogatz(10, 5, 0.1, 0).is_err());
        assert!(watts_strogatz(10, 4, 1.5, 0).is_err());
    }

    #[test]
    fn random_connected_graph_shape() {
        let g = random_connected_graph(20, 23, 5).unwrap();
        assert_eq!(g.edges.len(), 23);
        assert!(g.is_connected());
        assert!(random_connected_graph(5, 3, 0).is_err());
    }

    #[test]
    fn stirling_numbers() {
        for n in 1..=12 {
            assert_eq!(count_partitions(n, 1).unwrap(), BigUint::from(1u32));
            assert_eq!(count_partitions(n, n).unwrap(), BigUint::from(1u32));
        }
        assert_eq!(count_partitions(4, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(count_partitions(10, 3).unwrap(), BigUint::from(9330u32));
        assert!(count_partitions(30, 15).unwrap() > BigUint::from(u64::MAX));
        assert!(count_partitions(31, 2).is_err());
        assert!(count_partitions(3, 0).is_err());
    }

    #[test]
    fn enumeration_matches_stirling() {
        for n in 1..=8 {
            let vertices: Vec<usize> = (1..=n).collect();
            for r in 1..=n {
                let mut count = 0u64;
                for_each_partition(&vertices, r, |cells| {
                    assert_eq!(cells.len(), r);
                    count += 1;
                    true
                });
                assert_eq!(BigUint::from(count), count_partitions(n, r).unwrap(), "S({n},{r})");
            }
        }
    }

    #[test]
    fn strongly_invariant_enumeration() {
        let parts = strongly_invariant_partitions(3, &[1], 2).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].cells(), &[vec![1], vec![2, 3]]);
        let parts = strongly_invariant_partitions(6, &[1, 2], 4).unwrap();
        assert_eq!(parts.len(), 7);
        assert!(parts.iter().all(|p| p.is_strongly_invariant(&[1, 2]) && p.r() == 4));
        assert_eq!(strongly_invariant_partitions(3, &[1], 3).unwrap(), vec![Partition::singletons(3)]);
        assert!(strongly_invariant_partitions(3, &[1, 2], 1).unwrap().is_empty());
    }

    #[test]
    fn graph_json_round_trip() {
        let g = WeightedGraph::new(3, vec![Edge::unit(1, 2), Edge::new(2, 3, 0.5)]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n":3,"edges":[[1,2,1.0],[2,3,0.5]]}"#);
        assert_eq!(WeightedGraph::from_json(&text).unwrap(), g);
    }
}
