//! Undirected simple graphs, the combinatorial Laplacian, hop distances and
//! induced subgraphs, plus the edge-list text format used for ingestion.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{check_len, domain, Error, Result};

/// Dense 0-based vertex index.
pub type Vertex = usize;

/// Undirected simple graph on vertices `0..n_vertices`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. Neighbor lists are
/// sorted ascending, which fixes every traversal order in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<Vertex>>,
}

/// What to do with repeated edges and self-loops when building a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    #[default]
    Reject,
    /// Silently drop repeated edges and self-loops.
    Dedup,
}

impl Graph {
    /// Builds a graph, rejecting self-loops and duplicate edges.
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        Self::with_policy(n_vertices, edges, DuplicatePolicy::Reject)
    }

    pub fn with_policy(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
        policy: DuplicatePolicy,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n_vertices {
                    return Err(Error::VertexOutOfRange { vertex: w, n_vertices });
                }
            }
            if u == v {
                match policy {
                    DuplicatePolicy::Reject => return Err(domain(format!("self-loop at vertex {u}"))),
                    DuplicatePolicy::Dedup => continue,
                }
            }
            let key = (u.min(v), u.max(v));
            if !set.insert(key) && policy == DuplicatePolicy::Reject {
                return Err(domain(format!("duplicate edge {}-{}", key.0, key.1)));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n_vertices];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { n_vertices, edges, adjacency })
    }

    /// Graph with `n_vertices` vertices and no edges.
    pub fn empty(n_vertices: usize) -> Self {
        Self {
            n_vertices,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n_vertices],
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n_vertices && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n_vertices {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n_vertices: self.n_vertices })
        }
    }

    /// Component label per vertex, labels assigned in order of lowest member.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n_vertices];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n_vertices {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn n_components(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// True for a graph with at least one vertex and a single component.
    pub fn is_connected(&self) -> bool {
        self.n_components() == 1
    }

    /// `f^T L f` evaluated as the sum of squared differences over edges.
    pub fn edge_energy(&self, f: &[f64]) -> f64 {
        self.edges.iter().map(|&(p, q)| (f[p] - f[q]).powi(2)).sum()
    }
}

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Wraps row-major entries, rejecting non-square or asymmetric input.
    pub fn from_row_major(order: usize, entries: Vec<f64>) -> Result<Self> {
        check_len(order * order, entries.len())?;
        let scale = entries.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        for i in 0..order {
            for j in (i + 1)..order {
                let (a, b) = (entries[i * order + j], entries[j * order + i]);
                if (a - b).abs() > 1e-12 * scale.max(1.0) {
                    return Err(domain(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { order, entries })
    }

    pub fn zeros(order: usize) -> Self {
        Self { order, entries: vec![0.0; order * order] }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.order, x.len())?;
        Ok((0..self.order)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        let y = self.mul_vec(x)?;
        Ok(y.iter().zip(x).map(|(a, b)| a * b).sum())
    }
}

/// Combinatorial Laplacian `L = D - A`.
pub fn laplacian(g: &Graph) -> SymmetricMatrix {
    let n = g.n_vertices();
    let mut entries = vec![0.0; n * n];
    for v in 0..n {
        entries[v * n + v] = g.degree(v) as f64;
    }
    for &(u, v) in g.edges() {
        entries[u * n + v] = -1.0;
        entries[v * n + u] = -1.0;
    }
    SymmetricMatrix { order: n, entries }
}

/// Hop distances from `source` to every vertex; `None` marks unreachable.
pub fn bfs_distances(g: &Graph, source: Vertex) -> Result<Vec<Option<usize>>> {
    g.check_vertex(source)?;
    let mut dist = vec![None; g.n_vertices()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap_or(0) + 1;
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(d);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// Shortest-path length in hops, or `None` when `u` and `v` are disconnected.
pub fn bfs_distance(g: &Graph, u: Vertex, v: Vertex) -> Result<Option<usize>> {
    g.check_vertex(v)?;
    Ok(bfs_distances(g, u)?[v])
}

/// Subgraph induced by a vertex set, relabelled `0..vertices.len()` in
/// ascending order of the original indices.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `vertices[local] = original index`.
    pub vertices: Vec<Vertex>,
    pub connected: bool,
}

pub fn induced_subgraph(g: &Graph, set: &[Vertex]) -> Result<InducedSubgraph> {
    if set.is_empty() {
        return Err(domain("induced subgraph of an empty vertex set"));
    }
    let mut vertices = set.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    let mut local = vec![usize::MAX; g.n_vertices()];
    for (i, &v) in vertices.iter().enumerate() {
        g.check_vertex(v)?;
        local[v] = i;
    }
    let mut edges = Vec::new();
    for &v in &vertices {
        for &w in g.neighbors(v) {
            if v < w && local[w] != usize::MAX {
                edges.push((local[v], local[w]));
            }
        }
    }
    let graph = Graph::new(vertices.len(), edges)?;
    let connected = graph.is_connected();
    Ok(InducedSubgraph { graph, vertices, connected })
}

/// How the first data line of an edge list is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// The first line is an `N M` header iff exactly `M` edge lines follow
    /// and every index fits below `N`.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListOptions {
    /// 0 or 1.
    pub index_base: u8,
    pub duplicates: DuplicatePolicy,
    pub header: HeaderMode,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        Self { index_base: 0, duplicates: DuplicatePolicy::Reject, header: HeaderMode::Auto }
    }
}

fn parse_pair(line_no: usize, line: &str) -> Result<(i64, i64)> {
    let mut tokens = line.split_whitespace();
    let mut next = || -> Result<i64> {
        let tok = tokens.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid integer {tok:?}"),
        })
    };
    let pair = (next()?, next()?);
    if tokens.next().is_some() {
        return Err(Error::Parse { line: line_no, message: "expected exactly two integers".into() });
    }
    Ok(pair)
}

/// Parses a whitespace-separated edge list; `#` lines and blank lines are skipped.
pub fn load_edge_list(text: &str, opts: &EdgeListOptions) -> Result<Graph> {
    if opts.index_base > 1 {
        return Err(domain("index base must be 0 or 1"));
    }
    let base = i64::from(opts.index_base);
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        rows.push((i + 1, parse_pair(i + 1, line)?));
    }

    let header = match (opts.header, rows.first()) {
        (HeaderMode::Absent, _) | (_, None) => None,
        (HeaderMode::Present, Some(&(line, (n, m)))) => {
            if n < 0 || m < 0 {
                return Err(Error::Parse { line, message: "negative header count".into() });
            }
            Some((n as usize, m as usize))
        }
        (HeaderMode::Auto, Some(&(_, (n, m)))) => {
            let data = &rows[1..];
            let fits = data
                .iter()
                .all(|(_, (a, b))| *a >= base && *b >= base && a - base < n && b - base < n);
            (n >= 0 && m >= 0 && data.len() as i64 == m && fits).then_some((n as usize, m as usize))
        }
    };
    let data = if header.is_some() { &rows[1..] } else { &rows[..] };

    let mut edges = Vec::with_capacity(data.len());
    let mut max_index = None;
    for &(line, (a, b)) in data {
        let mut shifted = [0usize; 2];
        for (slot, raw) in shifted.iter_mut().zip([a, b]) {
            let idx = raw - base;
            let out_of_range = idx < 0 || header.is_some_and(|(n, _)| idx as u64 >= n as u64);
            if out_of_range {
                return Err(Error::IndexOutOfRange {
                    line,
                    index: raw,
                    n_vertices: header.map_or(0, |(n, _)| n),
                });
            }
            *slot = idx as usize;
        }
        max_index = max_index.max(Some(shifted[0].max(shifted[1])));
        edges.push((shifted[0], shifted[1]));
    }
    let n_vertices = match header {
        Some((n, _)) => n,
        None => max_index.map_or(0, |m| m + 1),
    };
    Graph::with_policy(n_vertices, edges, opts.duplicates)
}

pub fn read_edge_list(path: impl AsRef<Path>, opts: &EdgeListOptions) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    load_edge_list(&text, opts)
}

/// Serializes a graph as a 0-based edge list with an `N M` header.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n_vertices(), g.n_edges());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
