//! Centerless local sets: the greedy minimum-degree partition, partition
//! validation, and the geometry metrics that control convergence.
//!
//! A partition `{N_i}` of the vertex set is valid when the sets are disjoint,
//! cover every vertex, and each induced subgraph `G[N_i]` is connected. An
//! optional center `u_i ∈ N_i` per set turns it into a classic local-set
//! family usable by decimation-based reconstruction.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use crate::error::{domain, Error, Result};
use crate::graph::{induced_subgraph, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    sets: Vec<Vec<Vertex>>,
    centers: Option<Vec<Vertex>>,
}

impl Partition {
    /// Wraps sets without validation; see [`validate_partition`].
    pub fn new(sets: Vec<Vec<Vertex>>) -> Self {
        Self { sets, centers: None }
    }

    pub fn with_centers(sets: Vec<Vec<Vertex>>, centers: Vec<Vertex>) -> Result<Self> {
        if sets.len() != centers.len() {
            return Err(domain(format!(
                "{} centers supplied for {} sets",
                centers.len(),
                sets.len()
            )));
        }
        Ok(Self { sets, centers: Some(centers) })
    }

    /// Every vertex in its own set, centered on itself.
    pub fn singletons(n: usize) -> Self {
        Self {
            sets: (0..n).map(|v| vec![v]).collect(),
            centers: Some((0..n).collect()),
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Vec<Vertex>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[Vertex] {
        &self.sets[i]
    }

    pub fn centers(&self) -> Option<&[Vertex]> {
        self.centers.as_deref()
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Replaces (or sets) the per-set centers.
    pub fn centered(mut self, centers: Vec<Vertex>) -> Result<Self> {
        if centers.len() != self.sets.len() {
            return Err(domain(format!("{} centers supplied for {} sets", centers.len(), self.sets.len())));
        }
        self.centers = Some(centers);
        Ok(self)
    }

    /// Set index of each vertex. Fails unless the sets partition `0..n`.
    pub fn membership(&self, n: usize) -> Result<Vec<usize>> {
        let mut owner = vec![usize::MAX; n];
        for (i, set) in self.sets.iter().enumerate() {
            for &v in set {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n_vertices: n });
                }
                if owner[v] != usize::MAX {
                    return Err(domain(format!("vertex {v} appears in sets {} and {i}", owner[v])));
                }
                owner[v] = i;
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(domain(format!("vertex {v} is not covered")));
        }
        Ok(owner)
    }

    /// One set per line, vertices space-separated, optional ` center=<v>` suffix.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, set) in self.sets.iter().enumerate() {
            let line: Vec<String> = set.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            if let Some(c) = &self.centers {
                let _ = write!(out, " center={}", c[i]);
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`Self::to_text`] output. Centers must be given on all lines or none.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sets = Vec::new();
        let mut centers = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: i + 1, message };
            let mut set = Vec::new();
            let mut center = None;
            for tok in line.split_whitespace() {
                if let Some(c) = tok.strip_prefix("center=") {
                    if center.is_some() {
                        return Err(parse_err("repeated center".into()));
                    }
                    center = Some(c.parse().map_err(|_| parse_err(format!("invalid center {c:?}")))?);
                } else {
                    set.push(tok.parse().map_err(|_| parse_err(format!("invalid vertex {tok:?}")))?);
                }
            }
            if set.is_empty() {
                return Err(parse_err("set without vertices".into()));
            }
            sets.push(set);
            centers.push(center);
        }
        let given = centers.iter().filter(|c| c.is_some()).count();
        if given == 0 {
            Ok(Self::new(sets))
        } else if given == sets.len() {
            Self::with_centers(sets, centers.into_iter().flatten().collect())
        } else {
            Err(domain("centers must be given for every set or for none"))
        }
    }
}

/// A clause of the local-set definition that a partition breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptySet { set: usize },
    OutOfRange { set: usize, vertex: Vertex },
    Uncovered { vertex: Vertex },
    Overlap { vertex: Vertex, first: usize, second: usize },
    Disconnected { set: usize },
    CenterOutside { set: usize, center: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptySet { set } => write!(f, "set {set} is empty"),
            Self::OutOfRange { set, vertex } => write!(f, "set {set} contains unknown vertex {vertex}"),
            Self::Uncovered { vertex } => write!(f, "vertex {vertex} is in no set"),
            Self::Overlap { vertex, first, second } => {
                write!(f, "vertex {vertex} is in sets {first} and {second}")
            }
            Self::Disconnected { set } => write!(f, "set {set} induces a disconnected subgraph"),
            Self::CenterOutside { set, center } => write!(f, "center {center} is not in set {set}"),
        }
    }
}

/// Lists every violated clause; an empty list means the partition is valid.
pub fn validate_partition(g: &Graph, p: &Partition) -> Vec<Violation> {
    let n = g.n_vertices();
    let mut violations = Vec::new();
    let mut owner = vec![usize::MAX; n];
    for (i, set) in p.sets().iter().enumerate() {
        if set.is_empty() {
            violations.push(Violation::EmptySet { set: i });
            continue;
        }
        let mut in_range = true;
        for &v in set {
            if v >= n {
                violations.push(Violation::OutOfRange { set: i, vertex: v });
                in_range = false;
            } else if owner[v] == usize::MAX {
                owner[v] = i;
            } else {
                violations.push(Violation::Overlap { vertex: v, first: owner[v], second: i });
            }
        }
        if in_range {
            match induced_subgraph(g, set) {
                Ok(sub) if sub.connected => {}
                _ => violations.push(Violation::Disconnected { set: i }),
            }
        }
        if let Some(centers) = p.centers() {
            if !set.contains(&centers[i]) {
                violations.push(Violation::CenterOutside { set: i, center: centers[i] });
            }
        }
    }
    violations.extend(
        owner
            .iter()
            .enumerate()
            .filter(|(_, &o)| o == usize::MAX)
            .map(|(vertex, _)| Violation::Uncovered { vertex }),
    );
    violations
}

pub(crate) fn ensure_valid(g: &Graph, p: &Partition) -> Result<()> {
    let v = validate_partition(g, p);
    if v.is_empty() {
        Ok(())
    } else {
        let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
        Err(domain(format!("invalid partition: {}", msgs.join("; "))))
    }
}

/// Greedy partition into connected sets of at most `n_max` vertices.
///
/// Each round seeds a set with the minimum-degree vertex of the remaining
/// graph and keeps absorbing the minimum-degree vertex adjacent to the set
/// until it holds `n_max` vertices or has no remaining neighbor. Degrees are
/// those of the remaining graph at the start of the round; the finished set is
/// then deleted together with its incident edges. Ties go to the lowest index.
pub fn greedy_partition(g: &Graph, n_max: usize) -> Result<Partition> {
    if n_max == 0 {
        return Err(domain("maximal set size must be at least 1"));
    }
    let n = g.n_vertices();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut sets = Vec::new();

    // Scratch flags, reset after every round.
    let mut in_frontier = vec![false; n];
    let mut frontier_list = Vec::new();

    while let Some((_, seed)) = queue.pop_first() {
        let mut set = vec![seed];
        alive[seed] = false;
        let mut frontier = BTreeSet::new();
        let mut absorb = |v: Vertex, frontier: &mut BTreeSet<(usize, Vertex)>| {
            for &w in g.neighbors(v) {
                if alive[w] && !in_frontier[w] {
                    in_frontier[w] = true;
                    frontier_list.push(w);
                    frontier.insert((degree[w], w));
                }
            }
        };
        absorb(seed, &mut frontier);
        while set.len() < n_max {
            let Some((_, v)) = frontier.pop_first() else { break };
            set.push(v);
            absorb(v, &mut frontier);
        }
        for w in frontier_list.drain(..) {
            in_frontier[w] = false;
        }

        for &v in &set {
            alive[v] = false;
            queue.remove(&(degree[v], v));
        }
        for &v in &set {
            for &w in g.neighbors(v) {
                if alive[w] {
                    queue.remove(&(degree[w], w));
                    degree[w] -= 1;
                    queue.insert((degree[w], w));
                }
            }
        }
        set.sort_unstable();
        sets.push(set);
    }
    Ok(Partition::new(sets))
}

/// Geometry of a partition measured inside each induced subgraph.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionMetrics {
    pub sizes: Vec<usize>,
    /// `D_i`, the largest hop distance between two members of `N_i`.
    pub diameters: Vec<usize>,
    /// `max_i √(|N_i|·D_i)`.
    pub c_max: f64,
    /// `R(u_i)`, present when the partition has centers.
    pub radii: Option<Vec<usize>>,
    /// `K(u_i)`, the largest root subtree of a BFS tree of `N_i` from `u_i`.
    pub multiple_numbers: Option<Vec<usize>>,
    /// `max_i √(K(u_i)·R(u_i))`.
    pub q_max: Option<f64>,
}

impl PartitionMetrics {
    /// `γ = C_max·√ω`.
    pub fn gamma(&self, omega: f64) -> f64 {
        self.c_max * omega.sqrt()
    }

    pub fn gamma_centered(&self, omega: f64) -> Option<f64> {
        self.q_max.map(|q| q * omega.sqrt())
    }
}

/// BFS from local vertex `root`: (distances, parents, visit order).
fn local_bfs(g: &Graph, root: usize) -> (Vec<usize>, Vec<Option<usize>>, Vec<usize>) {
    let n = g.n_vertices();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut order = Vec::with_capacity(n);
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    (dist, parent, order)
}

pub fn partition_metrics(g: &Graph, p: &Partition) -> Result<PartitionMetrics> {
    ensure_valid(g, p)?;
    let mut sizes = Vec::with_capacity(p.len());
    let mut diameters = Vec::with_capacity(p.len());
    let mut radii = Vec::new();
    let mut multiples = Vec::new();
    for (i, set) in p.sets().iter().enumerate() {
        let sub = induced_subgraph(g, set)?;
        let m = sub.vertices.len();
        let diameter = (0..m).map(|s| *local_bfs(&sub.graph, s).0.iter().max().unwrap_or(&0)).max().unwrap_or(0);
        sizes.push(m);
        diameters.push(diameter);

        if let Some(centers) = p.centers() {
            let root = sub.vertices.binary_search(&centers[i]).expect("validated center");
            let (dist, parent, order) = local_bfs(&sub.graph, root);
            let mut subtree = vec![1usize; m];
            for &v in order.iter().rev() {
                if let Some(par) = parent[v] {
                    subtree[par] += subtree[v];
                }
            }
            let k = (0..m).filter(|&v| parent[v] == Some(root)).map(|v| subtree[v]).max().unwrap_or(0);
            radii.push(dist.into_iter().max().unwrap_or(0));
            multiples.push(k);
        }
    }
    let c_max = sizes
        .iter()
        .zip(&diameters)
        .map(|(&s, &d)| ((s * d) as f64).sqrt())
        .fold(0.0, f64::max);
    let (radii, multiple_numbers, q_max) = if p.centers().is_some() {
        let q = radii
            .iter()
            .zip(&multiples)
            .map(|(&r, &k)| ((r * k) as f64).sqrt())
            .fold(0.0, f64::max);
        (Some(radii), Some(multiples), Some(q))
    } else {
        (None, None, None)
    };
    Ok(PartitionMetrics { sizes, diameters, c_max, radii, multiple_numbers, q_max })
}

/// Near-optimal maximal set size `round(1 / (2√ω))`, at least 1.
pub fn suggest_nmax(omega: f64) -> Result<usize> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(domain(format!("cutoff must be positive, got {omega}")));
    }
    Ok(((0.5 / omega.sqrt()).round() as usize).max(1))
}
