//! Local weights, local measurements and the noise that leaks into them.
//!
//! A local weight `φ_i` lives on one set `N_i`, is nonnegative and sums to
//! one; the local measurement of a signal `f` is `⟨f, φ_i⟩`. Dirac weights put
//! all mass on one vertex and reduce measurement to decimation.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, RngCore};

use crate::error::{check_len, domain, Error, Result};
use crate::graph::Vertex;
use crate::partition::Partition;
use crate::spectral::GraphSignal;

/// Per-vertex standard deviation of independent zero-mean Gaussian noise.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    sigma: Vec<f64>,
}

impl NoiseModel {
    pub fn new(sigma: Vec<f64>) -> Result<Self> {
        if let Some((v, s)) = sigma.iter().enumerate().find(|(_, s)| !(s.is_finite() && **s >= 0.0)) {
            return Err(domain(format!("noise deviation at vertex {v} must be finite and nonnegative, got {s}")));
        }
        Ok(Self { sigma })
    }

    pub fn iid(n: usize, sigma: f64) -> Result<Self> {
        Self::new(vec![sigma; n])
    }

    /// Shuffles the vertices and splits them into consecutive groups by
    /// `fractions`; group `g` gets deviation `sigmas[g]`.
    pub fn grouped<R: Rng + ?Sized>(n: usize, sigmas: &[f64], fractions: &[f64], rng: &mut R) -> Result<Self> {
        if sigmas.is_empty() || sigmas.len() != fractions.len() {
            return Err(domain("grouped noise needs one fraction per deviation"));
        }
        if fractions.iter().any(|f| !(*f >= 0.0)) || (fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(domain("group fractions must be nonnegative and sum to 1"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        let mut sigma = vec![0.0; n];
        let mut start = 0;
        let mut cumulative = 0.0;
        for (g, (&s, &frac)) in sigmas.iter().zip(fractions).enumerate() {
            cumulative += frac;
            let end = if g + 1 == sigmas.len() { n } else { ((cumulative * n as f64).round() as usize).min(n) };
            for &v in &order[start..end.max(start)] {
                sigma[v] = s;
            }
            start = end.max(start);
        }
        Self::new(sigma)
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn variance(&self, v: Vertex) -> f64 {
        self.sigma[v] * self.sigma[v]
    }

    /// `√(Σ_v σ²(v))`, used as a stand-in for `E‖n‖`.
    pub fn rms_norm(&self) -> f64 {
        self.sigma.iter().map(|s| s * s).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    /// `1/|N_i|` on every vertex.
    Uniform,
    /// Independent `U(0,1)` draws normalized per set.
    Random,
    /// All mass on one uniformly chosen vertex.
    Dirac,
    /// Inverse-variance weights `σ⁻²(v) / Σ_{u∈N_i} σ⁻²(u)`.
    Optimal,
    /// All mass on the lowest-variance vertex (lowest index on ties).
    OptimalDirac,
}

impl WeightScheme {
    pub const ALL: [Self; 5] = [Self::Uniform, Self::Random, Self::Dirac, Self::Optimal, Self::OptimalDirac];

    pub fn name(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Random => "random",
            Self::Dirac => "dirac",
            Self::Optimal => "optimal",
            Self::OptimalDirac => "optimal_dirac",
        }
    }
}

impl std::fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| domain(format!("unknown weight scheme {s:?}")))
    }
}

/// Nonnegative weights per set, each summing to one.
///
/// Entries of set `i` are `(vertex, weight)` pairs sorted by vertex; vertices
/// with zero weight may be omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalWeights {
    n_vertices: usize,
    sets: Vec<Vec<(Vertex, f64)>>,
}

const SUM_TOLERANCE: f64 = 1e-12;

impl LocalWeights {
    /// Normalizes each set's raw nonnegative weights to sum to one.
    pub fn from_raw(n_vertices: usize, raw: Vec<Vec<(Vertex, f64)>>) -> Result<Self> {
        let mut sets = Vec::with_capacity(raw.len());
        for (i, mut entries) in raw.into_iter().enumerate() {
            entries.sort_by_key(|&(v, _)| v);
            if entries.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(domain(format!("set {i} lists a vertex twice")));
            }
            for &(v, w) in &entries {
                if v >= n_vertices {
                    return Err(Error::VertexOutOfRange { vertex: v, n_vertices });
                }
                if !(w.is_finite() && w >= 0.0) {
                    return Err(domain(format!("set {i}: weight {w} at vertex {v} is not a nonnegative number")));
                }
            }
            let sum: f64 = entries.iter().map(|e| e.1).sum();
            if !(sum > f64::MIN_POSITIVE) {
                return Err(domain(format!("set {i}: weights sum to {sum}")));
            }
            for e in &mut entries {
                e.1 /= sum;
            }
            sets.push(entries);
        }
        Ok(Self { n_vertices, sets })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set_weights(&self, i: usize) -> &[(Vertex, f64)] {
        &self.sets[i]
    }

    /// `φ_i` as a dense signal.
    pub fn dense(&self, i: usize) -> GraphSignal {
        let mut v = vec![0.0; self.n_vertices];
        for &(u, w) in &self.sets[i] {
            v[u] = w;
        }
        GraphSignal::from(v)
    }

    /// Checks support, sign and normalization of every weight against `p`.
    pub fn check_against(&self, p: &Partition) -> Result<()> {
        if self.sets.len() != p.len() {
            return Err(domain(format!("{} weight vectors for {} sets", self.sets.len(), p.len())));
        }
        for (i, (entries, set)) in self.sets.iter().zip(p.sets()).enumerate() {
            for &(v, w) in entries {
                if w < 0.0 {
                    return Err(domain(format!("set {i}: negative weight at vertex {v}")));
                }
                if w > 0.0 && !set.contains(&v) {
                    return Err(domain(format!("set {i}: weight on vertex {v} outside the set")));
                }
            }
            let sum: f64 = entries.iter().map(|e| e.1).sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(domain(format!("set {i}: weights sum to {sum}")));
            }
        }
        Ok(())
    }

    /// True when every set carries equal weight on all its vertices.
    pub fn is_uniform(&self, p: &Partition) -> bool {
        self.sets.iter().zip(p.sets()).all(|(entries, set)| {
            let u = 1.0 / set.len() as f64;
            entries.len() == set.len() && entries.iter().all(|&(_, w)| (w - u).abs() <= SUM_TOLERANCE)
        })
    }

    /// Local measurements `f_{φ_i} = Σ_v f(v) φ_i(v)`.
    pub fn measure(&self, f: &GraphSignal) -> Result<MeasurementSet> {
        check_len(self.n_vertices, f.len())?;
        Ok(MeasurementSet(
            self.sets
                .iter()
                .map(|entries| entries.iter().map(|&(v, w)| f[v] * w).sum())
                .collect(),
        ))
    }

    /// One line per set: `i v1:w1 v2:w2 ...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, entries) in self.sets.iter().enumerate() {
            let _ = write!(out, "{i}");
            for (v, w) in entries {
                let _ = write!(out, " {v}:{w}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, n_vertices: usize) -> Result<Self> {
        let mut raw: Vec<Option<Vec<(Vertex, f64)>>> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: ln + 1, message };
            let mut tokens = line.split_whitespace();
            let index: usize = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err("missing set index".into()))?;
            let mut entries = Vec::new();
            for tok in tokens {
                let (v, w) = tok.split_once(':').ok_or_else(|| err(format!("expected v:w, got {tok:?}")))?;
                let v: Vertex = v.parse().map_err(|_| err(format!("invalid vertex {v:?}")))?;
                let w: f64 = w.parse().map_err(|_| err(format!("invalid weight {w:?}")))?;
                entries.push((v, w));
            }
            let sum: f64 = entries.iter().map(|e| e.1).sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(err(format!("weights of set {index} sum to {sum}")));
            }
            if raw.len() <= index {
                raw.resize(index + 1, None);
            }
            if raw[index].replace(entries).is_some() {
                return Err(err(format!("set {index} listed twice")));
            }
        }
        let raw = raw
            .into_iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| domain(format!("no weights for set {i}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_raw(n_vertices, raw)
    }
}

/// One measurement per local set.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet(pub Vec<f64>);

impl MeasurementSet {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Builds weights for every set of `p` under `scheme`.
///
/// `noise` is required by the optimal schemes, `rng` by the random and Dirac ones.
pub fn make_weights(
    scheme: WeightScheme,
    p: &Partition,
    noise: Option<&NoiseModel>,
    rng: Option<&mut dyn RngCore>,
) -> Result<LocalWeights> {
    let n_vertices = p.sets().iter().flatten().max().map_or(0, |m| m + 1);
    let n_vertices = noise.map_or(n_vertices, |nm| nm.len().max(n_vertices));
    if p.sets().iter().any(Vec::is_empty) {
        return Err(domain("partition contains an empty set"));
    }
    let raw: Vec<Vec<(Vertex, f64)>> = match scheme {
        WeightScheme::Uniform => p.sets().iter().map(|s| s.iter().map(|&v| (v, 1.0)).collect()).collect(),
        WeightScheme::Random => {
            let rng = rng.ok_or_else(|| domain("random weights need a random source"))?;
            p.sets()
                .iter()
                .map(|s| loop {
                    let draws: Vec<(Vertex, f64)> = s.iter().map(|&v| (v, rng.random::<f64>())).collect();
                    if draws.iter().map(|d| d.1).sum::<f64>() > f64::MIN_POSITIVE {
                        break draws;
                    }
                })
                .collect()
        }
        WeightScheme::Dirac => {
            let rng = rng.ok_or_else(|| domain("dirac weights need a random source"))?;
            p.sets().iter().map(|s| vec![(s[rng.random_range(0..s.len())], 1.0)]).collect()
        }
        WeightScheme::Optimal => {
            let nm = require_noise(scheme, p, noise)?;
            let mut raw = Vec::with_capacity(p.len());
            for s in p.sets() {
                let mut entries = Vec::with_capacity(s.len());
                for &v in s {
                    let var = nm.variance(v);
                    if !(var > 0.0) {
                        return Err(domain(format!("optimal weights need positive variance, vertex {v} has {var}")));
                    }
                    entries.push((v, 1.0 / var));
                }
                raw.push(entries);
            }
            raw
        }
        WeightScheme::OptimalDirac => {
            let nm = require_noise(scheme, p, noise)?;
            p.sets()
                .iter()
                .map(|s| {
                    let best = s
                        .iter()
                        .copied()
                        .min_by(|&a, &b| nm.variance(a).total_cmp(&nm.variance(b)).then(a.cmp(&b)))
                        .expect("sets are nonempty");
                    vec![(best, 1.0)]
                })
                .collect()
        }
    };
    LocalWeights::from_raw(n_vertices, raw)
}

fn require_noise<'a>(scheme: WeightScheme, p: &Partition, noise: Option<&'a NoiseModel>) -> Result<&'a NoiseModel> {
    let nm = noise.ok_or_else(|| domain(format!("{scheme} weights need a noise model")))?;
    if let Some(&v) = p.sets().iter().flatten().find(|&&v| v >= nm.len()) {
        return Err(Error::VertexOutOfRange { vertex: v, n_vertices: nm.len() });
    }
    Ok(nm)
}

/// Take local measurements of `f` (a thin alias of [`LocalWeights::measure`]).
pub fn measure(f: &GraphSignal, w: &LocalWeights) -> Result<MeasurementSet> {
    w.measure(f)
}

/// Law of the noise `n_i = ⟨n, φ_i⟩` seen by one measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalentNoise {
    /// `σ_i = √(Σ_v σ²(v) φ_i²(v))`.
    pub sigma: f64,
    /// `E|n_i| = σ_i √(2/π)` (half-normal mean).
    pub mean_abs: f64,
}

pub fn equivalent_noise_sigma(w: &LocalWeights, noise: &NoiseModel) -> Result<Vec<EquivalentNoise>> {
    check_len(w.n_vertices(), noise.len())?;
    let c = (2.0 / std::f64::consts::PI).sqrt();
    Ok(w.sets
        .iter()
        .map(|entries| {
            let var: f64 = entries.iter().map(|&(v, phi)| noise.variance(v) * phi * phi).sum();
            let sigma = var.sqrt();
            EquivalentNoise { sigma, mean_abs: sigma * c }
        })
        .collect())
}
