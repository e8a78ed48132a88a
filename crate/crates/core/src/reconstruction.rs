//! Iterative reconstruction of bandlimited signals.
//!
//! All three algorithms share one fixed-point loop
//!
//! ```text
//! f⁽⁰⁾   = P_ω(spread(measured))
//! f⁽ᵏ⁺¹⁾ = f⁽ᵏ⁾ + P_ω(spread(measured − sample(f⁽ᵏ⁾)))
//! ```
//!
//! and differ only in how a signal is sampled and how residuals are spread
//! back onto vertices:
//!
//! | algorithm | sample                    | spread onto        |
//! |-----------|---------------------------|--------------------|
//! | ILMR      | local measurement `⟨f,φ_i⟩` | the whole set `N_i` |
//! | IPR       | value at the center `u_i` | the whole set `N_i` |
//! | ILSR      | value at a sampled vertex | that vertex only   |

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{check_len, domain, Result};
use crate::graph::{Graph, Vertex};
use crate::partition::{ensure_valid, partition_metrics, Partition};
use crate::sampling::{LocalWeights, MeasurementSet};
use crate::spectral::{random_bandlimited, BandProjector, GraphSignal, SpectralBasis};

/// Anything that returns the local measurements of a candidate signal.
///
/// The weights behind the oracle may be unknown; reconstruction only needs the
/// oracle to be linear and repeatable.
pub trait MeasurementOracle {
    fn n_measurements(&self) -> usize;
    fn measure(&self, f: &GraphSignal) -> Result<MeasurementSet>;
}

impl MeasurementOracle for LocalWeights {
    fn n_measurements(&self) -> usize {
        self.len()
    }

    fn measure(&self, f: &GraphSignal) -> Result<MeasurementSet> {
        LocalWeights::measure(self, f)
    }
}

/// Black-box oracle backed by a closure.
pub struct FnOracle<F> {
    count: usize,
    probe: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&GraphSignal) -> Result<MeasurementSet>,
{
    pub fn new(count: usize, probe: F) -> Self {
        Self { count, probe }
    }
}

impl<F> MeasurementOracle for FnOracle<F>
where
    F: Fn(&GraphSignal) -> Result<MeasurementSet>,
{
    fn n_measurements(&self) -> usize {
        self.count
    }

    fn measure(&self, f: &GraphSignal) -> Result<MeasurementSet> {
        let m = (self.probe)(f)?;
        check_len(self.count, m.len())?;
        Ok(m)
    }
}

/// Probes `oracle(αf + βg) = α·oracle(f) + β·oracle(g)` on random signals.
pub fn probe_linearity<O: MeasurementOracle + ?Sized, R: Rng + ?Sized>(
    oracle: &O,
    n_vertices: usize,
    rng: &mut R,
    trials: usize,
    tolerance: f64,
) -> Result<bool> {
    for _ in 0..trials {
        let f = GraphSignal::from((0..n_vertices).map(|_| rng.random::<f64>() - 0.5).collect::<Vec<_>>());
        let g = GraphSignal::from((0..n_vertices).map(|_| rng.random::<f64>() - 0.5).collect::<Vec<_>>());
        let (a, b) = (rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
        let combined = oracle.measure(&(&f.scaled(a) + &g.scaled(b)))?;
        let (mf, mg) = (oracle.measure(&f)?, oracle.measure(&g)?);
        for i in 0..combined.len() {
            let expected = a * mf.0[i] + b * mg.0[i];
            if (combined.0[i] - expected).abs() > tolerance * (1.0 + expected.abs()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct ReconstructionConfig {
    pub max_iterations: usize,
    /// Stop once `‖f⁽ᵏ⁺¹⁾ − f⁽ᵏ⁾‖ / ‖f⁽ᵏ⁾‖` drops below this.
    pub stop_tolerance: f64,
    /// Reference signal for error traces; never used by the iteration itself.
    pub truth: Option<GraphSignal>,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        Self { max_iterations: 500, stop_tolerance: 1e-10, truth: None }
    }
}

impl ReconstructionConfig {
    pub fn with_truth(mut self, truth: GraphSignal) -> Self {
        self.truth = Some(truth);
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(domain("max_iterations must be at least 1"));
        }
        if !(self.stop_tolerance >= 0.0) {
            return Err(domain("stop_tolerance must be nonnegative"));
        }
        if let Some(t) = &self.truth {
            check_len(n, t.len())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    /// `‖f⁽ᵏ⁾ − f⁽ᵏ⁻¹⁾‖`, with `f⁽⁻¹⁾ = 0` for the initial entry.
    pub increment_norm: f64,
    /// `‖f⁽ᵏ⁾ − truth‖` when a truth signal was configured.
    pub error_norm: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ReconstructionRun {
    pub estimate: GraphSignal,
    /// Number of updates applied after initialization.
    pub iterations_used: usize,
    /// One entry for `f⁽⁰⁾` and one per applied update.
    pub trace: Vec<TraceEntry>,
    /// Sufficient contraction factor (`C_max√ω` for ILMR, `Q_max√ω` for IPR).
    pub gamma: Option<f64>,
    pub stop_reason: StopReason,
    /// Set when `gamma ≥ 1`, i.e. convergence is not guaranteed.
    pub gamma_warning: bool,
}

impl ReconstructionRun {
    pub fn error_trace(&self) -> Option<Vec<f64>> {
        self.trace.iter().map(|e| e.error_norm).collect()
    }
}

/// Upper bound and observed maximum of `‖f − Gf‖/‖f‖` over `PW_ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionEstimate {
    pub bound: f64,
    pub empirical_max: f64,
}

/// Reconstruction context: a graph, its band projector and cutoff.
pub struct Reconstructor<'a> {
    graph: &'a Graph,
    basis: &'a SpectralBasis,
    projector: BandProjector,
}

impl<'a> Reconstructor<'a> {
    pub fn new(graph: &'a Graph, basis: &'a SpectralBasis, omega: f64) -> Result<Self> {
        check_len(graph.n_vertices(), basis.order())?;
        Ok(Self { graph, basis, projector: basis.projector(omega)? })
    }

    pub fn omega(&self) -> f64 {
        self.projector.omega()
    }

    pub fn projector(&self) -> &BandProjector {
        &self.projector
    }

    fn n(&self) -> usize {
        self.graph.n_vertices()
    }

    /// `G f = P_ω(Σ_i ⟨f, φ_i⟩ δ_{N_i})`.
    pub fn apply_g<O: MeasurementOracle + ?Sized>(&self, p: &Partition, oracle: &O, f: &GraphSignal) -> Result<GraphSignal> {
        check_len(self.n(), f.len())?;
        check_len(p.len(), oracle.n_measurements())?;
        let m = oracle.measure(f)?;
        Ok(self.projector.project_slice(&spread_over_sets(self.n(), p, m.values())))
    }

    /// Iterative local measurement reconstruction.
    ///
    /// `oracle` supplies `⟨f⁽ᵏ⁾, φ_i⟩` each iteration; pass the [`LocalWeights`]
    /// when the weights are known.
    pub fn ilmr<O: MeasurementOracle + ?Sized>(
        &self,
        measurements: &MeasurementSet,
        p: &Partition,
        oracle: &O,
        cfg: &ReconstructionConfig,
    ) -> Result<ReconstructionRun> {
        cfg.validate(self.n())?;
        ensure_valid(self.graph, p)?;
        check_len(p.len(), measurements.len())?;
        check_len(p.len(), oracle.n_measurements())?;
        let gamma = partition_metrics(self.graph, p)?.gamma(self.omega());
        let n = self.n();
        let target = measurements.values();
        let init = spread_over_sets(n, p, target);
        self.iterate(cfg, Some(gamma), init, |x| {
            let current = oracle.measure(x)?;
            check_len(target.len(), current.len())?;
            let residual: Vec<f64> = target.iter().zip(current.values()).map(|(a, b)| a - b).collect();
            Ok(spread_over_sets(n, p, &residual))
        })
    }

    /// Iterative propagating reconstruction from samples at the set centers.
    pub fn ipr(&self, decimation: &[f64], p: &Partition, cfg: &ReconstructionConfig) -> Result<ReconstructionRun> {
        cfg.validate(self.n())?;
        let centers = p.centers().ok_or_else(|| domain("IPR needs a partition with centers"))?.to_vec();
        ensure_valid(self.graph, p)?;
        check_len(p.len(), decimation.len())?;
        let gamma = partition_metrics(self.graph, p)?.gamma_centered(self.omega());
        let n = self.n();
        let init = spread_over_sets(n, p, decimation);
        self.iterate(cfg, gamma, init, |x| {
            let residual: Vec<f64> = centers.iter().zip(decimation).map(|(&u, d)| d - x[u]).collect();
            Ok(spread_over_sets(n, p, &residual))
        })
    }

    /// Iterative least-squares reconstruction from samples on `samples`.
    pub fn ilsr(&self, decimation: &[f64], samples: &[Vertex], cfg: &ReconstructionConfig) -> Result<ReconstructionRun> {
        cfg.validate(self.n())?;
        if samples.is_empty() {
            return Err(domain("ILSR needs at least one sampled vertex"));
        }
        check_len(samples.len(), decimation.len())?;
        let n = self.n();
        let mut seen = vec![false; n];
        for &u in samples {
            self.graph.check_vertex(u)?;
            if std::mem::replace(&mut seen[u], true) {
                return Err(domain(format!("vertex {u} sampled twice")));
            }
        }
        let spread = |values: &[f64]| {
            let mut out = vec![0.0; n];
            for (&u, &v) in samples.iter().zip(values) {
                out[u] = v;
            }
            out
        };
        let init = spread(decimation);
        self.iterate(cfg, None, init, |x| {
            let residual: Vec<f64> = samples.iter().zip(decimation).map(|(&u, d)| d - x[u]).collect();
            Ok(spread(&residual))
        })
    }

    fn iterate<F>(&self, cfg: &ReconstructionConfig, gamma: Option<f64>, init: Vec<f64>, mut residual: F) -> Result<ReconstructionRun>
    where
        F: FnMut(&GraphSignal) -> Result<Vec<f64>>,
    {
        let error = |x: &GraphSignal| cfg.truth.as_ref().map(|t| x.distance(t));
        let mut estimate = self.projector.project_slice(&init);
        let mut trace = vec![TraceEntry { iteration: 0, increment_norm: estimate.norm(), error_norm: error(&estimate) }];
        let mut stop_reason = StopReason::MaxIterations;
        let mut iterations = 0;
        while iterations < cfg.max_iterations {
            let increment = self.projector.project_slice(&residual(&estimate)?);
            let step = increment.norm();
            if step / estimate.norm().max(f64::MIN_POSITIVE) < cfg.stop_tolerance {
                stop_reason = StopReason::Converged;
                break;
            }
            estimate += &increment;
            iterations += 1;
            trace.push(TraceEntry { iteration: iterations, increment_norm: step, error_norm: error(&estimate) });
        }
        Ok(ReconstructionRun {
            estimate,
            iterations_used: iterations,
            trace,
            gamma,
            stop_reason,
            gamma_warning: gamma.is_some_and(|g| g >= 1.0),
        })
    }

    /// Compares `max ‖f − Gf‖/‖f‖` over `trials` random `f ∈ PW_ω` with `C_max√ω`.
    pub fn contraction_ratio<R: Rng + ?Sized>(
        &self,
        p: &Partition,
        w: &LocalWeights,
        trials: usize,
        rng: &mut R,
    ) -> Result<ContractionEstimate> {
        if trials == 0 {
            return Err(domain("at least one trial is required"));
        }
        let bound = partition_metrics(self.graph, p)?.gamma(self.omega());
        let mut empirical_max = 0.0_f64;
        for _ in 0..trials {
            let f = random_bandlimited(self.basis, self.omega(), rng, 1.0, None)?;
            let g = self.apply_g(p, w, &f)?;
            empirical_max = empirical_max.max(f.distance(&g) / f.norm());
        }
        Ok(ContractionEstimate { bound, empirical_max })
    }

    /// True when the in-band measurement matrix `M[i,k] = ⟨φ_i, u_k⟩` has full
    /// column rank `K`, i.e. the measurements determine any `f ∈ PW_ω`.
    pub fn uniqueness_check(&self, w: &LocalWeights) -> Result<bool> {
        check_len(self.n(), w.n_vertices())?;
        let basis = self.projector.in_band_basis();
        let k = basis.ncols();
        if k == 0 {
            return Ok(true);
        }
        if w.len() < k {
            return Ok(false);
        }
        let m = DMatrix::<f64>::from_fn(w.len(), k, |i, col| {
            w.set_weights(i).iter().map(|&(v, phi)| phi * basis[(v, col)]).sum::<f64>()
        });
        let singular = m.singular_values();
        let largest: f64 = singular.max();
        let tol = k as f64 * f64::EPSILON * largest;
        Ok(singular.iter().filter(|&&s| s > tol).count() == k)
    }
}

/// `Σ_i values[i] · δ_{N_i}`.
fn spread_over_sets(n: usize, p: &Partition, values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (set, &value) in p.sets().iter().zip(values) {
        for &v in set {
            out[v] = value;
        }
    }
    out
}

impl From<Vec<f64>> for MeasurementSet {
    fn from(v: Vec<f64>) -> Self {
        MeasurementSet(v)
    }
}
