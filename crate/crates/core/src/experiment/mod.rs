//! Seeded Monte-Carlo experiments comparing weight schemes.
//!
//! Every trial draws its own random stream (`seed`, stream `trial + 1`), so
//! results do not depend on thread count or scheduling. Within a trial the same
//! signal and noise realization is shared by all schemes.

mod config;
pub mod stats;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use config::{Bandwidth, ExperimentConfig, GraphSource, NoiseSpec};

use crate::error::{domain, Error, Result};
use crate::generators::{grid_graph, path_graph, random_geometric};
use crate::graph::{laplacian, read_edge_list, EdgeListOptions, Graph};
use crate::noise::{realized_bound, sample_noise};
use crate::partition::{greedy_partition, partition_metrics, suggest_nmax, Partition};
use crate::reconstruction::{ReconstructionConfig, Reconstructor};
use crate::sampling::{make_weights, NoiseModel, WeightScheme};
use crate::spectral::{eigendecompose, random_bandlimited, SpectralBasis};

pub const DEFAULT_OUTPUT_DIR: &str = "results";

#[derive(Debug, Clone, Serialize)]
pub struct SchemeSummary {
    pub scheme: WeightScheme,
    /// Mean relative error `‖f⁽ᵏ⁾ − f‖/‖f‖` per iteration `k = 0..=max_iterations`.
    #[serde(skip)]
    pub mean_curve: Vec<f64>,
    #[serde(skip)]
    pub std_curve: Vec<f64>,
    /// Relative error after the last iteration, one per trial.
    #[serde(skip)]
    pub final_errors: Vec<f64>,
    pub steady_mean: f64,
    pub steady_std: f64,
    pub mean_iterations: f64,
    /// Mean of the realized asymptotic error bound relative to `‖f‖`, when `γ < 1`.
    pub mean_relative_bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub omega: f64,
    pub in_band_dimension: usize,
    pub n_max: usize,
    pub n_sets: usize,
    pub c_max: f64,
    pub gamma: f64,
    pub trials: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub schemes: Vec<SchemeSummary>,
    pub warnings: Vec<String>,
    pub config: ExperimentConfig,
    /// Wall-clock start, seconds since the Unix epoch. Only written to the JSON sidecar.
    pub started_unix_secs: u64,
}

impl ExperimentReport {
    pub fn scheme(&self, scheme: WeightScheme) -> Option<&SchemeSummary> {
        self.schemes.iter().find(|s| s.scheme == scheme)
    }

    /// `scheme,iteration,mean_rel_error,std_rel_error` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scheme,iteration,mean_rel_error,std_rel_error\n");
        for s in &self.schemes {
            for (k, (m, sd)) in s.mean_curve.iter().zip(&s.std_curve).enumerate() {
                writeln!(out, "{},{k},{m:e},{sd:e}", s.scheme).expect("writing to a String");
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes `<name>.csv` and `<name>.meta.json` into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.csv", self.name));
        let meta = dir.join(format!("{}.meta.json", self.name));
        std::fs::write(&csv, self.to_csv())?;
        std::fs::write(&meta, self.to_json() + "\n")?;
        Ok((csv, meta))
    }
}

pub fn build_graph(source: &GraphSource) -> Result<Graph> {
    Ok(match source {
        GraphSource::EdgeList { path, index_base } => {
            read_edge_list(path, &EdgeListOptions { index_base: *index_base, ..Default::default() })?
        }
        GraphSource::Path { n } => path_graph(*n),
        GraphSource::Grid { rows, cols } => grid_graph(*rows, *cols),
        GraphSource::Rgg { n, radius, seed } => {
            if !(*radius > 0.0) {
                return Err(Error::Config(format!("rgg_radius must be positive, got {radius}")));
            }
            random_geometric(*n, *radius, &mut ChaCha8Rng::seed_from_u64(*seed)).0
        }
    })
}

fn check(cfg: &ExperimentConfig) -> Result<()> {
    let bad = |msg: &str| Err(Error::Config(msg.to_string()));
    if cfg.trials == 0 {
        return bad("trials must be at least 1");
    }
    if cfg.max_iterations == 0 {
        return bad("max_iterations must be at least 1");
    }
    if cfg.schemes.is_empty() {
        return bad("at least one scheme is required");
    }
    if !(cfg.signal_norm > 0.0) || !cfg.signal_norm.is_finite() {
        return bad("signal_norm must be positive");
    }
    if !(0.0..1.0).contains(&cfg.offband_energy) {
        return bad("offband_energy must lie in [0, 1)");
    }
    if !(cfg.stop_tolerance >= 0.0) {
        return bad("stop_tolerance must be nonnegative");
    }
    Ok(())
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

struct TrialOutcome {
    curve: Vec<f64>,
    iterations: usize,
    relative_bound: Option<f64>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check(cfg)?;
    let started_unix_secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let graph = build_graph(&cfg.graph)?;
    let n = graph.n_vertices();
    if n == 0 {
        return Err(Error::Config("graph has no vertices".into()));
    }
    let mut warnings = Vec::new();
    if !graph.is_connected() {
        warnings.push(format!("graph has {} connected components", graph.n_components()));
    }
    let basis = eigendecompose(&laplacian(&graph))?;
    let omega = match cfg.bandwidth {
        Bandwidth::Omega(w) => w,
        Bandwidth::Dimension(k) => basis.cutoff_for_dimension(k)?,
    };
    let n_max = match cfg.n_max {
        Some(k) => k,
        None => suggest_nmax(omega)?,
    };
    let partition = greedy_partition(&graph, n_max)?;
    let metrics = partition_metrics(&graph, &partition)?;
    let (gamma, c_max) = (metrics.gamma(omega), metrics.c_max);
    if gamma >= 1.0 {
        warnings.push(format!("gamma = {gamma:.4} >= 1; convergence is not guaranteed"));
    }
    let reconstructor = Reconstructor::new(&graph, &basis, omega)?;
    if reconstructor.projector().dimension() == 0 {
        return Err(domain(format!("no eigenvalue lies below omega = {omega}")));
    }

    let noise = match &cfg.noise {
        NoiseSpec::None => NoiseModel::iid(n, 0.0)?,
        NoiseSpec::Iid { sigma } => NoiseModel::iid(n, *sigma)?,
        NoiseSpec::Grouped { sigmas, fractions } => NoiseModel::grouped(n, sigmas, fractions, &mut trial_rng(cfg.seed, 0))?,
    };

    let ctx = TrialContext { cfg, graph: &graph, basis: &basis, omega, partition: &partition, noise: &noise, gamma };
    let outcomes: Vec<Vec<TrialOutcome>> =
        (0..cfg.trials).into_par_iter().map(|t| ctx.run_trial(t)).collect::<Result<_>>()?;

    let schemes = cfg
        .schemes
        .iter()
        .enumerate()
        .map(|(s, &scheme)| summarize(scheme, outcomes.iter().map(|trial| &trial[s]), cfg.max_iterations))
        .collect();

    Ok(ExperimentReport {
        name: cfg.name.clone(),
        n_vertices: n,
        n_edges: graph.n_edges(),
        omega,
        in_band_dimension: reconstructor.projector().dimension(),
        n_max,
        n_sets: partition.len(),
        c_max,
        gamma,
        trials: cfg.trials,
        max_iterations: cfg.max_iterations,
        seed: cfg.seed,
        schemes,
        warnings,
        config: cfg.clone(),
        started_unix_secs,
    })
}

struct TrialContext<'a> {
    cfg: &'a ExperimentConfig,
    graph: &'a Graph,
    basis: &'a SpectralBasis,
    omega: f64,
    partition: &'a Partition,
    noise: &'a NoiseModel,
    gamma: f64,
}

impl TrialContext<'_> {
    fn run_trial(&self, trial: usize) -> Result<Vec<TrialOutcome>> {
        let cfg = self.cfg;
        let mut rng = trial_rng(cfg.seed, trial as u64 + 1);
        let offband = (cfg.offband_energy > 0.0).then_some(cfg.offband_energy);
        let f = random_bandlimited(self.basis, self.omega, &mut rng, cfg.signal_norm, offband)?;
        let n = sample_noise(self.noise, &mut rng);
        let observed = &f + &n;
        let reconstructor = Reconstructor::new(self.graph, self.basis, self.omega)?;
        let rc = ReconstructionConfig {
            max_iterations: cfg.max_iterations,
            stop_tolerance: cfg.stop_tolerance,
            truth: Some(f.clone()),
        };
        let norm_f = f.norm();
        cfg.schemes
            .iter()
            .map(|&scheme| {
                let w = make_weights(scheme, self.partition, Some(self.noise), Some(&mut rng))?;
                let m = w.measure(&observed)?;
                let run = reconstructor.ilmr(&m, self.partition, &w, &rc)?;
                let mut curve: Vec<f64> =
                    run.trace.iter().map(|e| e.error_norm.expect("truth is set") / norm_f).collect();
                let last = *curve.last().expect("trace is nonempty");
                curve.resize(cfg.max_iterations + 1, last);
                let relative_bound = if self.gamma < 1.0 {
                    let mn = w.measure(&n)?;
                    let b = realized_bound(self.gamma, self.partition, mn.values(), norm_f, n.norm(), run.iterations_used)?;
                    Some(b.asymptotic_bound / norm_f)
                } else {
                    None
                };
                Ok(TrialOutcome { curve, iterations: run.iterations_used, relative_bound })
            })
            .collect()
    }
}

fn summarize<'a>(scheme: WeightScheme, trials: impl Iterator<Item = &'a TrialOutcome>, max_iterations: usize) -> SchemeSummary {
    let trials: Vec<&TrialOutcome> = trials.collect();
    let column = |k: usize| trials.iter().map(|t| t.curve[k]).collect::<Vec<_>>();
    let (mean_curve, std_curve) = (0..=max_iterations)
        .map(|k| {
            let col = column(k);
            (stats::mean(&col), stats::sample_std(&col))
        })
        .unzip();
    let final_errors = column(max_iterations);
    let iterations: Vec<f64> = trials.iter().map(|t| t.iterations as f64).collect();
    let bounds: Option<Vec<f64>> = trials.iter().map(|t| t.relative_bound).collect();
    SchemeSummary {
        scheme,
        mean_curve,
        std_curve,
        steady_mean: stats::mean(&final_errors),
        steady_std: stats::sample_std(&final_errors),
        final_errors,
        mean_iterations: stats::mean(&iterations),
        mean_relative_bound: bounds.map(|b| stats::mean(&b)),
    }
}

/// Output directory: explicit override, then `ILMR_OUTPUT_DIR`, then the
/// config value, then [`DEFAULT_OUTPUT_DIR`].
pub fn resolve_output_dir(cli: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    cli.map(Path::to_path_buf)
        .or_else(|| std::env::var_os("ILMR_OUTPUT_DIR").filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}
