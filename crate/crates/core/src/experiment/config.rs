use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::WeightScheme;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSource {
    EdgeList { path: PathBuf, index_base: u8 },
    Path { n: usize },
    Grid { rows: usize, cols: usize },
    /// Random geometric graph in the unit square.
    Rgg { n: usize, radius: f64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    /// Explicit cutoff frequency `ω`.
    Omega(f64),
    /// Number of in-band eigenvectors; `ω` becomes the matching eigenvalue.
    Dimension(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    None,
    Iid { sigma: f64 },
    /// Vertices are split at random into groups of the given fractions.
    Grouped { sigmas: Vec<f64>, fractions: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub graph: GraphSource,
    pub bandwidth: Bandwidth,
    /// Maximal set size for the greedy partition; derived from `ω` when absent.
    pub n_max: Option<usize>,
    pub schemes: Vec<WeightScheme>,
    pub noise: NoiseSpec,
    /// Fraction of signal energy placed outside the band.
    pub offband_energy: f64,
    pub signal_norm: f64,
    pub trials: usize,
    pub max_iterations: usize,
    pub stop_tolerance: f64,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(name: impl Into<String>, graph: GraphSource, bandwidth: Bandwidth) -> Self {
        Self {
            name: name.into(),
            graph,
            bandwidth,
            n_max: None,
            schemes: vec![WeightScheme::Uniform],
            noise: NoiseSpec::None,
            offband_energy: 0.0,
            signal_norm: 1.0,
            trials: 20,
            max_iterations: 100,
            stop_tolerance: 0.0,
            seed: 0,
            output_dir: None,
        }
    }

    /// Reads a config file; a relative `graph_file` is resolved against the
    /// file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text)?;
        if let GraphSource::EdgeList { path: file, .. } = &mut cfg.graph {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(cfg)
    }

    /// Parses `key = value` lines. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        let mut seen = HashSet::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::Parse { line: line_no, message: format!("duplicate key `{key}`") });
            }
            raw.set(key, value).map_err(|message| Error::Parse { line: line_no, message })?;
        }
        raw.build()
    }
}

#[derive(Default)]
struct RawConfig {
    name: Option<String>,
    graph: Option<String>,
    graph_file: Option<PathBuf>,
    index_base: Option<u8>,
    path_n: Option<usize>,
    grid_rows: Option<usize>,
    grid_cols: Option<usize>,
    rgg_n: Option<usize>,
    rgg_radius: Option<f64>,
    rgg_seed: Option<u64>,
    omega: Option<f64>,
    bandwidth: Option<usize>,
    n_max: Option<usize>,
    schemes: Option<Vec<WeightScheme>>,
    noise: Option<String>,
    noise_sigma: Option<f64>,
    noise_sigmas: Option<Vec<f64>>,
    noise_fractions: Option<Vec<f64>>,
    offband_energy: Option<f64>,
    signal_norm: Option<f64>,
    trials: Option<usize>,
    max_iterations: Option<usize>,
    stop_tolerance: Option<f64>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
}

fn scalar<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("invalid value `{value}` for `{key}`"))
}

fn list<T: FromStr>(key: &str, value: &str) -> std::result::Result<Vec<T>, String> {
    value.split(',').map(|v| scalar(key, v.trim())).collect()
}

impl RawConfig {
    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        match key {
            "name" => self.name = Some(v.to_string()),
            "graph" => self.graph = Some(v.to_string()),
            "graph_file" => self.graph_file = Some(PathBuf::from(v)),
            "index_base" => self.index_base = Some(scalar(key, v)?),
            "path_n" => self.path_n = Some(scalar(key, v)?),
            "grid_rows" => self.grid_rows = Some(scalar(key, v)?),
            "grid_cols" => self.grid_cols = Some(scalar(key, v)?),
            "rgg_n" => self.rgg_n = Some(scalar(key, v)?),
            "rgg_radius" => self.rgg_radius = Some(scalar(key, v)?),
            "rgg_seed" => self.rgg_seed = Some(scalar(key, v)?),
            "omega" => self.omega = Some(scalar(key, v)?),
            "bandwidth" => self.bandwidth = Some(scalar(key, v)?),
            "n_max" => self.n_max = Some(scalar(key, v)?),
            "schemes" => self.schemes = Some(list(key, v)?),
            "noise" => self.noise = Some(v.to_string()),
            "noise_sigma" => self.noise_sigma = Some(scalar(key, v)?),
            "noise_sigmas" => self.noise_sigmas = Some(list(key, v)?),
            "noise_fractions" => self.noise_fractions = Some(list(key, v)?),
            "offband_energy" => self.offband_energy = Some(scalar(key, v)?),
            "signal_norm" => self.signal_norm = Some(scalar(key, v)?),
            "trials" => self.trials = Some(scalar(key, v)?),
            "max_iterations" => self.max_iterations = Some(scalar(key, v)?),
            "stop_tolerance" => self.stop_tolerance = Some(scalar(key, v)?),
            "seed" => self.seed = Some(scalar(key, v)?),
            "output_dir" => self.output_dir = Some(PathBuf::from(v)),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    fn build(self) -> Result<ExperimentConfig> {
        let missing = |key: &str| Error::Config(format!("missing `{key}`"));
        let graph = match self.graph.as_deref().ok_or_else(|| missing("graph"))? {
            "edge_list" => GraphSource::EdgeList {
                path: self.graph_file.ok_or_else(|| missing("graph_file"))?,
                index_base: self.index_base.unwrap_or(0),
            },
            "path" => GraphSource::Path { n: self.path_n.ok_or_else(|| missing("path_n"))? },
            "grid" => GraphSource::Grid {
                rows: self.grid_rows.ok_or_else(|| missing("grid_rows"))?,
                cols: self.grid_cols.ok_or_else(|| missing("grid_cols"))?,
            },
            "rgg" => GraphSource::Rgg {
                n: self.rgg_n.ok_or_else(|| missing("rgg_n"))?,
                radius: self.rgg_radius.ok_or_else(|| missing("rgg_radius"))?,
                seed: self.rgg_seed.unwrap_or(0),
            },
            other => return Err(Error::Config(format!("unknown graph kind `{other}`"))),
        };
        let bandwidth = match (self.omega, self.bandwidth) {
            (Some(w), None) => Bandwidth::Omega(w),
            (None, Some(k)) => Bandwidth::Dimension(k),
            (None, None) => return Err(Error::Config("one of `omega` or `bandwidth` is required".into())),
            (Some(_), Some(_)) => return Err(Error::Config("`omega` and `bandwidth` are mutually exclusive".into())),
        };
        let noise = match self.noise.as_deref().unwrap_or("none") {
            "none" => NoiseSpec::None,
            "iid" => NoiseSpec::Iid { sigma: self.noise_sigma.ok_or_else(|| missing("noise_sigma"))? },
            "grouped" => NoiseSpec::Grouped {
                sigmas: self.noise_sigmas.ok_or_else(|| missing("noise_sigmas"))?,
                fractions: self.noise_fractions.ok_or_else(|| missing("noise_fractions"))?,
            },
            other => return Err(Error::Config(format!("unknown noise kind `{other}`"))),
        };
        let name = self.name.ok_or_else(|| missing("name"))?;
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(Error::Config(format!("`name` must be a plain file stem, got `{name}`")));
        }
        let mut cfg = ExperimentConfig::new(name, graph, bandwidth);
        cfg.n_max = self.n_max;
        cfg.noise = noise;
        cfg.output_dir = self.output_dir;
        if let Some(s) = self.schemes {
            cfg.schemes = s;
        }
        if let Some(v) = self.offband_energy {
            cfg.offband_energy = v;
        }
        if let Some(v) = self.signal_norm {
            cfg.signal_norm = v;
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = self.max_iterations {
            cfg.max_iterations = v;
        }
        if let Some(v) = self.stop_tolerance {
            cfg.stop_tolerance = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        Ok(cfg)
    }
}
