use std::path::Path;

use ilmr::experiment::{run_experiment, Bandwidth, ExperimentConfig, GraphSource, NoiseSpec};
use ilmr::WeightScheme;

fn grid_config(n_max: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new("grid", GraphSource::Grid { rows: 20, cols: 20 }, Bandwidth::Dimension(4));
    cfg.n_max = Some(n_max);
    cfg.schemes = vec![WeightScheme::Uniform, WeightScheme::Random, WeightScheme::Dirac];
    cfg.trials = 30;
    cfg.max_iterations = 150;
    cfg.seed = 17;
    cfg
}

#[test]
fn noise_free_curves_are_nonincreasing() {
    let report = run_experiment(&grid_config(4)).unwrap();
    assert!(report.gamma < 1.0);
    for s in &report.schemes {
        for pair in s.mean_curve.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "{:?}: {} -> {}", s.scheme, pair[0], pair[1]);
        }
        assert!(s.steady_mean < 1e-8);
    }
}

fn iterations_to(curve: &[f64], tol: f64) -> usize {
    curve.iter().position(|&e| e < tol).unwrap_or(curve.len())
}

#[test]
fn more_sets_converge_faster() {
    let mut fine = grid_config(2);
    let mut coarse = grid_config(4);
    for cfg in [&mut fine, &mut coarse] {
        cfg.schemes = vec![WeightScheme::Uniform];
    }
    let (fine, coarse) = (run_experiment(&fine).unwrap(), run_experiment(&coarse).unwrap());
    assert!(fine.n_sets > coarse.n_sets);
    let k_fine = iterations_to(&fine.schemes[0].mean_curve, 1e-8);
    let k_coarse = iterations_to(&coarse.schemes[0].mean_curve, 1e-8);
    assert!(k_fine < k_coarse, "{k_fine} vs {k_coarse}");
}

#[test]
fn offband_energy_sets_error_floor() {
    let mut errors = Vec::new();
    for energy in [1e-4, 1e-2] {
        let mut cfg = grid_config(4);
        cfg.schemes = vec![WeightScheme::Uniform, WeightScheme::Dirac];
        cfg.offband_energy = energy;
        let report = run_experiment(&cfg).unwrap();
        let uniform = report.scheme(WeightScheme::Uniform).unwrap().steady_mean;
        let dirac = report.scheme(WeightScheme::Dirac).unwrap().steady_mean;
        // The in-band part is recovered; the off-band part is lost at least.
        assert!(uniform >= 0.9 * energy.sqrt(), "{uniform}");
        assert!(uniform < dirac);
        errors.push(uniform);
    }
    assert!(errors[0] < errors[1]);
}

#[test]
fn grouped_noise_is_reported_with_bounds() {
    let mut cfg = grid_config(2);
    cfg.bandwidth = Bandwidth::Dimension(8);
    cfg.schemes = vec![WeightScheme::Uniform, WeightScheme::Optimal];
    cfg.noise = NoiseSpec::Grouped { sigmas: vec![1e-4, 2e-4, 5e-4], fractions: vec![0.5, 0.3, 0.2] };
    let report = run_experiment(&cfg).unwrap();
    assert!(report.gamma < 1.0 && report.warnings.is_empty());
    for s in &report.schemes {
        let bound = s.mean_relative_bound.unwrap();
        assert!(s.steady_mean <= bound, "{:?}", s.scheme);
    }
    let bad = NoiseSpec::Grouped { sigmas: vec![1e-4, 2e-4], fractions: vec![0.5, 0.4] };
    cfg.noise = bad;
    assert!(run_experiment(&cfg).is_err());
}

#[test]
fn gamma_above_one_runs_with_warning() {
    let mut cfg = grid_config(8);
    cfg.bandwidth = Bandwidth::Dimension(10);
    cfg.trials = 3;
    let report = run_experiment(&cfg).unwrap();
    assert!(report.gamma >= 1.0);
    assert!(report.warnings.iter().any(|w| w.contains("gamma")));
    assert!(report.schemes.iter().all(|s| s.mean_relative_bound.is_none()));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            let cfg = ExperimentConfig::from_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            if let GraphSource::EdgeList { path, .. } = &cfg.graph {
                assert!(path.exists(), "{}", path.display());
            }
            seen += 1;
        }
    }
    assert!(seen >= 4);
}
