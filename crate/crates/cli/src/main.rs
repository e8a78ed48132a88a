use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use ilmr::experiment::{resolve_output_dir, run_experiment, ExperimentConfig};
use ilmr::{greedy_partition, laplacian, partition_metrics, read_edge_list, spectral, EdgeListOptions};

/// Local-measurement sampling and reconstruction of bandlimited graph signals.
#[derive(Parser)]
#[command(name = "ilmr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides ILMR_OUTPUT_DIR and the config's output_dir.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Partition a graph into connected sets of at most `nmax` vertices.
    Partition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        out: PathBuf,
        /// Index base of the edge list (0 or 1).
        #[arg(long, default_value_t = 0)]
        index_base: u8,
    },
    /// Print size and extreme Laplacian eigenvalues of a graph.
    Info {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        index_base: u8,
    },
}

fn load(path: &PathBuf, index_base: u8) -> Result<ilmr::Graph> {
    read_edge_list(path, &EdgeListOptions { index_base, ..Default::default() })
        .with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out_dir } => {
            let cfg = ExperimentConfig::from_file(&config).with_context(|| format!("loading {}", config.display()))?;
            let report = run_experiment(&cfg)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let dir = resolve_output_dir(out_dir.as_deref(), &cfg);
            let (csv, meta) = report.write(&dir).with_context(|| format!("writing to {}", dir.display()))?;
            println!(
                "{}: N={} |I|={} omega={:.6} gamma={:.4}",
                report.name, report.n_vertices, report.n_sets, report.omega, report.gamma
            );
            for s in &report.schemes {
                println!("  {:<14} steady error {:.4e} ± {:.2e}", s.scheme.name(), s.steady_mean, s.steady_std);
            }
            println!("wrote {} and {}", csv.display(), meta.display());
        }
        Command::Partition { graph, nmax, out, index_base } => {
            let g = load(&graph, index_base)?;
            let p = greedy_partition(&g, nmax)?;
            let m = partition_metrics(&g, &p)?;
            std::fs::write(&out, p.to_text()).with_context(|| format!("writing {}", out.display()))?;
            println!("{} sets (largest {}), C_max = {:.4}", p.len(), p.max_set_size(), m.c_max);
        }
        Command::Info { graph, index_base } => {
            let g = load(&graph, index_base)?;
            let eig = spectral::eigenvalues(&laplacian(&g));
            println!("N = {}", g.n_vertices());
            println!("M = {}", g.n_edges());
            println!("components = {}", g.n_components());
            match eig.get(1) {
                Some(l2) => println!("lambda_2 = {l2:.10}"),
                None => println!("lambda_2 = n/a"),
            }
            println!("lambda_N = {:.10}", eig.last().copied().unwrap_or(0.0));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
