//! Reconstruction of bandlimited graph signals from local measurements.
//!
//! A signal `f` on the vertices of an undirected graph is observed only through
//! weighted averages `⟨f, φ_i⟩` over the sets `N_i` of a partition. When `f` lies
//! in the Paley–Wiener space `PW_ω` (no Laplacian frequencies above `ω`), it can
//! be recovered by the fixed-point iteration in [`Reconstructor::ilmr`].
//!
//! ```
//! use ilmr::{eigendecompose, greedy_partition, laplacian, make_weights, generators, GraphSignal,
//!            Reconstructor, ReconstructionConfig, WeightScheme};
//!
//! let g = generators::grid_graph(6, 6);
//! let basis = eigendecompose(&laplacian(&g)).unwrap();
//! let omega = basis.eigenvalues()[2];
//! let p = greedy_partition(&g, 2).unwrap();
//! let w = make_weights(WeightScheme::Uniform, &p, None, None).unwrap();
//!
//! let f = basis.project_bandlimited(omega, &GraphSignal::indicator(36, &[0, 1, 6])).unwrap();
//! let m = w.measure(&f).unwrap();
//! let rec = Reconstructor::new(&g, &basis, omega).unwrap();
//! let run = rec.ilmr(&m, &p, &w, &ReconstructionConfig::default()).unwrap();
//! assert!(run.estimate.distance(&f) < 1e-8);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod noise;
pub mod partition;
pub mod reconstruction;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{
    bfs_distance, bfs_distances, induced_subgraph, laplacian, load_edge_list, read_edge_list, write_edge_list,
    DuplicatePolicy, EdgeListOptions, Graph, HeaderMode, InducedSubgraph, SymmetricMatrix, Vertex,
};
pub use noise::{expected_bound, n_tilde, realized_bound, sample_noise, BoundVariant, ErrorBoundReport};
pub use partition::{
    greedy_partition, partition_metrics, suggest_nmax, validate_partition, Partition, PartitionMetrics, Violation,
};
pub use reconstruction::{
    ContractionEstimate, FnOracle, MeasurementOracle, ReconstructionConfig, ReconstructionRun, Reconstructor,
    StopReason, TraceEntry,
};
pub use sampling::{
    equivalent_noise_sigma, make_weights, measure, EquivalentNoise, LocalWeights, MeasurementSet, NoiseModel,
    WeightScheme,
};
pub use spectral::{eigendecompose, random_bandlimited, BandProjector, GraphSignal, SpectralBasis, Spectrum};
