//! Benchmarks for the `ilmr` crate live under `benches/`.
