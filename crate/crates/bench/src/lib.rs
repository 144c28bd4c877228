//! Benchmarks for kmdc-core live under `benches/`.
