//! Criterion benchmarks for isograph live under `benches/`.
