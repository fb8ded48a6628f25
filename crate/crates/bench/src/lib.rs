//! Criterion benchmarks for `skewnum-core`; see `benches/`.
