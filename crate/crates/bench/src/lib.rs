//! Criterion benchmarks for chebconv live in `benches/`.
