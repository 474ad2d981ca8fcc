//! Criterion benchmarks for the fenchel solvers; see `benches/solvers.rs`.
