//! Criterion benchmarks for `cellua`; see `benches/workbench.rs`.
