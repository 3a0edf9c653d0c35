//! Criterion benchmarks for the solver and the measure evaluation; see
//! `benches/pipeline.rs`.
