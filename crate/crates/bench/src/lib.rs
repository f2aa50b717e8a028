//! Criterion benchmarks for `grz-core`; see `benches/pipeline.rs`.
