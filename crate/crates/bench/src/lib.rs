//! Criterion benchmarks for the tomoslice toolkit live under `benches/`.
