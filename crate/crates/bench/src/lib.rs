//! Criterion benchmarks for the mols-mub pipeline; see `benches/`.
