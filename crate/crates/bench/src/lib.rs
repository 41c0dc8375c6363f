//! Criterion benchmarks for the ncgeom kernels live in `benches/`.
