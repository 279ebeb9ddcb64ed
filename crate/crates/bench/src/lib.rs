//! Benchmarks for `hodge-corners`; see `benches/`.
