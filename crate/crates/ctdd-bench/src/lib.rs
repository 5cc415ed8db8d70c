//! Criterion benchmarks for the analytic and Monte Carlo engines live in
//! `benches/`; this crate has no library surface.
