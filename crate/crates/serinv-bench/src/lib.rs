//! Benchmark-only crate; see `benches/routes.rs`. The CLI `bench`
//! subcommand provides the same comparison without the criterion harness.
