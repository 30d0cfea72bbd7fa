//! Command-line front end and file formats for `dgplab-core`.
//!
//! Adds what the `no_std` core leaves out: a rayon [`Executor`](dgplab_core::rng::Executor),
//! JSON spec files, CSV/JSON output and the `dgplab` binary.

pub mod cli;
pub mod exec;
pub mod output;
pub mod specfile;

pub use dgplab_core as core;
pub use exec::RayonExecutor;
