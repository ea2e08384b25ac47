//! IO, file formats, sweeps, and plotting around `lumigather-core`: JSONL
//! traces with embedded configs, rule-table and certificate JSON, CSV sweep
//! summaries, SVG trajectory plots, and the CLI that drives them.

pub mod check;
pub mod cli;
pub mod gen;
pub mod plot;
pub mod sweep;
pub mod trace;

pub use lumigather_core as core;
