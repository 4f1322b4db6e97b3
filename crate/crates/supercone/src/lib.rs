//! File formats, seeded sampling, invariant suites and the command
//! implementations behind the `supercone` binary.

pub mod commands;
pub mod config;
pub mod json;
pub mod output;
pub mod sampling;
pub mod suites;
