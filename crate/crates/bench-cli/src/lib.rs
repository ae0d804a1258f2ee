//! Command-line front end: clustering runs, benchmark suites, plots and
//! parameter sweeps, with reports as TOML.

pub mod cli;
pub mod registry;
pub mod report;
