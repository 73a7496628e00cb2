//! Experiment driver library: run configuration, Monte Carlo experiments,
//! reports and file formats for the `roughbdg` binary.

pub mod config;
pub mod experiments;
pub mod formats;
pub mod report;
