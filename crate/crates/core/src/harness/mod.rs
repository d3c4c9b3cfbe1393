//! Experiment layer: configuration, initial data, the simulation loop, the
//! convergence study, front diagnostics and on-disk artifacts.

pub mod config;
pub mod eoc;
pub mod init;
pub mod io;
pub mod metrics;
pub mod run;
