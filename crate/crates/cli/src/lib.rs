//! Library side of the `repute` command-line tool: config loading, run
//! orchestration, report writers, and reference-table reproductions.

pub mod commands;
pub mod config;
pub mod report;
pub mod tables;
