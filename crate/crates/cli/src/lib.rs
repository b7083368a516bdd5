//! Command-line front end: argument parsing, run configuration files and
//! artifact writing for the on-line and batch experiments.

pub mod args;
pub mod config;
pub mod error;
pub mod run;
