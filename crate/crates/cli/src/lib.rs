//! Scenario files, experiment presets, sweeps and CSV output for the
//! `hetnet` command.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;

pub use error::CliError;
