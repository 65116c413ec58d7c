//! File formats, evaluation reports and subcommands of the `ghostscan` tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod csv_import;
pub mod format;
pub mod report;

pub use config::Config;
pub use report::{Evaluator, Report};
