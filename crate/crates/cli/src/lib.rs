//! File formats and subcommands behind the `laxframe` binary.

pub mod commands;
pub mod format;
