//! Problem registry, table runners and subcommands behind the `avgauss` binary.

pub mod commands;
pub mod problems;
pub mod tables;
