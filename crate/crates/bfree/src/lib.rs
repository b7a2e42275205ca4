//! Command-line front end for `bfree-core`: named generators for `B`,
//! JSON and CSV formats, run configuration and the `bfree` subcommands.

pub mod cli;
pub mod config;
pub mod formats;
pub mod generators;
