//! Front end for ecrank-core: configuration, the subcommands, JSON reports
//! and the report verifier.

pub mod config;
pub mod report;
pub mod run;
pub mod verify;
