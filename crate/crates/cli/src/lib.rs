//! Library surface of the command-line front end, split out so integration
//! tests can drive table generation and fixture comparison directly.

pub mod commands;
pub mod config;
pub mod fixtures;
pub mod report;
pub mod tables;
