//! Experiment harness behind the `unipred` binary: configuration files,
//! report runners, sequence ingestion, and victim parsing. The binary is
//! a thin command-line layer over these modules, so integration tests
//! drive the exact code paths the CLI does.

pub mod config;
pub mod fmt;
pub mod ingest;
pub mod run;
pub mod victims;
