//! Sweeps that compare closed forms, the recurrence route and brute-force
//! enumeration, plus the `congr` command line built on them.

pub mod cli;
pub mod config;
pub mod record;
pub mod scan;
pub mod sweep;
