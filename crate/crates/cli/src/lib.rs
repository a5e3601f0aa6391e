//! Command-line front end: function specs, run manifests, report files.

pub mod cli;
pub mod run;
pub mod spec;
