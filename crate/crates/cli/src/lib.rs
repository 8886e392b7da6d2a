//! Command-line driver for the convex-approx library: body parsing, reports
//! and experiment suites.

pub mod body_json;
pub mod experiments;
pub mod report;
pub mod commands;
