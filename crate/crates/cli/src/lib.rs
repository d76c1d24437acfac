//! Batch front end for `jetcalc`: builtin algebra names, verification
//! suites and their reports.

pub mod builtin;
pub mod report;
pub mod suites;

pub use report::{digest_inputs, Check, Status, VerificationReport};
