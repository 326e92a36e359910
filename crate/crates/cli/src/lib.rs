//! Report and batch plumbing behind the `coxsolid` binary.

pub mod batch;
pub mod report;
