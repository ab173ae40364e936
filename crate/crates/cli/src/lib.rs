//! Parsing, report emission and the reproduction harness behind the `scatlab` binary.

pub mod emit;
pub mod parse;
pub mod repro;
