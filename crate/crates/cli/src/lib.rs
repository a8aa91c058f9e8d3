//! CLI, serialization, generators and benchmarks on top of `oor-core`.

pub mod bench;
pub mod cli;
pub mod gen;
pub mod io;
pub mod svg;
