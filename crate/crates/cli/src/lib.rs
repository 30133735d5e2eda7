//! Library half of the `slst` command: file formats, instance generation,
//! benchmarking and the subcommand bodies.

pub mod bench;
pub mod commands;
pub mod format;
pub mod gen;
