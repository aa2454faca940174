//! Standard-library side of the TI tree generator: output formats, the
//! multi-threaded driver, oracle cross-checks and the command line.

pub mod cli;
pub mod codecs;
pub mod parallel;
pub mod verify;
