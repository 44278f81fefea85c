//! File formats, a parallel trial runner and the command implementations
//! behind the `bearing-sim` binary.
//!
//! Every command is a plain function returning its documents, so the binary
//! only parses flags, picks a thread count and maps errors to exit codes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
mod error;
pub mod fixture;
pub mod formats;
pub mod runner;

pub use error::{Error, Result};
