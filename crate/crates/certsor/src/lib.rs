//! File formats, graph ingestion, a shared-memory parallel schedule and the
//! `certsor` command-line tool on top of [`certsor_core`].

pub mod cli;
pub mod edgelist;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod report;
pub mod synth;

pub use error::{Error, Result};
pub use parallel::ParallelBlocks;
