//! Step-asynchronous successive overrelaxation for nonsingular M-matrix
//! systems `(sI - A) x = b` with `A >= 0`, together with the machinery needed
//! to certify the supremum norm of the absolute error at every iteration.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the parallel
//! shared-memory schedule and the command-line tool live in the `certsor`
//! companion crate.
//!
//! The pieces fit together as follows:
//!
//! * [`sparse`] stores the nonnegative matrix `A` in row-compressed form with
//!   O(1) diagonal access;
//! * [`suitable`] computes a positive vector `w` with `A w <= sigma w` for a
//!   caller-supplied `sigma`;
//! * [`norms`] evaluates `w`-norms and their byte-quantized under-approximation;
//! * [`sor`] runs step-asynchronous SOR under pluggable update schedules and
//!   stops as soon as the a-posteriori bound reaches the requested accuracy;
//! * [`rankings`] wraps the solver for Katz's index and PageRank;
//! * [`analysis`] provides Kendall's tau with ties and score rounding.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod norms;
pub mod operator;
pub mod rankings;
pub mod schedule;
pub mod sor;
pub mod sparse;
pub mod suitable;

pub use error::{Error, Result};
pub use norms::{QuantizedWeights, WeightVector};
pub use operator::{Operator, RankOneUpdate};
pub use schedule::{Jacobi, RandomPreorder, RealizedStep, Replay, ScheduleKind, Sequential, Sweep};
pub use sor::{Solution, SolveCertificate, SorConfig};
pub use sparse::SparseMatrix;
pub use suitable::{CollatzBounds, SuitableResult, SuitableStatus};
