//! Update schedules for step-asynchronous SOR.
//!
//! Within one sweep every component is updated exactly once. The timing of
//! the updates is a total preorder on the indices (ties are simultaneous
//! updates). When updating `x_i`, values of components updated at the same
//! time or later *must* come from the previous iterate; values of components
//! updated strictly earlier may come from either iterate. A schedule fixes
//! both the preorder and, for every stored entry `a_ij`, which of the two
//! values is read.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::sor::{relax_component, Relaxation};
use crate::sparse::SparseMatrix;

/// Tag describing a schedule, as written to certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Sequential,
    Jacobi,
    RandomPreorder { seed: u64 },
    ParallelBlocks { workers: usize },
    Replay,
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleKind::Sequential => f.write_str("seq"),
            ScheduleKind::Jacobi => f.write_str("jacobi"),
            ScheduleKind::RandomPreorder { seed } => write!(f, "random:{seed}"),
            ScheduleKind::ParallelBlocks { workers } => write!(f, "par:{workers}"),
            ScheduleKind::Replay => f.write_str("replay"),
        }
    }
}

impl FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seq" => return Ok(ScheduleKind::Sequential),
            "jacobi" => return Ok(ScheduleKind::Jacobi),
            "replay" => return Ok(ScheduleKind::Replay),
            _ => {}
        }
        if let Some(seed) = s.strip_prefix("random:") {
            let seed = seed.parse().map_err(|_| Error::InvalidSchedule("random:SEED needs an integer seed"))?;
            return Ok(ScheduleKind::RandomPreorder { seed });
        }
        if let Some(k) = s.strip_prefix("par:") {
            let workers: usize =
                k.parse().map_err(|_| Error::InvalidSchedule("par:K needs an integer worker count"))?;
            if workers == 0 {
                return Err(Error::InvalidSchedule("par:K needs at least one worker"));
            }
            return Ok(ScheduleKind::ParallelBlocks { workers });
        }
        Err(Error::InvalidSchedule("expected seq, jacobi, random:SEED or par:K"))
    }
}

/// One sweep of step-asynchronous SOR.
pub trait Sweep {
    fn kind(&self) -> ScheduleKind;

    /// Computes `x_new` from `x_old` for sweep number `t`.
    fn sweep<O>(
        &mut self,
        a: &O,
        b: &[f64],
        x_old: &[f64],
        x_new: &mut [f64],
        relax: Relaxation,
        t: usize,
    ) -> Result<()>
    where
        O: Operator + ?Sized;
}

impl<S: Sweep + ?Sized> Sweep for &mut S {
    fn kind(&self) -> ScheduleKind {
        (**self).kind()
    }

    fn sweep<O>(
        &mut self,
        a: &O,
        b: &[f64],
        x_old: &[f64],
        x_new: &mut [f64],
        relax: Relaxation,
        t: usize,
    ) -> Result<()>
    where
        O: Operator + ?Sized,
    {
        (**self).sweep(a, b, x_old, x_new, relax, t)
    }
}

/// In-place sweep in a fixed order; with the identity order and `omega = 1`
/// this is textbook Gauss–Seidel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequential {
    order: Vec<usize>,
}

impl Sequential {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || core::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidSchedule("order is not a permutation"));
            }
        }
        Ok(Sequential { order })
    }

    pub fn identity(n: usize) -> Self {
        Sequential { order: (0..n).collect() }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

impl Sweep for Sequential {
    fn kind(&self) -> ScheduleKind {
        ScheduleKind::Sequential
    }

    fn sweep<O>(
        &mut self,
        a: &O,
        b: &[f64],
        x_old: &[f64],
        x_new: &mut [f64],
        relax: Relaxation,
        _t: usize,
    ) -> Result<()>
    where
        O: Operator + ?Sized,
    {
        if self.order.len() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: self.order.len() });
        }
        x_new.copy_from_slice(x_old);
        let ctx = a.sweep_context(x_old);
        for &i in &self.order {
            let v = relax_component(a, i, b[i], x_old, ctx, relax, |j, _| x_new[j]);
            x_new[i] = v;
        }
        Ok(())
    }
}

/// Every component is updated simultaneously from the previous iterate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Jacobi;

impl Sweep for Jacobi {
    fn kind(&self) -> ScheduleKind {
        ScheduleKind::Jacobi
    }

    fn sweep<O>(
        &mut self,
        a: &O,
        b: &[f64],
        x_old: &[f64],
        x_new: &mut [f64],
        relax: Relaxation,
        _t: usize,
    ) -> Result<()>
    where
        O: Operator + ?Sized,
    {
        let ctx = a.sweep_context(x_old);
        for (i, out) in x_new.iter_mut().enumerate() {
            *out = relax_component(a, i, b[i], x_old, ctx, relax, |j, _| x_old[j]);
        }
        Ok(())
    }
}

/// A fully specified sweep: update levels (the preorder, lower first) and,
/// for each CSR position of the stored matrix, whether the fresh value is read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedStep {
    pub levels: Vec<u64>,
    pub fresh: Vec<bool>,
}

impl RealizedStep {
    /// Checks that a fresh read of `x_j` while updating `x_i` only happens
    /// when `j` is updated strictly before `i`.
    pub fn check_compatible(&self, a: &SparseMatrix) -> Result<()> {
        if self.levels.len() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: self.levels.len() });
        }
        if self.fresh.len() != a.nnz() {
            return Err(Error::DimensionMismatch { expected: a.nnz(), found: self.fresh.len() });
        }
        for i in 0..a.dim() {
            for k in a.row_range(i) {
                let j = a.col_indices()[k];
                if self.fresh[k] && !(self.levels[j] < self.levels[i]) {
                    return Err(Error::InvalidSchedule("fresh read of a value not yet updated"));
                }
            }
        }
        Ok(())
    }

    /// Indices in update order; ties keep ascending index order.
    pub fn update_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.levels.len()).collect();
        order.sort_by_key(|&i| self.levels[i]);
        order
    }

    fn execute<O>(&self, a: &O, b: &[f64], x_old: &[f64], x_new: &mut [f64], relax: Relaxation)
    where
        O: Operator + ?Sized,
    {
        x_new.copy_from_slice(x_old);
        let ctx = a.sweep_context(x_old);
        for i in self.update_order() {
            let fresh = &self.fresh;
            let v = relax_component(a, i, b[i], x_old, ctx, relax, |j, k| if fresh[k] { x_new[j] } else { x_old[j] });
            x_new[i] = v;
        }
    }
}

/// Random preorders drawn independently for every sweep.
///
/// Each sweep shuffles the indices, cuts the shuffled sequence into tie
/// groups at random, and then flips a fair coin for every stored entry whose
/// column is updated strictly earlier to decide between fresh and previous
/// value. Sweep `t` depends only on `(seed, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomPreorder {
    seed: u64,
}

impl RandomPreorder {
    pub fn new(seed: u64) -> Self {
        RandomPreorder { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn realize(&self, a: &SparseMatrix, t: usize) -> RealizedStep {
        let n = a.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(t as u64);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut levels = vec![0u64; n];
        let mut level = 0u64;
        for (pos, &i) in perm.iter().enumerate() {
            if pos > 0 && rng.random_bool(0.5) {
                level += 1;
            }
            levels[i] = level;
        }
        let mut fresh = vec![false; a.nnz()];
        for i in 0..n {
            for k in a.row_range(i) {
                let j = a.col_indices()[k];
                fresh[k] = levels[j] < levels[i] && rng.random_bool(0.5);
            }
        }
        RealizedStep { levels, fresh }
    }
}

impl Sweep for RandomPreorder {
    fn kind(&self) -> ScheduleKind {
        ScheduleKind::RandomPreorder { seed: self.seed }
    }

    fn sweep<O>(
        &mut self,
        a: &O,
        b: &[f64],
        x_old: &[f64],
        x_new: &mut [f64],
        relax: Relaxation,
        t: usize,
    ) -> Result<()>
    where
        O: Operator + ?Sized,
    {
        self.realize(a.stored(), t).execute(a, b, x_old, x_new, relax);
        Ok(())
    }
}

/// Replays recorded sweeps; sweep `t` uses `steps[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    steps: Vec<RealizedStep>,
}

impl Replay {
    pub fn new(steps: Vec<RealizedStep>) -> Self {
        Replay { steps }
    }

    pub fn steps(&self) -> &[RealizedStep] {
        &self.steps
    }
}

impl Sweep for Replay {
    fn kind(&self) -> ScheduleKind {
        ScheduleKind::Replay
    }

    fn sweep<O>(
        &mut self,
        a: &O,
        b: &[f64],
        x_old: &[f64],
        x_new: &mut [f64],
        relax: Relaxation,
        t: usize,
    ) -> Result<()>
    where
        O: Operator + ?Sized,
    {
        let step = self.steps.get(t).ok_or(Error::InvalidSchedule("no recorded step for this sweep"))?;
        step.check_compatible(a.stored())?;
        step.execute(a, b, x_old, x_new, relax);
        Ok(())
    }
}
