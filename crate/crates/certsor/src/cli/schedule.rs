//! Schedules selectable from the command line.

use certsor_core::sor::Relaxation;
use certsor_core::{Jacobi, Operator, RandomPreorder, ScheduleKind, Sequential, Sweep};

use crate::error::{Error, Result};
use crate::parallel::ParallelBlocks;

/// `seq`, `jacobi`, `random:SEED` or `par:K`.
///
/// A bare `random` takes the global seed and fails without one; a bare `par`
/// takes the global thread count.
pub fn parse_schedule(text: &str, seed: Option<u64>, threads: usize) -> Result<ScheduleKind> {
    match text {
        "random" => seed
            .map(|seed| ScheduleKind::RandomPreorder { seed })
            .ok_or_else(|| Error::Usage("random schedules need a seed: use random:SEED or --seed".into())),
        "par" => Ok(ScheduleKind::ParallelBlocks { workers: threads }),
        "replay" => Err(Error::Usage("replay schedules are not available from the command line".into())),
        _ => text.parse().map_err(Error::from),
    }
}

pub enum CliSchedule {
    Sequential(Sequential),
    Jacobi(Jacobi),
    Random(RandomPreorder),
    Parallel(ParallelBlocks),
}

impl CliSchedule {
    pub fn new(kind: ScheduleKind, n: usize) -> Result<Self> {
        Ok(match kind {
            ScheduleKind::Sequential => CliSchedule::Sequential(Sequential::identity(n)),
            ScheduleKind::Jacobi => CliSchedule::Jacobi(Jacobi),
            ScheduleKind::RandomPreorder { seed } => CliSchedule::Random(RandomPreorder::new(seed)),
            ScheduleKind::ParallelBlocks { workers } => CliSchedule::Parallel(ParallelBlocks::new(workers)?),
            ScheduleKind::Replay => return Err(Error::Usage("replay schedules need recorded steps".into())),
        })
    }
}

impl Sweep for CliSchedule {
    fn kind(&self) -> ScheduleKind {
        match self {
            CliSchedule::Sequential(s) => s.kind(),
            CliSchedule::Jacobi(s) => s.kind(),
            CliSchedule::Random(s) => s.kind(),
            CliSchedule::Parallel(s) => s.kind(),
        }
    }

    fn sweep<O>(
        &mut self,
        a: &O,
        b: &[f64],
        x_old: &[f64],
        x_new: &mut [f64],
        relax: Relaxation,
        t: usize,
    ) -> certsor_core::Result<()>
    where
        O: Operator + ?Sized,
    {
        match self {
            CliSchedule::Sequential(s) => s.sweep(a, b, x_old, x_new, relax, t),
            CliSchedule::Jacobi(s) => s.sweep(a, b, x_old, x_new, relax, t),
            CliSchedule::Random(s) => s.sweep(a, b, x_old, x_new, relax, t),
            CliSchedule::Parallel(s) => s.sweep(a, b, x_old, x_new, relax, t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_schedule("seq", None, 2).unwrap(), ScheduleKind::Sequential);
        assert_eq!(parse_schedule("random:7", None, 2).unwrap(), ScheduleKind::RandomPreorder { seed: 7 });
        assert_eq!(parse_schedule("random", Some(3), 2).unwrap(), ScheduleKind::RandomPreorder { seed: 3 });
        assert!(matches!(parse_schedule("random", None, 2), Err(Error::Usage(_))));
        assert_eq!(parse_schedule("par", None, 6).unwrap(), ScheduleKind::ParallelBlocks { workers: 6 });
        assert_eq!(parse_schedule("par:4", None, 6).unwrap(), ScheduleKind::ParallelBlocks { workers: 4 });
        assert_eq!(parse_schedule("par:0", None, 6).unwrap_err().exit_code(), 2);
        assert!(parse_schedule("gauss", None, 1).is_err());
    }
}
