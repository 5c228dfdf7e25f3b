//! Shared-memory parallel schedule.
//!
//! The iterate lives in a vector of 64-bit atomics. Each worker owns a
//! contiguous block of indices, updates it in ascending order and reads every
//! other component from whatever value is currently visible. Joining the
//! workers at the end of a sweep is the barrier between iterations, so no
//! value older than the previous iterate is ever read.
//!
//! In recording mode every write draws a ticket from a global counter just
//! before it is published, and every read notes whether it saw a value that
//! differs from the previous iterate. Tickets are a total order of the
//! updates; a fresh read of `x_j` while updating `x_i` implies that `j`'s
//! ticket is smaller than `i`'s. The recorded [`RealizedStep`]s therefore
//! replay the run exactly under [`certsor_core::Replay`].

use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use certsor_core::sor::{relax_component, Relaxation};
use certsor_core::{Error, Operator, RealizedStep, ScheduleKind, Sweep};

#[derive(Debug)]
pub struct ParallelBlocks {
    workers: usize,
    shared: Vec<AtomicU64>,
    recorded: Option<Vec<RealizedStep>>,
}

impl ParallelBlocks {
    pub fn new(workers: usize) -> certsor_core::Result<Self> {
        if workers == 0 {
            return Err(Error::InvalidSchedule("par:K needs at least one worker"));
        }
        Ok(ParallelBlocks { workers, shared: Vec::new(), recorded: None })
    }

    /// Like [`ParallelBlocks::new`], but keeps a [`RealizedStep`] per sweep.
    pub fn recording(workers: usize) -> certsor_core::Result<Self> {
        let mut p = Self::new(workers)?;
        p.recorded = Some(Vec::new());
        Ok(p)
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Recorded sweeps so far, in order. Empty unless recording.
    pub fn take_recorded(&mut self) -> Vec<RealizedStep> {
        self.recorded.as_mut().map(std::mem::take).unwrap_or_default()
    }
}

/// Per-worker state of one sweep.
struct Block<'a> {
    rows: std::ops::Range<usize>,
    // Recording only: levels of `rows` and freshness of their CSR positions.
    levels: &'a mut [u64],
    fresh: &'a mut [bool],
    fresh_offset: usize,
}

impl Sweep for ParallelBlocks {
    fn kind(&self) -> ScheduleKind {
        ScheduleKind::ParallelBlocks { workers: self.workers }
    }

    fn sweep<O>(
        &mut self,
        a: &O,
        b: &[f64],
        x_old: &[f64],
        x_new: &mut [f64],
        relax: Relaxation,
        _t: usize,
    ) -> certsor_core::Result<()>
    where
        O: Operator + ?Sized,
    {
        let n = a.dim();
        if self.shared.len() != n {
            self.shared = (0..n).map(|_| AtomicU64::new(0)).collect();
        }
        for (cell, v) in self.shared.iter().zip(x_old) {
            cell.store(v.to_bits(), Ordering::Relaxed);
        }
        let record = self.recorded.is_some();
        let stored = a.stored();
        let offsets = stored.row_offsets();
        let mut levels = if record { vec![0u64; n] } else { Vec::new() };
        let mut fresh = if record { vec![false; stored.nnz()] } else { Vec::new() };

        // Cut the index range and, when recording, the per-row buffers.
        let chunk = n.div_ceil(self.workers).max(1);
        let mut blocks = Vec::with_capacity(self.workers);
        let (mut level_rest, mut fresh_rest) = (levels.as_mut_slice(), fresh.as_mut_slice());
        let mut start = 0;
        while start < n {
            let end = (start + chunk).min(n);
            let (lv, fr) = if record {
                let (lv, lr) = std::mem::take(&mut level_rest).split_at_mut(end - start);
                let (fr, rest) = std::mem::take(&mut fresh_rest).split_at_mut(offsets[end] - offsets[start]);
                level_rest = lr;
                fresh_rest = rest;
                (lv, fr)
            } else {
                (&mut [][..], &mut [][..])
            };
            blocks.push(Block { rows: start..end, levels: lv, fresh: fr, fresh_offset: offsets[start] });
            start = end;
        }

        let shared = &self.shared;
        let clock = AtomicU64::new(0);
        let ctx = a.sweep_context(x_old);
        let run = |block: Block<'_>| {
            let Block { rows, levels, fresh, fresh_offset } = block;
            for i in rows.clone() {
                let v = if record {
                    relax_component(a, i, b[i], x_old, ctx, relax, |j, k| {
                        let bits = shared[j].load(Ordering::SeqCst);
                        fresh[k - fresh_offset] = bits != x_old[j].to_bits();
                        f64::from_bits(bits)
                    })
                } else {
                    relax_component(a, i, b[i], x_old, ctx, relax, |j, _| {
                        f64::from_bits(shared[j].load(Ordering::Relaxed))
                    })
                };
                if record {
                    levels[i - rows.start] = clock.fetch_add(1, Ordering::SeqCst);
                    shared[i].store(v.to_bits(), Ordering::SeqCst);
                } else {
                    shared[i].store(v.to_bits(), Ordering::Relaxed);
                }
            }
        };
        let run = &run;
        thread::scope(|scope| {
            let mut blocks = blocks.into_iter();
            let first = blocks.next();
            for block in blocks {
                scope.spawn(move || run(block));
            }
            if let Some(block) = first {
                run(block);
            }
        });

        for (out, cell) in x_new.iter_mut().zip(shared) {
            *out = f64::from_bits(cell.load(Ordering::Relaxed));
        }
        if let Some(steps) = &mut self.recorded {
            steps.push(RealizedStep { levels, fresh });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use certsor_core::sor::{solve, sor_step};
    use certsor_core::suitable::{compute_suitable, SuitableOptions};
    use certsor_core::{Jacobi, Replay, SorConfig, SparseMatrix};

    fn cycle(n: usize) -> SparseMatrix {
        SparseMatrix::from_triplets(n, (0..n).map(|i| (i, (i + 1) % n, 0.5))).unwrap()
    }

    #[test]
    fn one_worker_is_gauss_seidel() {
        let a = cycle(7);
        let b = vec![1.0; 7];
        let w = compute_suitable(&a, 0.6, SuitableOptions::default()).unwrap().weights.unwrap();
        let cfg = SorConfig::new(1.0, 0.6, w);
        let x = vec![0.25; 7];
        let par = sor_step(&a, &b, &x, &cfg, &mut ParallelBlocks::new(1).unwrap(), 0).unwrap();
        let seq = sor_step(&a, &b, &x, &cfg, &mut certsor_core::Sequential::identity(7), 0).unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn more_workers_than_rows() {
        let a = cycle(3);
        let b = vec![1.0; 3];
        let w = compute_suitable(&a, 0.6, SuitableOptions::default()).unwrap().weights.unwrap();
        let cfg = SorConfig::new(1.0, 0.6, w);
        let sol = solve(&a, &b, &cfg, &mut ParallelBlocks::new(8).unwrap()).unwrap();
        assert!(sol.x.iter().all(|&v| (v - 2.0).abs() <= sol.certificate.supnorm_bound));
        assert_eq!(sol.certificate.schedule, ScheduleKind::ParallelBlocks { workers: 8 });
    }

    #[test]
    fn recorded_sweeps_replay_exactly() {
        let a = cycle(50);
        let b: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let w = compute_suitable(&a, 0.6, SuitableOptions::default()).unwrap().weights.unwrap();
        let cfg = SorConfig::new(1.0, 0.6, w);
        let mut par = ParallelBlocks::recording(4).unwrap();
        let sol = solve(&a, &b, &cfg, &mut par).unwrap();
        let steps = par.take_recorded();
        assert_eq!(steps.len(), sol.certificate.iterations);
        for step in &steps {
            step.check_compatible(&a).unwrap();
        }
        let replayed = solve(&a, &b, &cfg, &mut Replay::new(steps)).unwrap();
        assert_eq!(replayed.x, sol.x);
        // Without recording the parallel schedule is not Jacobi in general,
        // but both converge to the same solution.
        let jac = solve(&a, &b, &cfg, &mut Jacobi).unwrap();
        let gap = sol.x.iter().zip(&jac.x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(gap <= sol.certificate.supnorm_bound + jac.certificate.supnorm_bound);
    }
}
