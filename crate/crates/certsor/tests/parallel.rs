mod common;

use certsor::ParallelBlocks;
use certsor_core::sor::solve;
use certsor_core::suitable::{compute_suitable, spectral_radius_bracket, SuitableOptions};
use certsor_core::{Replay, Sequential, SorConfig, SparseMatrix};
use common::*;
use rand::Rng;

fn config(a: &SparseMatrix, omega: f64) -> SorConfig {
    let upper = spectral_radius_bracket(a, 50).unwrap().upper.max(1e-3);
    let sigma = 1.1 * upper;
    let w = compute_suitable(a, sigma, SuitableOptions::default()).unwrap().weights.unwrap();
    SorConfig::new(1.5 * upper, sigma, w).with_omega(omega).with_target_error(1e-11)
}

#[test]
fn parallel_runs_are_realizable_by_a_preorder_schedule() {
    let mut g = rng(11);
    for (trial, n) in [16usize, 100, 400, 1024].into_iter().enumerate() {
        let density = (8.0 / n as f64).min(0.5);
        let a = random_matrix(&mut g, n, density);
        let b: Vec<f64> = (0..n).map(|_| g.random_range(-1.0..1.0)).collect();
        for workers in [2, 3, 4, 8] {
            let cfg = config(&a, [1.0, 0.7, 0.9][trial % 3]);
            let mut par = ParallelBlocks::recording(workers).unwrap();
            let sol = solve(&a, &b, &cfg, &mut par).unwrap();
            let steps = par.take_recorded();
            assert_eq!(steps.len(), sol.certificate.iterations);
            for step in &steps {
                step.check_compatible(&a).unwrap();
                let mut sorted = step.levels.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), n, "each component is written exactly once");
            }
            let replayed = solve(&a, &b, &cfg, &mut Replay::new(steps)).unwrap();
            assert_eq!(replayed.x, sol.x, "n = {n}, workers = {workers}");
            assert_eq!(replayed.certificate.iterations, sol.certificate.iterations);
        }
    }
}

#[test]
fn parallel_and_sequential_agree_within_their_bounds() {
    let mut g = rng(12);
    for _ in 0..10 {
        let n = g.random_range(50..300);
        let a = random_matrix(&mut g, n, 0.05);
        let b: Vec<f64> = (0..n).map(|_| g.random_range(0.0..1.0)).collect();
        let cfg = config(&a, 1.0);
        let seq = solve(&a, &b, &cfg, &mut Sequential::identity(n)).unwrap();
        let par = solve(&a, &b, &cfg, &mut ParallelBlocks::new(4).unwrap()).unwrap();
        let gap = sup_diff(&seq.x, &par.x);
        assert!(gap <= seq.certificate.supnorm_bound + par.certificate.supnorm_bound);
    }
}
