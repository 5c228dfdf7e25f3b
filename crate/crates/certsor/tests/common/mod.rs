//! Oracles and helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use certsor_core::SparseMatrix;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random nonnegative matrix with roughly `density * n^2` entries.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, density: f64) -> SparseMatrix {
    let mut triplets = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.random_bool(density) {
                triplets.push((i, j, rng.random_range(0.01..1.0)));
            }
        }
    }
    SparseMatrix::from_triplets(n, triplets).unwrap()
}

/// Solves the dense system `m x = b` given row-major `m`.
pub fn dense_solve(n: usize, m: &[f64], b: &[f64]) -> Vec<f64> {
    DMatrix::from_row_slice(n, n, m)
        .lu()
        .solve(&DVector::from_column_slice(b))
        .expect("nonsingular")
        .as_slice()
        .to_vec()
}

/// Katz scores `k` with `k^T = v^T (I - alpha M)^{-1}` for a dense adjacency.
pub fn dense_katz(n: usize, adj: &[f64], alpha: f64, v: &[f64]) -> Vec<f64> {
    // (I - alpha M^T) k = v.
    let m: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            (i == j) as u8 as f64 - alpha * adj[j * n + i]
        })
        .collect();
    dense_solve(n, &m, v)
}

/// Strongly preferential PageRank of a dense adjacency, dangling rows
/// redistributed along `v`.
pub fn dense_pagerank(n: usize, adj: &[f64], alpha: f64, v: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; n * n];
    for i in 0..n {
        let out: f64 = adj[i * n..(i + 1) * n].iter().sum();
        for j in 0..n {
            p[i * n + j] = if out > 0.0 { adj[i * n + j] / out } else { v[j] };
        }
    }
    let m: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            (i == j) as u8 as f64 - alpha * p[j * n + i]
        })
        .collect();
    let rhs: Vec<f64> = v.iter().map(|x| (1.0 - alpha) * x).collect();
    dense_solve(n, &m, &rhs)
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Runs the `certsor` binary.
pub fn certsor(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certsor")).args(args).current_dir(dir).output().expect("binary runs")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[track_caller]
pub fn assert_success(out: &Output) {
    assert!(out.status.success(), "exit {:?}\nstdout: {}\nstderr: {}", out.status.code(), stdout(out), stderr(out));
}

pub fn json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}
