mod common;

use certsor_core::rankings::{katz, pagerank, pseudorank, strong_pagerank, RankingOptions};
use certsor_core::sor::{certified_sup_bound, solve};
use certsor_core::suitable::{compute_suitable, spectral_radius_bracket, SuitableOptions};
use certsor_core::{Error, Jacobi, RandomPreorder, Sequential, SorConfig, SparseMatrix};
use common::*;
use rand::Rng;

fn tight() -> RankingOptions {
    RankingOptions { target_error: 1e-13, ..Default::default() }
}

#[test]
fn random_system_bound_dominates_dense_error() {
    let mut g = rng(50);
    for trial in 0..20 {
        let n = 50;
        // Scale rows so that the spectral radius stays below 1.
        let mut dense = random_dense(&mut g, n, 0.2, FAMILIES[trial % 4]);
        for i in 0..n {
            let sum: f64 = dense[i * n..(i + 1) * n].iter().sum();
            if sum > 0.0 {
                let target = g.random_range(0.1..0.95);
                for v in &mut dense[i * n..(i + 1) * n] {
                    *v *= target / sum;
                }
            }
        }
        let a = SparseMatrix::from_dense(n, &dense).unwrap();
        let (_, rho) = rho_oracle(&a);
        assert!(rho < 1.0);
        let sigma = 0.5 * (1.0 + rho.max(a.diag().iter().copied().fold(0.0, f64::max)));
        let suit = compute_suitable(&a, sigma, SuitableOptions::default()).unwrap();
        let w = suit.suitable_weights().unwrap().clone();
        let b: Vec<f64> = (0..n).map(|_| g.random_range(-1.0..1.0)).collect();
        let exact = dense_solve(&a, 1.0, &b);
        let cfg = SorConfig::new(1.0, sigma, w.clone());
        for sol in [
            solve(&a, &b, &cfg, &mut Sequential::identity(n)).unwrap(),
            solve(&a, &b, &cfg, &mut Jacobi).unwrap(),
            solve(&a, &b, &cfg, &mut RandomPreorder::new(trial as u64)).unwrap(),
        ] {
            let err = sup_diff(&exact, &sol.x);
            assert!(err <= sol.certificate.supnorm_bound, "{err} > {}", sol.certificate.supnorm_bound);
            assert!(sol.certificate.supnorm_bound <= cfg.target_error);
            assert!(certified_sup_bound(&sol.certificate, &w) >= sol.certificate.supnorm_bound);
        }
    }
}

#[test]
fn katz_on_a_path_matches_dense_solve() {
    // 0 -> 1 -> 2
    let m = SparseMatrix::from_triplets(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    let mt = m.transpose();
    let suit = compute_suitable(&mt, 1.0, SuitableOptions::default()).unwrap();
    let k = katz(&mt, 0.25, &[1.0; 3], &suit, &tight(), &mut Sequential::identity(3)).unwrap();
    // k^T = 1^T (I - 0.25 M)^{-1}, i.e. (I / 0.25 - M^T) k = 1 / 0.25.
    let exact = dense_solve(&mt, 4.0, &[4.0; 3]);
    assert!((exact[2] - (1.0 + 0.25 + 0.0625)).abs() < 1e-15);
    assert!(sup_diff(&exact, &k.x) <= k.certificate.supnorm_bound);
}

#[test]
fn one_suitable_vector_certifies_a_damping_sweep() {
    let mut g = rng(62);
    let m = random_matrix(&mut g, 40, 0.15, common::Family::General);
    let mt = m.transpose();
    let sigma = 1.05 * spectral_radius_bracket(&mt, 100).unwrap().upper;
    let suit = compute_suitable(&mt, sigma, SuitableOptions::default()).unwrap();
    let v: Vec<f64> = (0..40).map(|_| g.random_range(0.0..1.0)).collect();
    for frac in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let alpha = frac / sigma;
        let k = katz(&mt, alpha, &v, &suit, &RankingOptions::default(), &mut Sequential::identity(40)).unwrap();
        let scaled: Vec<f64> = v.iter().map(|x| x / alpha).collect();
        let exact = dense_solve(&mt, 1.0 / alpha, &scaled);
        assert!(sup_diff(&exact, &k.x) <= k.certificate.supnorm_bound);
    }
    assert_eq!(
        katz(&mt, 1.0 / sigma, &v, &suit, &RankingOptions::default(), &mut Jacobi).unwrap_err(),
        Error::InvalidDamping(1.0 / sigma)
    );
}

fn five_node_graph() -> Vec<f64> {
    // Node 4 is dangling.
    #[rustfmt::skip]
    let adj = vec![
        0.0, 1.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0, 1.0,
        1.0, 0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
    ];
    adj
}

#[test]
fn pseudorank_normalizes_to_strong_pagerank() {
    let adj = five_node_graph();
    let (g, _) = SparseMatrix::from_dense(5, &adj).unwrap().row_normalize();
    let gt = g.transpose();
    let v = [0.1, 0.3, 0.2, 0.25, 0.15];
    let suit = compute_suitable(&gt, 1.1, SuitableOptions::default()).unwrap();
    let exact = dense_pagerank(5, &adj, 0.85, &v, &v);
    let pr = strong_pagerank(&gt, 0.85, &v, &suit, &tight(), &mut Sequential::identity(5)).unwrap();
    assert!(sup_diff(&pr.scores, &exact) <= 1e-10);
    assert!((pr.scores.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    // With a dangling node the pseudorank loses mass.
    assert!(pr.pseudorank_l1 < 1.0);
    let p = pseudorank(&gt, 0.85, &v, &suit, &tight(), &mut Jacobi).unwrap();
    assert!(sup_diff(&p.x, &pr.pseudorank) <= p.certificate.supnorm_bound + pr.certificate.supnorm_bound);
}

#[test]
fn pseudorank_without_dangling_nodes_is_pagerank() {
    let adj = vec![0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0];
    let (g, d) = SparseMatrix::from_dense(3, &adj).unwrap().row_normalize();
    assert_eq!(d, vec![0.0; 3]);
    let gt = g.transpose();
    let v = [1.0 / 3.0; 3];
    let suit = compute_suitable(&gt, 1.1, SuitableOptions::default()).unwrap();
    let p = pseudorank(&gt, 0.85, &v, &suit, &tight(), &mut Sequential::identity(3)).unwrap();
    let exact = dense_pagerank(3, &adj, 0.85, &v, &v);
    assert!(sup_diff(&p.x, &exact) <= p.certificate.supnorm_bound);
    assert!((p.x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn generic_pagerank_matches_dense_solve() {
    let adj = five_node_graph();
    let (g, d) = SparseMatrix::from_dense(5, &adj).unwrap().row_normalize();
    let gt = g.transpose();
    let v = [0.2; 5];
    let u = [0.0, 0.0, 0.5, 0.5, 0.0];
    let op = certsor_core::rankings::pagerank_operator(&gt, &d, &u).unwrap();
    let suit = compute_suitable(&op, 1.1, SuitableOptions::default()).unwrap();
    let exact = dense_pagerank(5, &adj, 0.85, &v, &u);
    for seed in 0..5 {
        let sol = pagerank(&gt, &d, 0.85, &v, &u, &suit, &tight(), &mut RandomPreorder::new(seed)).unwrap();
        assert!(sup_diff(&sol.x, &exact) <= sol.certificate.supnorm_bound);
    }
    assert!((exact.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn spectral_radius_bracket_tightens() {
    let a = SparseMatrix::from_dense(2, &[0.0, 2.0, 2.0, 0.0]).unwrap();
    let b = spectral_radius_bracket(&a, 1).unwrap();
    assert!(b.lower <= 2.0 && 2.0 <= b.upper);
    let mut g = rng(3);
    let a = random_matrix(&mut g, 30, 0.3, common::Family::General);
    let (lo, hi) = rho_oracle(&a);
    let mut last = f64::INFINITY;
    for it in [1, 4, 16, 64] {
        let b = spectral_radius_bracket(&a, it).unwrap();
        assert!(b.lower <= hi + 1e-12 && b.upper >= lo - 1e-12);
        assert!(b.width() <= last);
        last = b.width();
    }
}
