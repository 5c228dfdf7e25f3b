//! Synthetic graphs for benchmarks.

use certsor_core::SparseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Directed graph with power-law expected degrees (Chung–Lu model).
///
/// Node `i` gets weight `(i + 1)^(-1 / (exponent - 1))`; each of `arcs` draws
/// picks both endpoints proportionally to weight. Self loops are dropped and
/// repeated arcs collapse, so the result is a 0/1 adjacency matrix with at most
/// `arcs` entries. The graph depends only on the arguments.
pub fn power_law_graph(n: usize, arcs: usize, exponent: f64, seed: u64) -> SparseMatrix {
    if n == 0 {
        return SparseMatrix::zeros(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cumulative = Vec::with_capacity(n);
    let mut total = 0.0;
    for i in 0..n {
        total += ((i + 1) as f64).powf(-1.0 / (exponent - 1.0));
        cumulative.push(total);
    }
    let draw = |rng: &mut ChaCha8Rng| {
        let x = rng.random_range(0.0..total);
        cumulative.partition_point(|&c| c <= x).min(n - 1)
    };
    let mut triplets = Vec::with_capacity(arcs);
    for _ in 0..arcs {
        let u = draw(&mut rng);
        let v = draw(&mut rng);
        if u != v {
            triplets.push((u, v, 1.0));
        }
    }
    let summed = SparseMatrix::from_triplets(n, triplets).expect("indices are in range");
    let ones = vec![1.0; summed.nnz()];
    SparseMatrix::from_csr(n, summed.row_offsets().to_vec(), summed.col_indices().to_vec(), ones)
        .expect("structure comes from a valid matrix")
}
