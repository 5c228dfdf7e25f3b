//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use certsor_core::SparseMatrix;
use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Structural families of the random corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    General,
    ZeroDiagonal,
    NullRows,
    Reducible,
}

pub const FAMILIES: [Family; 4] = [Family::General, Family::ZeroDiagonal, Family::NullRows, Family::Reducible];

/// Dense row-major random nonnegative matrix of the given family.
pub fn random_dense(rng: &mut ChaCha8Rng, n: usize, density: f64, family: Family) -> Vec<f64> {
    let blocks = rng.random_range(2..=4usize);
    let block_of = |i: usize| i * blocks / n;
    let null_rows: Vec<bool> = (0..n).map(|_| family == Family::NullRows && rng.random_bool(0.25)).collect();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if null_rows[i] || !rng.random_bool(density) {
                continue;
            }
            if i == j && family == Family::ZeroDiagonal {
                continue;
            }
            if family == Family::Reducible && block_of(i) > block_of(j) {
                continue;
            }
            a[i * n + j] = rng.random_range(0.0..1.0);
        }
    }
    a
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, density: f64, family: Family) -> SparseMatrix {
    SparseMatrix::from_dense(n, &random_dense(rng, n, density, family)).unwrap()
}

pub fn to_dense(a: &SparseMatrix) -> DMatrix<f64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| a.get(i, j))
}

/// Solves `(sI - A) x = b` by dense LU.
pub fn dense_solve(a: &SparseMatrix, s: f64, b: &[f64]) -> Vec<f64> {
    let n = a.dim();
    let m = DMatrix::from_diagonal_element(n, n, s) - to_dense(a);
    m.lu().solve(&DVector::from_column_slice(b)).expect("nonsingular").as_slice().to_vec()
}

/// Solves a general dense system `m x = b` given row-major `m`.
pub fn dense_solve_general(n: usize, m: &[f64], b: &[f64]) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, m);
    m.lu().solve(&DVector::from_column_slice(b)).expect("nonsingular").as_slice().to_vec()
}

/// Bracket `(lo, hi)` on the spectral radius of a nonnegative matrix.
///
/// The radius is the maximum over strongly connected components. On each
/// component the shifted power iteration `v <- (B + I) v` converges to the
/// Perron vector, and the min/max of `(B v)_i / v_i` bracket `rho(B)`. Runs at
/// most `10^4` steps per component.
pub fn rho_oracle(a: &SparseMatrix) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut local = vec![usize::MAX; a.dim()];
    for comp in components(a) {
        for (k, &i) in comp.iter().enumerate() {
            local[i] = k;
        }
        // Rows of the block in local indices.
        let rows: Vec<Vec<(usize, f64)>> = comp
            .iter()
            .map(|&i| a.row(i).filter(|&(j, _)| local[j] != usize::MAX).map(|(j, v)| (local[j], v)).collect())
            .collect();
        let (l, h) = block_radius(&rows);
        lo = lo.max(l);
        hi = hi.max(h);
        for &i in &comp {
            local[i] = usize::MAX;
        }
    }
    (lo, hi)
}

fn components(a: &SparseMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    let mut g = DiGraph::<(), ()>::with_capacity(n, a.nnz());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for (j, _) in a.row(i) {
            g.add_edge(nodes[i], nodes[j], ());
        }
    }
    tarjan_scc(&g).into_iter().map(|c| c.into_iter().map(|v| v.index()).collect()).collect()
}

fn block_radius(rows: &[Vec<(usize, f64)>]) -> (f64, f64) {
    let k = rows.len();
    let mut v = vec![1.0; k];
    let mut bv = vec![0.0; k];
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..10_000 {
        for (i, row) in rows.iter().enumerate() {
            bv[i] = row.iter().map(|&(j, x)| x * v[j]).sum();
        }
        let (l, h) = bv.iter().zip(&v).fold((f64::INFINITY, 0.0f64), |(l, h), (x, y)| (l.min(x / y), h.max(x / y)));
        lo = lo.max(l);
        hi = hi.min(h);
        if hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
        let norm = bv.iter().zip(&v).map(|(x, y)| x + y).fold(0.0, f64::max);
        for i in 0..k {
            v[i] = (bv[i] + v[i]) / norm;
        }
    }
    (lo, hi)
}

/// True when the directed graph of `a` is strongly connected.
pub fn irreducible(a: &SparseMatrix) -> bool {
    a.dim() > 1 && components(a).len() == 1
}

/// Textbook Jacobi sweep for `(sI - A) x = b` on a dense row-major matrix.
pub fn textbook_jacobi(n: usize, a: &[f64], s: f64, b: &[f64], x: &[f64]) -> Vec<f64> {
    let mut next = vec![0.0; n];
    for i in 0..n {
        let mut acc = b[i];
        for j in 0..n {
            if j != i && a[i * n + j] != 0.0 {
                acc += a[i * n + j] * x[j];
            }
        }
        next[i] = acc / (s - a[i * n + i]);
    }
    next
}

/// Textbook Gauss–Seidel sweep in ascending index order.
pub fn textbook_gauss_seidel(n: usize, a: &[f64], s: f64, b: &[f64], x: &[f64]) -> Vec<f64> {
    let mut x = x.to_vec();
    for i in 0..n {
        let mut acc = b[i];
        for j in 0..n {
            if j != i && a[i * n + j] != 0.0 {
                acc += a[i * n + j] * x[j];
            }
        }
        x[i] = acc / (s - a[i * n + i]);
    }
    x
}

pub fn wnorm_of_diff(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    a.iter().zip(b).zip(w).map(|((a, b), w)| (a - b).abs() / w).fold(0.0, f64::max)
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

pub fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| (a - b).abs()).sum()
}

/// Random directed graph (row-major 0/1 adjacency) in which roughly
/// `dangling_fraction` of the nodes have no out-links and every other node
/// has at least one.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, dangling_fraction: f64) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    let dangling = ((n as f64 * dangling_fraction).round() as usize).max(1);
    for i in dangling..n {
        let degree = rng.random_range(1..=6usize.min(n - 1));
        for _ in 0..degree {
            let mut j = rng.random_range(0..n);
            if j == i {
                j = (j + 1) % n;
            }
            a[i * n + j] = 1.0;
        }
    }
    // Shuffle which nodes are dangling by a random relabeling.
    let mut perm: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), rng);
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[perm[i] * n + perm[j]] = a[i * n + j];
        }
    }
    out
}

/// Dense PageRank: solves `(I - alpha P^T) r = (1 - alpha) v`
/// with `P = G + d u^T`, `G` the row-normalized adjacency.
pub fn dense_pagerank(n: usize, adj: &[f64], alpha: f64, v: &[f64], u: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; n * n];
    for i in 0..n {
        let row: f64 = adj[i * n..(i + 1) * n].iter().sum();
        for j in 0..n {
            p[i * n + j] = if row > 0.0 { adj[i * n + j] / row } else { u[j] };
        }
    }
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = if i == j { 1.0 } else { 0.0 } - alpha * p[j * n + i];
        }
    }
    let rhs: Vec<f64> = v.iter().map(|x| (1.0 - alpha) * x).collect();
    dense_solve_general(n, &m, &rhs)
}

/// Chung–Lu style directed graph with power-law expected degrees.
pub fn power_law_graph(rng: &mut ChaCha8Rng, n: usize, arcs: usize, exponent: f64) -> SparseMatrix {
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-1.0 / (exponent - 1.0))).collect();
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for w in &weights {
        acc += w;
        cumulative.push(acc);
    }
    let draw = |rng: &mut ChaCha8Rng| {
        let x = rng.random_range(0.0..acc);
        cumulative.partition_point(|&c| c <= x).min(n - 1)
    };
    let mut triplets = Vec::with_capacity(arcs);
    for _ in 0..arcs {
        let u = draw(rng);
        let v = draw(rng);
        if u != v {
            triplets.push((u, v, 1.0));
        }
    }
    // Collapse multi-arcs to a 0/1 adjacency.
    let a = SparseMatrix::from_triplets(n, triplets).unwrap();
    let values = vec![1.0; a.nnz()];
    SparseMatrix::from_csr(n, a.row_offsets().to_vec(), a.col_indices().to_vec(), values).unwrap()
}

/// Brute-force pair counts `(sum sgn sgn, untied in r, untied in s)`.
pub fn brute_force_tau_counts(r: &[f64], s: &[f64]) -> (i64, u64, u64) {
    let n = r.len();
    let (mut c, mut ur, mut us) = (0i64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let a = sgn(r[i] - r[j]);
            let b = sgn(s[i] - s[j]);
            c += a * b;
            ur += (a != 0) as u64;
            us += (b != 0) as u64;
        }
    }
    (c, ur, us)
}

fn sgn(x: f64) -> i64 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}
