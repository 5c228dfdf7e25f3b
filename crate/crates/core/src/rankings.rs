//! Katz's index and PageRank on top of the certified solver.
//!
//! Both rankings are row-vector systems `k^T = v^T (I - alpha M)^{-1}`; they
//! are solved in transposed (column) form `(I / alpha - M^T) k = v / alpha`,
//! i.e. with shift `s = 1 / alpha` on the system matrix `M^T`. Every function
//! here therefore takes the *transposed* matrix.
//!
//! A single vector that is sigma-suitable for `M^T` certifies every
//! `alpha < 1 / sigma`, so a damping sweep needs one suitability search.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::operator::{Operator, RankOneUpdate};
use crate::schedule::Sweep;
use crate::sor::{solve, Solution, SolveCertificate, SorConfig};
use crate::sparse::SparseMatrix;
use crate::suitable::SuitableResult;

/// Solver settings shared by every ranking driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankingOptions {
    pub omega: f64,
    pub target_error: f64,
    pub max_iterations: usize,
    pub use_quantized: bool,
}

impl Default for RankingOptions {
    fn default() -> Self {
        RankingOptions {
            omega: 1.0,
            target_error: SorConfig::DEFAULT_TARGET_ERROR,
            max_iterations: SorConfig::DEFAULT_MAX_ITERATIONS,
            use_quantized: false,
        }
    }
}

fn check_preference(v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    for (i, &x) in v.iter().enumerate() {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::InvalidEntry { row: i, col: 0, value: x });
        }
    }
    Ok(())
}

fn solve_shifted<O, S>(
    system: &O,
    alpha: f64,
    rhs: &[f64],
    suit: &SuitableResult,
    opts: &RankingOptions,
    sweep: &mut S,
) -> Result<Solution>
where
    O: Operator + ?Sized,
    S: Sweep + ?Sized,
{
    let w = suit.suitable_weights()?.clone();
    let s = 1.0 / alpha;
    if !(s > suit.sigma) {
        return Err(Error::InvalidDamping(alpha));
    }
    let cfg = SorConfig {
        s,
        sigma: suit.sigma,
        omega: opts.omega,
        weights: w,
        target_error: opts.target_error,
        max_iterations: opts.max_iterations,
        use_quantized: opts.use_quantized,
    };
    let scaled: Vec<f64> = rhs.iter().map(|v| v / alpha).collect();
    solve(system, &scaled, &cfg, sweep)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDamping(alpha))
    }
}

/// Katz's index `k^T = v^T (I - alpha M)^{-1}`, given `system = M^T`.
///
/// `suit` must be a sigma-suitable result for `M^T` and `alpha < 1 / sigma`.
/// The certificate bounds `||k* - k||_inf`.
pub fn katz<S>(
    system: &SparseMatrix,
    alpha: f64,
    v: &[f64],
    suit: &SuitableResult,
    opts: &RankingOptions,
    sweep: &mut S,
) -> Result<Solution>
where
    S: Sweep + ?Sized,
{
    check_alpha(alpha)?;
    check_preference(v, system.dim())?;
    if alpha == 0.0 {
        return Ok(Solution {
            x: v.to_vec(),
            certificate: SolveCertificate::exact(f64::INFINITY, suit.sigma, sweep.kind()),
        });
    }
    solve_shifted(system, alpha, v, suit, opts, sweep)
}

/// The pseudorank `p^T = (1 - alpha) v^T sum_k alpha^k G^k`, given `system = G^T`
/// for the row-normalized adjacency `G`.
pub fn pseudorank<S>(
    system: &SparseMatrix,
    alpha: f64,
    v: &[f64],
    suit: &SuitableResult,
    opts: &RankingOptions,
    sweep: &mut S,
) -> Result<Solution>
where
    S: Sweep + ?Sized,
{
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidDamping(alpha));
    }
    check_preference(v, system.dim())?;
    if alpha == 0.0 {
        return Ok(Solution {
            x: v.to_vec(),
            certificate: SolveCertificate::exact(f64::INFINITY, suit.sigma, sweep.kind()),
        });
    }
    let rhs: Vec<f64> = v.iter().map(|x| (1.0 - alpha) * x).collect();
    solve_shifted(system, alpha, &rhs, suit, opts, sweep)
}

/// Strongly preferential PageRank together with the data it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRank {
    /// `p / ||p||_1`.
    pub scores: Vec<f64>,
    /// The unnormalized pseudorank `p`.
    pub pseudorank: Vec<f64>,
    /// `||p||_1`, the normalization constant.
    pub pseudorank_l1: f64,
    /// Certificate of the pseudorank solve; it bounds `||p* - p||_inf`, not
    /// the error of the normalized scores.
    pub certificate: SolveCertificate,
}

/// Strongly preferential PageRank (dangling distribution equal to `v`) as the
/// l1-normalized pseudorank.
pub fn strong_pagerank<S>(
    system: &SparseMatrix,
    alpha: f64,
    v: &[f64],
    suit: &SuitableResult,
    opts: &RankingOptions,
    sweep: &mut S,
) -> Result<PageRank>
where
    S: Sweep + ?Sized,
{
    let Solution { x, certificate } = pseudorank(system, alpha, v, suit, opts, sweep)?;
    let l1: f64 = x.iter().map(|v| v.abs()).sum();
    if !(l1 > 0.0) {
        return Err(Error::InvalidEntry { row: 0, col: 0, value: l1 });
    }
    Ok(PageRank { scores: x.iter().map(|p| p / l1).collect(), pseudorank: x, pseudorank_l1: l1, certificate })
}

/// PageRank with an arbitrary dangling distribution `u`, solving
/// `(I - alpha P^T) r = (1 - alpha) v` for `P = G + d u^T`.
///
/// The rank-one part is never formed: `system` is `G^T`, and `suit` must be
/// suitable for the operator `G^T + u d^T` (see [`pagerank_operator`]).
#[allow(clippy::too_many_arguments)]
pub fn pagerank<S>(
    system: &SparseMatrix,
    dangling: &[f64],
    alpha: f64,
    v: &[f64],
    u: &[f64],
    suit: &SuitableResult,
    opts: &RankingOptions,
    sweep: &mut S,
) -> Result<Solution>
where
    S: Sweep + ?Sized,
{
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidDamping(alpha));
    }
    check_preference(v, system.dim())?;
    let op = pagerank_operator(system, dangling, u)?;
    if alpha == 0.0 {
        return Ok(Solution {
            x: v.to_vec(),
            certificate: SolveCertificate::exact(f64::INFINITY, suit.sigma, sweep.kind()),
        });
    }
    let rhs: Vec<f64> = v.iter().map(|x| (1.0 - alpha) * x).collect();
    solve_shifted(&op, alpha, &rhs, suit, opts, sweep)
}

/// The transposed PageRank matrix `P^T = G^T + u d^T` as an operator.
pub fn pagerank_operator<'a>(system: &'a SparseMatrix, dangling: &'a [f64], u: &'a [f64]) -> Result<RankOneUpdate<'a>> {
    RankOneUpdate::new(system, u, dangling)
}

/// `alpha / (1 - alpha) ||x_next - x_prev||_1`, an l1 (hence supremum-norm)
/// bound on the error of `x_next` for Gauss–Seidel-type PageRank sweeps with
/// `omega = 1`. Usually much looser than the `w`-norm certificate.
pub fn pagerank_l1_bound(x_prev: &[f64], x_next: &[f64], alpha: f64) -> f64 {
    let diff: f64 = x_prev.iter().zip(x_next).map(|(a, b)| (a - b).abs()).sum();
    alpha / (1.0 - alpha) * diff
}
