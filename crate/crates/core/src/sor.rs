//! Certified step-asynchronous SOR for `(sI - A) x = b`.
//!
//! Given `w` sigma-suitable for `A` and `s > sigma`, every sweep under any
//! admissible schedule satisfies
//!
//! ```text
//! ||x* - x(t+1)||_w <= r ||x* - x(t)||_w,
//! r = |1 - omega| + omega max_k (sigma - a_kk) / (s - a_kk) < 1
//! ```
//!
//! for `0 < omega < 2 / (1 + max_k (sigma - a_kk) / (s - a_kk))`, hence the
//! a-posteriori bound `||x* - x(t+1)||_w <= r / (1 - r) ||x(t+1) - x(t)||_w`.
//! With `max_i w_i = 1` the `w`-norm dominates the supremum norm, so the
//! same number bounds the absolute error of every component.
//!
//! In floating point a sweep also commits a rounding error `delta`, and the
//! bound actually certified is `(r ||x(t+1) - x(t)||_w + ||delta||_w) / (1 - r)`.
//! `||delta||_w` is bounded a priori from the standard summation error bound
//! `gamma_k = k u / (1 - k u)` and is of the order of a few ulps of the iterate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::norms::{check_suitable, quantize, wnorm_diff, wnorm_quantized_diff, WeightVector};
use crate::operator::Operator;
use crate::schedule::{ScheduleKind, Sweep};

/// Shift and relaxation parameter of a single sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation {
    pub s: f64,
    pub omega: f64,
}

/// New value of `x_i`:
/// `(1 - omega) x_i + omega (b_i + sum_{j != i} a_ij x_j) / (s - a_ii)`,
/// with `read` choosing between previous and fresh values of each `x_j`.
///
/// All schedules, including the parallel one, go through this function, so
/// identical read choices give bit-identical results.
#[inline]
pub fn relax_component<O, F>(a: &O, i: usize, b_i: f64, x_old: &[f64], ctx: f64, relax: Relaxation, read: F) -> f64
where
    O: Operator + ?Sized,
    F: FnMut(usize, usize) -> f64,
{
    let sum = a.accumulate_offdiag(i, b_i, ctx, x_old, read);
    (1.0 - relax.omega) * x_old[i] + relax.omega * (sum / (relax.s - a.diagonal(i)))
}

/// `max_k (sigma - a_kk) / (s - a_kk)` after validating `0 < sigma < s` and
/// `a_kk < sigma` for every `k`.
fn max_diag_ratio(diag: &[f64], s: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    if !(s > sigma && s.is_finite()) {
        return Err(Error::InvalidShift { s, sigma });
    }
    let mut max = 0.0f64;
    for (index, &d) in diag.iter().enumerate() {
        if d >= sigma {
            return Err(Error::DiagonalAtLeastSigma { index, diag: d, sigma });
        }
        max = max.max((sigma - d) / (s - d));
    }
    Ok(max)
}

/// Upper end of the convergence interval, `2 / (1 + max_k (sigma - a_kk) / (s - a_kk))`.
pub fn omega_max(diag: &[f64], s: f64, sigma: f64) -> Result<f64> {
    Ok(2.0 / (1.0 + max_diag_ratio(diag, s, sigma)?))
}

/// The contraction factor `r = |1 - omega| + omega max_k (sigma - a_kk) / (s - a_kk)`.
pub fn contraction_factor(diag: &[f64], s: f64, sigma: f64, omega: f64) -> Result<f64> {
    let ratio = max_diag_ratio(diag, s, sigma)?;
    let max = 2.0 / (1.0 + ratio);
    let r = (1.0 - omega).abs() + omega * ratio;
    if !(omega > 0.0 && omega < max && r < 1.0) {
        return Err(Error::OmegaOutOfRange { omega, max });
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SorConfig {
    pub s: f64,
    pub sigma: f64,
    pub omega: f64,
    /// A sigma-suitable vector for the system matrix.
    pub weights: WeightVector,
    /// Requested bound on the supremum norm of the absolute error.
    pub target_error: f64,
    pub max_iterations: usize,
    /// Measure steps with the byte-quantized weights instead of `w`.
    pub use_quantized: bool,
}

impl SorConfig {
    pub const DEFAULT_TARGET_ERROR: f64 = 1e-9;
    pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;

    pub fn new(s: f64, sigma: f64, weights: WeightVector) -> Self {
        SorConfig {
            s,
            sigma,
            omega: 1.0,
            weights,
            target_error: Self::DEFAULT_TARGET_ERROR,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            use_quantized: false,
        }
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_target_error(mut self, target_error: f64) -> Self {
        self.target_error = target_error;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_quantized(mut self, use_quantized: bool) -> Self {
        self.use_quantized = use_quantized;
        self
    }

    pub fn relaxation(&self) -> Relaxation {
        Relaxation { s: self.s, omega: self.omega }
    }
}

/// What a finished solve can vouch for.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveCertificate {
    /// Contraction factor in `w`-norm.
    pub r: f64,
    pub omega: f64,
    pub omega_max: f64,
    pub s: f64,
    pub sigma: f64,
    pub iterations: usize,
    /// Bound on `||x* - x||_w` (or `||.||_w'` when quantized, which dominates it).
    pub wnorm_bound: f64,
    /// Bound on `||x* - x||_inf`, namely `max_i w_i * wnorm_bound`.
    pub supnorm_bound: f64,
    /// `||x(t+1) - x(t)||_inf` of the last sweep.
    pub last_step_supnorm: f64,
    /// Bound on the `w`-norm of the rounding error of the last sweep.
    pub rounding_wnorm: f64,
    pub schedule: ScheduleKind,
    pub quantized: bool,
}

impl SolveCertificate {
    /// Certificate of a solution that is exact by construction.
    pub fn exact(s: f64, sigma: f64, schedule: ScheduleKind) -> Self {
        SolveCertificate {
            r: 0.0,
            omega: 1.0,
            omega_max: 2.0,
            s,
            sigma,
            iterations: 0,
            wnorm_bound: 0.0,
            supnorm_bound: 0.0,
            last_step_supnorm: 0.0,
            rounding_wnorm: 0.0,
            schedule,
            quantized: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub certificate: SolveCertificate,
}

/// Per-sweep data handed to the observer of [`solve_observed`].
#[derive(Debug, Clone, Copy)]
pub struct StepRecord<'a> {
    /// Index of the sweep that produced `x_next` (0-based).
    pub t: usize,
    pub x_prev: &'a [f64],
    pub x_next: &'a [f64],
    /// `||x_next - x_prev||` in the norm used for stopping.
    pub step_norm: f64,
    /// Bound on the rounding error of the sweep, in the same norm.
    pub rounding: f64,
    /// Certified bound on `||x* - x_next||_w`.
    pub wnorm_bound: f64,
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn diagonal_of<O: Operator + ?Sized>(a: &O) -> Vec<f64> {
    (0..a.dim()).map(|i| a.diagonal(i)).collect()
}

/// One sweep from `x` under `schedule`.
pub fn sor_step<O, S>(a: &O, b: &[f64], x: &[f64], cfg: &SorConfig, schedule: &mut S, t: usize) -> Result<Vec<f64>>
where
    O: Operator + ?Sized,
    S: Sweep + ?Sized,
{
    check_len(a.dim(), b.len())?;
    check_len(a.dim(), x.len())?;
    let mut next = vec![0.0; x.len()];
    schedule.sweep(a, b, x, &mut next, cfg.relaxation(), t)?;
    Ok(next)
}

/// Solves from `x = 0` until the certified supremum-norm bound reaches
/// `cfg.target_error`.
pub fn solve<O, S>(a: &O, b: &[f64], cfg: &SorConfig, schedule: &mut S) -> Result<Solution>
where
    O: Operator + ?Sized,
    S: Sweep + ?Sized,
{
    solve_observed(a, b, cfg, schedule, None, |_| {})
}

/// [`solve`] with an optional starting point and a per-sweep observer.
pub fn solve_observed<O, S, F>(
    a: &O,
    b: &[f64],
    cfg: &SorConfig,
    schedule: &mut S,
    x0: Option<&[f64]>,
    mut observer: F,
) -> Result<Solution>
where
    O: Operator + ?Sized,
    S: Sweep + ?Sized,
    F: FnMut(&StepRecord<'_>),
{
    let n = a.dim();
    check_len(n, b.len())?;
    check_len(n, cfg.weights.len())?;
    if !(cfg.target_error > 0.0) {
        return Err(Error::InvalidTarget(cfg.target_error));
    }
    let diag = diagonal_of(a);
    let r = contraction_factor(&diag, cfg.s, cfg.sigma, cfg.omega)?;
    let omega_max = omega_max(&diag, cfg.s, cfg.sigma)?;
    let check = check_suitable(a, &cfg.weights, cfg.sigma)?;
    if !check.suitable {
        return Err(Error::NotSuitable { index: check.witness_index, ratio: check.max_ratio, sigma: cfg.sigma });
    }
    let quantized = if cfg.use_quantized { Some(quantize(&cfg.weights)?) } else { None };
    let w = cfg.weights.as_slice();
    let w_max = cfg.weights.max();
    // Norm of a vector or of a difference, in the norm used for stopping.
    let zeros = vec![0.0; n];
    let norm_diff = |a: &[f64], b: &[f64]| match &quantized {
        Some(q) => wnorm_quantized_diff(a, b, q.exponents()),
        None => wnorm_diff(a, b, w),
    };
    let rounding = RoundingModel::new(a, b, &diag, cfg, r, &norm_diff);

    let mut x = match x0 {
        Some(x0) => {
            check_len(n, x0.len())?;
            x0.to_vec()
        }
        None => vec![0.0; n],
    };
    let mut next = vec![0.0; n];
    let relax = cfg.relaxation();
    let mut bound = f64::INFINITY;

    for t in 0..cfg.max_iterations {
        schedule.sweep(a, b, &x, &mut next, relax, t)?;
        let step_norm = norm_diff(&next, &x);
        let delta = rounding.bound(norm_diff(&x, &zeros).max(norm_diff(&next, &zeros)));
        bound = rounding.certify(step_norm, delta);
        observer(&StepRecord { t, x_prev: &x, x_next: &next, step_norm, rounding: delta, wnorm_bound: bound });
        let supnorm_bound = w_max * bound;
        if supnorm_bound <= cfg.target_error {
            let last_step_supnorm = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            return Ok(Solution {
                x: next,
                certificate: SolveCertificate {
                    r,
                    omega: cfg.omega,
                    omega_max,
                    s: cfg.s,
                    sigma: cfg.sigma,
                    iterations: t + 1,
                    wnorm_bound: bound,
                    supnorm_bound,
                    last_step_supnorm,
                    rounding_wnorm: delta,
                    schedule: schedule.kind(),
                    quantized: quantized.is_some(),
                },
            });
        }
        core::mem::swap(&mut x, &mut next);
    }
    Err(Error::IterationLimit { iterations: cfg.max_iterations, bound: w_max * bound, x })
}

/// The crude supremum-norm bound `(max w / min w) r / (1 - r) ||x(t+1) - x(t)||_inf`,
/// for comparison with the certificate's own bound, which it always dominates.
/// The rounding term of the certificate is added unchanged.
pub fn certified_sup_bound(cert: &SolveCertificate, w: &WeightVector) -> f64 {
    let step = (w.max() / w.min()) * cert.r * cert.last_step_supnorm;
    (step + w.max() * cert.rounding_wnorm) / (1.0 - cert.r) * BOUND_SLACK
}

/// Relative slack covering the few roundings in evaluating the bound itself.
const BOUND_SLACK: f64 = 1.0 + 16.0 * f64::EPSILON;

/// A priori bound on the rounding error of one sweep.
///
/// Component `i` is computed as `(1 - omega) x_i + omega (b_i + sum_j a_ij x_j) / (s - a_ii)`
/// with at most `k` summed terms, so its error is at most
/// `gamma (|1 - omega| |x_i| + omega (|b_i| + sum_j a_ij |x_j|) / (s - a_ii))`.
/// Suitability gives `sum_j a_ij |x_j| <= sigma w_i X` with `X` the larger
/// `w`-norm of the two iterates, hence the bound
/// `gamma (X (|1 - omega| + omega sigma / (s - max a_ii)) + omega max_i |b_i| / (w_i (s - a_ii)))`.
struct RoundingModel {
    gamma: f64,
    iterate_part: f64,
    rhs_part: f64,
    r: f64,
}

impl RoundingModel {
    fn new<O, N>(a: &O, b: &[f64], diag: &[f64], cfg: &SorConfig, r: f64, norm_diff: &N) -> Self
    where
        O: Operator + ?Sized,
        N: Fn(&[f64], &[f64]) -> f64,
    {
        let u = f64::EPSILON / 2.0;
        // Summation, the division, the relaxation and the final addition.
        let k = (a.max_row_terms() + 8) as f64;
        let dmax = diag.iter().copied().fold(0.0, f64::max);
        // The divisor s - a_ii may carry the rounding error of a_ii itself.
        let divisor = 2.0 * u * (1.0 + dmax / (cfg.s - dmax));
        let gamma = k * u / (1.0 - k * u) + divisor;
        let iterate_part = (1.0 - cfg.omega).abs() + cfg.omega * cfg.sigma / (cfg.s - dmax);
        let scaled: Vec<f64> = b.iter().zip(diag).map(|(b, d)| b / (cfg.s - d)).collect();
        let rhs_part = cfg.omega * norm_diff(&scaled, &vec![0.0; b.len()]);
        RoundingModel { gamma, iterate_part, rhs_part, r }
    }

    fn bound(&self, iterate_norm: f64) -> f64 {
        self.gamma * (iterate_norm * self.iterate_part + self.rhs_part) * BOUND_SLACK
    }

    /// `(r step + delta) / (1 - r)`.
    fn certify(&self, step_norm: f64, delta: f64) -> f64 {
        (self.r * step_norm + delta) / (1.0 - self.r) * BOUND_SLACK
    }
}
