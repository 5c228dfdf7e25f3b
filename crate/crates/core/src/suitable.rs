//! Constructive computation of sigma-suitable vectors.
//!
//! For `sigma > rho(A)` the series `sum_k (A / sigma)^k 1` converges to a
//! vector `w_sigma` with `A w_sigma < sigma w_sigma`, so some partial sum is
//! already sigma-suitable. The partial sums are generated by the Jacobi
//! iteration for `(I - A / sigma) w = 1`, kept normalized in the supremum norm
//! with a running scale factor. Every product `z = A w` also yields the
//! Collatz bounds `min_i z_i / w_i <= rho(A) <= max_i z_i / w_i`, valid for
//! any nonnegative `A` and positive `w`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::norms::{check_suitable, WeightVector};
use crate::operator::Operator;

/// A bracket `lower <= rho(A) <= upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollatzBounds {
    pub lower: f64,
    pub upper: f64,
}

impl CollatzBounds {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    fn from_ratios(z: &[f64], w: &[f64]) -> Self {
        let mut lower = f64::INFINITY;
        let mut upper = 0.0f64;
        for (&zi, &wi) in z.iter().zip(w) {
            let ratio = zi / wi;
            lower = lower.min(ratio);
            upper = upper.max(ratio);
        }
        CollatzBounds { lower, upper }
    }
}

/// Collatz bounds `min_i (Aw)_i / w_i` and `max_i (Aw)_i / w_i`.
pub fn collatz_bounds<O>(a: &O, w: &WeightVector) -> Result<CollatzBounds>
where
    O: Operator + ?Sized,
{
    if w.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: w.len() });
    }
    if w.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let mut z = vec![0.0; w.len()];
    a.apply(w.as_slice(), &mut z);
    Ok(CollatzBounds::from_ratios(&z, w.as_slice()))
}

/// Tightest Collatz bracket observed along `iterations` steps of the lazy
/// power iteration `w <- (A + I) w / ||(A + I) w||_inf` started from `1`.
///
/// The identity shift keeps every entry of `w` positive and avoids the
/// oscillation plain power iteration shows on periodic matrices. The search
/// stops early when the bracket closes or the iterate leaves the normal range.
pub fn spectral_radius_bracket<O>(a: &O, iterations: usize) -> Result<CollatzBounds>
where
    O: Operator + ?Sized,
{
    let n = a.dim();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut w = vec![1.0; n];
    let mut z = vec![0.0; n];
    let mut best = CollatzBounds { lower: 0.0, upper: f64::INFINITY };
    for _ in 0..iterations.max(1) {
        a.apply(&w, &mut z);
        let step = CollatzBounds::from_ratios(&z, &w);
        best.lower = best.lower.max(step.lower);
        best.upper = best.upper.min(step.upper);
        if best.lower >= best.upper {
            break;
        }
        let mut norm = 0.0f64;
        for (zi, &wi) in z.iter_mut().zip(&w) {
            *zi += wi;
            norm = norm.max(*zi);
        }
        for (wi, &zi) in w.iter_mut().zip(&z) {
            *wi = zi / norm;
        }
        if w.iter().any(|&v| v < f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuitableStatus {
    /// A verified sigma-suitable vector was found.
    Suitable,
    /// The Collatz lower bound exceeded sigma: `sigma < rho(A)` is certain.
    SigmaBelowRho,
    /// The scale factor left the normal floating-point range.
    Underflow,
    /// The iteration cap was reached without a decision.
    IterationLimit,
}

impl SuitableStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SuitableStatus::Suitable => "suitable",
            SuitableStatus::SigmaBelowRho => "sigma_below_rho",
            SuitableStatus::Underflow => "underflow",
            SuitableStatus::IterationLimit => "iteration_limit",
        }
    }
}

impl core::fmt::Display for SuitableStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuitableOptions {
    /// Defaults to `10 n + 1000` when `None`.
    pub max_iterations: Option<usize>,
    pub record_history: bool,
}

impl SuitableOptions {
    pub fn default_max_iterations(n: usize) -> usize {
        10 * n + 1000
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuitableResult {
    pub status: SuitableStatus,
    pub sigma: f64,
    /// Normalized weights; present iff `status` is `Suitable`.
    pub weights: Option<WeightVector>,
    /// Number of products `A w` computed.
    pub iterations: usize,
    /// Final value of the scale factor.
    pub scale: f64,
    /// Collatz bounds at every product, when requested.
    pub collatz_history: Vec<CollatzBounds>,
}

impl SuitableResult {
    pub fn is_suitable(&self) -> bool {
        self.status == SuitableStatus::Suitable
    }

    /// The suitable vector, or [`Error::NoSuitableVector`].
    pub fn suitable_weights(&self) -> Result<&WeightVector> {
        match (&self.status, &self.weights) {
            (SuitableStatus::Suitable, Some(w)) => Ok(w),
            _ => Err(Error::NoSuitableVector),
        }
    }
}

/// What a single product decided.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchStep {
    Suitable(CollatzBounds),
    SigmaBelowRho(CollatzBounds),
    Underflow(CollatzBounds),
    Continue(CollatzBounds),
}

/// The normalized suitability iteration, one product at a time.
///
/// Starting from `w = 1` and scale `1`, each step computes `z = A w`, tests
/// the stop rules and otherwise sets `u = z / sigma + scale * 1`,
/// `scale <- scale / ||u||_inf`, `w <- u / ||u||_inf`. The current `w` is always
/// parallel to the partial sum `sum_{k <= t} (A / sigma)^k 1`, and `scale` is the
/// reciprocal of that partial sum's supremum norm.
#[derive(Debug, Clone)]
pub struct SuitableSearch<'a, O: ?Sized> {
    a: &'a O,
    sigma: f64,
    w: Vec<f64>,
    z: Vec<f64>,
    scale: f64,
    products: usize,
}

impl<'a, O> SuitableSearch<'a, O>
where
    O: Operator + ?Sized,
{
    pub fn new(a: &'a O, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidSigma(sigma));
        }
        let n = a.dim();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(SuitableSearch { a, sigma, w: vec![1.0; n], z: vec![0.0; n], scale: 1.0, products: 0 })
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn products(&self) -> usize {
        self.products
    }

    pub fn step(&mut self) -> SearchStep {
        self.a.apply(&self.w, &mut self.z);
        self.products += 1;
        let bounds = CollatzBounds::from_ratios(&self.z, &self.w);

        if bounds.upper <= self.sigma {
            // Re-verify independently of the ratio test above.
            let w = WeightVector::new(self.w.clone()).expect("weights stay positive");
            if check_suitable(self.a, &w, self.sigma).is_ok_and(|c| c.suitable) {
                return SearchStep::Suitable(bounds);
            }
        }
        if bounds.lower > self.sigma {
            return SearchStep::SigmaBelowRho(bounds);
        }

        let mut norm = 0.0f64;
        for zi in self.z.iter_mut() {
            *zi = *zi / self.sigma + self.scale;
            norm = norm.max(*zi);
        }
        self.scale /= norm;
        for (wi, &ui) in self.w.iter_mut().zip(&self.z) {
            *wi = ui / norm;
        }
        if self.scale < f64::MIN_POSITIVE || self.w.contains(&0.0) {
            return SearchStep::Underflow(bounds);
        }
        SearchStep::Continue(bounds)
    }
}

/// Searches for a sigma-suitable vector for `a`.
///
/// A `Suitable` status is only reported after [`check_suitable`] accepted the
/// returned vector, so `A w <= sigma w` holds as computed.
pub fn compute_suitable<O>(a: &O, sigma: f64, opts: SuitableOptions) -> Result<SuitableResult>
where
    O: Operator + ?Sized,
{
    let mut search = SuitableSearch::new(a, sigma)?;
    let max_iterations = opts.max_iterations.unwrap_or_else(|| SuitableOptions::default_max_iterations(a.dim()));
    let mut history = Vec::new();

    let mut status = SuitableStatus::IterationLimit;
    while search.products() < max_iterations {
        let step = search.step();
        let (bounds, decided) = match step {
            SearchStep::Suitable(b) => (b, Some(SuitableStatus::Suitable)),
            SearchStep::SigmaBelowRho(b) => (b, Some(SuitableStatus::SigmaBelowRho)),
            SearchStep::Underflow(b) => (b, Some(SuitableStatus::Underflow)),
            SearchStep::Continue(b) => (b, None),
        };
        if opts.record_history {
            history.push(bounds);
        }
        if let Some(s) = decided {
            status = s;
            break;
        }
    }

    let weights = match status {
        SuitableStatus::Suitable => Some(WeightVector::new(search.w.clone())?),
        _ => None,
    };
    Ok(SuitableResult {
        status,
        sigma,
        weights,
        iterations: search.products(),
        scale: search.scale(),
        collatz_history: history,
    })
}
