//! Weighted supremum norms, suitability checks and byte-quantized weights.
//!
//! For a positive vector `w` the `w`-norm is `max_i |x_i| / w_i`. A vector
//! `w` is *sigma-suitable* for `A >= 0` when `A w <= sigma w`; in that case
//! `A` has `w`-operator norm at most `sigma`, which is what makes the SOR
//! contraction factor computable.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::operator::Operator;

/// Smallest weight representable by a one-byte exponent, `2^-255`.
pub const MIN_QUANTIZABLE: f64 = 1.727233711018889e-77;

/// A strictly positive, finite weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: Vec<f64>,
    normalized: bool,
}

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        for (index, &value) in w.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveWeight { index, value });
            }
        }
        let normalized = !w.is_empty() && w.iter().copied().fold(f64::MIN, f64::max) == 1.0;
        Ok(WeightVector { w, normalized })
    }

    /// The all-ones vector, which is normalized.
    pub fn ones(n: usize) -> Self {
        WeightVector { w: vec![1.0; n], normalized: n > 0 }
    }

    /// Divides by the maximum entry so that the largest weight is exactly 1.
    pub fn normalize(self) -> Result<Self> {
        if self.normalized || self.w.is_empty() {
            return Ok(self);
        }
        let max = self.max();
        WeightVector::new(self.w.into_iter().map(|v| v / max).collect())
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// True when the maximum entry is exactly 1.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.w
    }

    pub fn max(&self) -> f64 {
        self.w.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.w.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `max_i |x_i| / w_i`; zero for the zero vector.
pub fn wnorm(x: &[f64], w: &WeightVector) -> Result<f64> {
    check_len(w.len(), x.len())?;
    Ok(x.iter().zip(&w.w).map(|(x, w)| x.abs() / w).fold(0.0, f64::max))
}

/// `w`-norm of `a - b` without materializing the difference.
pub(crate) fn wnorm_diff(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    a.iter().zip(b).zip(w).map(|((a, b), w)| (a - b).abs() / w).fold(0.0, f64::max)
}

/// Outcome of [`check_suitable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuitabilityCheck {
    pub suitable: bool,
    /// `max_i (A w)_i / w_i`.
    pub max_ratio: f64,
    /// First index attaining `max_ratio`.
    pub witness_index: usize,
}

/// Tests `A w <= sigma w`.
///
/// The vector is accepted only when every ratio `(A w)_i / w_i` is at most
/// `sigma` *and* every product satisfies `(A w)_i <= sigma * w_i` as
/// computed, so no rounding in either form can let an unsuitable vector pass.
pub fn check_suitable<O>(a: &O, w: &WeightVector, sigma: f64) -> Result<SuitabilityCheck>
where
    O: Operator + ?Sized,
{
    check_len(a.dim(), w.len())?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    let mut aw = vec![0.0; w.len()];
    a.apply(&w.w, &mut aw);
    let mut max_ratio = 0.0;
    let mut witness_index = 0;
    let mut products_ok = true;
    for (i, (&awi, &wi)) in aw.iter().zip(&w.w).enumerate() {
        let ratio = awi / wi;
        if ratio > max_ratio {
            max_ratio = ratio;
            witness_index = i;
        }
        products_ok &= awi <= sigma * wi;
    }
    Ok(SuitabilityCheck { suitable: products_ok && max_ratio <= sigma, max_ratio, witness_index })
}

/// Per-entry power-of-two under-approximation `w'_i = 2^-e_i <= w_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedWeights {
    exponents: Vec<u8>,
}

impl QuantizedWeights {
    pub fn from_exponents(exponents: Vec<u8>) -> Self {
        QuantizedWeights { exponents }
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// The weights `2^-e_i`. Always valid, since `2^-255` is a normal number.
    pub fn dequantize(&self) -> WeightVector {
        let w = self.exponents.iter().map(|&e| pow2(-(e as i32))).collect();
        WeightVector::new(w).expect("powers of two are positive")
    }
}

/// `2^k` for `-1022 <= k <= 1023`, built directly from the exponent bits.
#[inline]
fn pow2(k: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((k + 1023) as u64) << 52)
}

/// `ceil(-log2 v)` for a normal `v` in `(0, 1]`, computed exactly.
///
/// Writing `v = m 2^e` with `m` in `[1, 2)`, `-log2 v = -e - log2 m` lies in
/// `(-e - 1, -e]`, so the ceiling is `-e` whatever the mantissa.
fn ceil_neg_log2(v: f64) -> i32 {
    let biased = ((v.to_bits() >> 52) & 0x7ff) as i32;
    1023 - biased
}

/// Stores `ceil(-log2 w_i)` in one byte per entry.
///
/// `w` must be normalized. Weights below `2^-255` do not fit a byte and are
/// reported as a range failure; the caller should keep the full-precision
/// vector in that case.
pub fn quantize(w: &WeightVector) -> Result<QuantizedWeights> {
    if !w.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let exponents =
        w.w.iter()
            .enumerate()
            .map(|(index, &value)| {
                if value < MIN_QUANTIZABLE {
                    return Err(Error::QuantizationRange { index, value });
                }
                let e = ceil_neg_log2(value);
                debug_assert!((0..=255).contains(&e));
                Ok(e as u8)
            })
            .collect::<Result<Vec<u8>>>()?;
    Ok(QuantizedWeights { exponents })
}

/// `max_i |x_i| 2^e_i`, the `w'`-norm, which dominates the `w`-norm.
pub fn wnorm_quantized(x: &[f64], q: &QuantizedWeights) -> Result<f64> {
    check_len(q.len(), x.len())?;
    Ok(x.iter().zip(&q.exponents).map(|(x, &e)| x.abs() * pow2(e as i32)).fold(0.0, f64::max))
}

pub(crate) fn wnorm_quantized_diff(a: &[f64], b: &[f64], exponents: &[u8]) -> f64 {
    a.iter().zip(b).zip(exponents).map(|((a, b), &e)| (a - b).abs() * pow2(e as i32)).fold(0.0, f64::max)
}
