//! Kendall's tau with ties, and score rounding.
//!
//! Tau is computed in the tie-aware form
//!
//! ```text
//! tau(r, s) = sum_{i<j} sgn(r_i - r_j) sgn(s_i - s_j)
//!             / ( sqrt(#{i<j : r_i != r_j}) sqrt(#{i<j : s_i != s_j}) )
//! ```
//!
//! (tau-b). Pairs are counted in `O(n log n)` by sorting on `(r, s)` and
//! counting inversions of `s` with a merge sort.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

/// Integer summary from which tau is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TauCounts {
    /// Concordant minus discordant pairs.
    pub concordance: i64,
    /// Pairs not tied in the first vector.
    pub untied_first: u64,
    /// Pairs not tied in the second vector.
    pub untied_second: u64,
}

impl TauCounts {
    pub fn tau(&self) -> Result<f64> {
        if self.untied_first == 0 || self.untied_second == 0 {
            return Err(Error::UndefinedCorrelation);
        }
        let denom = libm::sqrt(self.untied_first as f64 * self.untied_second as f64);
        Ok(self.concordance as f64 / denom)
    }
}

fn cmp(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).expect("NaN rejected on entry")
}

fn tied_pairs_in_sorted(sorted: impl Iterator<Item = f64>) -> u64 {
    let mut total = 0u64;
    let mut run = 0u64;
    let mut prev: Option<f64> = None;
    for v in sorted {
        if prev == Some(v) {
            run += 1;
        } else {
            total += run * (run.saturating_sub(1)) / 2;
            run = 1;
        }
        prev = Some(v);
    }
    total + run * run.saturating_sub(1) / 2
}

/// Sorts `v` ascending and returns the number of strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (lo, hi) = v.split_at_mut(mid);
        let (blo, bhi) = buf.split_at_mut(mid);
        merge_count(lo, blo) + merge_count(hi, bhi)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if cmp(v[j], v[i]) == Ordering::Less {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Pair counts for [`kendall_tau`].
pub fn kendall_counts(r: &[f64], s: &[f64]) -> Result<TauCounts> {
    if r.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: r.len(), found: s.len() });
    }
    for (index, (a, b)) in r.iter().zip(s).enumerate() {
        if a.is_nan() || b.is_nan() {
            return Err(Error::NotANumber { index });
        }
    }
    let n = r.len() as u64;
    let total = n * n.saturating_sub(1) / 2;

    let mut idx: Vec<usize> = (0..r.len()).collect();
    idx.sort_unstable_by(|&a, &b| cmp(r[a], r[b]).then(cmp(s[a], s[b])));

    let tied_first = tied_pairs_in_sorted(idx.iter().map(|&i| r[i]));
    // Pairs tied in both vectors.
    let mut tied_both = 0u64;
    let mut run = 0u64;
    for k in 0..idx.len() {
        let same = k > 0 && r[idx[k]] == r[idx[k - 1]] && s[idx[k]] == s[idx[k - 1]];
        if same {
            run += 1;
        } else {
            tied_both += run * run.saturating_sub(1) / 2;
            run = 1;
        }
    }
    tied_both += run * run.saturating_sub(1) / 2;

    let mut second: Vec<f64> = idx.iter().map(|&i| s[i]).collect();
    let mut buf = alloc::vec![0.0; second.len()];
    let discordant = merge_count(&mut second, &mut buf);
    let tied_second = tied_pairs_in_sorted(second.iter().copied());

    let untied_first = total - tied_first;
    let untied_second = total - tied_second;
    // concordant + discordant = total - tied_first - tied_second + tied_both
    let decided = (untied_first + tied_both - tied_second) as i64;
    Ok(TauCounts { concordance: decided - 2 * discordant as i64, untied_first, untied_second })
}

/// Kendall's tau-b between two score vectors.
pub fn kendall_tau(r: &[f64], s: &[f64]) -> Result<f64> {
    if r.len() < 2 {
        return Err(Error::UndefinedCorrelation);
    }
    kendall_counts(r, s)?.tau()
}

/// Rounds every score half-to-even at `decimal_digits` digits after the point.
///
/// Values whose scaled magnitude reaches `2^52` are already integral at that
/// precision and are returned unchanged.
pub fn round_scores(x: &[f64], decimal_digits: u32) -> Vec<f64> {
    let scale = libm::pow(10.0, decimal_digits as f64);
    x.iter()
        .map(|&v| {
            let scaled = v * scale;
            if !scaled.is_finite() || libm::fabs(scaled) >= 4_503_599_627_370_496.0 {
                v
            } else {
                libm::rint(scaled) / scale
            }
        })
        .collect()
}
