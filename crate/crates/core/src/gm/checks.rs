//! Pointwise inequalities taken from the embedding and necessity arguments:
//! weak monotonicity, the majorant growth hypothesis behind
//! `GM(β,1) ⊆ GM(β,r)`, the block-symmetry side condition for `r >= 3`, the
//! decay modulus `sup_{k >= n/c} k|b_k|`, and the explicit weak-monotonicity
//! bound with `c1 = max(3, 2c)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::beta::{abs_sum, check_c, window};
use super::defect::{log_log_slope, Thresholds, Verdict};
use crate::error::{domain, Result};
use crate::sequence::RealSequence;
use crate::sum::{sum_range, Accumulator};

/// A ratio at one index; `flagged` marks a vanishing denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub n: u64,
    pub ratio: f64,
    pub flagged: bool,
}

/// Per-index ratios and the largest finite one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub samples: Vec<RatioSample>,
    pub max_ratio: f64,
}

impl RatioReport {
    fn from_samples(samples: Vec<RatioSample>) -> Self {
        let max_ratio = samples
            .iter()
            .filter(|s| !s.flagged)
            .map(|s| s.ratio)
            .fold(0.0, f64::max);
        Self { samples, max_ratio }
    }

    pub fn flagged(&self) -> impl Iterator<Item = u64> + '_ {
        self.samples.iter().filter(|s| s.flagged).map(|s| s.n)
    }

    pub fn any_flagged(&self) -> bool {
        self.samples.iter().any(|s| s.flagged)
    }

    /// Log–log slope of the ratios over the upper half of the indices, as
    /// for defect profiles.
    pub fn trend_slope(&self) -> f64 {
        let points: Vec<(u64, f64)> = self.samples.iter().map(|s| (s.n, s.ratio)).collect();
        log_log_slope(&points)
    }

    /// Bounded when the trend is flat, no denominator vanished and the
    /// largest ratio is within the cap; growing when the trend is steep.
    pub fn classify(&self, t: &Thresholds) -> Result<Verdict> {
        t.validate()?;
        let slope = self.trend_slope();
        Ok(
            if slope <= t.slope_hi && !self.any_flagged() && self.max_ratio <= t.ratio_cap {
                Verdict::Bounded
            } else if slope >= t.slope_lo {
                Verdict::Growing
            } else {
                Verdict::Inconclusive
            },
        )
    }
}

fn ratio(num: f64, den: f64) -> (f64, bool) {
    if den > 0.0 {
        (num / den, false)
    } else if num > 0.0 {
        (f64::INFINITY, true)
    } else {
        (0.0, false)
    }
}

/// `n|d_n| / Σ_{k=⌊n/c⌋}^{⌊cn⌋} |d_k|`: `+inf` for a vanishing denominator
/// with positive numerator, `0` when both vanish.
pub fn weak_monotone_defect(seq: &RealSequence, n: u64, c: f64) -> Result<f64> {
    check_c(c)?;
    if n == 0 {
        return domain("weak_monotone_defect: n must be at least 1");
    }
    let (lo, hi) = window(n, c);
    Ok(ratio(n as f64 * seq.at(n).abs(), abs_sum(seq, lo, hi)).0)
}

/// `Σ_{i=0}^{r-1} β_{n+i} / β_n` on `n_grid`. A bounded maximum is the
/// hypothesis under which `GM(β,1) ⊆ GM(β,r)`.
pub fn remark1_condition(beta: impl Fn(u64) -> f64, r: u64, n_grid: &[u64]) -> Result<RatioReport> {
    if r == 0 {
        return domain("remark1_condition: r must be at least 1");
    }
    if n_grid.contains(&0) {
        return domain("remark1_condition: grid indices must be at least 1");
    }
    let samples = n_grid
        .iter()
        .map(|&n| {
            let num = sum_range(n..=n + r - 1, &beta);
            let den = beta(n);
            let (ratio, flagged) = if den > 0.0 {
                (num / den, false)
            } else {
                (f64::INFINITY, true)
            };
            RatioSample { n, ratio, flagged }
        })
        .collect();
    Ok(RatioReport::from_samples(samples))
}

/// `Σ_{k=1}^{⌊r/2⌋} |b_{rm+k} - b_{rm+r-k}|`, the asymmetry of block `m`.
#[inline]
pub(crate) fn block_asymmetry(seq: &RealSequence, r: u64, m: u64) -> f64 {
    let base = r * m;
    let mut s = 0.0;
    for k in 1..=r / 2 {
        s += (seq.at(base + k) - seq.at(base + r - k)).abs();
    }
    s
}

/// Sum of block asymmetries for outer index `m` in `from..=to`, ascending.
/// Vanishes identically for `r <= 2`.
pub(crate) fn asymmetry_sum(seq: &RealSequence, r: u64, from: u64, to: u64) -> f64 {
    sum_range(from..=to, |m| block_asymmetry(seq, r, m))
}

/// Partial sum `Σ_{n=1}^{N} Σ_{k=1}^{⌊r/2⌋} |b_{rn+k} - b_{rn+r-k}|` of the
/// side condition required for `r >= 3`.
pub fn theorem6_condition(seq: &RealSequence, r: u64, n: u64) -> Result<f64> {
    if r < 3 {
        return domain(format!("theorem6_condition: r must be at least 3, got {r}"));
    }
    if n == 0 {
        return domain("theorem6_condition: N must be at least 1");
    }
    Ok(asymmetry_sum(seq, r, 1, n))
}

/// A truncated supremum with the index where it was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Epsilon {
    pub value: f64,
    /// Smallest index attaining the maximum.
    pub argmax: u64,
    /// The maximum sits on the truncation index, so the true supremum may be
    /// larger.
    pub attained_at_cap: bool,
}

/// `max_{from <= k <= cap} k|b_k|`.
pub(crate) fn sup_weighted(seq: &RealSequence, from: u64, cap: u64) -> Epsilon {
    debug_assert!(from >= 1 && from <= cap);
    let mut best = Epsilon {
        value: f64::NEG_INFINITY,
        argmax: from,
        attained_at_cap: false,
    };
    for k in from..=cap {
        let v = k as f64 * seq.at(k).abs();
        if v > best.value {
            best.value = v;
            best.argmax = k;
        }
    }
    best.attained_at_cap = best.argmax == cap;
    best
}

/// Smallest integer `k` with `k >= n/c`.
pub fn ceil_div(n: u64, c: f64) -> u64 {
    ((n as f64 / c).ceil() as u64).max(1)
}

/// `ε_n = sup_{k >= n/c} k|b_k|`, truncated at `cap`.
pub fn epsilon1(seq: &RealSequence, n: u64, c: f64, cap: u64) -> Result<Epsilon> {
    check_c(c)?;
    if n == 0 {
        return domain("epsilon1: n must be at least 1");
    }
    let from = ceil_div(n, c);
    if cap < from {
        return domain(format!("epsilon1: cap {cap} is below the first index {from}"));
    }
    Ok(sup_weighted(seq, from, cap))
}

/// `sup_{n <= k <= cap} k|b_k|`, the quantity whose vanishing is necessary
/// for uniform convergence.
pub fn nbn_sup(seq: &RealSequence, n: u64, cap: u64) -> Result<Epsilon> {
    if n == 0 || cap < n {
        return domain(format!("nbn_sup: need 1 <= n <= cap, got n={n}, cap={cap}"));
    }
    Ok(sup_weighted(seq, n, cap))
}

/// `max_n n b_n / (4r Σ_{k=⌈n/c1⌉}^{⌊c1 n⌋} b_k)` with `c1 = max(3, 2c)`,
/// over `n > r`. A maximum at most 1 confirms the explicit weak-monotonicity
/// bound on the range.
pub fn theorem4_bound_check(seq: &RealSequence, r: u64, c: f64, n_range: &[u64]) -> Result<RatioReport> {
    check_c(c)?;
    if r == 0 {
        return domain("theorem4_bound_check: r must be at least 1");
    }
    let c1 = f64::max(3.0, 2.0 * c);
    if let Some(&n) = n_range.iter().find(|&&n| n <= r) {
        return domain(format!("theorem4_bound_check: n must exceed r = {r}, got {n}"));
    }
    let upper = |n: u64| (c1 * n as f64).floor() as u64;
    let last = n_range.iter().map(|&n| upper(n)).max().unwrap_or(0);
    // every window is a slice of the same prefix, so evaluate each term once
    let terms = seq.take(last);
    let first = n_range.iter().map(|&n| ceil_div(n, c1)).min().unwrap_or(1);
    if let Some(k) = (first..=last).find(|&k| terms[k as usize - 1] < 0.0) {
        return domain(format!(
            "theorem4_bound_check: b_{k} = {} is negative",
            terms[k as usize - 1]
        ));
    }
    let samples = n_range
        .par_iter()
        .map(|&n| {
            let window = &terms[ceil_div(n, c1) as usize - 1..upper(n) as usize];
            let mut acc = Accumulator::for_len(window.len() as u64);
            for &b in window {
                acc.add(b);
            }
            let (ratio, flagged) = ratio(n as f64 * terms[n as usize - 1], 4.0 * r as f64 * acc.value());
            RatioSample { n, ratio, flagged }
        })
        .collect();
    Ok(RatioReport::from_samples(samples))
}
