//! Summation by parts with step `r`:
//!
//! ```text
//! Σ_{k=n}^{2n-1} a_k sin kx = -1/(2 sin(rx/2)) · { Σ_{k=n}^{2n-1} (a_k - a_{k+r}) cos(k + r/2)x
//!                                              + Σ_{k=2n}^{2n+r-1} a_k cos(k - r/2)x
//!                                              - Σ_{k=n}^{n+r-1}  a_k cos(k - r/2)x }
//! ```
//!
//! valid whenever `x ≠ 2lπ/r`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::SineSeries;
use crate::error::{domain, Error, Result};
use crate::sequence;
use crate::sum::sum_range;

pub(crate) fn guard(r: u64, x: f64, tol: f64) -> Result<f64> {
    let s = (r as f64 * x / 2.0).sin();
    if s.abs() < tol {
        return Err(Error::Singularity {
            x,
            r,
            value: s.abs(),
            tol,
        });
    }
    Ok(s)
}

/// `Σ_{k=n}^{2n-1} b_k sin kx`
pub fn block_sum(series: &SineSeries, n: u64, x: f64) -> Result<f64> {
    if n == 0 {
        return domain("block_sum: n must be at least 1");
    }
    Ok(sum_range(n..=2 * n - 1, |k| series.b(k) * (k as f64 * x).sin()))
}

/// Right side of the step-`r` Abel identity for the block `[n, 2n-1]`.
///
/// Refuses `x` with `|sin(rx/2)| < exclusion_tol`.
pub fn lemma1_rhs(series: &SineSeries, n: u64, r: u64, x: f64, exclusion_tol: f64) -> Result<f64> {
    if n == 0 || r == 0 {
        return domain(format!("lemma1_rhs: need n >= 1 and r >= 1, got n={n}, r={r}"));
    }
    let s = guard(r, x, exclusion_tol)?;
    let half = r as f64 / 2.0;
    let diffs = sum_range(n..=2 * n - 1, |k| {
        (series.b(k) - series.b(k + r)) * ((k as f64 + half) * x).cos()
    });
    let upper = sum_range(2 * n..=2 * n + r - 1, |k| series.b(k) * ((k as f64 - half) * x).cos());
    let lower = sum_range(n..=n + r - 1, |k| series.b(k) * ((k as f64 - half) * x).cos());
    Ok(-(diffs + upper - lower) / (2.0 * s))
}

/// `|block_sum - lemma1_rhs| / (1 + |block_sum|)`
pub fn lemma1_residual(series: &SineSeries, n: u64, r: u64, x: f64, exclusion_tol: f64) -> Result<f64> {
    let rhs = lemma1_rhs(series, n, r, x, exclusion_tol)?;
    let lhs = block_sum(series, n, x)?;
    Ok((lhs - rhs).abs() / (1.0 + lhs.abs()))
}

/// One evaluation of the identity on a random series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Case {
    pub trial: u64,
    pub seed: u64,
    pub n: u64,
    pub r: u64,
    pub x: f64,
    pub block_sum: f64,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Suite {
    pub cases: Vec<Lemma1Case>,
    pub max_residual: f64,
}

/// Checks the identity on `trials` random series (amplitude 1, support
/// `2·n_max + r_max`) for every `n <= n_max` and `r <= r_max`, one `x` per
/// pair drawn uniformly from `(0, 2π)` subject to `|sin(rx/2)| >= min_sin`.
///
/// Seeds and points come from a ChaCha8 stream keyed by `seed`, so the
/// result depends only on the arguments.
pub fn lemma1_suite(trials: u64, seed: u64, n_max: u64, r_max: u64, min_sin: f64) -> Result<Lemma1Suite> {
    if trials == 0 || n_max == 0 || r_max == 0 {
        return domain("lemma1_suite: trials, n_max and r_max must be positive");
    }
    if !(min_sin > 0.0 && min_sin < 0.5) {
        return domain(format!("lemma1_suite: min_sin must lie in (0, 0.5), got {min_sin}"));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    #[allow(clippy::type_complexity)]
    let plans: Vec<(u64, u64, Vec<(u64, u64, f64)>)> = (0..trials)
        .map(|trial| {
            let series_seed: u64 = master.random();
            let mut points = Vec::with_capacity((n_max * r_max) as usize);
            for n in 1..=n_max {
                for r in 1..=r_max {
                    let x = loop {
                        let x = master.random_range(0.0..2.0 * PI);
                        if x > 0.0 && (r as f64 * x / 2.0).sin().abs() >= min_sin {
                            break x;
                        }
                    };
                    points.push((n, r, x));
                }
            }
            (trial, series_seed, points)
        })
        .collect();

    let length = 2 * n_max + r_max;
    let per_trial = plans
        .into_par_iter()
        .map(|(trial, series_seed, points)| {
            let series = SineSeries::new(sequence::random(series_seed, length, 1.0)?);
            points
                .into_iter()
                .map(|(n, r, x)| {
                    let block = block_sum(&series, n, x)?;
                    let rhs = lemma1_rhs(&series, n, r, x, min_sin)?;
                    Ok(Lemma1Case {
                        trial,
                        seed: series_seed,
                        n,
                        r,
                        x,
                        block_sum: block,
                        rhs,
                        residual: (block - rhs).abs() / (1.0 + block.abs()),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let cases: Vec<Lemma1Case> = per_trial.into_iter().flatten().collect();
    let max_residual = cases.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(Lemma1Suite { cases, max_residual })
}
