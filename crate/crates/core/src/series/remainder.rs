use rayon::prelude::*;

use super::{EvalGrid, SineSeries};
use crate::error::{domain, Result};
use crate::gm::checks::{asymmetry_sum, ceil_div};
use crate::sequence::RealSequence;
use crate::sum::{sum_range, NeumaierSum};

/// `max_x |S_{N_max}(x) - S_{n-1}(x)|` over the grid for every `n` in `ns`,
/// a truncated stand-in for `sup_x |Σ_{k>=n} b_k sin kx|`.
///
/// One compensated pass up to `n_max` per grid point serves all `n`.
pub fn remainder_sups(series: &SineSeries, ns: &[u64], grid: &EvalGrid, n_max: u64) -> Result<Vec<f64>> {
    if ns.is_empty() {
        return Ok(Vec::new());
    }
    if ns.contains(&0) {
        return domain("remainder_sup: n must be at least 1");
    }
    let largest = *ns.iter().max().expect("nonempty");
    if n_max < 2 * largest {
        return domain(format!("remainder_sup: N_max = {n_max} is below 2n = {}", 2 * largest));
    }

    let coeffs: Vec<f64> = (1..=n_max).map(|k| series.b(k)).collect();
    // checkpoints at k = n - 1, ascending, tagged with their slot in `ns`
    let mut marks: Vec<(u64, usize)> = ns.iter().enumerate().map(|(i, &n)| (n - 1, i)).collect();
    marks.sort_unstable();

    let per_point: Vec<Vec<f64>> = grid
        .points()
        .par_iter()
        .map(|&x| {
            let mut heads = vec![0.0; ns.len()];
            let mut acc = NeumaierSum::new();
            let mut next = 0;
            while next < marks.len() && marks[next].0 == 0 {
                heads[marks[next].1] = 0.0;
                next += 1;
            }
            for (i, &b) in coeffs.iter().enumerate() {
                let k = i as u64 + 1;
                acc.add(b * (k as f64 * x).sin());
                while next < marks.len() && marks[next].0 == k {
                    heads[marks[next].1] = acc.value();
                    next += 1;
                }
            }
            let total = acc.value();
            heads.into_iter().map(|h| (total - h).abs()).collect()
        })
        .collect();

    let mut sups = vec![0.0f64; ns.len()];
    for row in &per_point {
        for (s, v) in sups.iter_mut().zip(row) {
            *s = s.max(*v);
        }
    }
    Ok(sups)
}

/// Single-`n` form of [`remainder_sups`].
pub fn remainder_sup(series: &SineSeries, n: u64, grid: &EvalGrid, n_max: u64) -> Result<f64> {
    Ok(remainder_sups(series, &[n], grid, n_max)?[0])
}

/// `Σ_{k=n}^{N_max} |b_k|`, the triangle-inequality ceiling for any
/// truncated remainder.
pub fn abs_tail(series: &SineSeries, n: u64, n_max: u64) -> f64 {
    sum_range(n.max(1)..=n_max, |k| series.b(k).abs())
}

/// `Σ_{m=⌈n/r⌉}^{cap} Σ_{k=1}^{⌊r/2⌋} |b_{rm+k} - b_{rm+r-k}|`, the tail of the
/// block-asymmetry series.
pub fn epsilon2(seq: &RealSequence, r: u64, n: u64, cap: u64) -> Result<f64> {
    if r < 3 {
        return domain(format!("epsilon2: r must be at least 3, got {r}"));
    }
    if n == 0 {
        return domain("epsilon2: n must be at least 1");
    }
    Ok(asymmetry_sum(seq, r, ceil_div(n, r as f64), cap))
}
