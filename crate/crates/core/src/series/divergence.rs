//! Divergence at `x0 = 2π/3` for the coefficients of [`sequence::remark3`].
//!
//! At `x0` the terms with `k ≡ 0 (mod 3)` vanish and `sin(k x0) = ±sin x0`
//! otherwise, so the partial sum `S_{3M+3}` telescopes to
//! `sin x0 · [(d_1 - d_2) + Σ_{k=1}^{M} (d_{3k+1} - d_{3k+2})]`, which grows
//! like `(2/3) sin x0 · ln ln M`.

use serde::Serialize;

use super::SineSeries;
use crate::error::{domain, Result};
use crate::sequence;
use crate::sum::{sum_range, NeumaierSum};

/// The divergence point `2π/3`.
pub const X0: f64 = 2.0 * std::f64::consts::PI / 3.0;

/// Partial sum of the series at `x0` with `N = 3M + 3` terms, and its
/// telescoped closed form. `M = 0` is the three-term edge case.
pub fn remark3_identity(m: u64) -> (f64, f64) {
    let d = sequence::remark3();
    let series = SineSeries::new(d.clone());
    let lhs = series.partial_sum(3 * m + 3, X0);
    let pairs = sum_range(1..=m, |k| d.at(3 * k + 1) - d.at(3 * k + 2));
    let rhs = X0.sin() * ((d.at(1) - d.at(2)) + pairs);
    (lhs, rhs)
}

/// `sin(2π/3) · Σ_{k=1}^{K} 2/((3k+1) ln(3k+3))`, a lower bound for the
/// telescoped partial sums that grows without bound.
pub fn diverge_lower_bound(k: u64) -> Result<f64> {
    if k == 0 {
        return domain("diverge_lower_bound: K must be at least 1");
    }
    let s = sum_range(1..=k, |j| {
        let jf = j as f64;
        2.0 / ((3.0 * jf + 1.0) * (3.0 * jf + 3.0).ln())
    });
    Ok(X0.sin() * s)
}

/// Checkpoints `N_j = 3·10^j + 3` for `j = 1..=decades`.
pub fn checkpoint_indices(decades: u32) -> Vec<u64> {
    (1..=decades).map(|j| 3 * 10u64.pow(j) + 3).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceProbe {
    pub x: f64,
    /// `(N, S_N(x))` at each checkpoint.
    pub checkpoints: Vec<(u64, f64)>,
    /// Checkpoint sums are strictly monotone.
    pub monotone: bool,
    /// `S_last - S_first`.
    pub increase: f64,
    pub witness: bool,
}

/// Evaluates `S_N(x)` at the checkpoints in one compensated pass and flags a
/// divergence witness when the values move strictly monotonically by at
/// least `threshold` overall.
pub fn divergence_probe(series: &SineSeries, x: f64, decades: u32, threshold: f64) -> Result<DivergenceProbe> {
    if decades < 2 {
        return domain("divergence_probe: need at least two checkpoint decades");
    }
    let marks = checkpoint_indices(decades);
    let last = *marks.last().expect("nonempty");
    let mut acc = NeumaierSum::new();
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut next = 0;
    for k in 1..=last {
        acc.add(series.b(k) * (k as f64 * x).sin());
        if k == marks[next] {
            checkpoints.push((k, acc.value()));
            next += 1;
        }
    }
    let increasing = checkpoints.windows(2).all(|w| w[1].1 > w[0].1);
    let decreasing = checkpoints.windows(2).all(|w| w[1].1 < w[0].1);
    let increase = checkpoints[checkpoints.len() - 1].1 - checkpoints[0].1;
    let monotone = increasing || decreasing;
    Ok(DivergenceProbe {
        x,
        checkpoints,
        monotone,
        increase,
        witness: monotone && increase.abs() >= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_small_m() {
        let d = sequence::remark3();
        let (lhs, rhs) = remark3_identity(0);
        let expected = X0.sin() * (d.at(1) - d.at(2));
        assert!((lhs - expected).abs() < 1e-15 && (rhs - expected).abs() < 1e-15);

        let (lhs, rhs) = remark3_identity(1);
        let ln = f64::ln;
        let expected =
            X0.sin() * ((3.0 / ln(2.0) - 1.0 / (2.0 * ln(3.0))) + (3.0 / (4.0 * ln(5.0)) - 1.0 / (5.0 * ln(6.0))));
        assert!((lhs - expected).abs() < 1e-14);
        assert!((rhs - expected).abs() < 1e-14);
    }

    #[test]
    fn lower_bound_first_term_and_growth() {
        let v1 = diverge_lower_bound(1).unwrap();
        assert!((v1 - X0.sin() * 2.0 / (4.0 * 6f64.ln())).abs() < 1e-16);
        let mut prev = 0.0;
        for k in 1..500 {
            let v = diverge_lower_bound(k).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(diverge_lower_bound(0).is_err());
    }

    #[test]
    fn checkpoints() {
        assert_eq!(checkpoint_indices(3), vec![33, 303, 3003]);
    }

    #[test]
    fn probe_sees_divergence_only_at_x0() {
        let d = SineSeries::new(sequence::remark3());
        let at_x0 = divergence_probe(&d, X0, 5, 0.25).unwrap();
        assert!(at_x0.witness, "{at_x0:?}");
        let elsewhere = divergence_probe(&d, 1.0, 5, 0.25).unwrap();
        assert!(!elsewhere.witness);
        let sym = SineSeries::new(sequence::remark4(3).unwrap());
        assert!(!divergence_probe(&sym, X0, 5, 0.25).unwrap().witness);
        assert!(divergence_probe(&d, X0, 1, 0.25).is_err());
    }
}
