use std::fmt;

use serde::Serialize;

use super::divergence::{divergence_probe, DivergenceProbe};
use super::remainder::{abs_tail, remainder_sups};
use super::{EvalGrid, SineSeries};
use crate::error::{domain, Result};
use crate::gm::checks::{asymmetry_sum, ceil_div, epsilon1, nbn_sup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceVerdict {
    ConsistentWithUniformConvergence,
    DivergenceWitness,
    Inconclusive,
}

impl ConvergenceVerdict {
    pub fn token(self) -> &'static str {
        match self {
            ConvergenceVerdict::ConsistentWithUniformConvergence => "consistent_with_uniform_convergence",
            ConvergenceVerdict::DivergenceWitness => "divergence_witness",
            ConvergenceVerdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for ConvergenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Decision constants for [`convergence_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportSettings {
    /// The final remainder may not exceed this multiple of `ε1 + ε2`.
    pub ratio_tol: f64,
    /// Minimum overall movement of the checkpoint sums for a witness.
    pub divergence_threshold: f64,
    /// Checkpoints `3·10^j + 3` for `j = 1..=checkpoint_decades`.
    pub checkpoint_decades: u32,
}

impl Default for ReportSettings {
    fn default() -> Self {
        Self {
            ratio_tol: 10.0,
            divergence_threshold: 0.25,
            checkpoint_decades: 6,
        }
    }
}

/// Values computed alongside the report but not part of its serialized form.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Grid entries `n` whose `ε1` or `sup_{k>=n} k|b_k|` peaked at the cap.
    pub cap_attained: Vec<u64>,
    /// `2 ε1(N_max)`: bookkeeping bound on the part of the remainder beyond
    /// `N_max` dropped by truncation.
    pub truncation_tail: f64,
    /// `Σ_{k=n}^{N_max} |b_k|` per grid entry.
    pub abs_tails: Vec<f64>,
    pub probes: Vec<DivergenceProbe>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub n_grid: Vec<u64>,
    pub eps1: Vec<f64>,
    /// Empty for `r <= 2`.
    pub eps2: Vec<f64>,
    pub sup_remainder: Vec<f64>,
    pub side_condition_partials: Vec<f64>,
    pub nbn_sup: Vec<f64>,
    pub verdict: ConvergenceVerdict,
    #[serde(skip)]
    pub diagnostics: Diagnostics,
}

impl ConvergenceReport {
    /// `sup_remainder[i] / (eps1[i] + eps2[i])`
    pub fn remainder_ratios(&self) -> Vec<f64> {
        (0..self.n_grid.len())
            .map(|i| {
                let eps = self.eps1[i] + self.eps2.get(i).copied().unwrap_or(0.0);
                if eps > 0.0 {
                    self.sup_remainder[i] / eps
                } else if self.sup_remainder[i] > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .collect()
    }

    pub fn witness(&self) -> Option<&DivergenceProbe> {
        self.diagnostics.probes.iter().find(|p| p.witness)
    }
}

/// Assembles the uniform-convergence diagnostics for `series` with step `r`.
///
/// The verdict is `divergence_witness` if a probe point of `grid` shows
/// monotone checkpoint growth beyond the threshold;
/// `consistent_with_uniform_convergence` if no modulus hit the cap, the
/// remainders are nonincreasing along `n_grid` and the final remainder is
/// within `ratio_tol · (ε1 + ε2)`; `inconclusive` otherwise.
#[allow(clippy::too_many_arguments)]
pub fn convergence_report(
    series: &SineSeries,
    r: u64,
    c: f64,
    n_grid: &[u64],
    grid: &EvalGrid,
    n_max: u64,
    cap: u64,
    settings: &ReportSettings,
) -> Result<ConvergenceReport> {
    if r == 0 {
        return domain("convergence_report: r must be at least 1");
    }
    if n_grid.is_empty() || n_grid[0] == 0 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("convergence_report: n grid must be strictly ascending positive integers");
    }
    let largest = *n_grid.last().expect("nonempty");
    if cap < largest {
        return domain(format!("convergence_report: cap {cap} is below max n = {largest}"));
    }

    let coeffs = &series.coeffs;
    let mut cap_attained = Vec::new();
    let mut eps1 = Vec::with_capacity(n_grid.len());
    let mut nbn = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let e = epsilon1(coeffs, n, c, cap)?;
        let s = nbn_sup(coeffs, n, cap)?;
        if e.attained_at_cap || s.attained_at_cap {
            cap_attained.push(n);
        }
        eps1.push(e.value);
        nbn.push(s.value);
    }
    let eps2: Vec<f64> = if r >= 3 {
        n_grid
            .iter()
            .map(|&n| asymmetry_sum(coeffs, r, ceil_div(n, r as f64), cap))
            .collect()
    } else {
        Vec::new()
    };
    let side: Vec<f64> = n_grid.iter().map(|&n| asymmetry_sum(coeffs, r, 1, n)).collect();
    let sup_remainder = remainder_sups(series, n_grid, grid, n_max)?;
    let abs_tails = n_grid.iter().map(|&n| abs_tail(series, n, n_max)).collect();
    let truncation_tail = if n_max <= cap {
        2.0 * epsilon1(coeffs, n_max, c, cap)?.value
    } else {
        f64::NAN
    };

    let probes = grid
        .special()
        .iter()
        .map(|&x| divergence_probe(series, x, settings.checkpoint_decades, settings.divergence_threshold))
        .collect::<Result<Vec<_>>>()?;

    let mut report = ConvergenceReport {
        n_grid: n_grid.to_vec(),
        eps1,
        eps2,
        sup_remainder,
        side_condition_partials: side,
        nbn_sup: nbn,
        verdict: ConvergenceVerdict::Inconclusive,
        diagnostics: Diagnostics {
            cap_attained,
            truncation_tail,
            abs_tails,
            probes,
        },
    };

    report.verdict = if report.witness().is_some() {
        ConvergenceVerdict::DivergenceWitness
    } else {
        let nonincreasing = report.sup_remainder.windows(2).all(|w| w[1] <= w[0]);
        let last_ratio = *report.remainder_ratios().last().expect("nonempty");
        if report.diagnostics.cap_attained.is_empty() && nonincreasing && last_ratio <= settings.ratio_tol {
            ConvergenceVerdict::ConsistentWithUniformConvergence
        } else {
            ConvergenceVerdict::Inconclusive
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm::dyadic_grid;
    use crate::sequence::{power_log, remark3, zero};

    fn ns() -> Vec<u64> {
        dyadic_grid(1 << 8).into_iter().filter(|&n| n >= 16).collect()
    }

    #[test]
    fn zero_series_is_consistent_with_zero_fields() {
        let grid = EvalGrid::chebyshev(32, 1e-6).unwrap().with_special_points(3);
        let rep = convergence_report(
            &SineSeries::new(zero()),
            3,
            2.0,
            &ns(),
            &grid,
            1 << 10,
            1 << 12,
            &ReportSettings::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, ConvergenceVerdict::ConsistentWithUniformConvergence);
        for v in [
            &rep.eps1,
            &rep.eps2,
            &rep.sup_remainder,
            &rep.side_condition_partials,
            &rep.nbn_sup,
        ] {
            assert_eq!(v.len(), rep.n_grid.len());
            assert!(v.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn monotone_series_is_consistent() {
        let grid = EvalGrid::chebyshev(128, 1e-6).unwrap();
        let s = SineSeries::new(power_log(1.0, 1.0).unwrap());
        let rep = convergence_report(&s, 2, 2.0, &ns(), &grid, 1 << 12, 1 << 16, &ReportSettings::default()).unwrap();
        assert_eq!(rep.verdict, ConvergenceVerdict::ConsistentWithUniformConvergence);
        assert!(rep.eps2.is_empty());
        assert!(rep.side_condition_partials.iter().all(|&v| v == 0.0));
        for (i, s) in rep.sup_remainder.iter().enumerate() {
            assert!(*s <= rep.diagnostics.abs_tails[i]);
        }
    }

    #[test]
    fn divergent_family_has_witness() {
        let grid = EvalGrid::chebyshev(32, 1e-6).unwrap().with_special_points(3);
        let s = SineSeries::new(remark3());
        let settings = ReportSettings {
            checkpoint_decades: 5,
            ..ReportSettings::default()
        };
        let rep = convergence_report(&s, 3, 2.0, &ns(), &grid, 1 << 10, 1 << 12, &settings).unwrap();
        assert_eq!(rep.verdict, ConvergenceVerdict::DivergenceWitness);
        assert_eq!(rep.witness().unwrap().x, super::super::X0);
    }

    #[test]
    fn growing_weights_hit_the_cap() {
        let grid = EvalGrid::chebyshev(16, 1e-6).unwrap();
        let s = SineSeries::new(power_log(0.5, 0.0).unwrap());
        let rep = convergence_report(&s, 2, 2.0, &ns(), &grid, 1 << 10, 1 << 12, &ReportSettings::default()).unwrap();
        assert_eq!(rep.diagnostics.cap_attained, ns());
        assert_eq!(rep.verdict, ConvergenceVerdict::Inconclusive);
    }

    #[test]
    fn bad_parameters() {
        let grid = EvalGrid::chebyshev(16, 1e-6).unwrap();
        let s = SineSeries::new(zero());
        let st = ReportSettings::default();
        assert!(convergence_report(&s, 2, 2.0, &[], &grid, 64, 64, &st).is_err());
        assert!(convergence_report(&s, 2, 2.0, &[32], &grid, 63, 64, &st).is_err());
        assert!(convergence_report(&s, 2, 1.0, &[32], &grid, 64, 64, &st).is_err());
        assert!(convergence_report(&s, 2, 2.0, &[32], &grid, 64, 16, &st).is_err());
    }
}
