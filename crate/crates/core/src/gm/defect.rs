//! Defect profiles: the ratio `Σ_{n=m}^{2m-1} |a_n - a_{n+r}| / β_m` sampled
//! over a grid of window starts, and the bounded/growing classification
//! derived from its log–log trend.
//!
//! Class membership asks for a constant `K(a)` with `lhs ≤ K(a)·β_m` for all
//! `m`. A finite grid cannot certify that, so the profile reports the largest
//! ratio seen together with the slope of `ln ratio` against `ln m` on the upper
//! half of the grid. A bounded ratio has slope near zero; the separating
//! sequences grow like `m` or `m / ln m`, slope near one.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::beta::{r_variation, BetaSpec};
use crate::error::{domain, Result};
use crate::sequence::RealSequence;

/// Default values of `c` tried when deciding membership.
pub const DEFAULT_CS: [f64; 3] = [2.0, 4.0, 8.0];

/// `1, 2, 4, …` up to and including `max` (when it is a power of two).
pub fn dyadic_grid(max: u64) -> Vec<u64> {
    std::iter::successors(Some(1u64), |&m| m.checked_mul(2))
        .take_while(|&m| m <= max)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectSample {
    pub m: u64,
    pub lhs: f64,
    pub beta: f64,
    /// `lhs / beta`; `+inf` when `beta = 0 < lhs`, `0` when both vanish.
    pub ratio: f64,
}

impl DefectSample {
    pub fn new(m: u64, lhs: f64, beta: f64) -> Self {
        let ratio = if beta > 0.0 {
            lhs / beta
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        Self { m, lhs, beta, ratio }
    }

    /// The majorant vanished while the variation did not.
    pub fn zero_beta(&self) -> bool {
        self.ratio.is_infinite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Growing,
    Inconclusive,
}

impl Verdict {
    pub fn token(self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::Growing => "growing",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Slope and ratio thresholds for [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Bounded requires `slope <= slope_hi`.
    pub slope_hi: f64,
    /// Growing requires `slope >= slope_lo`.
    pub slope_lo: f64,
    /// Bounded also requires `max_ratio <= ratio_cap`.
    pub ratio_cap: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            slope_hi: 0.2,
            slope_lo: 0.6,
            ratio_cap: f64::INFINITY,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.slope_hi < self.slope_lo) {
            return domain(format!(
                "slope thresholds need slope_hi < slope_lo, got {} and {}",
                self.slope_hi, self.slope_lo
            ));
        }
        if !(self.ratio_cap > 0.0) {
            return domain(format!("ratio cap must be positive, got {}", self.ratio_cap));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub r: u64,
    pub beta: BetaSpec,
    pub samples: Vec<DefectSample>,
    /// Largest finite ratio (0 when there is none).
    pub max_ratio: f64,
    pub slope: f64,
    pub verdict: Verdict,
}

impl DefectReport {
    pub fn zero_beta_count(&self) -> usize {
        self.samples.iter().filter(|s| s.zero_beta()).count()
    }

    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.ratio)
    }
}

fn median(sorted: &[u64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        0.5 * (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64)
    }
}

/// Ordinary least squares slope of `ys` on `xs`; 0 for fewer than two points.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Slope of `ln ratio` against `ln m` over the points with `m >= median(m)`.
/// Zero and infinite ratios carry no trend information and are skipped.
pub(crate) fn log_log_slope(points: &[(u64, f64)]) -> f64 {
    let ms: Vec<u64> = points.iter().map(|p| p.0).collect();
    if ms.is_empty() {
        return 0.0;
    }
    let cut = median(&ms);
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|&&(m, ratio)| m as f64 >= cut && ratio.is_finite() && ratio > 0.0)
        .map(|&(m, ratio)| ((m as f64).ln(), ratio.ln()))
        .unzip();
    least_squares_slope(&xs, &ys)
}

fn trend_slope(samples: &[DefectSample]) -> f64 {
    let points: Vec<(u64, f64)> = samples.iter().map(|s| (s.m, s.ratio)).collect();
    log_log_slope(&points)
}

fn verdict_for(report: &DefectReport, t: &Thresholds) -> Verdict {
    let any_infinite = report.samples.iter().any(DefectSample::zero_beta);
    if report.slope <= t.slope_hi && !any_infinite && report.max_ratio <= t.ratio_cap {
        Verdict::Bounded
    } else if report.slope >= t.slope_lo {
        Verdict::Growing
    } else {
        Verdict::Inconclusive
    }
}

/// Re-derives the verdict of `report` under the given thresholds.
pub fn classify(report: &DefectReport, slope_lo: f64, slope_hi: f64, ratio_cap: f64) -> Result<Verdict> {
    let t = Thresholds {
        slope_hi,
        slope_lo,
        ratio_cap,
    };
    t.validate()?;
    Ok(verdict_for(report, &t))
}

/// Samples the defect ratio of `seq` at step `r` against `beta` on `m_grid`.
pub fn defect_profile(
    seq: &RealSequence,
    r: u64,
    beta: &BetaSpec,
    m_grid: &[u64],
    thresholds: &Thresholds,
) -> Result<DefectReport> {
    thresholds.validate()?;
    beta.validate()?;
    if r == 0 {
        return domain("defect_profile: r must be at least 1");
    }
    if m_grid.is_empty() {
        return domain("defect_profile: m grid is empty");
    }
    if m_grid[0] == 0 || m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("defect_profile: m grid must be strictly ascending positive integers");
    }

    let samples = m_grid
        .par_iter()
        .map(|&m| Ok(DefectSample::new(m, r_variation(seq, m, r)?, beta.eval(seq, m)?)))
        .collect::<Result<Vec<_>>>()?;

    let max_ratio = samples
        .iter()
        .map(|s| s.ratio)
        .filter(|x| x.is_finite())
        .fold(0.0, f64::max);
    let slope = trend_slope(&samples);
    let mut report = DefectReport {
        r,
        beta: *beta,
        samples,
        max_ratio,
        slope,
        verdict: Verdict::Inconclusive,
    };
    report.verdict = verdict_for(&report, thresholds);
    Ok(report)
}

/// Defect profiles against `β*(r, c)` for several `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub r: u64,
    pub profiles: Vec<(f64, DefectReport)>,
    pub verdict: Verdict,
}

impl Membership {
    /// Profile with the smallest slope, the one that decided a bounded verdict.
    pub fn best(&self) -> &DefectReport {
        &self
            .profiles
            .iter()
            .min_by(|a, b| a.1.slope.total_cmp(&b.1.slope))
            .expect("membership has at least one profile")
            .1
    }
}

/// Numerical membership test for `GM(β*, r)`: bounded if the profile is
/// bounded for some `c`, growing if it grows for every `c`, inconclusive
/// otherwise.
pub fn membership(
    seq: &RealSequence,
    r: u64,
    cs: &[f64],
    m_grid: &[u64],
    thresholds: &Thresholds,
) -> Result<Membership> {
    if cs.is_empty() {
        return domain("membership: no values of c given");
    }
    let profiles = cs
        .iter()
        .map(|&c| Ok((c, defect_profile(seq, r, &BetaSpec::star(r, c), m_grid, thresholds)?)))
        .collect::<Result<Vec<_>>>()?;
    let verdict = if profiles.iter().any(|(_, p)| p.verdict == Verdict::Bounded) {
        Verdict::Bounded
    } else if profiles.iter().all(|(_, p)| p.verdict == Verdict::Growing) {
        Verdict::Growing
    } else {
        Verdict::Inconclusive
    };
    Ok(Membership { r, profiles, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{power_log, theorem2, zero};

    fn report_with_ratios(ratios: &[(u64, f64)]) -> DefectReport {
        let samples: Vec<_> = ratios.iter().map(|&(m, r)| DefectSample::new(m, r, 1.0)).collect();
        let max_ratio = samples
            .iter()
            .map(|s| s.ratio)
            .filter(|x| x.is_finite())
            .fold(0.0, f64::max);
        let slope = trend_slope(&samples);
        DefectReport {
            r: 1,
            beta: BetaSpec::V1,
            samples,
            max_ratio,
            slope,
            verdict: Verdict::Inconclusive,
        }
    }

    #[test]
    fn dyadic_grid_shape() {
        assert_eq!(dyadic_grid(1), vec![1]);
        assert_eq!(dyadic_grid(10), vec![1, 2, 4, 8]);
        assert_eq!(dyadic_grid(1 << 13).len(), 14);
        assert_eq!(dyadic_grid(u64::MAX).len(), 64);
    }

    #[test]
    fn sample_ratio_flags() {
        assert_eq!(DefectSample::new(1, 0.0, 0.0).ratio, 0.0);
        assert!(DefectSample::new(1, 1.0, 0.0).zero_beta());
        let s = DefectSample::new(4, 0.3, 0.7);
        assert!((s.ratio * s.beta - s.lhs).abs() < 1e-16);
    }

    #[test]
    fn classify_examples() {
        let flat = report_with_ratios(&(0..12).map(|j| (1u64 << j, 0.5)).collect::<Vec<_>>());
        assert_eq!(flat.slope, 0.0);
        assert_eq!(classify(&flat, 0.6, 0.2, f64::INFINITY).unwrap(), Verdict::Bounded);

        let linear = report_with_ratios(
            &(0..12)
                .map(|j| (1u64 << j, (1u64 << j) as f64 * 3.0))
                .collect::<Vec<_>>(),
        );
        assert!((linear.slope - 1.0).abs() < 1e-12);
        assert_eq!(classify(&linear, 0.6, 0.2, f64::INFINITY).unwrap(), Verdict::Growing);

        let sqrt = report_with_ratios(
            &(0..12)
                .map(|j| (1u64 << j, ((1u64 << j) as f64).powf(0.4)))
                .collect::<Vec<_>>(),
        );
        assert_eq!(classify(&sqrt, 0.6, 0.2, f64::INFINITY).unwrap(), Verdict::Inconclusive);

        // flat but above the cap
        assert_eq!(classify(&flat, 0.6, 0.2, 0.1).unwrap(), Verdict::Inconclusive);
        assert!(classify(&flat, 0.2, 0.6, 1.0).is_err());
        // repeat gives the same answer
        assert_eq!(
            classify(&sqrt, 0.6, 0.2, 1.0).unwrap(),
            classify(&sqrt, 0.6, 0.2, 1.0).unwrap()
        );
    }

    #[test]
    fn infinite_ratio_is_never_bounded() {
        let mut rep = report_with_ratios(&[(1, 1.0), (2, 1.0), (4, 1.0)]);
        rep.samples[0] = DefectSample::new(1, 1.0, 0.0);
        assert_eq!(classify(&rep, 0.6, 0.2, f64::INFINITY).unwrap(), Verdict::Inconclusive);
    }

    #[test]
    fn monotone_profile_is_bounded_below_one() {
        let h = power_log(1.0, 0.0).unwrap();
        let rep = defect_profile(
            &h,
            1,
            &BetaSpec::star(1, 2.0),
            &dyadic_grid(1 << 12),
            &Thresholds::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Bounded);
        assert!(rep.max_ratio <= 1.0);
    }

    #[test]
    fn separating_sequence_profiles() {
        let a = theorem2(2).unwrap();
        let grid = dyadic_grid(1 << 13);
        let t = Thresholds::default();
        let r1 = defect_profile(&a, 1, &BetaSpec::star(1, 2.0), &grid, &t).unwrap();
        assert_eq!(r1.verdict, Verdict::Growing);
        let r2 = defect_profile(&a, 2, &BetaSpec::star(2, 2.0), &grid, &t).unwrap();
        assert_eq!(r2.verdict, Verdict::Bounded);
    }

    #[test]
    fn zero_sequence_is_bounded() {
        let rep = defect_profile(
            &zero(),
            3,
            &BetaSpec::star(3, 2.0),
            &dyadic_grid(256),
            &Thresholds::default(),
        )
        .unwrap();
        assert_eq!(rep.max_ratio, 0.0);
        assert_eq!(rep.verdict, Verdict::Bounded);
    }

    #[test]
    fn bad_grids_are_rejected() {
        let h = power_log(1.0, 0.0).unwrap();
        let b = BetaSpec::star(1, 2.0);
        let t = Thresholds::default();
        assert!(defect_profile(&h, 1, &b, &[], &t).is_err());
        assert!(defect_profile(&h, 1, &b, &[0, 1], &t).is_err());
        assert!(defect_profile(&h, 1, &b, &[4, 2], &t).is_err());
        assert!(defect_profile(&h, 0, &b, &[1], &t).is_err());
    }

    #[test]
    fn membership_takes_any_c() {
        let a = theorem2(2).unwrap();
        let grid = dyadic_grid(1 << 12);
        let m = membership(&a, 2, &DEFAULT_CS, &grid, &Thresholds::default()).unwrap();
        assert_eq!(m.verdict, Verdict::Bounded);
        assert_eq!(m.profiles.len(), 3);
        let m1 = membership(&a, 1, &DEFAULT_CS, &grid, &Thresholds::default()).unwrap();
        assert_eq!(m1.verdict, Verdict::Growing);
    }
}
