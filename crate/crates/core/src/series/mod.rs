//! Sine series `Σ b_k sin kx`: partial and block sums, the r-step Abel
//! identity, truncated remainders, and the convergence/divergence
//! diagnostics assembled from them.

mod abel;
mod divergence;
mod remainder;
mod report;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::sequence::RealSequence;

pub use abel::{block_sum, lemma1_residual, lemma1_rhs, lemma1_suite, Lemma1Case, Lemma1Suite};
pub use divergence::{
    checkpoint_indices, diverge_lower_bound, divergence_probe, remark3_identity, DivergenceProbe, X0,
};
pub use remainder::{abs_tail, epsilon2, remainder_sup, remainder_sups};
pub use report::{convergence_report, ConvergenceReport, ConvergenceVerdict, Diagnostics, ReportSettings};

/// Default minimum `|sin(r x / 2)|` accepted by the Abel identity.
pub const DEFAULT_EXCLUSION_TOL: f64 = 1e-6;

/// Default number of Chebyshev points used to approximate `sup_x`.
pub const DEFAULT_GRID_SIZE: usize = 1024;

#[derive(Debug, Clone)]
pub struct SineSeries {
    pub coeffs: RealSequence,
    pub label: String,
}

impl SineSeries {
    pub fn new(coeffs: RealSequence) -> Self {
        let label = coeffs.name().to_owned();
        Self { coeffs, label }
    }

    pub fn with_label(coeffs: RealSequence, label: impl Into<String>) -> Self {
        Self {
            coeffs,
            label: label.into(),
        }
    }

    #[inline]
    pub(crate) fn b(&self, k: u64) -> f64 {
        self.coeffs.at(k)
    }

    /// `Σ_{k=1}^{N} b_k sin kx`, ascending, compensated beyond 10⁴ terms.
    pub fn partial_sum(&self, n: u64, x: f64) -> f64 {
        crate::sum::sum_range(1..=n, |k| self.b(k) * (k as f64 * x).sin())
    }
}

/// `Σ_{k=1}^{N} b_k sin kx`.
pub fn partial_sum(series: &SineSeries, n: u64, x: f64) -> Result<f64> {
    if n == 0 {
        return domain("partial_sum: N must be at least 1");
    }
    Ok(series.partial_sum(n, x))
}

/// Evaluation points in `(0, π)` used to approximate `sup_x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalGrid {
    points: Vec<f64>,
    /// Points of the form `2lπ/r` where the divergence probe runs.
    special: Vec<f64>,
    exclusion_tol: f64,
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

impl EvalGrid {
    pub fn new(mut points: Vec<f64>, exclusion_tol: f64) -> Result<Self> {
        if !(exclusion_tol > 0.0) {
            return domain(format!("exclusion tolerance must be positive, got {exclusion_tol}"));
        }
        if let Some(x) = points.iter().find(|&&x| !(x > 0.0 && x < PI)) {
            return domain(format!("grid point {x} lies outside (0, π)"));
        }
        sort_dedup(&mut points);
        Ok(Self {
            points,
            special: Vec::new(),
            exclusion_tol,
        })
    }

    /// `size` Chebyshev points `(π/2)(1 - cos((2j-1)π/(2·size)))`, clustered
    /// toward both ends of `(0, π)` where the remainders peak.
    pub fn chebyshev(size: usize, exclusion_tol: f64) -> Result<Self> {
        if size == 0 {
            return domain("grid size must be at least 1");
        }
        let g = size as f64;
        let points = (1..=size)
            .map(|j| 0.5 * PI * (1.0 - ((2 * j - 1) as f64 * PI / (2.0 * g)).cos()))
            .collect();
        Self::new(points, exclusion_tol)
    }

    /// Adds the points `2lπ/r` lying in `(0, π)` to both the grid and the
    /// divergence probes.
    pub fn with_special_points(mut self, r: u64) -> Self {
        let rf = r as f64;
        for l in 1.. {
            if 2 * l >= r {
                break;
            }
            let x = 2.0 * l as f64 * PI / rf;
            self.points.push(x);
            self.special.push(x);
        }
        sort_dedup(&mut self.points);
        sort_dedup(&mut self.special);
        self
    }

    /// Adds one divergence probe point.
    pub fn with_probe(mut self, x: f64) -> Result<Self> {
        if !(x > 0.0 && x < PI) {
            return domain(format!("probe point {x} lies outside (0, π)"));
        }
        self.points.push(x);
        self.special.push(x);
        sort_dedup(&mut self.points);
        sort_dedup(&mut self.special);
        Ok(self)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn special(&self) -> &[f64] {
        &self.special
    }

    pub fn exclusion_tol(&self) -> f64 {
        self.exclusion_tol
    }

    /// Fails on the first point where the Abel identity with step `r` is
    /// singular.
    pub fn check_lemma1(&self, r: u64) -> Result<()> {
        for &x in &self.points {
            abel::guard(r, x, self.exclusion_tol)?;
        }
        Ok(())
    }
}
