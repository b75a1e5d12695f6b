//! Numerical laboratory for the `(β, r)`-general monotone sequence classes
//! `GM(β*, r)` and for uniform convergence of sine series `Σ b_n sin nx`
//! with such coefficients.
//!
//! * [`sequence`] — 1-indexed real sequences and the separating families.
//! * [`gm`] — majorants, r-step defect profiles and class membership checks.
//! * [`series`] — partial sums, the r-step Abel identity, remainder and
//!   divergence diagnostics.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod error;
pub mod gm;
pub mod sequence;
pub mod series;
pub mod sum;

pub use error::{Error, Result};
pub use gm::{BetaSpec, DefectReport, DefectSample, Thresholds, Verdict};
pub use sequence::RealSequence;
pub use series::{ConvergenceReport, ConvergenceVerdict, EvalGrid, SineSeries};
