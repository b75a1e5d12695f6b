//! The classes `GM(β, r)`: majorants, defect profiles and the inequality
//! checks used by the embedding and separation experiments.

pub mod beta;
pub mod checks;
pub mod defect;

pub use beta::{beta_star, beta_variant, r_variation, window, BetaSpec};
pub use checks::{
    ceil_div, epsilon1, nbn_sup, remark1_condition, theorem4_bound_check, theorem6_condition, weak_monotone_defect,
    Epsilon, RatioReport, RatioSample,
};
pub use defect::{
    classify, defect_profile, dyadic_grid, least_squares_slope, membership, DefectReport, DefectSample, Membership,
    Thresholds, Verdict, DEFAULT_CS,
};
