//! Majorants `β_n` and the r-step block variation.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::sequence::RealSequence;
use crate::sum::sum_range;

/// Summation window `[max(1, ⌊n/c⌋), ⌊c·n⌋]`.
///
/// The lower limit is clamped to 1 because `⌊n/c⌋` vanishes for `n < c`.
pub fn window(n: u64, c: f64) -> (u64, u64) {
    let nf = n as f64;
    let lo = ((nf / c).floor() as u64).max(1);
    let hi = (c * nf).floor() as u64;
    (lo, hi)
}

pub(crate) fn check_c(c: f64) -> Result<()> {
    if c > 1.0 && c.is_finite() {
        Ok(())
    } else {
        domain(format!("c must be a finite real greater than 1, got {c}"))
    }
}

/// `Σ_{k=lo}^{hi} |a_k|`
pub(crate) fn abs_sum(seq: &RealSequence, lo: u64, hi: u64) -> f64 {
    sum_range(lo..=hi, |k| seq.at(k).abs())
}

/// `Σ_{k=lo}^{hi} |a_k| / k`
pub(crate) fn weighted_sum(seq: &RealSequence, lo: u64, hi: u64) -> f64 {
    sum_range(lo..=hi, |k| seq.at(k).abs() / k as f64)
}

/// `Σ_{k=m}^{2m-1} |a_k - a_{k+r}|`, the left side of the class inequality.
pub fn r_variation(seq: &RealSequence, m: u64, r: u64) -> Result<f64> {
    if m == 0 || r == 0 {
        return domain(format!("r_variation needs m >= 1 and r >= 1, got m={m}, r={r}"));
    }
    Ok(sum_range(m..=2 * m - 1, |k| (seq.at(k) - seq.at(k + r)).abs()))
}

/// `β*_n(r) = Σ_{k=n}^{n+r-1} |a_k| + Σ_{k=⌊n/c⌋}^{⌊cn⌋} |a_k|/k`.
pub fn beta_star(seq: &RealSequence, n: u64, r: u64, c: f64) -> Result<f64> {
    check_c(c)?;
    if n == 0 || r == 0 {
        return domain(format!("beta_star needs n >= 1 and r >= 1, got n={n}, r={r}"));
    }
    let (lo, hi) = window(n, c);
    Ok(abs_sum(seq, n, n + r - 1) + weighted_sum(seq, lo, hi))
}

/// Choice of majorant sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaSpec {
    /// `β*(r)` with parameter `c > 1`.
    BetaStar { r: u64, c: f64 },
    /// `|a_n|`
    V1,
    /// `Σ_{k=n}^{n+N} |a_k|`
    V2 { n: u64 },
    /// `Σ_{ν=0}^{N} |a_{base^ν · n}|` for an integer base `> 1`.
    V3 { n: u64, base: u64 },
    /// `|a_n| + Σ_{k=n+1}^{⌊cn⌋} |a_k|/k`
    V4 { c: f64 },
    /// `|a_n| + Σ_{k=⌊n/c⌋}^{⌊cn⌋} |a_k|/k`
    V5 { c: f64 },
}

impl BetaSpec {
    pub fn star(r: u64, c: f64) -> Self {
        BetaSpec::BetaStar { r, c }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BetaSpec::BetaStar { r, c } => {
                if r == 0 {
                    return domain("beta_star: r must be at least 1");
                }
                check_c(c)
            }
            BetaSpec::V1 | BetaSpec::V2 { .. } => Ok(()),
            BetaSpec::V3 { base, .. } => {
                if base < 2 {
                    domain(format!("variant 3: base must be an integer greater than 1, got {base}"))
                } else {
                    Ok(())
                }
            }
            BetaSpec::V4 { c } | BetaSpec::V5 { c } => check_c(c),
        }
    }

    /// Evaluates `β_n` for `seq`.
    pub fn eval(&self, seq: &RealSequence, n: u64) -> Result<f64> {
        self.validate()?;
        if n == 0 {
            return domain("beta index must be at least 1");
        }
        let value = match *self {
            BetaSpec::BetaStar { r, c } => return beta_star(seq, n, r, c),
            BetaSpec::V1 => seq.at(n).abs(),
            BetaSpec::V2 { n: extra } => abs_sum(seq, n, n + extra),
            BetaSpec::V3 { n: terms, base } => {
                let mut acc = 0.0;
                let mut idx = n;
                for nu in 0..=terms {
                    acc += seq.at(idx).abs();
                    if nu < terms {
                        idx = match idx.checked_mul(base) {
                            Some(i) => i,
                            None => return domain(format!("variant 3: index {base}^{} · {n} overflows", nu + 1)),
                        };
                    }
                }
                acc
            }
            BetaSpec::V4 { c } => {
                let (_, hi) = window(n, c);
                seq.at(n).abs() + weighted_sum(seq, n + 1, hi)
            }
            BetaSpec::V5 { c } => {
                let (lo, hi) = window(n, c);
                seq.at(n).abs() + weighted_sum(seq, lo, hi)
            }
        };
        Ok(value)
    }

    /// Short label used in reports, e.g. `beta_star(r=2,c=2)`.
    pub fn label(&self) -> String {
        match *self {
            BetaSpec::BetaStar { r, c } => format!("beta_star(r={r},c={c})"),
            BetaSpec::V1 => "v1".into(),
            BetaSpec::V2 { n } => format!("v2(N={n})"),
            BetaSpec::V3 { n, base } => format!("v3(N={n},base={base})"),
            BetaSpec::V4 { c } => format!("v4(c={c})"),
            BetaSpec::V5 { c } => format!("v5(c={c})"),
        }
    }
}

/// `β_n` for the given variant.
pub fn beta_variant(seq: &RealSequence, n: u64, spec: &BetaSpec) -> Result<f64> {
    spec.eval(seq, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{constant, power_log, theorem2, zero};

    fn harmonic() -> RealSequence {
        power_log(1.0, 0.0).unwrap()
    }

    #[test]
    fn window_clamps_lower_limit() {
        assert_eq!(window(1, 2.0), (1, 2));
        assert_eq!(window(2, 2.0), (1, 4));
        assert_eq!(window(9, 2.0), (4, 18));
        assert_eq!(window(3, 8.0), (1, 24));
    }

    #[test]
    fn r_variation_examples() {
        assert_eq!(r_variation(&harmonic(), 2, 1).unwrap(), 0.25);
        assert_eq!(r_variation(&constant(2.5), 7, 3).unwrap(), 0.0);
        let expected = (0.25f64 - 1.0 / 3.0).abs() + (1.0f64 / 3.0 - 1.0 / 16.0).abs();
        assert!((r_variation(&theorem2(2).unwrap(), 2, 1).unwrap() - expected).abs() < 1e-16);
        assert!((expected - 17.0 / 48.0).abs() < 1e-16);
        assert!(r_variation(&harmonic(), 0, 1).is_err());
        assert!(r_variation(&harmonic(), 1, 0).is_err());
    }

    #[test]
    fn beta_star_examples() {
        let b = beta_star(&harmonic(), 2, 1, 2.0).unwrap();
        assert!((b - (0.5 + 1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0)).abs() < 1e-15);
        assert!((b - 1.923_611_111_111_111).abs() < 1e-14);
        assert_eq!(beta_star(&zero(), 5, 3, 4.0).unwrap(), 0.0);

        let sq = power_log(2.0, 0.0).unwrap();
        let expected = (1.0 / 16.0 + 1.0 / 25.0) + (2..=8).map(|k| 1.0 / (k * k * k) as f64).sum::<f64>();
        assert!((beta_star(&sq, 4, 2, 2.0).unwrap() - expected).abs() < 1e-15);

        assert!(beta_star(&harmonic(), 2, 1, 1.0).is_err());
        assert!(beta_star(&harmonic(), 2, 1, f64::NAN).is_err());
    }

    #[test]
    fn variant_examples() {
        let h = harmonic();
        assert_eq!(beta_variant(&h, 3, &BetaSpec::V1).unwrap(), 1.0 / 3.0);
        assert_eq!(beta_variant(&h, 2, &BetaSpec::V2 { n: 1 }).unwrap(), 0.5 + 1.0 / 3.0);
        assert_eq!(
            beta_variant(&h, 3, &BetaSpec::V3 { n: 2, base: 2 }).unwrap(),
            1.0 / 3.0 + 1.0 / 6.0 + 1.0 / 12.0
        );
        let v4 = beta_variant(&h, 2, &BetaSpec::V4 { c: 2.0 }).unwrap();
        assert!((v4 - (0.5 + 1.0 / 9.0 + 1.0 / 16.0)).abs() < 1e-16);
        for n in 1..200 {
            for c in [1.5, 2.0, 3.7] {
                let v5 = beta_variant(&h, n, &BetaSpec::V5 { c }).unwrap();
                assert_eq!(v5.to_bits(), beta_star(&h, n, 1, c).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn malformed_specs_are_rejected() {
        let h = harmonic();
        assert!(beta_variant(&h, 1, &BetaSpec::V3 { n: 2, base: 1 }).is_err());
        assert!(beta_variant(&h, 1, &BetaSpec::V4 { c: 0.5 }).is_err());
        assert!(beta_variant(&h, 1, &BetaSpec::V5 { c: 1.0 }).is_err());
        assert!(beta_variant(&h, 1, &BetaSpec::BetaStar { r: 0, c: 2.0 }).is_err());
        assert!(beta_variant(&h, 0, &BetaSpec::V1).is_err());
        assert!(beta_variant(&h, u64::MAX / 2, &BetaSpec::V3 { n: 3, base: 2 }).is_err());
    }
}
