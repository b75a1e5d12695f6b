//! Real sequences indexed from 1 and the concrete families used by the
//! embedding, separation and divergence experiments.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};

type TermFn = dyn Fn(u64) -> f64 + Send + Sync;

/// A lazily evaluated real sequence `a_1, a_2, …`.
///
/// Terms are produced by a pure function of the index, so a sequence can be
/// cloned cheaply and shared between threads.
#[derive(Clone)]
pub struct RealSequence {
    name: String,
    params: BTreeMap<String, f64>,
    term_fn: Arc<TermFn>,
}

impl RealSequence {
    pub fn new<F>(name: impl Into<String>, params: BTreeMap<String, f64>, term_fn: F) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            params,
            term_fn: Arc::new(term_fn),
        }
    }

    /// Sequence without recorded parameters.
    pub fn from_fn<F>(name: impl Into<String>, term_fn: F) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, BTreeMap::new(), term_fn)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Returns `a_n`. Index 0 is outside the domain.
    pub fn term(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return domain("sequence index must be at least 1");
        }
        Ok(self.at(n))
    }

    /// Unchecked evaluation for internal loops whose bounds are already
    /// clamped to `n >= 1`.
    #[inline]
    pub(crate) fn at(&self, n: u64) -> f64 {
        debug_assert!(n >= 1, "sequence index 0");
        (self.term_fn)(n)
    }

    /// `(a_n)` multiplied by `-1`.
    pub fn negated(&self) -> Self {
        let inner = Arc::clone(&self.term_fn);
        Self {
            name: format!("-{}", self.name),
            params: self.params.clone(),
            term_fn: Arc::new(move |n| -inner(n)),
        }
    }

    /// Materializes `a_1..=a_len`.
    pub fn take(&self, len: u64) -> Vec<f64> {
        (1..=len).map(|n| self.at(n)).collect()
    }
}

impl fmt::Debug for RealSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealSequence")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

fn params<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

#[inline]
fn n_log(n: u64) -> f64 {
    let nf = n as f64;
    nf * (nf + 1.0).ln()
}

/// `a_n = 0`.
pub fn zero() -> RealSequence {
    RealSequence::from_fn("zero", |_| 0.0)
}

/// `a_n = value`.
pub fn constant(value: f64) -> RealSequence {
    RealSequence::new("constant", params([("value", value)]), move |_| value)
}

/// `1/n² ` when `period | n`, `3/n²` otherwise.
fn two_level_square(name: &str, key: &str, period: u64) -> Result<RealSequence> {
    if period == 0 {
        return domain(format!("{name}: period {key} must be at least 1"));
    }
    Ok(RealSequence::new(name, params([(key, period as f64)]), move |n| {
        let nf = n as f64;
        let level = if n % period == 0 { 1.0 } else { 3.0 };
        level / (nf * nf)
    }))
}

/// Separating sequence for the strict inclusion `GM(β*, r1) ⊊ GM(β*, r2)`:
/// `a_n = (2 + α_n)/n²` with `α_n = -1` if `r2 | n` and `+1` otherwise.
pub fn theorem2(r2: u64) -> Result<RealSequence> {
    two_level_square("thm2", "r2", r2)
}

/// Companion sequence for non-comparability: `e_n = (2 + γ_n)/n²` with
/// `γ_n = -1` if `r1 | n` and `+1` otherwise.
pub fn theorem3(r1: u64) -> Result<RealSequence> {
    two_level_square("thm3", "r1", r1)
}

/// Coefficients of a sine series in `GM(β*, 3)` with `n d_n → 0` that
/// diverges at `x = 2π/3`: `3/(n ln(n+1))` when `n ≡ 1 (mod 3)`,
/// `1/(n ln(n+1))` otherwise.
pub fn remark3() -> RealSequence {
    RealSequence::from_fn("remark3", |n| {
        let level = if n % 3 == 1 { 3.0 } else { 1.0 };
        level / n_log(n)
    })
}

/// Member of `GM(β*, r)` satisfying the block-symmetry side condition but
/// not in `GM(β*, 2)`: `0` when `r | n`, `1/(n ln(n+1))` otherwise.
pub fn remark4(r: u64) -> Result<RealSequence> {
    if r < 3 {
        return domain(format!("remark4: period must be at least 3, got {r}"));
    }
    Ok(RealSequence::new("remark4", params([("r", r as f64)]), move |n| {
        if n % r == 0 {
            0.0
        } else {
            1.0 / n_log(n)
        }
    }))
}

/// Monotone reference family `n^(-p) · ln(n+1)^(-q)`.
pub fn power_log(p: f64, q: f64) -> Result<RealSequence> {
    if !(p >= 0.0 && q >= 0.0 && p.is_finite() && q.is_finite()) {
        return domain(format!(
            "powerlog: exponents must be finite and nonnegative, got p={p}, q={q}"
        ));
    }
    Ok(RealSequence::new("powerlog", params([("p", p), ("q", q)]), move |n| {
        let nf = n as f64;
        nf.powf(-p) * (nf + 1.0).ln().powf(-q)
    }))
}

/// Finite-support sequence with terms drawn uniformly from
/// `[-amplitude, amplitude]` by a ChaCha8 generator; zero beyond `length`.
pub fn random(seed: u64, length: u64, amplitude: f64) -> Result<RealSequence> {
    if length == 0 {
        return domain("random: length must be at least 1");
    }
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return domain(format!("random: amplitude must be positive, got {amplitude}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Arc<[f64]> = (0..length).map(|_| rng.random_range(-amplitude..=amplitude)).collect();
    Ok(RealSequence::new(
        "random",
        params([
            ("seed", seed as f64),
            ("length", length as f64),
            ("amplitude", amplitude),
        ]),
        move |n| match usize::try_from(n - 1) {
            Ok(i) if i < values.len() => values[i],
            _ => 0.0,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn term_rejects_index_zero() {
        assert!(zero().term(0).is_err());
        assert_eq!(zero().term(17).unwrap(), 0.0);
    }

    #[test]
    fn power_log_values() {
        assert_eq!(power_log(1.0, 0.0).unwrap().term(4).unwrap(), 0.25);
        assert_eq!(power_log(1.0, 0.0).unwrap().term(5).unwrap(), 0.2);
        assert!((power_log(2.0, 0.0).unwrap().term(3).unwrap() - 1.0 / 9.0).abs() < 1e-16);
        assert!((power_log(1.0, 1.0).unwrap().term(1).unwrap() - 1.0 / LN2).abs() < 1e-15);
        assert!(power_log(-1.0, 0.0).is_err());
    }

    #[test]
    fn two_level_square_branches() {
        let a = theorem2(2).unwrap();
        assert_eq!(a.term(2).unwrap(), 0.25);
        assert!((a.term(3).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(theorem2(5).unwrap().term(1).unwrap(), 3.0);
        assert!(theorem2(0).is_err());
    }

    #[test]
    fn companion_square_branches() {
        let e = theorem3(3).unwrap();
        assert!((e.term(3).unwrap() - 1.0 / 9.0).abs() < 1e-16);
        assert!((e.term(4).unwrap() - 3.0 / 16.0).abs() < 1e-16);
        let e1 = theorem3(1).unwrap();
        for k in 1..50u64 {
            assert_eq!(e1.term(k).unwrap(), 1.0 / (k * k) as f64);
        }
        assert!(theorem3(0).is_err());
    }

    #[test]
    fn divergent_family_values() {
        let d = remark3();
        assert!((d.term(1).unwrap() - 3.0 / LN2).abs() < 1e-15);
        assert!((d.term(2).unwrap() - 1.0 / (2.0 * 3f64.ln())).abs() < 1e-16);
        assert!((d.term(4).unwrap() - 3.0 / (4.0 * 5f64.ln())).abs() < 1e-16);
    }

    #[test]
    fn periodic_gap_family_values() {
        let a = remark4(3).unwrap();
        assert_eq!(a.term(3).unwrap(), 0.0);
        assert!((a.term(4).unwrap() - 1.0 / (4.0 * 5f64.ln())).abs() < 1e-16);
        assert_eq!(remark4(4).unwrap().term(8).unwrap(), 0.0);
        assert!(remark4(2).is_err());
    }

    #[test]
    fn random_is_deterministic_with_finite_support() {
        let a = random(42, 10, 1.5).unwrap();
        let b = random(42, 10, 1.5).unwrap();
        for n in 1..=10 {
            let v = a.term(n).unwrap();
            assert!((-1.5..=1.5).contains(&v));
            assert_eq!(v.to_bits(), b.term(n).unwrap().to_bits());
        }
        assert_eq!(a.term(11).unwrap(), 0.0);
        assert_eq!(a.term(u64::MAX).unwrap(), 0.0);
        assert_ne!(a.take(10), random(43, 10, 1.5).unwrap().take(10));
    }

    #[test]
    fn two_level_square_levels_exact() {
        for r2 in [2u64, 3, 4] {
            let a = theorem2(r2).unwrap();
            for n in 1..=100_000u64 {
                let nf = n as f64;
                let scaled = a.at(n) * nf * nf;
                let expected = if n % r2 == 0 { 1.0 } else { 3.0 };
                assert!((scaled - expected).abs() <= 4.0 * f64::EPSILON, "n={n}");
            }
        }
    }

    #[test]
    fn slow_families_have_vanishing_n_an() {
        let fams = [remark3(), remark4(3).unwrap(), remark4(5).unwrap()];
        for a in &fams {
            let mut prev = f64::INFINITY;
            for j in 0..20 {
                let n = 1u64 << j;
                let nf = n as f64;
                let v = nf * a.at(n);
                assert!(v <= 3.0 / (nf + 1.0).ln() * (1.0 + 1e-15));
                // the dyadic envelope 3/ln(n+1) is decreasing
                let env = 3.0 / (nf + 1.0).ln();
                assert!(env < prev);
                prev = env;
            }
        }
    }

    #[test]
    fn power_log_strictly_decreasing() {
        for (p, q) in [(1.0, 0.0), (2.0, 0.0), (1.0, 1.0), (0.5, 2.0)] {
            let a = power_log(p, q).unwrap();
            for n in 1..10_000u64 {
                assert!(a.at(n + 1) < a.at(n), "p={p} q={q} n={n}");
            }
        }
    }

    #[test]
    fn families_are_nonnegative() {
        let fams = [
            theorem2(3).unwrap(),
            theorem3(2).unwrap(),
            remark3(),
            remark4(4).unwrap(),
            power_log(1.0, 1.0).unwrap(),
        ];
        for a in &fams {
            assert!((1..5000).all(|n| a.at(n) >= 0.0), "{}", a.name());
        }
    }
}
