//! Invariants checked over randomly generated inputs.

use std::sync::Arc;

use gmlab_core::gm::{beta_star, beta_variant, defect_profile, epsilon1, r_variation, BetaSpec, Thresholds};
use gmlab_core::sequence::{self, RealSequence};
use gmlab_core::series::{abs_tail, block_sum, epsilon2, lemma1_rhs, remainder_sups};
use gmlab_core::{EvalGrid, SineSeries};
use proptest::prelude::*;

fn from_vec(name: &str, v: Vec<f64>) -> RealSequence {
    let v: Arc<[f64]> = v.into();
    RealSequence::from_fn(name, move |k| v.get(k as usize - 1).copied().unwrap_or(0.0))
}

/// Nonincreasing, nonnegative sequence with finite support.
fn monotone_seq() -> impl Strategy<Value = RealSequence> {
    prop::collection::vec(0.0f64..1.0, 1..200).prop_map(|drops| {
        let mut tail = 0.0;
        let mut v: Vec<f64> = drops
            .iter()
            .rev()
            .map(|d| {
                tail += d;
                tail
            })
            .collect();
        v.reverse();
        from_vec("monotone", v)
    })
}

fn random_seq() -> impl Strategy<Value = RealSequence> {
    (any::<u64>(), 1u64..300, 0.1f64..10.0).prop_map(|(seed, len, amp)| sequence::random(seed, len, amp).unwrap())
}

/// `Σ_{k=1}^{n} sin kx` in closed form.
fn conjugate_dirichlet(k: u64, x: f64) -> f64 {
    ((x / 2.0).cos() - ((k as f64 + 0.5) * x).cos()) / (2.0 * (x / 2.0).sin())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn monotone_variation_telescopes(seq in monotone_seq(), m in 1u64..300, r in 1u64..6, c in 1.1f64..9.0) {
        let lhs = r_variation(&seq, m, r).unwrap();
        let head: f64 = (m..m + r).map(|k| seq.term(k).unwrap()).sum();
        prop_assert!(lhs <= head * (1.0 + 1e-12) + 1e-300);
        prop_assert!(lhs <= beta_star(&seq, m, r, c).unwrap() * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn multiple_step_is_dominated_by_base_steps(seq in random_seq(), m in 1u64..200, r in 1u64..5, q in 1u64..5) {
        let whole = r_variation(&seq, m, q * r).unwrap();
        let split: f64 = (m..2 * m)
            .map(|k| {
                (0..q)
                    .map(|j| (seq.term(k + j * r).unwrap() - seq.term(k + (j + 1) * r).unwrap()).abs())
                    .sum::<f64>()
            })
            .sum();
        prop_assert!(whole <= split * (1.0 + 1e-12));
    }

    #[test]
    fn last_variant_is_beta_star_with_unit_step(seq in random_seq(), n in 1u64..500, c in 1.01f64..16.0) {
        let a = beta_variant(&seq, n, &BetaSpec::V5 { c }).unwrap();
        let b = beta_star(&seq, n, 1, c).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn sign_flip_leaves_defects_unchanged(seq in random_seq(), r in 1u64..5, c in 1.5f64..8.0) {
        let neg = seq.negated();
        let grid = [1u64, 2, 4, 8, 16, 32, 64];
        let t = Thresholds::default();
        let spec = BetaSpec::star(r, c);
        let a = defect_profile(&seq, r, &spec, &grid, &t).unwrap();
        let b = defect_profile(&neg, r, &spec, &grid, &t).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        for (x, y) in a.samples.iter().zip(&b.samples) {
            prop_assert_eq!(x.lhs.to_bits(), y.lhs.to_bits());
            prop_assert_eq!(x.beta.to_bits(), y.beta.to_bits());
        }
    }

    #[test]
    fn unit_step_identity_matches_classical_abel(seed in any::<u64>(), n in 1u64..64, x in 0.1f64..6.18) {
        let seq = sequence::random(seed, 2 * n + 1, 1.0).unwrap();
        let s = SineSeries::new(seq.clone());
        let a = |k: u64| seq.term(k).unwrap();
        let last = 2 * n - 1;
        let mut oracle = a(last) * conjugate_dirichlet(last, x) - a(n) * conjugate_dirichlet(n - 1, x);
        for k in n..last {
            oracle += (a(k) - a(k + 1)) * conjugate_dirichlet(k, x);
        }
        let scale = (1.0 + (n..=2 * n).map(|k| a(k).abs()).sum::<f64>()) / (x / 2.0).sin().abs();
        let rhs = lemma1_rhs(&s, n, 1, x, 1e-6).unwrap();
        let lhs = block_sum(&s, n, x).unwrap();
        prop_assert!((rhs - oracle).abs() <= 1e-12 * scale, "rhs={rhs} oracle={oracle}");
        prop_assert!((lhs - oracle).abs() <= 1e-12 * scale, "lhs={lhs} oracle={oracle}");
    }

    #[test]
    fn partial_sums_are_odd_and_additive(seq in random_seq(), n in 1u64..400, split in 0u64..400, x in -7.0f64..7.0) {
        let s = SineSeries::new(seq.clone());
        prop_assert_eq!(s.partial_sum(n, -x).to_bits(), (-s.partial_sum(n, x)).to_bits());
        let split = split.min(n);
        let tail: f64 = (split + 1..=n).map(|k| seq.term(k).unwrap() * (k as f64 * x).sin()).sum();
        let bound: f64 = (1..=n).map(|k| seq.term(k).unwrap().abs()).sum::<f64>() + 1.0;
        prop_assert!((s.partial_sum(n, x) - (s.partial_sum(split, x) + tail)).abs() <= 1e-13 * bound);
    }

    #[test]
    fn moduli_are_nonincreasing(seq in random_seq(), n in 1u64..300, step in 1u64..300, c in 1.1f64..8.0, r in 3u64..7) {
        let cap = 2048;
        let e_n = epsilon1(&seq, n, c, cap).unwrap().value;
        let e_m = epsilon1(&seq, n + step, c, cap).unwrap().value;
        prop_assert!(e_m <= e_n);
        let f_n = epsilon2(&seq, r, n, cap).unwrap();
        let f_m = epsilon2(&seq, r, n + step, cap).unwrap();
        prop_assert!(f_m <= f_n * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn remainder_never_exceeds_absolute_tail(seq in random_seq(), n in 1u64..128) {
        let s = SineSeries::new(seq);
        let grid = EvalGrid::chebyshev(48, 1e-6).unwrap();
        let n_max = 512;
        let sup = remainder_sups(&s, &[n], &grid, n_max).unwrap()[0];
        prop_assert!(sup <= abs_tail(&s, n, n_max) * (1.0 + 1e-12) + 1e-15);
    }
}
