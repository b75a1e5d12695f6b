//! Ordered summation.
//!
//! Every sum in the crate runs in ascending index order. Sums with more than
//! [`COMPENSATION_THRESHOLD`] terms are accumulated with Neumaier's variant of
//! Kahan summation; shorter sums use plain left-to-right addition.

use std::ops::{AddAssign, RangeInclusive};

/// Term count above which compensated summation is used.
pub const COMPENSATION_THRESHOLD: u64 = 10_000;

/// Kahan–Babuška–Neumaier accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

/// Accumulator that picks plain or compensated addition up front from the
/// number of terms it will receive.
#[derive(Debug, Clone, Copy)]
pub enum Accumulator {
    Plain(f64),
    Compensated(NeumaierSum),
}

impl Accumulator {
    pub fn for_len(len: u64) -> Self {
        if len > COMPENSATION_THRESHOLD {
            Accumulator::Compensated(NeumaierSum::new())
        } else {
            Accumulator::Plain(0.0)
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        match self {
            Accumulator::Plain(s) => *s += x,
            Accumulator::Compensated(s) => s.add(x),
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        match self {
            Accumulator::Plain(s) => *s,
            Accumulator::Compensated(s) => s.value(),
        }
    }
}

/// Sums `f(k)` for `k` in `range`, ascending. Empty ranges sum to zero.
pub fn sum_range(range: RangeInclusive<u64>, mut f: impl FnMut(u64) -> f64) -> f64 {
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return 0.0;
    }
    let mut acc = Accumulator::for_len(hi - lo + 1);
    for k in lo..=hi {
        acc.add(f(k));
    }
    acc.value()
}
