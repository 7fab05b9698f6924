//! Truncated series with an explicit bound on what was left out.

use num_complex::Complex64;
use serde::Serialize;

/// A partial sum together with a certified bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue<T> {
    pub value: T,
    /// Last index included in the partial sum.
    pub truncation: u64,
    /// `|true - value| <= tail_bound`.
    pub tail_bound: f64,
}

impl<T> SeriesValue<T> {
    pub fn new(value: T, truncation: u64, tail_bound: f64) -> Self {
        SeriesValue { value, truncation, tail_bound }
    }
}

impl SeriesValue<f64> {
    /// Does `x` lie within the certified enclosure (plus `slack`)?
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        (x - self.value).abs() <= self.tail_bound + slack
    }
}

pub type RealSeries = SeriesValue<f64>;
pub type ComplexSeries = SeriesValue<Complex64>;

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
