//! First-digit screen for reported figures.

use alloc::format;

use crate::error::{Error, Result};

/// 5% critical value of chi-square with 8 degrees of freedom.
pub const CHI_SQUARE_CRITICAL_5PCT: f64 = 15.507;
/// Upper bound of marginally acceptable conformity on mean absolute deviation.
pub const MAD_MARGINAL: f64 = 0.015;
pub const DEFAULT_MIN_SAMPLE: usize = 50;

/// First significant decimal digit of `|x|`; `None` for zero and non-finite.
pub fn leading_digit(x: f64) -> Option<u8> {
    if x == 0.0 || !x.is_finite() {
        return None;
    }
    // scientific formatting is exact: the mantissa's first char is the digit
    let s = format!("{:e}", x.abs());
    s.bytes().next().map(|b| b - b'0')
}

/// `log10(1 + 1/d)`.
pub fn benford_pmf(d: u8) -> Result<f64> {
    if !(1..=9).contains(&d) {
        return Err(Error::DigitOutOfRange(d));
    }
    Ok(libm::log10(1.0 + 1.0 / d as f64))
}

fn expected() -> [f64; 9] {
    let mut e = [0.0; 9];
    for (i, p) in e.iter_mut().enumerate() {
        *p = libm::log10(1.0 + 1.0 / (i + 1) as f64);
    }
    e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DigitHistogram {
    /// `counts[0]` holds digit 1.
    pub counts: [u64; 9],
    pub total: u64,
}

impl DigitHistogram {
    pub fn from_values(values: &[f64]) -> Self {
        let mut h = DigitHistogram::default();
        for &v in values {
            h.push(v);
        }
        h
    }

    /// Counts `x` if it has a leading digit; returns whether it did.
    pub fn push(&mut self, x: f64) -> bool {
        match leading_digit(x) {
            Some(d) => {
                self.counts[(d - 1) as usize] += 1;
                self.total += 1;
                true
            }
            None => false,
        }
    }

    pub fn count(&self, d: u8) -> u64 {
        self.counts[(d - 1) as usize]
    }

    pub fn frequencies(&self) -> [f64; 9] {
        let mut f = [0.0; 9];
        if self.total > 0 {
            for (o, &c) in f.iter_mut().zip(&self.counts) {
                *o = c as f64 / self.total as f64;
            }
        }
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BenfordThresholds {
    pub chi_square: f64,
    pub mad: f64,
    pub min_sample: usize,
}

impl Default for BenfordThresholds {
    fn default() -> Self {
        BenfordThresholds {
            chi_square: CHI_SQUARE_CRITICAL_5PCT,
            mad: MAD_MARGINAL,
            min_sample: DEFAULT_MIN_SAMPLE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    Conforming,
    Nonconforming,
    InsufficientSample,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Conforming => "conforming",
            Verdict::Nonconforming => "nonconforming",
            Verdict::InsufficientSample => "insufficient-sample",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BenfordReport {
    pub histogram: DigitHistogram,
    pub observed: [f64; 9],
    pub expected: [f64; 9],
    pub chi_square: f64,
    pub mad: f64,
    pub thresholds: BenfordThresholds,
    pub verdict: Verdict,
}

/// Histogram of nonzero finite `values` and its distance from the Benford
/// distribution. Advisory only.
pub fn benford_screen(values: &[f64], thresholds: BenfordThresholds) -> BenfordReport {
    let histogram = DigitHistogram::from_values(values);
    let observed = histogram.frequencies();
    let expected = expected();
    let n = histogram.total as f64;
    let mut chi = 0.0;
    let mut abs_dev = 0.0;
    for (o, e) in observed.iter().zip(&expected) {
        chi += (o - e) * (o - e) / e;
        abs_dev += (o - e).abs();
    }
    let chi_square = n * chi;
    let mad = abs_dev / 9.0;
    let verdict = if histogram.total == 0 || (histogram.total as usize) < thresholds.min_sample {
        Verdict::InsufficientSample
    } else if chi_square > thresholds.chi_square || mad > thresholds.mad {
        Verdict::Nonconforming
    } else {
        Verdict::Conforming
    };
    BenfordReport {
        histogram,
        observed,
        expected,
        chi_square,
        mad,
        thresholds,
        verdict,
    }
}
