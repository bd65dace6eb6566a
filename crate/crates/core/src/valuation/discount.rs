use alloc::vec::Vec;

use crate::error::{Error, Result};

/// How per-period discount factors are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DiscountConvention {
    /// `(1 + r)^t` at full precision.
    #[default]
    Exact,
    /// `(1 + r)^t` rounded to a fixed number of decimals, as printed in
    /// hand-built valuation tables. Only useful for reconciling such tables.
    RoundedFactors { decimals: u32 },
}

/// End-of-period discount factors for `t = 1..=periods`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscountSchedule {
    pub rate: f64,
    factors: Vec<f64>,
}

impl DiscountSchedule {
    pub fn new(rate: f64, periods: usize, convention: DiscountConvention) -> Result<Self> {
        if !rate.is_finite() || rate <= -1.0 {
            return Err(Error::InvalidDiscountRate(rate));
        }
        let mut factors = Vec::with_capacity(periods);
        let mut f = 1.0;
        for _ in 0..periods {
            f *= 1.0 + rate;
            factors.push(f);
        }
        if let DiscountConvention::RoundedFactors { decimals } = convention {
            let scale = libm::pow(10.0, decimals as f64);
            for f in &mut factors {
                *f = libm::round(*f * scale) / scale;
            }
        }
        Ok(DiscountSchedule { rate, factors })
    }

    pub fn exact(rate: f64, periods: usize) -> Result<Self> {
        Self::new(rate, periods, DiscountConvention::Exact)
    }

    /// Factor for period `t` (1-based).
    pub fn factor(&self, t: usize) -> f64 {
        self.factors[t - 1]
    }

    pub fn factors(&self) -> &[f64] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// One discounted flow.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Discounted {
    pub period: usize,
    pub flow: f64,
    pub discount_factor: f64,
    pub present_value: f64,
}

/// Discounts `flows[0]` at period 1, `flows[1]` at period 2, and so on.
/// The schedule must cover every flow.
pub fn present_value_with(flows: &[f64], schedule: &DiscountSchedule) -> (f64, Vec<Discounted>) {
    let rows: Vec<Discounted> = flows
        .iter()
        .enumerate()
        .map(|(i, &flow)| {
            let discount_factor = schedule.factor(i + 1);
            Discounted {
                period: i + 1,
                flow,
                discount_factor,
                present_value: flow / discount_factor,
            }
        })
        .collect();
    let total = rows.iter().map(|d| d.present_value).sum();
    (total, rows)
}

/// `sum flow_t / (1 + r)^t` with exact factors.
pub fn present_value(flows: &[f64], rate: f64) -> Result<(f64, Vec<Discounted>)> {
    let schedule = DiscountSchedule::exact(rate, flows.len())?;
    Ok(present_value_with(flows, &schedule))
}
