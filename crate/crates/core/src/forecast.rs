//! Forward projection of base-year statements under proportional-growth
//! drivers.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::statements::StatementSet;

/// Valuation and forecasting assumptions. Rates are net (0.02 for 2%).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Assumptions {
    /// Long-run growth of sales, NOA and operating income.
    pub sales_growth: f64,
    /// Entity cost of capital (WACC).
    pub wacc: f64,
    /// Equity cost of capital; required only for equity-perspective models.
    pub equity_cost: Option<f64>,
    /// Number of explicit forecast years.
    pub horizon: usize,
    /// Report metadata only.
    pub tax_rate: Option<f64>,
    /// Report metadata only.
    pub profit_margin: Option<f64>,
    /// Shares in issue, millions.
    pub shares: f64,
    /// First forecast operating income. Defaults to base OI grown one year.
    pub oi_anchor: Option<f64>,
    /// Base-year NOA used in place of the statement-derived figure.
    pub noa_anchor: Option<f64>,
}

impl Assumptions {
    pub fn new(sales_growth: f64, wacc: f64, horizon: usize, shares: f64) -> Self {
        Assumptions {
            sales_growth,
            wacc,
            equity_cost: None,
            horizon,
            tax_rate: None,
            profit_margin: None,
            shares,
            oi_anchor: None,
            noa_anchor: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::HorizonTooShort {
                needed: 1,
                found: self.horizon,
            });
        }
        let rates = [
            ("growth", Some(self.sales_growth)),
            ("wacc", Some(self.wacc)),
            ("equity_cost", self.equity_cost),
            ("tax_rate", self.tax_rate),
            ("profit_margin", self.profit_margin),
            ("oi_anchor", self.oi_anchor),
            ("noa_anchor", self.noa_anchor),
        ];
        for (name, v) in rates {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::NonFinite(name));
                }
            }
        }
        if !(self.shares.is_finite() && self.shares > 0.0) {
            return Err(Error::NonPositiveShares(self.shares));
        }
        Ok(())
    }
}

/// Claims deducted from entity value to reach equity value (base-year amounts).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FinancingClaims {
    pub net_financial_liabilities: f64,
    pub noncontrolling_interest: f64,
}

impl FinancingClaims {
    pub fn total(&self) -> f64 {
        self.net_financial_liabilities + self.noncontrolling_interest
    }
}

/// Period-aligned flow series. Index 0 is the base year.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlowSeries {
    pub sales: Option<Vec<f64>>,
    pub operating_income: Vec<f64>,
    pub net_operating_assets: Vec<f64>,
    pub earnings: Option<Vec<f64>>,
    pub book_value: Option<Vec<f64>>,
    pub dividends: Option<Vec<f64>>,
    pub claims: FinancingClaims,
}

impl FlowSeries {
    /// Entity-level series only.
    pub fn new(
        operating_income: Vec<f64>,
        net_operating_assets: Vec<f64>,
        claims: FinancingClaims,
    ) -> Result<Self> {
        let s = FlowSeries {
            sales: None,
            operating_income,
            net_operating_assets,
            earnings: None,
            book_value: None,
            dividends: None,
            claims,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_equity(
        mut self,
        earnings: Vec<f64>,
        book_value: Vec<f64>,
        dividends: Vec<f64>,
    ) -> Result<Self> {
        self.earnings = Some(earnings);
        self.book_value = Some(book_value);
        self.dividends = Some(dividends);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.operating_income.len();
        if n < 2 {
            return Err(Error::SeriesTooShort { needed: 2, found: n });
        }
        if self.net_operating_assets.len() != n {
            return Err(Error::SeriesLengthMismatch("net_operating_assets"));
        }
        let optional = [
            ("sales", &self.sales),
            ("earnings", &self.earnings),
            ("book_value", &self.book_value),
            ("dividends", &self.dividends),
        ];
        for (name, s) in optional {
            if let Some(s) = s {
                if s.len() != n {
                    return Err(Error::SeriesLengthMismatch(name));
                }
                if s.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite(name));
                }
            }
        }
        if self
            .operating_income
            .iter()
            .chain(&self.net_operating_assets)
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("flow series"));
        }
        Ok(())
    }

    /// Number of forecast periods available (length minus the base year).
    pub fn horizon(&self) -> usize {
        self.operating_income.len() - 1
    }

    /// Free cash flow of period `t >= 1` (method 1).
    pub fn fcf(&self, t: usize) -> f64 {
        crate::valuation::fcf_method1(
            self.operating_income[t],
            self.net_operating_assets[t - 1],
            self.net_operating_assets[t],
        )
    }

    /// FCF for periods `1..=horizon`.
    pub fn fcf_series(&self, horizon: usize) -> Vec<f64> {
        (1..=horizon).map(|t| self.fcf(t)).collect()
    }

    /// Residual operating income for periods `1..=horizon`.
    pub fn roi_series(&self, wacc: f64, horizon: usize) -> Vec<f64> {
        (1..=horizon)
            .map(|t| {
                crate::valuation::residual_operating_income(
                    self.operating_income[t],
                    self.net_operating_assets[t - 1],
                    wacc,
                )
            })
            .collect()
    }

    /// Uses every period of an explicit statement set as-is (no projection).
    pub fn from_statements(set: &StatementSet) -> Result<Self> {
        let p = set.periods();
        let claims = FinancingClaims {
            net_financial_liabilities: set.base().balance.net_financial_liabilities,
            noncontrolling_interest: set.base().balance.noncontrolling_interest,
        };
        let collect_opt = |f: &dyn Fn(&crate::statements::Period) -> Option<f64>| {
            p.iter().map(f).collect::<Option<Vec<f64>>>()
        };
        let s = FlowSeries {
            sales: Some(p.iter().map(|x| x.income.sales).collect()),
            operating_income: p.iter().map(|x| x.income.operating_income).collect(),
            net_operating_assets: p.iter().map(|x| x.balance.net_operating_assets()).collect(),
            earnings: collect_opt(&|x| x.income.comprehensive_earnings),
            book_value: collect_opt(&|x| x.balance.common_equity),
            dividends: collect_opt(&|x| x.balance.dividends_paid),
            claims,
        };
        s.validate()?;
        Ok(s)
    }
}

/// `value * (1 + g)^n`.
pub fn grow(value: f64, g: f64, n: u32) -> f64 {
    value * libm::pow(1.0 + g, n as f64)
}

/// Carried-forward PPE: brought forward plus additions less depreciation
/// (depreciation given as a positive charge).
pub fn ppe_rollforward(brought: f64, additions: f64, depreciation: f64) -> f64 {
    brought + additions - depreciation
}

/// Projects the base period forward `a.horizon` years.
///
/// Sales and NOA grow at `a.sales_growth` from the base year. Operating income
/// starts from `a.oi_anchor` (or base OI grown one year) and then grows at the
/// same rate. When the base period carries earnings, dividends and book
/// value, earnings and dividends grow proportionally and book value is rolled
/// forward by clean surplus.
pub fn project_flows(base: &StatementSet, a: &Assumptions) -> Result<FlowSeries> {
    a.validate()?;
    let b = base.base();
    let g = a.sales_growth;
    let t_max = a.horizon;
    let noa0 = a.noa_anchor.unwrap_or_else(|| b.balance.net_operating_assets());
    let oi1 = a
        .oi_anchor
        .unwrap_or_else(|| grow(b.income.operating_income, g, 1));

    let sales = (0..=t_max).map(|t| grow(b.income.sales, g, t as u32)).collect();
    let noa = (0..=t_max).map(|t| grow(noa0, g, t as u32)).collect();
    let mut oi = Vec::with_capacity(t_max + 1);
    oi.push(b.income.operating_income);
    oi.extend((1..=t_max).map(|t| grow(oi1, g, t as u32 - 1)));

    let mut series = FlowSeries {
        sales: Some(sales),
        operating_income: oi,
        net_operating_assets: noa,
        earnings: None,
        book_value: None,
        dividends: None,
        claims: FinancingClaims {
            net_financial_liabilities: b.balance.net_financial_liabilities,
            noncontrolling_interest: b.balance.noncontrolling_interest,
        },
    };

    if let (Some(e0), Some(b0), Some(d0)) = (
        b.income.comprehensive_earnings,
        b.balance.common_equity,
        b.balance.dividends_paid,
    ) {
        let earn: Vec<f64> = (0..=t_max).map(|t| grow(e0, g, t as u32)).collect();
        let div: Vec<f64> = (0..=t_max).map(|t| grow(d0, g, t as u32)).collect();
        let mut book = Vec::with_capacity(t_max + 1);
        book.push(b0);
        for t in 1..=t_max {
            book.push(book[t - 1] + earn[t] - div[t]);
        }
        series.earnings = Some(earn);
        series.dividends = Some(div);
        series.book_value = Some(book);
    }
    series.validate()?;
    Ok(series)
}
