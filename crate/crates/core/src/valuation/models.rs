use alloc::vec::Vec;
use core::fmt;

use super::discount::{present_value_with, DiscountConvention, DiscountSchedule, Discounted};
use super::flows::{aeg, aoig, continuing_value_named, residual_earnings};
use crate::error::{Error, Result};
use crate::forecast::{Assumptions, FlowSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Model {
    /// Free cash flow valuation.
    Fcfvm,
    /// Residual earnings / residual operating income valuation.
    Revm,
    /// Abnormal earnings growth valuation.
    Aegm,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Fcfvm, Model::Revm, Model::Aegm];

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Fcfvm => "fcfvm",
            Model::Revm => "revm",
            Model::Aegm => "aegm",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Fcfvm => "FCFVM",
            Model::Revm => "REVM",
            Model::Aegm => "AEGM",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Perspective {
    /// Operations discounted at WACC, then bridged to equity.
    #[default]
    Entity,
    /// Equity flows discounted at the equity cost of capital.
    Equity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValuationOptions {
    pub discounting: DiscountConvention,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Warning {
    /// A forecast free cash flow is negative.
    NegativeFlow { period: usize },
    /// The continuing value rests on a negative terminal flow.
    NegativeTerminalFlow,
}

/// Output of one valuation model.
///
/// For the entity perspective `entity_value = anchor + pv_explicit + pv_of_cv`
/// and `equity_value = entity_value - claims`. For the equity perspective the
/// same sum gives `equity_value` and `entity_value` adds the claims back.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValuationResult {
    pub model: Model,
    pub perspective: Perspective,
    pub discount_rate: f64,
    pub growth: f64,
    /// Zero for FCFVM, opening NOA (or book value) for REVM, capitalised
    /// forward earnings for AEGM.
    pub anchor: f64,
    pub schedule: Vec<Discounted>,
    pub pv_explicit: f64,
    pub terminal_flow: f64,
    pub continuing_value: f64,
    pub cv_discount_factor: f64,
    pub pv_of_cv: f64,
    pub entity_value: f64,
    pub equity_value: f64,
    pub per_share: f64,
    pub warnings: Vec<Warning>,
}

impl ValuationResult {
    /// The value the model computes directly: entity value for the entity
    /// perspective, equity value for the equity perspective.
    pub fn intrinsic_value(&self) -> f64 {
        match self.perspective {
            Perspective::Entity => self.entity_value,
            Perspective::Equity => self.equity_value,
        }
    }
}

/// `env - nfl - nci`.
pub fn equity_value(env: f64, nfl: f64, nci: f64) -> f64 {
    env - nfl - nci
}

/// Equity value and value per share.
pub fn equity_bridge(env: f64, nfl: f64, nci: f64, shares: f64) -> Result<(f64, f64)> {
    if !(shares > 0.0) {
        return Err(Error::NonPositiveShares(shares));
    }
    let eqv = equity_value(env, nfl, nci);
    Ok((eqv, eqv / shares))
}

fn discount_rate(perspective: Perspective, a: &Assumptions) -> Result<(f64, &'static str)> {
    match perspective {
        Perspective::Entity => Ok((a.wacc, "wacc")),
        Perspective::Equity => a
            .equity_cost
            .map(|r| (r, "equity_cost"))
            .ok_or(Error::MissingEquityCost),
    }
}

fn require_len(series: &FlowSeries, horizon: usize) -> Result<()> {
    let found = series.operating_income.len();
    if found < horizon + 1 {
        return Err(Error::SeriesTooShort {
            needed: horizon + 1,
            found,
        });
    }
    Ok(())
}

fn equity_series<'a>(s: &'a Option<Vec<f64>>, name: &'static str) -> Result<&'a [f64]> {
    s.as_deref().ok_or(Error::MissingSeries(name))
}

/// Values `series` with the given model and perspective.
pub fn value(
    model: Model,
    perspective: Perspective,
    series: &FlowSeries,
    a: &Assumptions,
    opts: &ValuationOptions,
) -> Result<ValuationResult> {
    a.validate()?;
    series.validate()?;
    let horizon = a.horizon;
    require_len(series, horizon)?;
    let (r, rate_name) = discount_rate(perspective, a)?;
    let g = a.sales_growth;
    let schedule = DiscountSchedule::new(r, horizon, opts.discounting)?;

    // (anchor, explicit flows for periods 1.., terminal flow, CV discount period)
    let (anchor, flows, terminal, cv_period, cv) = match (model, perspective) {
        (Model::Fcfvm, Perspective::Entity) => {
            let flows = series.fcf_series(horizon);
            let terminal = flows[horizon - 1];
            let cv = continuing_value_named(terminal, g, r, rate_name)?;
            (0.0, flows, terminal, horizon, cv)
        }
        (Model::Fcfvm, Perspective::Equity) => {
            return Err(Error::MissingSeries("free cash flow to equity"))
        }
        (Model::Revm, Perspective::Entity) => {
            let flows = series.roi_series(r, horizon);
            let terminal = flows[horizon - 1];
            let cv = continuing_value_named(terminal, g, r, rate_name)?;
            (series.net_operating_assets[0], flows, terminal, horizon, cv)
        }
        (Model::Revm, Perspective::Equity) => {
            let earn = equity_series(&series.earnings, "earnings")?;
            let book = equity_series(&series.book_value, "book_value")?;
            let flows: Vec<f64> = (1..=horizon)
                .map(|t| residual_earnings(earn[t], book[t - 1], r))
                .collect();
            let terminal = flows[horizon - 1];
            let cv = continuing_value_named(terminal, g, r, rate_name)?;
            (book[0], flows, terminal, horizon, cv)
        }
        (Model::Aegm, _) => {
            if horizon < 2 {
                return Err(Error::HorizonTooShort {
                    needed: 2,
                    found: horizon,
                });
            }
            if r == 0.0 {
                return Err(Error::InvalidDiscountRate(r));
            }
            // abnormal growth for periods 2..=T, capitalised at r and placed at t-1
            let (first, growth): (f64, Vec<f64>) = match perspective {
                Perspective::Entity => {
                    let oi = &series.operating_income;
                    let growth = (1..horizon)
                        .map(|t| aoig(oi[t + 1], oi[t], series.fcf(t), r))
                        .collect();
                    (oi[1], growth)
                }
                Perspective::Equity => {
                    let earn = equity_series(&series.earnings, "earnings")?;
                    let div = equity_series(&series.dividends, "dividends")?;
                    let growth = (1..horizon)
                        .map(|t| aeg(earn[t + 1], earn[t], div[t], r))
                        .collect();
                    (earn[1], growth)
                }
            };
            let terminal = growth[horizon - 2];
            let cv = continuing_value_named(terminal, g, r, rate_name)? / r;
            let capitalised = growth.iter().map(|x| x / r).collect();
            (first / r, capitalised, terminal, horizon - 1, cv)
        }
    };

    let (pv_explicit, rows) = present_value_with(&flows, &schedule);
    let cv_discount_factor = schedule.factor(cv_period);
    let pv_of_cv = cv / cv_discount_factor;
    let value = anchor + pv_explicit + pv_of_cv;
    let claims = series.claims.total();
    let (entity_value, equity_value) = match perspective {
        Perspective::Entity => (value, value - claims),
        Perspective::Equity => (value + claims, value),
    };

    let mut warnings = Vec::new();
    if model == Model::Fcfvm {
        warnings.extend(
            rows.iter()
                .filter(|d| d.flow < 0.0)
                .map(|d| Warning::NegativeFlow { period: d.period }),
        );
    }
    if terminal < 0.0 {
        warnings.push(Warning::NegativeTerminalFlow);
    }

    Ok(ValuationResult {
        model,
        perspective,
        discount_rate: r,
        growth: g,
        anchor,
        schedule: rows,
        pv_explicit,
        terminal_flow: terminal,
        continuing_value: cv,
        cv_discount_factor,
        pv_of_cv,
        entity_value,
        equity_value,
        per_share: equity_value / a.shares,
        warnings,
    })
}

/// Entity value from discounted free cash flows plus a growing-perpetuity
/// continuing value of the horizon FCF.
pub fn value_fcfvm(series: &FlowSeries, a: &Assumptions) -> Result<ValuationResult> {
    value(Model::Fcfvm, Perspective::Entity, series, a, &ValuationOptions::default())
}

/// Opening NOA plus discounted residual operating income.
pub fn value_revm(series: &FlowSeries, a: &Assumptions) -> Result<ValuationResult> {
    value(Model::Revm, Perspective::Entity, series, a, &ValuationOptions::default())
}

/// Capitalised forward (operating) income plus the discounted, capitalised
/// abnormal growth that follows it.
pub fn value_aegm(
    series: &FlowSeries,
    a: &Assumptions,
    perspective: Perspective,
) -> Result<ValuationResult> {
    value(Model::Aegm, perspective, series, a, &ValuationOptions::default())
}

/// Forward P/E split into the no-growth capitalisation rate `1 / r` and the
/// premium contributed by abnormal earnings growth.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeDecomposition {
    pub forward_pe: f64,
    pub capitalization_term: f64,
    pub aeg_premium: f64,
}

pub fn forward_pe_decomposition(
    result: &ValuationResult,
    earn_1: f64,
    equity_cost: f64,
) -> Result<PeDecomposition> {
    if earn_1 == 0.0 {
        return Err(Error::ZeroForwardEarnings);
    }
    if equity_cost == 0.0 {
        return Err(Error::InvalidDiscountRate(equity_cost));
    }
    let forward_pe = result.intrinsic_value() / earn_1;
    let capitalization_term = 1.0 / equity_cost;
    Ok(PeDecomposition {
        forward_pe,
        capitalization_term,
        aeg_premium: forward_pe - capitalization_term,
    })
}
