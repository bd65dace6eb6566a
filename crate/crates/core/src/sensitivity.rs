//! WACC x growth sensitivity grids.
//!
//! The explicit-period flows are held fixed and only the discount rate and
//! the terminal growth rate move, so a change in growth shows up in the
//! continuing value alone.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forecast::{Assumptions, FinancingClaims, FlowSeries};
use crate::valuation::{equity_value, value, Model, Perspective, ValuationOptions, ValuationResult};

/// `(alt - base) / base`, as a fraction.
pub fn percent_change(base: f64, alt: f64) -> Result<f64> {
    if base == 0.0 {
        return Err(Error::ZeroBase);
    }
    Ok((alt - base) / base)
}

/// Which section of the grid a cell belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Axis {
    /// WACC varies, growth at baseline.
    Wacc,
    /// Growth varies, WACC at baseline.
    Growth,
    /// Full cross product.
    Cross,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Wacc => "wacc",
            Axis::Growth => "growth",
            Axis::Cross => "cross",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellValues {
    pub pv_explicit: f64,
    /// Undiscounted continuing value; not known when replaying printed
    /// components.
    pub continuing_value: Option<f64>,
    pub pv_of_cv: f64,
    pub entity_value: f64,
    pub equity_value: f64,
    pub per_share: Option<f64>,
    /// Fractions, `None` when the baseline amount is zero.
    pub pct_change_env: Option<f64>,
    pub pct_change_eqv: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridCell {
    pub axis: Axis,
    pub wacc: f64,
    pub growth: f64,
    /// `None` marks an invalid cell (`wacc <= growth`).
    pub values: Option<CellValues>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SensitivityGrid {
    pub model: Option<Model>,
    pub baseline_wacc: f64,
    pub baseline_growth: f64,
    pub baseline: CellValues,
    pub cells: Vec<GridCell>,
}

struct Base {
    env: f64,
    eqv: f64,
}

fn per_share(eqv: f64, shares: f64) -> Option<f64> {
    (shares > 0.0).then(|| eqv / shares)
}

fn cell_values(
    pv_explicit: f64,
    continuing_value: Option<f64>,
    pv_of_cv: f64,
    entity_value: f64,
    claims: &FinancingClaims,
    shares: f64,
    base: &Base,
) -> CellValues {
    let eqv = equity_value(
        entity_value,
        claims.net_financial_liabilities,
        claims.noncontrolling_interest,
    );
    CellValues {
        pv_explicit,
        continuing_value,
        pv_of_cv,
        entity_value,
        equity_value: eqv,
        per_share: per_share(eqv, shares),
        pct_change_env: percent_change(base.env, entity_value).ok(),
        pct_change_eqv: percent_change(base.eqv, eqv).ok(),
    }
}

fn from_result(r: &ValuationResult, claims: &FinancingClaims, shares: f64, base: &Base) -> CellValues {
    cell_values(
        r.pv_explicit,
        Some(r.continuing_value),
        r.pv_of_cv,
        r.entity_value,
        claims,
        shares,
        base,
    )
}

/// Values `series` at every requested `(wacc, growth)` pair.
///
/// Without `cross`, the grid is one-at-a-time: each WACC at the baseline
/// growth, then each growth at the baseline WACC. With `cross`, every pair
/// in WACC-major order. Cells with `wacc <= growth` are kept but invalid.
pub fn sensitivity_grid(
    series: &FlowSeries,
    a: &Assumptions,
    wacc_values: &[f64],
    growth_values: &[f64],
    model: Model,
    cross: bool,
    opts: &ValuationOptions,
) -> Result<SensitivityGrid> {
    if wacc_values.is_empty() {
        return Err(Error::EmptyAxis("wacc"));
    }
    if growth_values.is_empty() {
        return Err(Error::EmptyAxis("growth"));
    }
    let claims = series.claims;
    let baseline_result = value(model, Perspective::Entity, series, a, opts)?;
    let base = Base {
        env: baseline_result.entity_value,
        eqv: equity_value(
            baseline_result.entity_value,
            claims.net_financial_liabilities,
            claims.noncontrolling_interest,
        ),
    };
    let baseline = from_result(&baseline_result, &claims, a.shares, &base);

    let eval = |axis: Axis, wacc: f64, growth: f64| -> Result<GridCell> {
        if !(wacc > growth) {
            return Ok(GridCell {
                axis,
                wacc,
                growth,
                values: None,
            });
        }
        let values = if wacc == a.wacc && growth == a.sales_growth {
            baseline
        } else {
            let mut alt = a.clone();
            alt.wacc = wacc;
            alt.sales_growth = growth;
            match value(model, Perspective::Entity, series, &alt, opts) {
                Ok(r) => from_result(&r, &claims, a.shares, &base),
                Err(Error::GrowthExceedsDiscount { .. }) => {
                    return Ok(GridCell {
                        axis,
                        wacc,
                        growth,
                        values: None,
                    })
                }
                Err(e) => return Err(e),
            }
        };
        Ok(GridCell {
            axis,
            wacc,
            growth,
            values: Some(values),
        })
    };

    let mut cells = Vec::new();
    if cross {
        for &r in wacc_values {
            for &g in growth_values {
                cells.push(eval(Axis::Cross, r, g)?);
            }
        }
    } else {
        for &r in wacc_values {
            cells.push(eval(Axis::Wacc, r, a.sales_growth)?);
        }
        for &g in growth_values {
            cells.push(eval(Axis::Growth, a.wacc, g)?);
        }
    }
    Ok(SensitivityGrid {
        model: Some(model),
        baseline_wacc: a.wacc,
        baseline_growth: a.sales_growth,
        baseline,
        cells,
    })
}

/// Printed components of one grid column: explicit-period PV and the
/// present value of the continuing value.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReplayInput {
    pub axis: Axis,
    pub wacc: f64,
    pub growth: f64,
    pub pv_explicit: f64,
    pub pv_of_cv: f64,
}

/// Rebuilds a grid from already-discounted components, for tables whose
/// underlying flows are not available.
pub fn replay(
    baseline: ReplayInput,
    columns: &[ReplayInput],
    claims: &FinancingClaims,
    shares: f64,
) -> Result<SensitivityGrid> {
    for c in core::iter::once(&baseline).chain(columns) {
        if !(c.pv_explicit.is_finite() && c.pv_of_cv.is_finite()) {
            return Err(Error::NonFinite("replay component"));
        }
    }
    let env0 = baseline.pv_explicit + baseline.pv_of_cv;
    let base = Base {
        env: env0,
        eqv: equity_value(env0, claims.net_financial_liabilities, claims.noncontrolling_interest),
    };
    let mk = |c: &ReplayInput| {
        cell_values(
            c.pv_explicit,
            None,
            c.pv_of_cv,
            c.pv_explicit + c.pv_of_cv,
            claims,
            shares,
            &base,
        )
    };
    let cells = columns
        .iter()
        .map(|c| GridCell {
            axis: c.axis,
            wacc: c.wacc,
            growth: c.growth,
            values: (c.wacc > c.growth).then(|| mk(c)),
        })
        .collect();
    Ok(SensitivityGrid {
        model: None,
        baseline_wacc: baseline.wacc,
        baseline_growth: baseline.growth,
        baseline: mk(&baseline),
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monotonicity {
    pub decreasing_in_wacc: bool,
    pub increasing_in_growth: bool,
}

/// Compares every pair of valid cells that share one rate and differ in the
/// other. Invalid cells are skipped.
pub fn check_monotonicity(grid: &SensitivityGrid) -> Monotonicity {
    let valid: Vec<(f64, f64, f64)> = grid
        .cells
        .iter()
        .filter_map(|c| c.values.map(|v| (c.wacc, c.growth, v.entity_value)))
        .collect();
    let mut m = Monotonicity {
        decreasing_in_wacc: true,
        increasing_in_growth: true,
    };
    for (i, &(r1, g1, v1)) in valid.iter().enumerate() {
        for &(r2, g2, v2) in &valid[i + 1..] {
            if g1 == g2 && r1 != r2 && (r2 - r1) * (v2 - v1) >= 0.0 {
                m.decreasing_in_wacc = false;
            }
            if r1 == r2 && g1 != g2 && (g2 - g1) * (v2 - v1) <= 0.0 {
                m.increasing_in_growth = false;
            }
        }
    }
    m
}
