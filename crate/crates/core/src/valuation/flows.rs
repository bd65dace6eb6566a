//! Per-period value flows: free cash flow, residual income, abnormal
//! earnings growth, and the growing-perpetuity continuing value.

use crate::error::{Error, Result};
use crate::statements::BalanceSheet;

/// FCF as operating income less the change in net operating assets.
pub fn fcf_method1(oi_t: f64, noa_prev: f64, noa_t: f64) -> f64 {
    oi_t - (noa_t - noa_prev)
}

/// Current-minus-prior changes of the signed operating balance-sheet items.
/// Liabilities are negative, so an increase in payables is a negative delta.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OperatingDeltas {
    pub receivables: f64,
    pub inventories: f64,
    pub tax_receivable: f64,
    pub payables: f64,
    pub tax_liabilities: f64,
    pub other_noa: f64,
}

impl OperatingDeltas {
    pub fn between(prev: &BalanceSheet, cur: &BalanceSheet) -> Self {
        OperatingDeltas {
            receivables: cur.trade_receivables - prev.trade_receivables,
            inventories: cur.inventories - prev.inventories,
            tax_receivable: cur.current_tax_receivable - prev.current_tax_receivable,
            payables: cur.trade_payables - prev.trade_payables,
            tax_liabilities: cur.current_tax_liabilities - prev.current_tax_liabilities,
            other_noa: cur.other_net_operating_assets - prev.other_net_operating_assets,
        }
    }

    pub fn working_capital(&self) -> f64 {
        self.receivables + self.inventories + self.tax_receivable + self.payables + self.tax_liabilities
    }
}

/// FCF built up from the operating items: OI less the working-capital build,
/// less the increase in other NOA, plus depreciation, less capital expenditure.
pub fn fcf_method2(oi_t: f64, deltas: &OperatingDeltas, depreciation: f64, capex: f64) -> f64 {
    oi_t - deltas.receivables - deltas.inventories - deltas.tax_receivable
        // payables/tax liabilities are negative: an increase adds cash
        - deltas.payables
        - deltas.tax_liabilities
        - deltas.other_noa
        + depreciation
        - capex
}

/// Growing perpetuity of the flow following the horizon:
/// `flow_T * (1 + g) / (r - g)`.
pub fn continuing_value(flow_t: f64, g: f64, r: f64) -> Result<f64> {
    continuing_value_named(flow_t, g, r, "discount rate")
}

pub(crate) fn continuing_value_named(
    flow_t: f64,
    g: f64,
    r: f64,
    rate_name: &'static str,
) -> Result<f64> {
    if !(r > g) {
        return Err(Error::GrowthExceedsDiscount {
            growth: g,
            rate: r,
            rate_name,
        });
    }
    Ok(flow_t * (1.0 + g) / (r - g))
}

/// `OI_t - wacc * NOA_{t-1}`.
pub fn residual_operating_income(oi_t: f64, noa_prev: f64, wacc: f64) -> f64 {
    oi_t - wacc * noa_prev
}

/// `Earn_t - equity_cost * B_{t-1}`.
pub fn residual_earnings(earn_t: f64, b_prev: f64, equity_cost: f64) -> f64 {
    earn_t - equity_cost * b_prev
}

/// Return on common equity on opening book value.
pub fn roce(earn_t: f64, b_prev: f64) -> Result<f64> {
    if b_prev == 0.0 {
        return Err(Error::ZeroBookValue);
    }
    Ok(earn_t / b_prev)
}

/// Abnormal earnings growth: change in earnings less a normal return on the
/// prior period's retained earnings.
pub fn aeg(earn_t: f64, earn_prev: f64, div_prev: f64, equity_cost: f64) -> f64 {
    (earn_t - earn_prev) - equity_cost * (earn_prev - div_prev)
}

/// Abnormal operating income growth; the reinvested amount is `OI - FCF`.
pub fn aoig(oi_t: f64, oi_prev: f64, fcf_prev: f64, wacc: f64) -> f64 {
    (oi_t - oi_prev) - wacc * (oi_prev - fcf_prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fcf_method1_rows() {
        assert!((fcf_method1(446.84, 5353.70, 5460.77) - 339.77).abs() < 1e-9);
        assert_eq!(fcf_method1(10.0, 50.0, 50.0), 10.0);
        assert!((fcf_method1(483.67, 5795.02, 5910.92) - 367.77).abs() < 1e-9);
    }

    #[test]
    fn fcf_method2_trivial() {
        let z = OperatingDeltas::default();
        assert_eq!(fcf_method2(25.0, &z, 7.0, 7.0), 25.0);
        assert_eq!(fcf_method2(0.0, &z, 0.0, 5.0), -5.0);
    }

    #[test]
    fn continuing_value_rows() {
        assert!((continuing_value(78.02, 0.02, 0.07).unwrap() - 1591.61).abs() < 0.005);
        // 367.77 * 1.02 / 0.05
        assert!((continuing_value(367.77, 0.02, 0.07).unwrap() - 7502.508).abs() < 1e-6);
        assert!(matches!(
            continuing_value(100.0, 0.05, 0.05),
            Err(Error::GrowthExceedsDiscount { .. })
        ));
    }

    #[test]
    fn residual_operating_income_rows() {
        assert!((residual_operating_income(446.84, 5353.70, 0.07) - 72.08).abs() < 0.005);
        assert!((residual_operating_income(483.67, 5795.02, 0.07) - 78.02).abs() < 0.005);
        assert_eq!(residual_operating_income(25.0, 100.0, 0.25), 0.0);
    }

    #[test]
    fn residual_earnings_two_routes() {
        let direct = residual_earnings(12.0, 100.0, 0.10);
        assert!((direct - 2.0).abs() < 1e-12);
        let via_roce = (roce(12.0, 100.0).unwrap() - 0.10) * 100.0;
        assert!((direct - via_roce).abs() < 1e-12);
        assert_eq!(residual_earnings(10.0, 100.0, 0.10), 0.0);
    }

    #[test]
    fn roce_cases() {
        assert_eq!(roce(12.0, 100.0).unwrap(), 0.12);
        assert_eq!(roce(0.0, 100.0).unwrap(), 0.0);
        assert_eq!(roce(12.0, 0.0), Err(Error::ZeroBookValue));
    }

    #[test]
    fn aeg_cases() {
        assert!((aeg(12.0, 10.0, 4.0, 0.10) - 1.4).abs() < 1e-12);
        assert_eq!(aeg(10.0, 10.0, 10.0, 0.10), 0.0);
    }

    #[test]
    fn aoig_cases() {
        let fcf1 = fcf_method1(446.84, 5353.70, 5460.77);
        let v = aoig(455.77, 446.84, fcf1, 0.07);
        assert!((v - 1.4351).abs() < 1e-9);
        let d_roi = residual_operating_income(455.77, 5460.77, 0.07)
            - residual_operating_income(446.84, 5353.70, 0.07);
        assert!((v - d_roi).abs() < 1e-9);
        assert_eq!(aoig(5.0, 5.0, 5.0, 0.07), 0.0);
        // NOA flat: OI - FCF = 0
        assert_eq!(aoig(9.0, 6.0, 6.0, 0.07), 3.0);
    }
}
