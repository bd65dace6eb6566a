//! Embedded Marks & Spencer case data (valuation date 31 March 2016).
//!
//! `printed` holds the figures exactly as they appear in the published
//! valuation, sensitivity and multiples tables, typos included. They are
//! inputs to `reconcile`, never to the models.

use accval_core::forecast::Assumptions;
use accval_core::multiples::Comparable;
use accval_core::statements::StatementSet;

use crate::error::{AppError, Result};
use crate::formats;

pub const MS_STATEMENTS: &str = include_str!("../fixtures/ms_statements.csv");
pub const MS_ASSUMPTIONS: &str = include_str!("../fixtures/ms_assumptions.txt");
pub const MS_COMPARABLES: &str = include_str!("../fixtures/ms_comparables.csv");

pub const FIXTURE_NAMES: [&str; 1] = ["ms"];

pub struct Fixture {
    pub statements: StatementSet,
    pub assumptions: Assumptions,
    pub comparables: Vec<Comparable>,
    /// Share count used by the multiples table, which differs from the
    /// count in the assumptions.
    pub multiples_shares: f64,
}

pub fn load(name: &str) -> Result<Fixture> {
    match name {
        "ms" => Ok(Fixture {
            statements: formats::parse_statements(MS_STATEMENTS, "fixture ms statements")?,
            assumptions: formats::parse_assumptions(MS_ASSUMPTIONS, "fixture ms assumptions")?,
            comparables: formats::parse_comparables(MS_COMPARABLES, "fixture ms comparables")?,
            multiples_shares: printed::COMPS_SHARES,
        }),
        other => Err(AppError::Usage(format!(
            "unknown fixture `{other}` (available: {})",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}

pub mod printed {
    pub const YEARS: [&str; 6] = ["2016", "2017E", "2018E", "2019E", "2020E", "2021E"];
    pub const GROWTH: f64 = 0.02;
    pub const WACC: f64 = 0.07;
    pub const SHARES: f64 = 1635.90;
    pub const NFL: f64 = 1762.40;
    pub const NCI: f64 = 11.40;
    pub const PER_SHARE: f64 = 3.08;

    // statement block
    pub const OI: [f64; 6] = [483.20, 446.84, 455.77, 464.89, 474.19, 483.67];
    pub const INVENTORIES: [f64; 6] = [799.90, 815.90, 832.22, 848.86, 865.84, 883.15];
    pub const RECEIVABLES: [f64; 6] = [321.10, 327.52, 334.07, 340.75, 347.57, 354.52];
    pub const TAX_RECEIVABLE: [f64; 6] = [1.60, 1.63, 1.66, 1.70, 1.73, 1.77];
    pub const PAYABLES: [f64; 6] = [-1617.70, -1650.05, -1683.06, -1716.72, -1751.0, -1786.07];
    pub const TAX_LIABILITIES: [f64; 6] = [-75.20, -76.70, -78.24, -79.80, -81.40, -83.03];
    pub const WORKING_CAPITAL: [f64; 6] = [-570.30, -505.0, -593.35, -641.14, -617.31, -629.66];
    pub const PPE: [f64; 6] = [5829.90, 5946.50, 6065.43, 6186.74, 6310.47, 6436.68];
    pub const OTHER_NOA: [f64; 6] = [-67.60, -68.95, -70.33, -71.74, -73.17, -74.64];
    pub const NOA: [f64; 6] = [5192.0, 5372.55, 5401.75, 5473.86, 5619.99, 5732.38];
    /// Printed decimals where a row drops trailing zeros.
    pub const WORKING_CAPITAL_DECIMALS: [u32; 6] = [2, 0, 2, 2, 2, 2];
    pub const NOA_DECIMALS: [u32; 6] = [0, 2, 2, 2, 2, 2];

    pub const PPE_BROUGHT: [f64; 6] = [5889.30, 5829.90, 5946.50, 6065.43, 6186.74, 6310.47];
    pub const PPE_ADDITIONS: [f64; 6] = [503.40, 513.47, 523.74, 534.21, 544.90, 555.79];
    /// First column printed with a minus sign, the rest without.
    pub const PPE_DEPRECIATION: [f64; 6] = [-562.80, 396.87, 404.81, 412.90, 421.16, 429.58];
    pub const PPE_CARRIED: [f64; 6] = [5829.30, 5946.50, 6065.43, 6186.74, 6310.47, 6436.68];

    // FCF method 2, forecast years
    pub const M2_RECEIVABLES: [f64; 5] = [-6.42, -6.55, -6.68, -6.82, -6.95];
    pub const M2_INVENTORIES: [f64; 5] = [-16.00, -16.32, -16.64, -16.98, -17.31];
    pub const M2_PAYABLES: [f64; 5] = [32.35, 33.01, 33.66, 34.33, 35.02];
    pub const M2_OTHER_NOA: [f64; 5] = [1.35, 1.38, 1.41, 1.43, 1.47];
    pub const M2_DEPRECIATION: [f64; 5] = [396.87, 404.81, 412.90, 421.16, 429.58];
    pub const M2_CAPEX: [f64; 5] = [-818.86, -835.23, -851.94, -868.98, -886.36];
    pub const FCF: [f64; 5] = [339.77, 346.55, 353.49, 360.56, 367.77];
    pub const M1_DELTA_NOA: [f64; 5] = [-107.07, -109.22, -111.40, -113.63, -115.90];

    // FCF valuation
    pub const DISCOUNT_FACTORS: [f64; 5] = [1.07, 1.14, 1.23, 1.31, 1.40];
    pub const FCF_PV: [f64; 5] = [317.54, 303.99, 287.39, 275.24, 262.69];
    pub const FCF_PV_TOTAL: f64 = 1446.85;
    pub const FCF_CV: f64 = 7501.51;
    pub const FCF_PV_CV: f64 = 5358.22;
    pub const ENTITY_VALUE: f64 = 6945.31;

    // residual operating income valuation
    pub const REVM_NOA: [f64; 6] = [5353.70, 5460.77, 5569.99, 5681.39, 5795.02, 5910.92];
    pub const CAPITAL_CHARGE: [f64; 5] = [374.76, 382.25, 389.90, 397.70, 405.65];
    pub const ROI: [f64; 5] = [72.08, 73.52, 74.99, 76.49, 78.02];
    pub const ROI_PV: [f64; 5] = [67.36, 64.50, 60.97, 58.39, 55.73];
    pub const ROI_PV_TOTAL: f64 = 306.95;
    pub const ROI_CV: f64 = 1591.61;
    pub const ROI_PV_CV: f64 = 1284.66;

    // abnormal operating income growth valuation, years 2018E..2021E
    pub const REINVESTED: [f64; 4] = [107.07, 109.22, 111.40, 113.63];
    pub const NORMAL_CHANGE: [f64; 4] = [6.26, 6.37, 6.53, 6.68];
    pub const CHANGE_OI: [f64; 4] = [8.93, 9.12, 9.3, 9.48];
    pub const CHANGE_OI_DECIMALS: [u32; 4] = [2, 2, 1, 2];
    pub const AOIG: [f64; 4] = [2.67, 2.75, 2.77, 2.8];
    pub const AOIG_DECIMALS: [u32; 4] = [2, 2, 2, 1];
    /// Capitalised next-period AOIG, years 2017E..2020E.
    pub const CAP_AOIG: [f64; 4] = [44.82, 45.71, 46.63, 47.56];
    pub const PV_CAP_AOIG: [f64; 4] = [41.89, 40.10, 37.91, 36.31];
    pub const PV_CAP_AOIG_TOTAL: f64 = 180.23;
    pub const AOIG_CV_TERMINAL: f64 = 3.84;
    pub const AOIG_CV: f64 = 1119.80;
    pub const AOIG_PV_CV: f64 = 854.29;
    pub const CAPITALISED_OI: f64 = 7127.51;

    /// `(wacc, growth, pv, pv_of_cv, env, env_change_pct, eqv, eqv_change_pct)`
    pub type SensitivityColumn = (f64, f64, f64, f64, f64, f64, f64, f64);

    /// Sensitivity table columns. The first three vary WACC at 2% growth,
    /// the last three vary growth at 7% WACC.
    pub const SENSITIVITY: [SensitivityColumn; 6] = [
        (0.06, 0.02, 1785.10, 8417.43, 10202.54, 25.00, 8428.74, 31.94),
        (0.07, 0.02, 1736.93, 6425.10, 8162.03, 0.0, 6388.23, 0.0),
        (0.08, 0.02, 1690.77, 5110.92, 6801.69, -16.67, 5027.89, -21.29),
        (0.07, 0.01, 1736.93, 5301.76, 7038.69, -13.76, 5264.89, -17.58),
        (0.07, 0.02, 1736.93, 6425.10, 8162.03, 0.0, 6388.23, 0.0),
        (0.07, 0.03, 1736.93, 8110.12, 9847.04, 20.64, 8073.24, 26.38),
    ];

    // multiples table
    pub const PEERS: [(&str, f64, f64); 2] = [("Tesco", 10.6, 1.0), ("Sainsbury's", 11.0, 0.6)];
    pub const MEDIAN_EBIT: f64 = 10.8;
    pub const MEDIAN_SALES: f64 = 0.8;
    pub const HARMONIC_EBIT: f64 = 10.53;
    pub const HARMONIC_SALES: f64 = 0.77;
    pub const EBIT: f64 = 746.50;
    pub const SALES: f64 = 9934.30;
    pub const COMPS_SHARES: f64 = 1605.51;
    /// Column order: EBIT median, EBIT harmonic, sales median, sales harmonic.
    pub const COMPS_ENV: [f64; 4] = [8062.20, 7860.65, 7947.44, 7649.41];
    pub const COMPS_EQV: [f64; 4] = [6288.40, 6086.85, 6173.64, 5875.61];
    pub const COMPS_PER_SHARE: [f64; 4] = [3.92, 3.79, 3.85, 3.66];
    pub const COMPS_AVG_ENV: f64 = 7879.92;
    pub const COMPS_AVG_EQV: f64 = 6106.13;
    pub const COMPS_AVG_PER_SHARE: f64 = 3.80;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ms_loads() {
        let f = load("ms").unwrap();
        assert_eq!(f.statements.len(), 1);
        assert_eq!(f.assumptions.noa_anchor, Some(5353.70));
        assert_eq!(f.comparables.len(), 2);
        assert!(matches!(load("xyz"), Err(AppError::Usage(_))));
    }

    #[test]
    fn fixture_matches_printed_base_year() {
        let f = load("ms").unwrap();
        let b = &f.statements.base().balance;
        assert_eq!(b.inventories, printed::INVENTORIES[0]);
        assert_eq!(b.trade_payables, printed::PAYABLES[0]);
        assert_eq!(b.ppe_and_intangibles, printed::PPE[0]);
        assert_eq!(f.statements.base().income.operating_income, printed::OI[0]);
    }
}
