//! Line-by-line comparison of printed case figures against recomputation.

use serde::Serialize;

use accval_core::forecast::{grow, FinancingClaims, FlowSeries};
use accval_core::multiples::{central_multiple, CentralTendency};
use accval_core::sensitivity::{replay, Axis, ReplayInput};
use accval_core::statements::{net_operating_assets, working_capital, BalanceSheet};
use accval_core::valuation::{
    aoig, continuing_value, equity_bridge, fcf_method1, fcf_method2, present_value,
    residual_operating_income, value, DiscountConvention, DiscountSchedule, Model,
    OperatingDeltas, Perspective, ValuationOptions,
};

use crate::error::Result;
use crate::fixtures::printed as p;

/// Relative slack above which a row stops counting as rounding noise.
pub const ROUNDING_RELATIVE: f64 = 5e-5;
/// No deviation above this share of the recomputed value is rounding, however
/// small in absolute terms.
pub const ROUNDING_RELATIVE_CAP: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Match,
    Rounding,
    Errata,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Match => "match",
            Classification::Rounding => "rounding",
            Classification::Errata => "errata",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconRow {
    pub location: String,
    pub printed: f64,
    /// Decimals shown in print.
    pub decimals: u32,
    pub recomputed: f64,
    pub abs_deviation: f64,
    /// `|printed - recomputed| / |recomputed|`, absent when recomputed is 0.
    pub rel_deviation: Option<f64>,
    /// Largest deviation still classified as a match.
    pub tolerance: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconciliationReport {
    pub fixture: String,
    pub rows: Vec<ReconRow>,
}

impl ReconciliationReport {
    pub fn count(&self, c: Classification) -> usize {
        self.rows.iter().filter(|r| r.classification == c).count()
    }

    pub fn find(&self, location: &str) -> Option<&ReconRow> {
        self.rows.iter().find(|r| r.location == location)
    }
}

/// Match: within half a unit of the last printed digit. Rounding: within ten
/// such half-units, or [`ROUNDING_RELATIVE`] of the printed value, whichever
/// is larger, and under [`ROUNDING_RELATIVE_CAP`] relative. Anything beyond
/// is errata.
pub fn classify(printed: f64, recomputed: f64, decimals: u32) -> (Classification, f64) {
    let half_unit = 0.5 * 10f64.powi(-(decimals as i32));
    let tolerance = half_unit + 1e-6;
    let dev = (printed - recomputed).abs();
    let c = if dev <= tolerance {
        Classification::Match
    } else if dev <= (10.0 * half_unit).max(ROUNDING_RELATIVE * printed.abs()) + 1e-9
        && dev <= ROUNDING_RELATIVE_CAP * recomputed.abs()
    {
        Classification::Rounding
    } else {
        Classification::Errata
    };
    (c, tolerance)
}

struct Rows(Vec<ReconRow>);

impl Rows {
    fn add(&mut self, location: impl Into<String>, printed: f64, decimals: u32, recomputed: f64) {
        let (classification, tolerance) = classify(printed, recomputed, decimals);
        let abs_deviation = (printed - recomputed).abs();
        self.0.push(ReconRow {
            location: location.into(),
            printed,
            decimals,
            recomputed,
            abs_deviation,
            rel_deviation: (recomputed != 0.0).then(|| abs_deviation / recomputed.abs()),
            tolerance,
            classification,
        });
    }

    fn add2(&mut self, location: impl Into<String>, printed: f64, recomputed: f64) {
        self.add(location, printed, 2, recomputed);
    }
}

fn sheet(t: usize) -> BalanceSheet {
    BalanceSheet {
        inventories: p::INVENTORIES[t],
        trade_receivables: p::RECEIVABLES[t],
        current_tax_receivable: p::TAX_RECEIVABLE[t],
        trade_payables: p::PAYABLES[t],
        current_tax_liabilities: p::TAX_LIABILITIES[t],
        ppe_and_intangibles: p::PPE[t],
        other_net_operating_assets: p::OTHER_NOA[t],
        ..Default::default()
    }
}

/// The printed flow rows as a series: forecast OI with the residual-income
/// NOA row.
pub fn printed_series() -> FlowSeries {
    FlowSeries::new(
        p::OI.to_vec(),
        p::REVM_NOA.to_vec(),
        FinancingClaims {
            net_financial_liabilities: p::NFL,
            noncontrolling_interest: p::NCI,
        },
    )
    .expect("printed rows have six periods")
}

fn printed_assumptions() -> accval_core::forecast::Assumptions {
    accval_core::forecast::Assumptions::new(p::GROWTH, p::WACC, 5, p::SHARES)
}

pub fn reconcile(fixture: &str) -> Result<ReconciliationReport> {
    match fixture {
        "ms" => reconcile_ms(),
        other => Err(crate::error::AppError::Usage(format!("unknown fixture `{other}`"))),
    }
}

fn reconcile_ms() -> Result<ReconciliationReport> {
    let mut rows = Rows(Vec::new());
    let y = p::YEARS;
    let g = p::GROWTH;
    let r = p::WACC;

    statement_block(&mut rows);

    // free cash flow, both methods, from the printed rows
    for t in 1..=5 {
        let prev = sheet(t - 1);
        let cur = sheet(t);
        let d = OperatingDeltas::between(&prev, &cur);
        let loc = |what: &str| format!("valuation/fcf method 2/{what}/{}", y[t]);
        rows.add2(loc("increase in receivables"), p::M2_RECEIVABLES[t - 1], -d.receivables);
        rows.add2(loc("increase in inventories"), p::M2_INVENTORIES[t - 1], -d.inventories);
        rows.add2(loc("increase in payables"), p::M2_PAYABLES[t - 1], -d.payables);
        rows.add2(loc("increase in other noa"), p::M2_OTHER_NOA[t - 1], -d.other_noa);
        rows.add2(loc("depreciation"), p::M2_DEPRECIATION[t - 1], p::PPE_DEPRECIATION[t]);
        rows.add2(loc("additions"), p::M2_CAPEX[t - 1], -p::PPE_ADDITIONS[t]);
        let m2 = fcf_method2(p::OI[t], &d, p::PPE_DEPRECIATION[t], p::PPE_ADDITIONS[t]);
        rows.add2(loc("free cash flow"), p::FCF[t - 1], m2);

        let loc = |what: &str| format!("valuation/fcf method 1/{what}/{}", y[t]);
        rows.add2(loc("change in noa"), p::M1_DELTA_NOA[t - 1], -(p::REVM_NOA[t] - p::REVM_NOA[t - 1]));
        rows.add2(
            loc("free cash flow"),
            p::FCF[t - 1],
            fcf_method1(p::OI[t], p::REVM_NOA[t - 1], p::REVM_NOA[t]),
        );
    }

    // FCF valuation with the printed two-decimal factors
    let rounded = DiscountSchedule::new(r, 5, DiscountConvention::RoundedFactors { decimals: 2 })?;
    let series = printed_series();
    let a = printed_assumptions();
    let exact = ValuationOptions::default();
    for t in 1..=5 {
        rows.add2(format!("valuation/fcf/discount factor/{}", y[t]), p::DISCOUNT_FACTORS[t - 1], rounded.factor(t));
        rows.add2(format!("valuation/fcf/present value/{}", y[t]), p::FCF_PV[t - 1], p::FCF[t - 1] / rounded.factor(t));
    }
    let pv_rounded: f64 = (1..=5).map(|t| p::FCF[t - 1] / rounded.factor(t)).sum();
    rows.add2("valuation/fcf/total present value", p::FCF_PV_TOTAL, pv_rounded);
    let cv = continuing_value(p::FCF[4], g, r)?;
    rows.add2("valuation/fcf/continuing value", p::FCF_CV, cv);
    rows.add2("valuation/fcf/present value of cv", p::FCF_PV_CV, cv / rounded.factor(5));
    let fcfvm = value(Model::Fcfvm, Perspective::Entity, &series, &a, &exact)?;
    rows.add2("valuation/fcf/entity value", p::ENTITY_VALUE, fcfvm.entity_value);

    // residual operating income
    for t in 1..=5 {
        rows.add2(format!("valuation/roi/net operating assets/{}", y[t]), p::REVM_NOA[t], grow(p::REVM_NOA[0], g, t as u32));
        rows.add2(format!("valuation/roi/capital charge/{}", y[t]), p::CAPITAL_CHARGE[t - 1], r * p::REVM_NOA[t - 1]);
        rows.add2(
            format!("valuation/roi/residual operating income/{}", y[t]),
            p::ROI[t - 1],
            residual_operating_income(p::OI[t], p::REVM_NOA[t - 1], r),
        );
        rows.add2(format!("valuation/roi/present value/{}", y[t]), p::ROI_PV[t - 1], p::ROI[t - 1] / rounded.factor(t));
    }
    let roi_pv: f64 = (1..=5).map(|t| p::ROI[t - 1] / rounded.factor(t)).sum();
    rows.add2("valuation/roi/total present value", p::ROI_PV_TOTAL, roi_pv);
    let roi_cv = continuing_value(p::ROI[4], g, r)?;
    rows.add2("valuation/roi/continuing value", p::ROI_CV, roi_cv);
    rows.add2("valuation/roi/present value of cv", p::ROI_PV_CV, roi_cv / rounded.factor(5));
    let revm = value(Model::Revm, Perspective::Entity, &series, &a, &exact)?;
    rows.add2("valuation/roi/entity value", p::ENTITY_VALUE, revm.entity_value);

    // abnormal operating income growth
    let fcf = series.fcf_series(5);
    let growth: Vec<f64> = (1..5).map(|t| aoig(p::OI[t + 1], p::OI[t], fcf[t - 1], r)).collect();
    for k in 0..4 {
        let t = k + 2;
        let reinvested = p::OI[t - 1] - fcf[t - 2];
        rows.add2(format!("valuation/aoig/prior year reinvested/{}", y[t]), p::REINVESTED[k], reinvested);
        rows.add2(format!("valuation/aoig/normal change/{}", y[t]), p::NORMAL_CHANGE[k], r * reinvested);
        rows.add(
            format!("valuation/aoig/change in operating income/{}", y[t]),
            p::CHANGE_OI[k],
            p::CHANGE_OI_DECIMALS[k],
            p::OI[t] - p::OI[t - 1],
        );
        rows.add(format!("valuation/aoig/aoig/{}", y[t]), p::AOIG[k], p::AOIG_DECIMALS[k], growth[k]);
        rows.add2(format!("valuation/aoig/capitalised aoig/{}", y[t - 1]), p::CAP_AOIG[k], growth[k] / r);
        rows.add2(
            format!("valuation/aoig/present value/{}", y[t - 1]),
            p::PV_CAP_AOIG[k],
            growth[k] / r / rounded.factor(k + 1),
        );
    }
    let aegm = value(Model::Aegm, Perspective::Entity, &series, &a, &exact)?;
    rows.add2("valuation/aoig/total present value", p::PV_CAP_AOIG_TOTAL, aegm.pv_explicit);
    rows.add2("valuation/aoig/terminal aoig", p::AOIG_CV_TERMINAL, aegm.terminal_flow);
    rows.add2("valuation/aoig/continuing value", p::AOIG_CV, aegm.continuing_value);
    rows.add2("valuation/aoig/present value of cv", p::AOIG_PV_CV, aegm.pv_of_cv);
    rows.add2("valuation/aoig/capitalised operating income", p::CAPITALISED_OI, aegm.anchor);
    rows.add2("valuation/aoig/entity value", p::ENTITY_VALUE, aegm.entity_value);
    rows.add2(
        "valuation/aoig/entity value from printed components",
        p::ENTITY_VALUE,
        p::CAPITALISED_OI + p::PV_CAP_AOIG_TOTAL + p::AOIG_PV_CV,
    );
    let (_, per_share) = equity_bridge(fcfvm.entity_value, p::NFL, p::NCI, p::SHARES)?;
    rows.add2("valuation/value per share", p::PER_SHARE, per_share);

    sensitivity_block(&mut rows, &series)?;
    multiples_block(&mut rows)?;

    Ok(ReconciliationReport {
        fixture: "ms".into(),
        rows: rows.0,
    })
}

fn statement_block(rows: &mut Rows) {
    let y = p::YEARS;
    let g = p::GROWTH;
    for t in 2..=5 {
        rows.add2(format!("statements/operating income/{}", y[t]), p::OI[t], grow(p::OI[1], g, t as u32 - 1));
    }
    let grown: [(&str, &[f64; 6]); 6] = [
        ("inventories", &p::INVENTORIES),
        ("receivables", &p::RECEIVABLES),
        ("tax receivable", &p::TAX_RECEIVABLE),
        ("payables", &p::PAYABLES),
        ("tax liabilities", &p::TAX_LIABILITIES),
        ("other noa", &p::OTHER_NOA),
    ];
    for (name, row) in grown {
        for t in 1..=5 {
            let dec = if name == "payables" && t == 4 { 1 } else { 2 };
            rows.add(format!("statements/{name}/{}", y[t]), row[t], dec, grow(row[0], g, t as u32));
        }
    }
    for t in 0..=5 {
        let s = sheet(t);
        rows.add(
            format!("statements/working capital/{}", y[t]),
            p::WORKING_CAPITAL[t],
            p::WORKING_CAPITAL_DECIMALS[t],
            working_capital(&s),
        );
        rows.add(
            format!("statements/net operating assets/{}", y[t]),
            p::NOA[t],
            p::NOA_DECIMALS[t],
            net_operating_assets(&s),
        );
        rows.add2(
            format!("statements/ppe carried forward/{}", y[t]),
            p::PPE_CARRIED[t],
            accval_core::forecast::ppe_rollforward(
                p::PPE_BROUGHT[t],
                p::PPE_ADDITIONS[t],
                p::PPE_DEPRECIATION[t].abs(),
            ),
        );
        if t > 0 {
            rows.add2(format!("statements/ppe brought forward/{}", y[t]), p::PPE_BROUGHT[t], p::PPE_CARRIED[t - 1]);
        }
    }
}

fn sensitivity_block(rows: &mut Rows, series: &FlowSeries) -> Result<()> {
    let claims = FinancingClaims {
        net_financial_liabilities: p::NFL,
        noncontrolling_interest: p::NCI,
    };
    let input = |i: usize| {
        let c = p::SENSITIVITY[i];
        ReplayInput {
            axis: if i < 3 { Axis::Wacc } else { Axis::Growth },
            wacc: c.0,
            growth: c.1,
            pv_explicit: c.2,
            pv_of_cv: c.3,
        }
    };
    let columns: Vec<ReplayInput> = (0..6).map(input).collect();
    let grid = replay(input(1), &columns, &claims, 0.0)?;
    for (i, cell) in grid.cells.iter().enumerate() {
        let c = p::SENSITIVITY[i];
        let v = cell.values.expect("printed columns are valid");
        let loc = format!(
            "sensitivity/{} axis wacc {:.0}% g {:.0}%",
            cell.axis.as_str(),
            cell.wacc * 100.0,
            cell.growth * 100.0
        );
        rows.add2(format!("{loc}/entity value"), c.4, v.entity_value);
        rows.add2(format!("{loc}/equity value"), c.6, c.4 - claims.total());
        rows.add2(format!("{loc}/entity value change %"), c.5, v.pct_change_env.unwrap_or(f64::NAN) * 100.0);
        rows.add2(format!("{loc}/equity value change %"), c.7, v.pct_change_eqv.unwrap_or(f64::NAN) * 100.0);
    }
    let printed_ratio = p::SENSITIVITY[0].3 / p::SENSITIVITY[1].3;
    let closed = (0.05 / 0.04) * (1.07f64 / 1.06).powi(5);
    rows.add("sensitivity/cv ratio wacc 6% over 7%", printed_ratio, 3, closed);
    let (pv, _) = present_value(&series.fcf_series(5), p::WACC)?;
    rows.add2("sensitivity/present value at baseline", p::SENSITIVITY[1].2, pv);
    Ok(())
}

fn multiples_block(rows: &mut Rows) -> Result<()> {
    let ebit: Vec<f64> = p::PEERS.iter().map(|x| x.1).collect();
    let sales: Vec<f64> = p::PEERS.iter().map(|x| x.2).collect();
    rows.add("multiples/ebit/median", p::MEDIAN_EBIT, 1, central_multiple(&ebit, CentralTendency::Median)?);
    rows.add2("multiples/ebit/harmonic mean", p::HARMONIC_EBIT, central_multiple(&ebit, CentralTendency::HarmonicMean)?);
    rows.add("multiples/sales/median", p::MEDIAN_SALES, 1, central_multiple(&sales, CentralTendency::Median)?);
    rows.add2("multiples/sales/harmonic mean", p::HARMONIC_SALES, central_multiple(&sales, CentralTendency::HarmonicMean)?);

    let used = [
        ("ebit/median", p::MEDIAN_EBIT, p::EBIT),
        ("ebit/harmonic mean", p::HARMONIC_EBIT, p::EBIT),
        ("sales/median", p::MEDIAN_SALES, p::SALES),
        ("sales/harmonic mean", p::HARMONIC_SALES, p::SALES),
    ];
    let (mut env_sum, mut eqv_sum, mut ps_sum) = (0.0, 0.0, 0.0);
    for (i, (name, multiple, driver)) in used.iter().enumerate() {
        let env = multiple * driver;
        let (eqv, ps) = equity_bridge(env, p::NFL, p::NCI, p::COMPS_SHARES)?;
        rows.add2(format!("multiples/{name}/entity value"), p::COMPS_ENV[i], env);
        rows.add2(format!("multiples/{name}/equity value"), p::COMPS_EQV[i], eqv);
        rows.add2(format!("multiples/{name}/value per share"), p::COMPS_PER_SHARE[i], ps);
        env_sum += env;
        eqv_sum += eqv;
        ps_sum += ps;
    }
    rows.add2("multiples/average entity value", p::COMPS_AVG_ENV, env_sum / 4.0);
    rows.add2("multiples/average equity value", p::COMPS_AVG_EQV, eqv_sum / 4.0);
    rows.add2("multiples/average value per share", p::COMPS_AVG_PER_SHARE, ps_sum / 4.0);
    rows.add2("multiples/shares outstanding", p::COMPS_SHARES, p::SHARES);
    Ok(())
}
