//! Table, CSV and JSON renderers. Tables round for reading; CSV and JSON
//! carry full precision.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use accval_core::benford::BenfordReport;
use accval_core::lim::{
    FelthamOhlsonParams, FoCoefficients, FoValue, OhlsonCoefficients, OhlsonParams,
};
use accval_core::multiples::CompsResult;
use accval_core::sensitivity::{CellValues, SensitivityGrid};
use accval_core::valuation::{DiscountConvention, Perspective, ValuationResult, Warning};

use crate::reconcile::{Classification, ReconciliationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

/// Rounds half away from zero. The relative nudge keeps values such as
/// 2.675 (stored just below the half) from rounding down.
pub fn round_half_up(x: f64, dp: u32) -> f64 {
    let s = 10f64.powi(dp as i32);
    let y = x.abs() * s;
    let r = (y * (1.0 + 1e-12) + 0.5).floor() / s;
    if x < 0.0 {
        -r
    } else {
        r
    }
}

pub fn fmt_fixed(x: f64, dp: u32) -> String {
    if !x.is_finite() {
        return "n/a".into();
    }
    let s = format!("{:.*}", dp as usize, round_half_up(x, dp));
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Monetary amount at 2 dp.
pub fn fmt_money(x: f64) -> String {
    fmt_fixed(x, 2)
}

/// A fraction as a 2-dp percentage: `0.25` gives `25.00%`.
pub fn fmt_pct(fraction: f64) -> String {
    if !fraction.is_finite() {
        return "n/a".into();
    }
    format!("{}%", fmt_fixed(fraction * 100.0, 2))
}

fn opt(x: Option<f64>, f: fn(f64) -> String) -> String {
    x.map_or_else(|| "n/a".into(), f)
}

fn full(x: f64) -> String {
    x.to_string()
}

fn full_opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, full)
}

/// Plain aligned text table. First column left-aligned, the rest right.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn write(&self, out: &mut String) {
        let mut w: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate() {
                w[i] = w[i].max(c.chars().count());
            }
        }
        let line = |out: &mut String, cells: &[String]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let pad = w[i] - c.chars().count();
                if i == 0 {
                    s.push_str(c);
                    s.extend(std::iter::repeat_n(' ', pad));
                } else {
                    s.extend(std::iter::repeat_n(' ', pad));
                    s.push_str(c);
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(out, &self.header);
        for r in &self.rows {
            line(out, r);
        }
    }
}

struct Csv(csv::Writer<Vec<u8>>);

impl Csv {
    fn new(header: &[&str]) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        Csv(w)
    }

    fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.0.write_record(cells).expect("in-memory write");
    }

    fn finish(self) -> String {
        String::from_utf8(self.0.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- value

#[derive(Debug, Clone, Serialize)]
pub struct ValueReport {
    pub source: String,
    pub discounting: DiscountConvention,
    pub perspective: Perspective,
    /// Keyed by lowercase model name.
    pub models: BTreeMap<String, ValuationResult>,
    /// Largest pairwise gap between the models' intrinsic values.
    pub max_spread: f64,
    pub benford: Option<BenfordReport>,
}

impl ValueReport {
    pub fn new(
        source: String,
        discounting: DiscountConvention,
        perspective: Perspective,
        results: Vec<ValuationResult>,
        benford: Option<BenfordReport>,
    ) -> Self {
        let v: Vec<f64> = results.iter().map(|r| r.intrinsic_value()).collect();
        let max_spread = v
            .iter()
            .flat_map(|a| v.iter().map(move |b| (a - b).abs()))
            .fold(0.0, f64::max);
        ValueReport {
            source,
            discounting,
            perspective,
            models: results.into_iter().map(|r| (r.model.as_str().to_string(), r)).collect(),
            max_spread,
            benford,
        }
    }

    /// Results in FCFVM, REVM, AEGM order.
    fn ordered(&self) -> Vec<&ValuationResult> {
        let mut v: Vec<_> = self.models.values().collect();
        v.sort_by_key(|r| r.model);
        v
    }
}

fn discounting_label(d: DiscountConvention) -> String {
    match d {
        DiscountConvention::Exact => "exact".into(),
        DiscountConvention::RoundedFactors { decimals } => format!("factors rounded to {decimals} dp"),
    }
}

fn warning_text(w: &Warning) -> String {
    match w {
        Warning::NegativeFlow { period } => format!("negative flow in period {period}"),
        Warning::NegativeTerminalFlow => "continuing value rests on a negative terminal flow".into(),
    }
}

pub fn render_value(r: &ValueReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut c = Csv::new(&[
                "model",
                "period",
                "flow",
                "discount_factor",
                "present_value",
                "anchor",
                "pv_explicit",
                "continuing_value",
                "pv_of_cv",
                "entity_value",
                "equity_value",
                "per_share",
            ]);
            for m in r.ordered() {
                for d in &m.schedule {
                    c.row([
                        m.model.as_str().to_string(),
                        d.period.to_string(),
                        full(d.flow),
                        full(d.discount_factor),
                        full(d.present_value),
                        full(m.anchor),
                        full(m.pv_explicit),
                        full(m.continuing_value),
                        full(m.pv_of_cv),
                        full(m.entity_value),
                        full(m.equity_value),
                        full(m.per_share),
                    ]);
                }
            }
            c.finish()
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "source: {}", r.source);
            let _ = writeln!(out, "discounting: {}", discounting_label(r.discounting));
            out.push('\n');
            let mut t = Table::new(&[
                "model",
                "anchor",
                "PV explicit",
                "CV",
                "PV of CV",
                "EnV",
                "EqV",
                "per share",
            ]);
            for m in r.ordered() {
                t.row(vec![
                    m.model.to_string(),
                    fmt_money(m.anchor),
                    fmt_money(m.pv_explicit),
                    fmt_money(m.continuing_value),
                    fmt_money(m.pv_of_cv),
                    fmt_money(m.entity_value),
                    fmt_money(m.equity_value),
                    fmt_money(m.per_share),
                ]);
            }
            t.write(&mut out);
            let _ = writeln!(out, "max spread between models: {}", fmt_money(r.max_spread));
            for m in r.ordered() {
                out.push('\n');
                let _ = writeln!(
                    out,
                    "{} at {} (growth {})",
                    m.model,
                    fmt_pct(m.discount_rate),
                    fmt_pct(m.growth)
                );
                let mut t = Table::new(&["period", "flow", "factor", "PV"]);
                for d in &m.schedule {
                    t.row(vec![
                        d.period.to_string(),
                        fmt_money(d.flow),
                        fmt_fixed(d.discount_factor, 4),
                        fmt_money(d.present_value),
                    ]);
                }
                t.write(&mut out);
                for w in &m.warnings {
                    let _ = writeln!(out, "warning: {}", warning_text(w));
                }
            }
            if let Some(b) = &r.benford {
                out.push('\n');
                let _ = writeln!(
                    out,
                    "benford screen of inputs: {} (n={}, chi-square {}, MAD {})",
                    b.verdict.as_str(),
                    b.histogram.total,
                    fmt_fixed(b.chi_square, 2),
                    fmt_fixed(b.mad, 4)
                );
            }
            out
        }
    }
}

// ---------------------------------------------------------- sensitivity

const GRID_HEADER: [&str; 12] = [
    "axis",
    "wacc",
    "growth",
    "pv_explicit",
    "continuing_value",
    "pv_of_cv",
    "entity_value",
    "env_change",
    "equity_value",
    "eqv_change",
    "per_share",
    "valid",
];

pub fn render_grid(g: &SensitivityGrid, format: Format) -> String {
    match format {
        Format::Json => json(g),
        Format::Csv => {
            let mut c = Csv::new(&GRID_HEADER);
            for cell in &g.cells {
                let mut row = vec![cell.axis.as_str().to_string(), full(cell.wacc), full(cell.growth)];
                match &cell.values {
                    Some(v) => {
                        row.extend([
                            full(v.pv_explicit),
                            full_opt(v.continuing_value),
                            full(v.pv_of_cv),
                            full(v.entity_value),
                            full_opt(v.pct_change_env),
                            full(v.equity_value),
                            full_opt(v.pct_change_eqv),
                            full_opt(v.per_share),
                        ]);
                        row.push("true".into());
                    }
                    None => {
                        row.extend(std::iter::repeat_n(String::new(), 8));
                        row.push("false".into());
                    }
                }
                c.row(row);
            }
            c.finish()
        }
        Format::Table => {
            let mut t = Table::new(&[
                "axis", "WACC", "g", "PV", "CV", "PV of CV", "EnV", "EnV chg", "EqV", "EqV chg",
                "per share",
            ]);
            for cell in &g.cells {
                let mut row = vec![cell.axis.as_str().to_string(), fmt_pct(cell.wacc), fmt_pct(cell.growth)];
                match &cell.values {
                    Some(v) => row.extend(grid_values(v)),
                    None => row.extend(std::iter::repeat_n("n/a".to_string(), 8)),
                }
                t.row(row);
            }
            let mut out = String::new();
            t.write(&mut out);
            out
        }
    }
}

fn grid_values(v: &CellValues) -> Vec<String> {
    vec![
        fmt_money(v.pv_explicit),
        opt(v.continuing_value, fmt_money),
        fmt_money(v.pv_of_cv),
        fmt_money(v.entity_value),
        opt(v.pct_change_env, fmt_pct),
        fmt_money(v.equity_value),
        opt(v.pct_change_eqv, fmt_pct),
        opt(v.per_share, fmt_money),
    ]
}

// ------------------------------------------------------------ multiples

pub fn render_comps(r: &CompsResult, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut c = Csv::new(&[
                "driver",
                "method",
                "target_driver",
                "computed_multiple",
                "supplied_multiple",
                "multiple",
                "entity_value",
                "equity_value",
                "per_share",
                "deviates",
            ]);
            for row in &r.rows {
                c.row([
                    row.driver.as_str().to_string(),
                    row.method.as_str().to_string(),
                    full(row.target_driver),
                    full(row.computed_multiple),
                    full_opt(row.supplied_multiple),
                    full(row.multiple),
                    full(row.entity_value),
                    full(row.equity_value),
                    full(row.per_share),
                    row.deviates().to_string(),
                ]);
            }
            c.row([
                "average".to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                full(r.average_entity_value),
                full(r.average_equity_value),
                full(r.average_per_share),
                String::new(),
            ]);
            c.finish()
        }
        Format::Table => {
            let mut t = Table::new(&[
                "driver", "method", "target", "computed", "supplied", "multiple", "EnV", "EqV",
                "per share", "",
            ]);
            for row in &r.rows {
                t.row(vec![
                    row.driver.as_str().to_string(),
                    row.method.as_str().to_string(),
                    fmt_money(row.target_driver),
                    fmt_fixed(row.computed_multiple, 2),
                    opt(row.supplied_multiple, |m| fmt_fixed(m, 2)),
                    fmt_fixed(row.multiple, 2),
                    fmt_money(row.entity_value),
                    fmt_money(row.equity_value),
                    fmt_money(row.per_share),
                    if row.deviates() { "deviates".into() } else { String::new() },
                ]);
            }
            t.row(vec![
                "average".into(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                fmt_money(r.average_entity_value),
                fmt_money(r.average_equity_value),
                fmt_money(r.average_per_share),
                String::new(),
            ]);
            let mut out = String::new();
            t.write(&mut out);
            out
        }
    }
}

// -------------------------------------------------------------- benford

pub fn render_benford(b: &BenfordReport, format: Format) -> String {
    match format {
        Format::Json => json(b),
        Format::Csv => {
            let mut c = Csv::new(&[
                "digit", "count", "observed", "expected", "n", "chi_square", "mad", "verdict",
            ]);
            for d in 0..9 {
                c.row([
                    (d + 1).to_string(),
                    b.histogram.counts[d].to_string(),
                    full(b.observed[d]),
                    full(b.expected[d]),
                    b.histogram.total.to_string(),
                    full(b.chi_square),
                    full(b.mad),
                    b.verdict.as_str().to_string(),
                ]);
            }
            c.finish()
        }
        Format::Table => {
            let mut t = Table::new(&["digit", "count", "observed", "expected"]);
            for d in 0..9 {
                t.row(vec![
                    (d + 1).to_string(),
                    b.histogram.counts[d].to_string(),
                    fmt_fixed(b.observed[d], 4),
                    fmt_fixed(b.expected[d], 4),
                ]);
            }
            let mut out = String::new();
            t.write(&mut out);
            let _ = writeln!(out, "n: {}", b.histogram.total);
            let _ = writeln!(
                out,
                "chi-square: {} (critical {})",
                fmt_fixed(b.chi_square, 3),
                fmt_fixed(b.thresholds.chi_square, 3)
            );
            let _ = writeln!(
                out,
                "MAD: {} (threshold {})",
                fmt_fixed(b.mad, 4),
                fmt_fixed(b.thresholds.mad, 4)
            );
            let _ = writeln!(out, "verdict: {}", b.verdict.as_str());
            out
        }
    }
}

// ------------------------------------------------------------------ lim

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum LimReport {
    Ohlson {
        params: OhlsonParams,
        coefficients: OhlsonCoefficients,
        book_value: f64,
        residual_earnings: f64,
        other_information: f64,
        value: f64,
    },
    FelthamOhlson {
        params: FelthamOhlsonParams,
        coefficients: FoCoefficients,
        net_operating_assets: f64,
        residual_operating_income: f64,
        other_information: f64,
        net_financial_assets: f64,
        value: FoValue,
    },
}

impl LimReport {
    fn quantities(&self) -> Vec<(&'static str, f64, u32)> {
        match self {
            LimReport::Ohlson {
                params,
                coefficients,
                book_value,
                residual_earnings,
                other_information,
                value,
            } => vec![
                ("omega1", params.omega1, 4),
                ("gamma1", params.gamma1, 4),
                ("rho_e", params.rho_e, 4),
                ("alpha1", coefficients.alpha1, 4),
                ("alpha2", coefficients.alpha2, 4),
                ("book_value", *book_value, 2),
                ("residual_earnings", *residual_earnings, 2),
                ("other_information", *other_information, 2),
                ("value", *value, 2),
            ],
            LimReport::FelthamOhlson {
                params,
                coefficients,
                net_operating_assets,
                residual_operating_income,
                other_information,
                net_financial_assets,
                value,
            } => vec![
                ("omega0", params.omega0, 4),
                ("omega1", params.omega1, 4),
                ("gamma1", params.gamma1, 4),
                ("growth_factor", params.growth_factor, 4),
                ("rho_f", params.rho_f, 4),
                ("alpha1", coefficients.alpha1, 4),
                ("alpha2", coefficients.alpha2, 4),
                ("alpha3", coefficients.alpha3, 4),
                ("net_operating_assets", *net_operating_assets, 2),
                ("residual_operating_income", *residual_operating_income, 2),
                ("other_information", *other_information, 2),
                ("net_financial_assets", *net_financial_assets, 2),
                ("operations_value", value.operations_value, 2),
                ("total_value", value.total_value, 2),
            ],
        }
    }
}

pub fn render_lim(r: &LimReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut c = Csv::new(&["quantity", "value"]);
            for (k, v, _) in r.quantities() {
                c.row([k.to_string(), full(v)]);
            }
            c.finish()
        }
        Format::Table => {
            let mut t = Table::new(&["quantity", "value"]);
            for (k, v, dp) in r.quantities() {
                t.row(vec![k.to_string(), fmt_fixed(v, dp)]);
            }
            let mut out = String::new();
            t.write(&mut out);
            out
        }
    }
}

// ------------------------------------------------------------ reconcile

pub fn render_reconcile(r: &ReconciliationReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut c = Csv::new(&[
                "location",
                "printed",
                "recomputed",
                "abs_deviation",
                "rel_deviation",
                "tolerance",
                "classification",
            ]);
            for row in &r.rows {
                c.row([
                    row.location.clone(),
                    full(row.printed),
                    full(row.recomputed),
                    full(row.abs_deviation),
                    full_opt(row.rel_deviation),
                    full(row.tolerance),
                    row.classification.as_str().to_string(),
                ]);
            }
            c.finish()
        }
        Format::Table => {
            let mut t = Table::new(&["location", "printed", "recomputed", "abs dev", "rel dev", "class"]);
            for row in &r.rows {
                t.row(vec![
                    row.location.clone(),
                    fmt_fixed(row.printed, row.decimals),
                    fmt_fixed(row.recomputed, row.decimals + 2),
                    fmt_fixed(row.abs_deviation, row.decimals + 2),
                    opt(row.rel_deviation, fmt_pct),
                    row.classification.as_str().to_string(),
                ]);
            }
            let mut out = String::new();
            let _ = writeln!(out, "fixture: {}", r.fixture);
            t.write(&mut out);
            let _ = writeln!(
                out,
                "{} rows: {} match, {} rounding, {} errata",
                r.rows.len(),
                r.count(Classification::Match),
                r.count(Classification::Rounding),
                r.count(Classification::Errata)
            );
            out
        }
    }
}
