//! Reformulated financial statements: the operating/financial split of the
//! balance sheet and income statement, organised by period.
//!
//! Amounts are in millions of one currency. Liability-classified operating
//! items (trade payables, current tax liabilities) are stored negative so that
//! working capital and net operating assets are plain sums.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Default absolute tolerance for [`check_clean_surplus`].
pub const DEFAULT_CSR_TOLERANCE: f64 = 1e-6;

/// Line items accepted in a statements file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Item {
    Sales,
    Ebit,
    OperatingIncome,
    ComprehensiveEarnings,
    Inventories,
    TradeReceivables,
    CurrentTaxReceivable,
    TradePayables,
    CurrentTaxLiabilities,
    PpeIntangibles,
    OtherNetOperatingAssets,
    NetFinancialLiabilities,
    NoncontrollingInterest,
    CommonEquity,
    Dividends,
}

impl Item {
    pub const ALL: [Item; 15] = [
        Item::Sales,
        Item::Ebit,
        Item::OperatingIncome,
        Item::ComprehensiveEarnings,
        Item::Inventories,
        Item::TradeReceivables,
        Item::CurrentTaxReceivable,
        Item::TradePayables,
        Item::CurrentTaxLiabilities,
        Item::PpeIntangibles,
        Item::OtherNetOperatingAssets,
        Item::NetFinancialLiabilities,
        Item::NoncontrollingInterest,
        Item::CommonEquity,
        Item::Dividends,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Item::Sales => "sales",
            Item::Ebit => "ebit",
            Item::OperatingIncome => "operating_income",
            Item::ComprehensiveEarnings => "comprehensive_earnings",
            Item::Inventories => "inventories",
            Item::TradeReceivables => "trade_receivables",
            Item::CurrentTaxReceivable => "current_tax_receivable",
            Item::TradePayables => "trade_payables",
            Item::CurrentTaxLiabilities => "current_tax_liabilities",
            Item::PpeIntangibles => "ppe_intangibles",
            Item::OtherNetOperatingAssets => "other_net_operating_assets",
            Item::NetFinancialLiabilities => "net_financial_liabilities",
            Item::NoncontrollingInterest => "noncontrolling_interest",
            Item::CommonEquity => "common_equity",
            Item::Dividends => "dividends",
        }
    }

    /// Equity-side items (earnings, book value, dividends) are optional; the
    /// entity-level models do not need them.
    pub fn is_required(self) -> bool {
        !matches!(
            self,
            Item::ComprehensiveEarnings | Item::CommonEquity | Item::Dividends
        )
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Returned when a string names no known [`Item`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownItem(pub String);

impl fmt::Display for UnknownItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown item `{}`", self.0)
    }
}

impl FromStr for Item {
    type Err = UnknownItem;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        Item::ALL
            .iter()
            .copied()
            .find(|i| i.as_str() == s)
            .ok_or_else(|| UnknownItem(String::from(s)))
    }
}

/// Period tag. `index` is the offset from the valuation date: 0 is the base
/// year, 1..=T are forecast years.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodId {
    pub label: String,
    pub index: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BalanceSheet {
    pub inventories: f64,
    pub trade_receivables: f64,
    pub current_tax_receivable: f64,
    /// Negative.
    pub trade_payables: f64,
    /// Negative.
    pub current_tax_liabilities: f64,
    pub ppe_and_intangibles: f64,
    pub other_net_operating_assets: f64,
    /// Positive means net debt; net financial assets are its negation.
    pub net_financial_liabilities: f64,
    pub noncontrolling_interest: f64,
    pub common_equity: Option<f64>,
    pub dividends_paid: Option<f64>,
}

impl BalanceSheet {
    pub fn working_capital(&self) -> f64 {
        working_capital(self)
    }

    pub fn net_operating_assets(&self) -> f64 {
        net_operating_assets(self)
    }

    pub fn net_financial_assets(&self) -> f64 {
        -self.net_financial_liabilities
    }
}

fn add_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Add for BalanceSheet {
    type Output = BalanceSheet;

    fn add(self, o: BalanceSheet) -> BalanceSheet {
        BalanceSheet {
            inventories: self.inventories + o.inventories,
            trade_receivables: self.trade_receivables + o.trade_receivables,
            current_tax_receivable: self.current_tax_receivable + o.current_tax_receivable,
            trade_payables: self.trade_payables + o.trade_payables,
            current_tax_liabilities: self.current_tax_liabilities + o.current_tax_liabilities,
            ppe_and_intangibles: self.ppe_and_intangibles + o.ppe_and_intangibles,
            other_net_operating_assets: self.other_net_operating_assets
                + o.other_net_operating_assets,
            net_financial_liabilities: self.net_financial_liabilities
                + o.net_financial_liabilities,
            noncontrolling_interest: self.noncontrolling_interest + o.noncontrolling_interest,
            common_equity: add_opt(self.common_equity, o.common_equity),
            dividends_paid: add_opt(self.dividends_paid, o.dividends_paid),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IncomeStatement {
    pub sales: f64,
    pub ebit: f64,
    /// After-tax operating income including operating OCI items. May be negative.
    pub operating_income: f64,
    pub comprehensive_earnings: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Period {
    pub id: PeriodId,
    pub balance: BalanceSheet,
    pub income: IncomeStatement,
}

impl Period {
    pub fn get(&self, item: Item) -> Option<f64> {
        let b = &self.balance;
        let i = &self.income;
        Some(match item {
            Item::Sales => i.sales,
            Item::Ebit => i.ebit,
            Item::OperatingIncome => i.operating_income,
            Item::ComprehensiveEarnings => return i.comprehensive_earnings,
            Item::Inventories => b.inventories,
            Item::TradeReceivables => b.trade_receivables,
            Item::CurrentTaxReceivable => b.current_tax_receivable,
            Item::TradePayables => b.trade_payables,
            Item::CurrentTaxLiabilities => b.current_tax_liabilities,
            Item::PpeIntangibles => b.ppe_and_intangibles,
            Item::OtherNetOperatingAssets => b.other_net_operating_assets,
            Item::NetFinancialLiabilities => b.net_financial_liabilities,
            Item::NoncontrollingInterest => b.noncontrolling_interest,
            Item::CommonEquity => return b.common_equity,
            Item::Dividends => return b.dividends_paid,
        })
    }

    fn set(&mut self, item: Item, v: f64) {
        let b = &mut self.balance;
        let i = &mut self.income;
        match item {
            Item::Sales => i.sales = v,
            Item::Ebit => i.ebit = v,
            Item::OperatingIncome => i.operating_income = v,
            Item::ComprehensiveEarnings => i.comprehensive_earnings = Some(v),
            Item::Inventories => b.inventories = v,
            Item::TradeReceivables => b.trade_receivables = v,
            Item::CurrentTaxReceivable => b.current_tax_receivable = v,
            Item::TradePayables => b.trade_payables = v,
            Item::CurrentTaxLiabilities => b.current_tax_liabilities = v,
            Item::PpeIntangibles => b.ppe_and_intangibles = v,
            Item::OtherNetOperatingAssets => b.other_net_operating_assets = v,
            Item::NetFinancialLiabilities => b.net_financial_liabilities = v,
            Item::NoncontrollingInterest => b.noncontrolling_interest = v,
            Item::CommonEquity => b.common_equity = Some(v),
            Item::Dividends => b.dividends_paid = Some(v),
        }
    }
}

/// Validated, contiguous run of periods starting at index 0.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StatementSet {
    periods: Vec<Period>,
}

impl StatementSet {
    pub fn base(&self) -> &Period {
        &self.periods[0]
    }

    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    pub fn get(&self, index: u32) -> Option<&Period> {
        self.periods.get(index as usize)
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    /// Every `(period label, item, value)` triple, periods in index order and
    /// items in [`Item::ALL`] order. Optional items that are absent are skipped.
    pub fn records(&self) -> Vec<(&str, Item, f64)> {
        let mut out = Vec::new();
        for p in &self.periods {
            for item in Item::ALL {
                if let Some(v) = p.get(item) {
                    out.push((p.id.label.as_str(), item, v));
                }
            }
        }
        out
    }
}

/// Leading calendar/fiscal year of a label such as `2017E`.
pub fn label_year(label: &str) -> Option<i64> {
    let digits = label.bytes().take_while(u8::is_ascii_digit).count();
    if digits == 0 {
        return None;
    }
    label[..digits].parse().ok()
}

#[derive(Debug, Clone)]
struct Pending {
    label: String,
    year: i64,
    period: Period,
    seen: Vec<Item>,
}

/// Accumulates `(period, item, value)` records and validates them into a
/// [`StatementSet`].
#[derive(Debug, Clone, Default)]
pub struct StatementBuilder {
    pending: Vec<Pending>,
}

impl StatementBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: &str, item: Item, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite("statement value"));
        }
        let year = label_year(label).ok_or_else(|| Error::InvalidPeriodLabel(label.into()))?;
        let slot = match self.pending.iter().position(|p| p.label == label) {
            Some(i) => i,
            None => {
                if self.pending.iter().any(|p| p.year == year) {
                    return Err(Error::DuplicatePeriod(label.into()));
                }
                self.pending.push(Pending {
                    label: label.into(),
                    year,
                    period: Period {
                        id: PeriodId {
                            label: label.into(),
                            index: 0,
                        },
                        balance: BalanceSheet::default(),
                        income: IncomeStatement::default(),
                    },
                    seen: Vec::new(),
                });
                self.pending.len() - 1
            }
        };
        let p = &mut self.pending[slot];
        if p.seen.contains(&item) {
            return Err(Error::DuplicateItem {
                period: label.into(),
                item,
            });
        }
        p.seen.push(item);
        p.period.set(item, value);
        Ok(())
    }

    pub fn build(mut self) -> Result<StatementSet> {
        if self.pending.is_empty() {
            return Err(Error::NoPeriods);
        }
        self.pending.sort_by_key(|p| p.year);
        for w in self.pending.windows(2) {
            if w[1].year != w[0].year + 1 {
                return Err(Error::NonContiguousPeriods {
                    after: w[0].label.clone(),
                    next: w[1].label.clone(),
                });
            }
        }
        let mut periods = Vec::with_capacity(self.pending.len());
        for (idx, p) in self.pending.into_iter().enumerate() {
            if let Some(item) = Item::ALL
                .iter()
                .copied()
                .find(|i| i.is_required() && !p.seen.contains(i))
            {
                return Err(Error::MissingItem {
                    period: p.label,
                    item,
                });
            }
            let mut period = p.period;
            period.id.index = idx as u32;
            periods.push(period);
        }
        Ok(StatementSet { periods })
    }
}

/// Inventories + receivables + tax receivable + payables + tax liabilities,
/// with the liabilities already negative.
pub fn working_capital(bs: &BalanceSheet) -> f64 {
    bs.inventories
        + bs.trade_receivables
        + bs.current_tax_receivable
        + bs.trade_payables
        + bs.current_tax_liabilities
}

pub fn net_operating_assets(bs: &BalanceSheet) -> f64 {
    working_capital(bs) + bs.ppe_and_intangibles + bs.other_net_operating_assets
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CleanSurplus {
    Pass,
    /// `b_prev + earn - div - b_cur`.
    Violation { residual: f64 },
}

impl CleanSurplus {
    pub fn is_pass(&self) -> bool {
        matches!(self, CleanSurplus::Pass)
    }
}

/// Checks `B_t = B_{t-1} + Earn_t - d_t` within an absolute tolerance.
pub fn check_clean_surplus(
    b_prev: f64,
    earn: f64,
    div: f64,
    b_cur: f64,
    tolerance: f64,
) -> CleanSurplus {
    let residual = b_prev + earn - div - b_cur;
    if residual.abs() <= tolerance {
        CleanSurplus::Pass
    } else {
        CleanSurplus::Violation { residual }
    }
}
