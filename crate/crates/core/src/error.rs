//! Error type shared by every model in the crate.

use alloc::string::String;
use core::fmt;

use crate::multiples::Driver;
use crate::statements::Item;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    // --- numerical domain ---
    /// Growing perpetuity requested with growth at or above the discount rate.
    GrowthExceedsDiscount {
        growth: f64,
        rate: f64,
        rate_name: &'static str,
    },
    /// Discount rate at or below -100%.
    InvalidDiscountRate(f64),
    /// A closed-form coefficient has a non-positive denominator.
    Divergence {
        parameter: &'static str,
        value: f64,
        rate: f64,
    },
    ZeroBookValue,
    ZeroBase,
    ZeroForwardEarnings,
    /// Harmonic mean over a non-positive multiple.
    NonPositiveValue(f64),

    // --- input / shape ---
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
    },
    NonFinite(&'static str),
    NonPositiveShares(f64),
    DigitOutOfRange(u8),
    EmptyInput,
    EmptyAxis(&'static str),
    MissingDriver {
        comparable: String,
        driver: Driver,
    },
    NoPeriods,
    InvalidPeriodLabel(String),
    DuplicatePeriod(String),
    DuplicateItem {
        period: String,
        item: Item,
    },
    MissingItem {
        period: String,
        item: Item,
    },
    NonContiguousPeriods {
        after: String,
        next: String,
    },
    SeriesTooShort {
        needed: usize,
        found: usize,
    },
    SeriesLengthMismatch(&'static str),
    MissingSeries(&'static str),
    MissingEquityCost,
    HorizonTooShort {
        needed: usize,
        found: usize,
    },
}

impl Error {
    /// True for errors caused by parameter values that put a model outside its
    /// mathematical domain (as opposed to malformed or missing input).
    pub fn is_numerical_domain(&self) -> bool {
        matches!(
            self,
            Error::GrowthExceedsDiscount { .. }
                | Error::InvalidDiscountRate(_)
                | Error::Divergence { .. }
                | Error::ZeroBookValue
                | Error::ZeroBase
                | Error::ZeroForwardEarnings
                | Error::NonPositiveValue(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GrowthExceedsDiscount {
                growth,
                rate,
                rate_name,
            } => write!(
                f,
                "growth ({growth}) must be strictly below {rate_name} ({rate}) for a continuing value"
            ),
            Error::InvalidDiscountRate(r) => write!(f, "discount rate {r} must be greater than -1"),
            Error::Divergence {
                parameter,
                value,
                rate,
            } => write!(
                f,
                "coefficient diverges: {parameter} ({value}) must be strictly below the gross rate ({rate})"
            ),
            Error::ZeroBookValue => f.write_str("opening book value is zero"),
            Error::ZeroBase => f.write_str("percent change from a zero base"),
            Error::ZeroForwardEarnings => f.write_str("forward earnings are zero"),
            Error::NonPositiveValue(v) => {
                write!(f, "harmonic mean requires strictly positive values, got {v}")
            }
            Error::ParameterOutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} is outside its admissible range")
            }
            Error::NonFinite(what) => write!(f, "{what} must be finite"),
            Error::NonPositiveShares(s) => write!(f, "share count must be positive, got {s}"),
            Error::DigitOutOfRange(d) => write!(f, "digit {d} is outside 1..=9"),
            Error::EmptyInput => f.write_str("empty input"),
            Error::EmptyAxis(axis) => write!(f, "sensitivity axis `{axis}` is empty"),
            Error::MissingDriver { comparable, driver } => {
                write!(f, "comparable `{comparable}` has no `{}` driver", driver.as_str())
            }
            Error::NoPeriods => f.write_str("no periods"),
            Error::InvalidPeriodLabel(l) => {
                write!(f, "period label `{l}` does not start with a year")
            }
            Error::DuplicatePeriod(l) => write!(f, "period `{l}` appears under two labels"),
            Error::DuplicateItem { period, item } => {
                write!(f, "duplicate item `{}` for period `{period}`", item.as_str())
            }
            Error::MissingItem { period, item } => {
                write!(f, "period `{period}` is missing required item `{}`", item.as_str())
            }
            Error::NonContiguousPeriods { after, next } => {
                write!(f, "periods are not contiguous: `{after}` is followed by `{next}`")
            }
            Error::SeriesTooShort { needed, found } => {
                write!(f, "series has {found} periods, needs at least {needed}")
            }
            Error::SeriesLengthMismatch(what) => write!(f, "series `{what}` has the wrong length"),
            Error::MissingSeries(what) => write!(f, "series `{what}` is required for this model"),
            Error::MissingEquityCost => {
                f.write_str("equity perspective requires an equity cost of capital")
            }
            Error::HorizonTooShort { needed, found } => {
                write!(f, "horizon {found} is too short, need at least {needed}")
            }
        }
    }
}

impl core::error::Error for Error {}
