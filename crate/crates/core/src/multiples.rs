//! Relative valuation from comparable companies.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::forecast::FinancingClaims;
use crate::valuation::equity_bridge;

/// Relative tolerance under which a supplied multiple counts as equal to the
/// recomputed one.
pub const MULTIPLE_MATCH_TOLERANCE: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Driver {
    Ebit,
    Sales,
    BookValue,
    Earnings,
}

impl Driver {
    pub const ALL: [Driver; 4] = [Driver::Ebit, Driver::Sales, Driver::BookValue, Driver::Earnings];

    pub fn as_str(self) -> &'static str {
        match self {
            Driver::Ebit => "ebit",
            Driver::Sales => "sales",
            Driver::BookValue => "book_value",
            Driver::Earnings => "earnings",
        }
    }
}

impl fmt::Display for Driver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Driver {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        Driver::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CentralTendency {
    Median,
    HarmonicMean,
    Mean,
}

impl CentralTendency {
    pub const ALL: [CentralTendency; 3] = [
        CentralTendency::Median,
        CentralTendency::HarmonicMean,
        CentralTendency::Mean,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CentralTendency::Median => "median",
            CentralTendency::HarmonicMean => "harmonic_mean",
            CentralTendency::Mean => "mean",
        }
    }
}

impl fmt::Display for CentralTendency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CentralTendency {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "harmonic" => Ok(CentralTendency::HarmonicMean),
            _ => CentralTendency::ALL
                .into_iter()
                .find(|m| m.as_str() == s)
                .ok_or_else(|| s.to_string()),
        }
    }
}

/// Median, harmonic mean or arithmetic mean of `values`.
///
/// Values are sorted before reduction so the result does not depend on
/// input order, down to the last bit.
pub fn central_multiple(values: &[f64], method: CentralTendency) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("multiple"));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    Ok(match method {
        CentralTendency::Median => {
            if n % 2 == 1 {
                v[n / 2]
            } else {
                (v[n / 2 - 1] + v[n / 2]) / 2.0
            }
        }
        CentralTendency::HarmonicMean => {
            if let Some(&bad) = v.iter().find(|x| !(**x > 0.0)) {
                return Err(Error::NonPositiveValue(bad));
            }
            n as f64 / v.iter().map(|x| 1.0 / x).sum::<f64>()
        }
        CentralTendency::Mean => v.iter().sum::<f64>() / n as f64,
    })
}

pub fn value_by_multiple(multiple: f64, driver: f64) -> f64 {
    multiple * driver
}

/// A peer company. With `entity_value` set, the driver amounts are the peer's
/// fundamentals and its multiple is `entity_value / driver`; without it the
/// driver entries are read as ready-made multiples.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Comparable {
    pub name: String,
    pub entity_value: Option<f64>,
    pub drivers: BTreeMap<Driver, f64>,
}

impl Comparable {
    pub fn multiple(&self, driver: Driver) -> Result<f64> {
        let amount = *self.drivers.get(&driver).ok_or_else(|| Error::MissingDriver {
            comparable: self.name.clone(),
            driver,
        })?;
        if !amount.is_finite() {
            return Err(Error::NonFinite("driver"));
        }
        match self.entity_value {
            Some(ev) => {
                if !(ev > 0.0) {
                    return Err(Error::ParameterOutOfRange {
                        name: "entity_value",
                        value: ev,
                    });
                }
                if amount == 0.0 {
                    return Err(Error::ZeroBase);
                }
                Ok(ev / amount)
            }
            None => Ok(amount),
        }
    }
}

/// A multiple fixed from outside, replacing the computed one for a row.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultipleOverride {
    pub driver: Driver,
    pub method: CentralTendency,
    pub multiple: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompsRequest<'a> {
    pub target: &'a BTreeMap<Driver, f64>,
    pub claims: FinancingClaims,
    pub shares: f64,
    pub comparables: &'a [Comparable],
    pub drivers: &'a [Driver],
    pub methods: &'a [CentralTendency],
    pub overrides: &'a [MultipleOverride],
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompsRow {
    pub driver: Driver,
    pub method: CentralTendency,
    pub target_driver: f64,
    /// Central tendency of the peer multiples.
    pub computed_multiple: f64,
    pub supplied_multiple: Option<f64>,
    /// The multiple actually applied: supplied if present, else computed.
    pub multiple: f64,
    pub entity_value: f64,
    pub equity_value: f64,
    pub per_share: f64,
}

impl CompsRow {
    /// True when a supplied multiple differs from the recomputed one by more
    /// than [`MULTIPLE_MATCH_TOLERANCE`] relative.
    pub fn deviates(&self) -> bool {
        match self.supplied_multiple {
            Some(s) => {
                let c = self.computed_multiple;
                (s - c).abs() > MULTIPLE_MATCH_TOLERANCE * c.abs().max(f64::MIN_POSITIVE)
            }
            None => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompsResult {
    pub rows: Vec<CompsRow>,
    pub average_entity_value: f64,
    pub average_equity_value: f64,
    pub average_per_share: f64,
}

/// One row per `(driver, method)` in the order given, then plain averages
/// across the rows.
pub fn run_comps(req: &CompsRequest<'_>) -> Result<CompsResult> {
    if req.comparables.is_empty() || req.drivers.is_empty() || req.methods.is_empty() {
        return Err(Error::EmptyInput);
    }
    let nfl = req.claims.net_financial_liabilities;
    let nci = req.claims.noncontrolling_interest;
    if !nfl.is_finite() || !nci.is_finite() {
        return Err(Error::NonFinite("financing claims"));
    }
    let mut rows = Vec::with_capacity(req.drivers.len() * req.methods.len());
    for &driver in req.drivers {
        let target_driver = *req.target.get(&driver).ok_or_else(|| Error::MissingDriver {
            comparable: String::from("target"),
            driver,
        })?;
        let peer: Vec<f64> = req
            .comparables
            .iter()
            .map(|c| c.multiple(driver))
            .collect::<Result<_>>()?;
        for &method in req.methods {
            let computed_multiple = central_multiple(&peer, method)?;
            let supplied_multiple = req
                .overrides
                .iter()
                .find(|o| o.driver == driver && o.method == method)
                .map(|o| o.multiple);
            let multiple = supplied_multiple.unwrap_or(computed_multiple);
            let entity_value = value_by_multiple(multiple, target_driver);
            let (equity_value, per_share) = equity_bridge(entity_value, nfl, nci, req.shares)?;
            rows.push(CompsRow {
                driver,
                method,
                target_driver,
                computed_multiple,
                supplied_multiple,
                multiple,
                entity_value,
                equity_value,
                per_share,
            });
        }
    }
    let n = rows.len() as f64;
    let avg = |f: fn(&CompsRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
    Ok(CompsResult {
        average_entity_value: avg(|r| r.entity_value),
        average_equity_value: avg(|r| r.equity_value),
        average_per_share: avg(|r| r.per_share),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn peers() -> Vec<Comparable> {
        let mk = |name: &str, ebit: f64, sales: f64| Comparable {
            name: name.into(),
            entity_value: None,
            drivers: [(Driver::Ebit, ebit), (Driver::Sales, sales)].into_iter().collect(),
        };
        vec![mk("Tesco", 10.6, 1.0), mk("Sainsbury's", 11.0, 0.6)]
    }

    fn target() -> BTreeMap<Driver, f64> {
        [(Driver::Ebit, 746.50), (Driver::Sales, 9934.30)].into_iter().collect()
    }

    #[test]
    fn central_examples() {
        let m = central_multiple(&[10.6, 11.0], CentralTendency::Median).unwrap();
        assert!((m - 10.8).abs() < 1e-12);
        let h = central_multiple(&[1.0, 0.6], CentralTendency::HarmonicMean).unwrap();
        assert!((h - 0.75).abs() < 1e-12);
        assert_eq!(central_multiple(&[4.2], CentralTendency::Median).unwrap(), 4.2);
        assert_eq!(central_multiple(&[1.0, 3.0], CentralTendency::Mean).unwrap(), 2.0);
        assert_eq!(
            central_multiple(&[3.0, 1.0, 2.0], CentralTendency::Median).unwrap(),
            2.0
        );
    }

    #[test]
    fn central_errors() {
        assert_eq!(central_multiple(&[], CentralTendency::Mean), Err(Error::EmptyInput));
        assert_eq!(
            central_multiple(&[1.0, 0.0], CentralTendency::HarmonicMean),
            Err(Error::NonPositiveValue(0.0))
        );
    }

    #[test]
    fn value_by_multiple_examples() {
        assert!((value_by_multiple(10.8, 746.50) - 8062.20).abs() < 0.005);
        assert!((value_by_multiple(0.8, 9934.30) - 7947.44).abs() < 0.005);
        assert_eq!(value_by_multiple(0.0, 123.0), 0.0);
    }

    #[test]
    fn peer_multiple_from_entity_value() {
        let c = Comparable {
            name: "p".into(),
            entity_value: Some(200.0),
            drivers: [(Driver::Ebit, 20.0)].into_iter().collect(),
        };
        assert_eq!(c.multiple(Driver::Ebit).unwrap(), 10.0);
        assert!(matches!(
            c.multiple(Driver::Sales),
            Err(Error::MissingDriver { driver: Driver::Sales, .. })
        ));
    }

    #[test]
    fn comps_with_printed_multiples() {
        let t = target();
        let p = peers();
        let overrides = [
            MultipleOverride {
                driver: Driver::Ebit,
                method: CentralTendency::HarmonicMean,
                multiple: 10.53,
            },
            MultipleOverride {
                driver: Driver::Sales,
                method: CentralTendency::HarmonicMean,
                multiple: 0.77,
            },
        ];
        let req = CompsRequest {
            target: &t,
            claims: FinancingClaims {
                net_financial_liabilities: 1762.40,
                noncontrolling_interest: 11.40,
            },
            shares: 1605.51,
            comparables: &p,
            drivers: &[Driver::Ebit, Driver::Sales],
            methods: &[CentralTendency::Median, CentralTendency::HarmonicMean],
            overrides: &overrides,
        };
        let r = run_comps(&req).unwrap();
        let ps: Vec<f64> = r.rows.iter().map(|r| r.per_share).collect();
        for (got, want) in ps.iter().zip([3.92, 3.79, 3.85, 3.66]) {
            assert!((got - want).abs() <= 0.005 + 1e-9, "{got} vs {want}");
        }
        assert!((r.average_entity_value - 7879.92).abs() <= 0.01);
        assert!((r.average_equity_value - 6106.13).abs() <= 0.01);
        assert!((r.average_per_share - 3.80).abs() <= 0.005);
        assert!(!r.rows[0].deviates());
        assert!(r.rows[1].deviates());
        assert!(r.rows[3].deviates());
    }

    #[test]
    fn single_row_average() {
        let t = target();
        let p = vec![peers().remove(0)];
        let req = CompsRequest {
            target: &t,
            claims: FinancingClaims::default(),
            shares: 10.0,
            comparables: &p,
            drivers: &[Driver::Ebit],
            methods: &[CentralTendency::Median],
            overrides: &[],
        };
        let r = run_comps(&req).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.average_entity_value, r.rows[0].entity_value);
        assert_eq!(r.average_per_share, r.rows[0].per_share);
    }

    #[test]
    fn missing_driver() {
        let t = target();
        let mut p = peers();
        p[1].drivers.remove(&Driver::Sales);
        let req = CompsRequest {
            target: &t,
            claims: FinancingClaims::default(),
            shares: 1.0,
            comparables: &p,
            drivers: &[Driver::Sales],
            methods: &[CentralTendency::Median],
            overrides: &[],
        };
        assert_eq!(
            run_comps(&req).unwrap_err(),
            Error::MissingDriver {
                comparable: "Sainsbury's".into(),
                driver: Driver::Sales
            }
        );
    }
}
