//! Linear information models: the Ohlson residual-earnings dynamics and the
//! Feltham–Ohlson operating/financial variant with a conservatism term.
//!
//! Disturbances are taken at their zero expectation, so every function here
//! is deterministic. Rates are gross (`rho = 1 + cost of capital`) and the
//! NOA growth parameter of the Feltham–Ohlson model is a gross factor
//! (`NOA_{t+1} = growth_factor * NOA_t`), unlike the net growth rate used by
//! the forecast module.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OhlsonParams {
    /// Persistence of residual earnings, `0 <= omega1 < 1`.
    pub omega1: f64,
    /// Persistence of other information, `0 <= gamma1 < 1`.
    pub gamma1: f64,
    /// Gross equity rate `1 + equity cost`, `> 1`.
    pub rho_e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FelthamOhlsonParams {
    /// Conservatism loading on NOA, `>= 0`.
    pub omega0: f64,
    pub omega1: f64,
    pub gamma1: f64,
    /// Gross NOA growth factor, `< rho_f`.
    pub growth_factor: f64,
    /// Gross entity rate `1 + WACC`.
    pub rho_f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OhlsonCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoValue {
    /// Value of operations (NOA plus the capitalised residual terms).
    pub operations_value: f64,
    /// Operations value plus net financial assets.
    pub total_value: f64,
}

fn below(parameter: &'static str, value: f64, rate: f64) -> Result<()> {
    if value < rate {
        Ok(())
    } else {
        Err(Error::Divergence {
            parameter,
            value,
            rate,
        })
    }
}

fn persistence(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && (0.0..1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value })
    }
}

impl OhlsonParams {
    pub fn validate(&self) -> Result<()> {
        below("omega1", self.omega1, self.rho_e)?;
        below("gamma1", self.gamma1, self.rho_e)?;
        persistence("omega1", self.omega1)?;
        persistence("gamma1", self.gamma1)?;
        if !(self.rho_e.is_finite() && self.rho_e > 1.0) {
            return Err(Error::ParameterOutOfRange {
                name: "rho_e",
                value: self.rho_e,
            });
        }
        Ok(())
    }
}

impl FelthamOhlsonParams {
    pub fn validate(&self) -> Result<()> {
        below("omega1", self.omega1, self.rho_f)?;
        below("gamma1", self.gamma1, self.rho_f)?;
        below("growth_factor", self.growth_factor, self.rho_f)?;
        if !(self.omega0.is_finite() && self.omega0 >= 0.0) {
            return Err(Error::ParameterOutOfRange {
                name: "omega0",
                value: self.omega0,
            });
        }
        persistence("omega1", self.omega1)?;
        persistence("gamma1", self.gamma1)?;
        if !self.growth_factor.is_finite() {
            return Err(Error::NonFinite("growth_factor"));
        }
        if !(self.rho_f.is_finite() && self.rho_f > 1.0) {
            return Err(Error::ParameterOutOfRange {
                name: "rho_f",
                value: self.rho_f,
            });
        }
        Ok(())
    }
}

/// `alpha1 = w1 / (rho - w1)`, `alpha2 = rho / ((rho - w1)(rho - g1))`.
pub fn ohlson_coefficients(p: &OhlsonParams) -> Result<OhlsonCoefficients> {
    p.validate()?;
    let a = p.rho_e - p.omega1;
    Ok(OhlsonCoefficients {
        alpha1: p.omega1 / a,
        alpha2: p.rho_e / (a * (p.rho_e - p.gamma1)),
    })
}

/// `B_t + alpha1 RE_t + alpha2 v_t`.
pub fn ohlson_value(b_t: f64, re_t: f64, v_t: f64, p: &OhlsonParams) -> Result<f64> {
    let c = ohlson_coefficients(p)?;
    Ok(b_t + c.alpha1 * re_t + c.alpha2 * v_t)
}

/// The same value written in current earnings, dividends and book value,
/// with residual earnings expanded through clean surplus.
pub fn ohlson_value_weighted(
    b_t: f64,
    earn_t: f64,
    d_t: f64,
    v_t: f64,
    p: &OhlsonParams,
) -> Result<f64> {
    let c = ohlson_coefficients(p)?;
    Ok(b_t + c.alpha1 * earn_t - c.alpha1 * (p.rho_e - 1.0) * (b_t - earn_t + d_t)
        + c.alpha2 * v_t)
}

/// Expected next-period residual earnings and other information.
pub fn ohlson_step(re_t: f64, v_t: f64, p: &OhlsonParams) -> (f64, f64) {
    (p.omega1 * re_t + v_t, p.gamma1 * v_t)
}

pub fn fo_coefficients(p: &FelthamOhlsonParams) -> Result<FoCoefficients> {
    p.validate()?;
    let a = p.rho_f - p.omega1;
    Ok(FoCoefficients {
        alpha1: p.omega1 / a,
        alpha2: p.rho_f / (a * (p.rho_f - p.gamma1)),
        alpha3: p.rho_f * p.omega0 / (a * (p.rho_f - p.growth_factor)),
    })
}

/// Operations value `NOA + a1 ROI + a2 v + a3 NOA` and total value (adding net
/// financial assets). `roi_t` is residual operating income.
pub fn fo_value(
    noa_t: f64,
    roi_t: f64,
    v_t: f64,
    nfa_t: f64,
    p: &FelthamOhlsonParams,
) -> Result<FoValue> {
    let c = fo_coefficients(p)?;
    let operations_value = noa_t + c.alpha1 * roi_t + c.alpha2 * v_t + c.alpha3 * noa_t;
    Ok(FoValue {
        operations_value,
        total_value: operations_value + nfa_t,
    })
}

/// Total value written on book value `B = NOA + NFA` directly.
pub fn fo_total_from_book(
    book_t: f64,
    noa_t: f64,
    roi_t: f64,
    v_t: f64,
    p: &FelthamOhlsonParams,
) -> Result<f64> {
    let c = fo_coefficients(p)?;
    Ok(book_t + c.alpha1 * roi_t + c.alpha2 * v_t + c.alpha3 * noa_t)
}

/// Expected `(ROI, NOA, v)` one period ahead.
pub fn fo_step(roi_t: f64, noa_t: f64, v_t: f64, p: &FelthamOhlsonParams) -> (f64, f64, f64) {
    (
        p.omega0 * noa_t + p.omega1 * roi_t + v_t,
        p.growth_factor * noa_t,
        p.gamma1 * v_t,
    )
}
