//! Accounting-based equity valuation: reformulated statements, forecast
//! projection, free cash flow / residual income / abnormal earnings growth
//! models, linear information models, multiples, sensitivity grids and a
//! first-digit screen.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod benford;
pub mod error;
pub mod forecast;
pub mod lim;
pub mod multiples;
pub mod sensitivity;
pub mod statements;
pub mod valuation;

pub use error::{Error, Result};
