//! Free cash flow construction, the FCF / residual income / abnormal earnings
//! growth valuation models, and the entity-to-equity bridge.

mod discount;
mod flows;
mod models;

pub use discount::{present_value, present_value_with, DiscountConvention, DiscountSchedule, Discounted};
pub use flows::{
    aeg, aoig, continuing_value, fcf_method1, fcf_method2, residual_earnings,
    residual_operating_income, roce, OperatingDeltas,
};
pub use models::{
    equity_bridge, equity_value, forward_pe_decomposition, value, value_aegm, value_fcfvm,
    value_revm, Model, PeDecomposition, Perspective, ValuationOptions, ValuationResult, Warning,
};
