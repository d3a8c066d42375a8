//! Special functions and the derivative-operator engine.

pub mod series;
pub mod special;

pub use series::{deriv_extract, deriv_extract_with_cap, DerivOrder, QuadExp, DEFAULT_ORDER_CAP};
pub use special::{factorial, hermite_2var, hermite_2var_scaled, laguerre, ln_factorial};
