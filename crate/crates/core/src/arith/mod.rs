//! Exact arithmetic: prime fields and their extensions, cyclotomic integers,
//! integer polynomials and power series.

pub mod cyclotomic;
pub mod field;
pub mod modular;
pub mod ntt;
pub mod poly;
pub mod series;

pub use cyclotomic::{cyc_reduce_to_integer, CyclotomicInt};
pub use field::{build_extension, build_extension_with_budget, build_extension_with_modulus, ExtField};
pub use poly::IntPolynomial;
pub use series::{power_sums_from_polynomial, series_exp_from_power_sums};
