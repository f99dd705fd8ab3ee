//! Symmetric-power moments of Kloosterman sums over finite fields, the zeta
//! polynomials `Z_k(p;T)` they generate, the interesting factors `M_k(p;T)`,
//! conductors, signs, Hodge numbers, de Rham cohomology of `Sym^k Kl_2` and
//! numerical functional equations of the completed L-functions.
//!
//! ```
//! use symkl::local_factors::zeta_poly;
//! use symkl::IntPolynomial;
//!
//! let z = zeta_poly(3, 5).unwrap();
//! assert_eq!(z, IntPolynomial::from_i64s(&[1, 24, -25]));
//! ```

pub mod arith;
pub mod derham;
pub mod error;
pub mod hodge;
pub mod invariants;
pub mod lfunction;
pub mod local_factors;
pub mod moments;
pub mod polygon;

pub use arith::{CyclotomicInt, ExtField, IntPolynomial};
pub use derham::{cohomology, filtration_jumps, graded_kernel_generator, Cohomology, GradedElement};
pub use error::{Error, Result};
pub use hodge::{gamma_factor, hodge_numbers, GammaFactor, HodgeData, HodgeVariant};
pub use invariants::{conductor, epsilon_sign, local_factor, ConductorData, EpsilonSign, LocalFactorData};
pub use lfunction::{completed_lambda, fe_defect, LFunctionSpec, QuadParams};
pub use local_factors::{
    euler_record, euler_record_auto, euler_record_auto_with, verify_record, EulerFactorRecord, FactorRoute,
    MomentTable, RecordOptions,
};
pub use polygon::Polygon;
