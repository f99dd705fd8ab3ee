//! Shared fixtures for the criterion benches.

use num_complex::Complex64;
use symkl::arith::field::build_extension;
use symkl::lfunction::spec_for_points;
use symkl::{ExtField, LFunctionSpec, QuadParams};

pub fn field(p: u64, n: u32) -> ExtField {
    build_extension(p, n).expect("field fits the default budget")
}

/// Evaluation points near the centre of `Lambda_3`.
pub fn k3_points() -> [Complex64; 2] {
    [Complex64::new(2.7, 0.0), Complex64::new(2.2, 0.9)]
}

pub fn k3_spec() -> LFunctionSpec {
    spec_for_points(3, &k3_points(), &QuadParams::default()).expect("k = 3 spec")
}
