//! Shared fixtures for the benchmarks.

use fcq_core::{ExpSquare, PrecisionContext, RuleParams};

/// Rows of the published table spanning the cheap and expensive ends.
pub const CASES: [(usize, usize, f64); 3] = [(8, 1, 1.0), (12, 2, 10.0), (16, 3, 20.0)];

pub const BITS: u32 = 512;

pub fn fixture(n: usize, s: usize, omega: f64) -> (RuleParams, ExpSquare, PrecisionContext) {
    (
        RuleParams::new(n, s).expect("positive parameters"),
        ExpSquare::new(omega).expect("positive omega"),
        PrecisionContext::new(BITS).expect("valid precision"),
    )
}

pub fn label(n: usize, s: usize, omega: f64) -> String {
    format!("n{n}_s{s}_w{omega}")
}
