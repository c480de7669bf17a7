//! Multiple-node quadrature for Fourier–Chebyshev coefficients.
//!
//! The rule
//!
//! ```text
//! ∫ f(t) T_n(t) dt/√(1-t²) ≈ Σ_ν Σ_{i<2s} A_{i,ν} f^{(i)}(ξ_ν)
//! ```
//!
//! samples `f` and its first `2s-1` derivatives at the zeros `ξ_ν` of `T_n`
//! and is exact for polynomials of degree `n(2s+1)-1`. For `s = 1` it is the
//! Micchelli–Rivlin formula.
//!
//! Besides the rule itself the crate provides the remainder kernel on the
//! confocal ellipses `E_ρ`, the Chebyshev-expansion coefficients of the
//! remainder, three computable a-priori error bounds and a high-precision
//! reference integrator used to measure actual errors. All arithmetic runs
//! at a caller-chosen binary precision through [`PrecisionContext`].

pub mod bounds;
pub mod chebyshev;
pub mod context;
pub mod ellipse;
mod error;
pub mod exact;
pub mod integrand;
pub mod kernel;
pub mod optimize;
pub mod quadrature;
pub mod reference;
pub mod rule;
pub mod series;

pub use bounds::{
    compute_report, optimize_bound, BoundKind, BoundOptimum, BoundOptions, BoundReport, ExpansionForm, MaxModulusForm,
};
pub use context::PrecisionContext;
pub use ellipse::EllipseCoord;
pub use error::{Error, Result};
pub use integrand::{ExpSquare, Integrand, Polynomial};
pub use kernel::{KernelMax, KernelModulusParts};
pub use reference::{actual_error, reference_integral};
pub use rule::{build_rule, MultipleNodeRule, RuleParams};
pub use series::CoeffIndex;

pub use rug::{Complex, Float, Integer, Rational};
