use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precision of {got} bits is below the minimum of {min} bits")]
    PrecisionTooLow { got: u32, min: u32 },

    #[error("invalid rule parameters n={n}, s={s}: both must be positive")]
    InvalidParams { n: usize, s: usize },

    #[error("argument outside the domain of {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("point lies on the cut [-1, 1]")]
    OnCut,

    #[error("T_n(z)^(2s) vanishes at the requested point")]
    Underflow,

    #[error("ellipse parameter rho - 1 = {gap:.3e} is too close to 1 for {bits}-bit precision")]
    DegenerateEllipse { gap: f64, bits: u32 },

    #[error("{op} did not converge: {detail}")]
    NoConvergence { op: &'static str, detail: String },

    #[error("insufficient precision in {op}: {detail}")]
    InsufficientPrecision { op: &'static str, detail: String },

    #[error("minimum of {op} is not bracketed by the scan (best point at the {edge} edge)")]
    NotBracketed { op: &'static str, edge: &'static str },

    #[error("kernel modulus on the ellipse rho = {rho:.6} peaks off the real axis (theta = {theta:.6}, {excess:.3e} above the axis value)")]
    OffAxisMaximum { rho: f64, theta: f64, excess: f64 },

    #[error("integrand evaluation failed: {0}")]
    Integrand(String),
}

impl Error {
    /// True for failures caused by running out of working precision or
    /// iterations, as opposed to invalid input.
    pub fn is_precision_failure(&self) -> bool {
        matches!(
            self,
            Error::InsufficientPrecision { .. }
                | Error::NoConvergence { .. }
                | Error::DegenerateEllipse { .. }
                | Error::Underflow
                | Error::PrecisionTooLow { .. }
        )
    }
}
