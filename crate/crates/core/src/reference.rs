//! High-precision ground truth for `I_n(f) = ∫ f(t) T_n(t) dt/√(1−t²)` and
//! the actual error of the rule.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use crate::context::PrecisionContext;
use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::rule::{build_rule, MultipleNodeRule, RuleParams};

/// Largest Gauss–Chebyshev rule tried before giving up.
pub const MAX_NODES: usize = 1 << 20;

const GUARD_BITS: u32 = 64;

/// A converged Gauss–Chebyshev value together with `∫|f T_n| ω`, the scale
/// against which vanishing integrals are judged.
#[derive(Debug, Clone)]
pub struct ReferenceValue {
    pub value: Float,
    pub scale: Float,
    pub nodes: usize,
}

fn gauss_chebyshev(f: &dyn Integrand, n: usize, nodes: usize, work: &PrecisionContext) -> Result<(Float, Float)> {
    let terms: Vec<(Float, Float)> = (1..=nodes)
        .into_par_iter()
        .map(|k| {
            let angle = work.pi() * (2 * k - 1) as u32 / (2 * nodes) as u32;
            let x = work.real(angle.cos_ref());
            let tn = work.real(&angle * n as u32).cos();
            let fx = f.real_derivatives(&x, 0, work)?.swap_remove(0);
            let term = fx * tn;
            Ok((work.real(term.abs_ref()), term))
        })
        .collect::<Result<_>>()?;
    let (mut sum, mut scale) = (work.zero(), work.zero());
    for (abs, term) in terms {
        sum += term;
        scale += abs;
    }
    let weight = work.pi() / nodes as u32;
    Ok((sum * &weight, scale * weight))
}

/// Gauss–Chebyshev with `N` doubled until two successive values agree to
/// `2^{−bits+16}` times `∫|f T_n| ω` (an upper bound for `|I|`, and the right
/// scale when `I` is tiny or zero). The sums run with 64 guard bits, so
/// integrands that lose digits to cancellation (power-form `T_k`) still
/// settle.
pub fn reference_integral_detailed(f: &dyn Integrand, n: usize, ctx: &PrecisionContext) -> Result<ReferenceValue> {
    if n % 2 == 1 && f.is_even() {
        return Ok(ReferenceValue {
            value: ctx.zero(),
            scale: ctx.zero(),
            nodes: 0,
        });
    }
    let work = PrecisionContext::new(ctx.bits() + GUARD_BITS)?;
    let tol = work.pow2(16 - ctx.bits() as i32);
    let mut nodes = (4 * (n + 1)).next_power_of_two().max(32);
    let (mut prev, _) = gauss_chebyshev(f, n, nodes, &work)?;
    loop {
        nodes *= 2;
        if nodes > MAX_NODES {
            return Err(Error::NoConvergence {
                op: "reference_integral",
                detail: format!("no agreement with {MAX_NODES} Gauss-Chebyshev nodes"),
            });
        }
        let (next, scale) = gauss_chebyshev(f, n, nodes, &work)?;
        let diff = work.real(&next - &prev).abs();
        if diff <= work.real(&tol * &scale) {
            return Ok(ReferenceValue {
                value: ctx.real(&next),
                scale: ctx.real(&scale),
                nodes,
            });
        }
        prev = next;
    }
}

/// `∫_{-1}^{1} f(t) T_n(t) dt/√(1−t²)`.
pub fn reference_integral(f: &dyn Integrand, n: usize, ctx: &PrecisionContext) -> Result<Float> {
    reference_integral_detailed(f, n, ctx).map(|r| r.value)
}

/// `α_k = (2/π) ∫ f T_k ω`, the Chebyshev coefficient of `f` in the
/// convention `f = Σ' α_k T_k` (first term halved).
pub fn chebyshev_coefficient(f: &dyn Integrand, k: usize, ctx: &PrecisionContext) -> Result<Float> {
    Ok(reference_integral(f, k, ctx)? * 2u32 / ctx.pi())
}

/// Modified Bessel function `I_ν(x) = Σ_k (x/2)^{2k+ν}/(k!(k+ν)!)` for
/// `x ≥ 0`, summed until the terms drop below `2^{−bits}` of the sum.
pub fn bessel_i(nu: u32, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *x < 0 || !x.is_finite() {
        return Err(Error::Domain {
            op: "bessel_i",
            detail: format!("argument {} outside [0, ∞)", x.to_f64()),
        });
    }
    let half = ctx.real(x / 2u32);
    let mut term = ctx.real(half.clone().pow(nu)) / ctx.real(&rug::Integer::from(rug::Integer::factorial(nu)));
    if term.is_zero() {
        return Ok(term);
    }
    let q = ctx.real(half.square_ref());
    let tiny = ctx.epsilon(0);
    let mut sum = ctx.zero();
    for k in 1u32.. {
        sum += &term;
        term *= &q;
        term /= k;
        term /= k + nu;
        if term <= ctx.real(&sum * &tiny) {
            break;
        }
    }
    Ok(sum)
}

/// `∫ e^{ωt²} T_n(t) ω(t) dt = π e^{ω/2} I_{n/2}(ω/2)` for even `n`.
pub fn f0_closed_form_integral(omega: f64, n: usize, ctx: &PrecisionContext) -> Result<Float> {
    if n % 2 == 1 {
        return Err(Error::Domain {
            op: "f0_closed_form_integral",
            detail: format!("n = {n} is odd"),
        });
    }
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(Error::Domain {
            op: "f0_closed_form_integral",
            detail: format!("ω = {omega} must be finite and non-negative"),
        });
    }
    let half = ctx.real(omega) / 2u32;
    let bessel = bessel_i((n / 2) as u32, &half, ctx)?;
    Ok(ctx.pi() * half.exp() * bessel)
}

/// Reference integral, quadrature value and `|I − Q|` for one rule.
#[derive(Debug, Clone)]
pub struct ErrorMeasurement {
    pub integral: Float,
    pub quadrature: Float,
    pub error: Float,
}

/// Measures `|I − Q|` for an already built rule.
///
/// An even integrand with odd `n` has `I = Q = 0` and is reported exact.
///
/// The difference is trusted only above `2^{−bits+32}` relative to
/// `max(|I|, ∫|f T_n|ω)`. Below that it is reported as exactly zero when the
/// rule is known to be exact (polynomial of degree within the exactness
/// degree) and as
/// [`Error::InsufficientPrecision`] otherwise.
pub fn measure_error(rule: &MultipleNodeRule, f: &dyn Integrand, ctx: &PrecisionContext) -> Result<ErrorMeasurement> {
    let params = rule.params();
    let reference = reference_integral_detailed(f, params.n(), ctx)?;
    let quadrature = rule.apply(f)?;
    if params.n() % 2 == 1 && f.is_even() {
        return Ok(ErrorMeasurement {
            integral: reference.value,
            quadrature,
            error: ctx.zero(),
        });
    }
    let error = ctx.real(&reference.value - &quadrature).abs();
    let magnitude = ctx.real(reference.value.abs_ref()).max(&reference.scale);
    let floor = ctx.pow2(32 - ctx.bits() as i32) * magnitude;
    if error <= floor {
        let exact = f.polynomial_degree().is_some_and(|d| d <= params.exactness_degree());
        if !exact {
            return Err(Error::InsufficientPrecision {
                op: "actual_error",
                detail: format!(
                    "|I − Q| = {:.3e} is below the rounding floor at {} bits",
                    error.to_f64(),
                    ctx.bits()
                ),
            });
        }
        return Ok(ErrorMeasurement {
            integral: reference.value,
            quadrature,
            error: ctx.zero(),
        });
    }
    Ok(ErrorMeasurement {
        integral: reference.value,
        quadrature,
        error,
    })
}

/// `|I_n(f) − Q_{n,s}(f)|` at the precision of `ctx`.
pub fn actual_error(params: RuleParams, f: &dyn Integrand, ctx: &PrecisionContext) -> Result<Float> {
    measure_error(&build_rule(params, ctx), f, ctx).map(|m| m.error)
}
