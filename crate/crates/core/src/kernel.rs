//! The remainder kernel `K_{n,s}(z) = ρ_{n,s}(z)/T_n(z)^{2s}`, where
//! `R_{n,s}(f) = (1/2πi)∮ K_{n,s}(z) f(z) dz` and
//! `ρ_{n,s}(z) = ∫ ω(t) T_n(t)^{2s+1}/(z − t) dt`.
//!
//! On `E_ρ`, with `u = ρe^{iθ}`,
//!
//! ```text
//! |K|² = π² / (2^{2s−1} ρ^{2(2s+1)n}) · a / (b c^{2s}),
//! a = |Σ_{k=0}^{s} C(2s+1,k) u^{2nk}|²,  b = a_2 − cos 2θ,  c = a_{2n} + cos 2nθ.
//! ```

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::chebyshev::{chebyshev_t, exterior_map, exterior_sqrt};
use crate::context::PrecisionContext;
use crate::ellipse::{cosh_coeff, EllipseCoord};
use crate::error::{Error, Result};
use crate::exact::binom_f;
use crate::optimize::golden_section_max;
use crate::quadrature::adaptive_integral;
use crate::rule::RuleParams;

/// `ρ_{n,s}(z) = (π/(2^{2s}√(z²−1))) Σ_{k=0}^{s} C(2s+1,k) v^{(2s+1−2k)n}`,
/// `v = z − √(z²−1)`, `|v| < 1`.
pub fn rho_ns(z: &Complex, params: RuleParams, ctx: &PrecisionContext) -> Result<Complex> {
    if !z.real().is_finite() || !z.imag().is_finite() {
        return Err(Error::Domain {
            op: "rho_ns",
            detail: "non-finite argument".into(),
        });
    }
    if z.imag().is_zero() && *z.real() >= -1 && *z.real() <= 1 {
        return Err(Error::OnCut);
    }
    let (n, s) = (params.n(), params.s() as i64);
    let v = ctx.complex(exterior_map(z, ctx).recip());
    let sq = exterior_sqrt(z, ctx);
    let mut sum = ctx.complex(0);
    for k in 0..=s {
        let e = ((2 * s + 1 - 2 * k) as usize * n) as u32;
        sum += ctx.complex(v.clone().pow(e)) * binom_f(2 * s + 1, k, ctx);
    }
    Ok(sum / sq * ctx.pi() / ctx.pow2(2 * s as i32))
}

/// `K_{n,s}(z) = ρ_{n,s}(z)/T_n(z)^{2s}`.
pub fn kernel_value(z: &Complex, params: RuleParams, ctx: &PrecisionContext) -> Result<Complex> {
    let rho = rho_ns(z, params, ctx)?;
    let t = chebyshev_t(params.n(), z, ctx).pow(2 * params.s() as u32);
    let modulus = ctx.complex(t.abs_ref()).into_real_imag().0;
    if modulus.is_zero() || !modulus.is_finite() {
        return Err(Error::Underflow);
    }
    Ok(rho / t)
}

/// The `a, b, c` decomposition of `|K|²` at a point of `E_ρ`, with the
/// `θ = 0` values `A, B, C`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelModulusParts {
    pub a: Float,
    pub b: Float,
    pub c: Float,
    pub big_a: Float,
    pub big_b: Float,
    pub big_c: Float,
}

/// Refuses `ρ ≤ 1` and ellipses so thin (`ρ − 1 < 2^{−bits/4}`) that the
/// kernel cannot be evaluated reliably.
pub fn check_rho(rho: &Float, ctx: &PrecisionContext) -> Result<()> {
    let gap = ctx.real(rho - 1u32);
    if gap.is_nan() || gap <= 0 {
        return Err(Error::Domain {
            op: "ellipse parameter",
            detail: format!("need ρ > 1, got {}", rho.to_f64()),
        });
    }
    if gap < ctx.pow2(-(ctx.bits() as i32) / 4) {
        return Err(Error::DegenerateEllipse {
            gap: gap.to_f64(),
            bits: ctx.bits(),
        });
    }
    Ok(())
}

/// `|Σ_{k=0}^{s} C(2s+1,k) u^{2nk}|` with `u = ρe^{iθ}`.
fn numerator_modulus_sq(rho: &Float, theta: &Float, params: RuleParams, ctx: &PrecisionContext) -> Float {
    let c = EllipseCoord::new(ctx.real(rho), ctx.real(theta));
    let w = c.u(ctx).pow(2 * params.n() as u32);
    let s = params.s() as i64;
    let mut sum = ctx.complex(0);
    let mut wk = ctx.complex(1);
    for k in 0..=s {
        sum += ctx.complex(&wk * binom_f(2 * s + 1, k, ctx));
        wk *= &w;
    }
    ctx.complex(sum.norm()).into_real_imag().0
}

fn modulus_parts_unchecked(c: &EllipseCoord, params: RuleParams, ctx: &PrecisionContext) -> KernelModulusParts {
    let n2 = 2 * params.n() as u32;
    let a2 = cosh_coeff(&c.rho, 2, ctx);
    let a2n = cosh_coeff(&c.rho, n2, ctx);
    let cos2 = ctx.real(&c.theta * 2u32).cos();
    let cos2n = ctx.real(&c.theta * n2).cos();
    let zero = ctx.zero();
    KernelModulusParts {
        a: numerator_modulus_sq(&c.rho, &c.theta, params, ctx),
        b: ctx.real(&a2 - &cos2),
        c: ctx.real(&a2n + &cos2n),
        big_a: numerator_modulus_sq(&c.rho, &zero, params, ctx),
        big_b: a2 - 1u32,
        big_c: a2n + 1u32,
    }
}

pub fn kernel_modulus_parts(
    c: &EllipseCoord,
    params: RuleParams,
    ctx: &PrecisionContext,
) -> Result<KernelModulusParts> {
    check_rho(&c.rho, ctx)?;
    Ok(modulus_parts_unchecked(c, params, ctx))
}

/// `π²/(2^{2s−1} ρ^{2(2s+1)n})`.
fn abs2_prefactor(rho: &Float, params: RuleParams, ctx: &PrecisionContext) -> Float {
    let (n, s) = (params.n() as u32, params.s() as u32);
    let pi2 = ctx.pi().square();
    pi2 / ctx.pow2(2 * s as i32 - 1) / ctx.real(rho.pow(2 * (2 * s + 1) * n))
}

fn abs2_from_parts(rho: &Float, parts: &KernelModulusParts, params: RuleParams, ctx: &PrecisionContext) -> Float {
    let denom = ctx.real(&parts.b * ctx.real(parts.c.clone().pow(2 * params.s() as u32)));
    abs2_prefactor(rho, params, ctx) * &parts.a / denom
}

/// `|K_{n,s}(z)|²` on `E_ρ` through the `a, b, c` decomposition.
pub fn kernel_abs2(c: &EllipseCoord, params: RuleParams, ctx: &PrecisionContext) -> Result<Float> {
    let parts = kernel_modulus_parts(c, params, ctx)?;
    Ok(abs2_from_parts(&c.rho, &parts, params, ctx))
}

/// `|K_{n,s}(a₁)|`, the modulus at `θ = 0`, from `A, B, C`.
pub fn kernel_abs_on_axis(rho: &Float, params: RuleParams, ctx: &PrecisionContext) -> Result<Float> {
    kernel_abs2(&EllipseCoord::new(ctx.real(rho), ctx.zero()), params, ctx).map(Float::sqrt)
}

/// Default θ-grid size, `8n(2s+1)`.
pub fn default_grid(params: RuleParams) -> usize {
    8 * params.n() * (2 * params.s() + 1)
}

/// Location and value of `max_{E_ρ} |K_{n,s}|`.
#[derive(Debug, Clone)]
pub struct KernelMax {
    pub theta_star: Float,
    pub max_abs: Float,
    /// True when the maximum sits on the real axis (`θ = 0` or `π`).
    pub on_axis: bool,
}

/// Scans `θ_j = jπ/N`, `j = 0..=N`, then refines the best cell by golden
/// section to `2^{−bits/2}`. `|K|` is even in `θ` and symmetric about `π/2`,
/// so `[0, π]` covers the ellipse and `θ = π` is reported as `θ = 0`.
pub fn kernel_max_on_ellipse(
    rho: &Float,
    params: RuleParams,
    grid_size: usize,
    ctx: &PrecisionContext,
) -> Result<KernelMax> {
    check_rho(rho, ctx)?;
    let minimum = 4 * params.n() * (2 * params.s() + 1);
    if grid_size < minimum {
        return Err(Error::Domain {
            op: "kernel_max_on_ellipse",
            detail: format!("grid of {grid_size} points is below {minimum}"),
        });
    }
    let step = ctx.pi() / grid_size as u32;
    let abs2_at = |theta: &Float| {
        let c = EllipseCoord::new(ctx.real(rho), ctx.real(theta));
        abs2_from_parts(rho, &modulus_parts_unchecked(&c, params, ctx), params, ctx)
    };
    let values: Vec<Float> = (0..=grid_size)
        .into_par_iter()
        .map(|j| abs2_at(&ctx.real(&step * j as u32)))
        .collect();
    let best = (1..values.len()).fold(0, |b, j| if values[j] > values[b] { j } else { b });

    let axis = best == 0 || best == grid_size;
    let lo = ctx.real(&step * best.saturating_sub(1) as u32);
    let hi = ctx.real(&step * (best + 1).min(grid_size) as u32);
    let tol = ctx.real(ctx.half_epsilon() * ctx.pi());
    let refined = golden_section_max(|t| Ok(abs2_at(t)), &lo, &hi, &tol, ctx)?;

    // An axis maximum of an even function refines to within rounding of the
    // axis; report it exactly there.
    let snap = ctx.real(&step / 2u32);
    let near_axis = refined.x < snap || ctx.real(ctx.pi() - &refined.x) < snap;
    if axis && near_axis {
        return Ok(KernelMax {
            theta_star: ctx.zero(),
            max_abs: values[0].clone().sqrt(),
            on_axis: true,
        });
    }
    Ok(KernelMax {
        theta_star: refined.x,
        max_abs: refined.value.sqrt(),
        on_axis: false,
    })
}

/// `L = (1/2π)∮_{E_ρ} |K||dz| = (1/(2^s ρ^{(2s+1)n})) ∫_0^π √a / c^s dθ`,
/// by adaptive Gauss–Legendre panels split at `jπ/(2n)`.
pub fn kernel_l1_norm_numeric(rho: &Float, params: RuleParams, ctx: &PrecisionContext) -> Result<Float> {
    check_rho(rho, ctx)?;
    let (n, s) = (params.n() as u32, params.s() as u32);
    let a2n = cosh_coeff(rho, 2 * n, ctx);
    let integrand = |theta: &Float| {
        let a = numerator_modulus_sq(rho, theta, params, ctx).sqrt();
        let c = ctx.real(&a2n + ctx.real(theta * (2 * n)).cos());
        a / c.pow(s)
    };
    let breaks: Vec<Float> = (0..=2 * n).map(|j| ctx.pi() * j / (2 * n)).collect();
    let integral = adaptive_integral(integrand, &breaks, &ctx.half_epsilon(), ctx)?;
    Ok(integral / ctx.pow2(s as i32) / ctx.real(rho.pow((2 * s + 1) * n)))
}
