//! Three computable bounds `|R_{n,s}(f)| ≤ B_i(ρ)` on `E_ρ`, and their
//! minimization over `ρ`.
//!
//! * `B1` (max-modulus): contour length times `max|K|` times `max|f|`, over
//!   `2π`, with `max|K|` taken on the real axis.
//! * `B2` (expansion): the series `Σ |ε_k| ρ^{-k}` summed in closed form.
//! * `B3` (L1): Cauchy–Schwarz applied to `∮|K||dz|`, with the trigonometric
//!   moments `I_l` in closed form.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use crate::context::PrecisionContext;
use crate::ellipse::{cosh_coeff, ellipse_length_upper, semi_major};
use crate::error::{Error, Result};
use crate::exact::{binom, binom_f};
use crate::integrand::Integrand;
use crate::kernel::{default_grid, kernel_abs_on_axis, kernel_max_on_ellipse};
use crate::optimize::golden_section_min;
use crate::reference::measure_error;
use crate::rule::{build_rule, RuleParams};
use crate::series::f_closed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `B1`, the L∞ bound.
    MaxModulus,
    /// `B2`, from the expansion coefficients.
    Expansion,
    /// `B3`, the L1 bound.
    L1,
}

impl BoundKind {
    pub const ALL: [BoundKind; 3] = [BoundKind::MaxModulus, BoundKind::Expansion, BoundKind::L1];

    pub fn label(&self) -> &'static str {
        match self {
            BoundKind::MaxModulus => "B1",
            BoundKind::Expansion => "B2",
            BoundKind::L1 => "B3",
        }
    }

    pub fn index(&self) -> usize {
        match self {
            BoundKind::MaxModulus => 0,
            BoundKind::Expansion => 1,
            BoundKind::L1 => 2,
        }
    }
}

/// Denominator used for the `θ = 0` kernel modulus in `B1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaxModulusForm {
    /// `√(a₁ − 1)`: larger than the exact axis modulus by
    /// `√((a₂−1)/(a₁−1))`, and the form that matches the published table.
    #[default]
    Conservative,
    /// `√(a₂ − 1)`: the exact `|K(a₁)|`.
    Sharp,
}

/// Normalization of the `B2` series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpansionForm {
    /// Built from the binomial closed form of `ε`.
    #[default]
    Standard,
    /// Half of [`ExpansionForm::Standard`], built from the convolution `ε`.
    Halved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundOptions {
    pub max_modulus_form: MaxModulusForm,
    pub expansion_form: ExpansionForm,
    /// Scan density in `ρ − 1`, points per decade.
    pub points_per_decade: usize,
    /// θ-grid for the `B1` axis check; `None` uses `8n(2s+1)`.
    pub theta_grid: Option<usize>,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            max_modulus_form: MaxModulusForm::default(),
            expansion_form: ExpansionForm::default(),
            points_per_decade: 60,
            theta_grid: None,
        }
    }
}

/// Scan range of `log₂(ρ − 1)`.
pub const SCAN_LOG2_RANGE: (i32, i32) = (-20, 20);

/// Width of the final `log₂(ρ − 1)` bracket.
pub const REFINE_LOG2_TOL: i32 = -24;

fn require_rho(rho: &Float) -> Result<()> {
    if *rho > 1 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            op: "bound",
            detail: format!("need finite ρ > 1, got {}", rho.to_f64()),
        })
    }
}

/// `Σ_{k=0}^{s} C(2s+1,k) ρ^{2nk}`, i.e. `√A`.
fn root_a(rho: &Float, params: RuleParams, ctx: &PrecisionContext) -> Float {
    let w = ctx.real(rho.pow(2 * params.n() as u32));
    let s = params.s() as i64;
    let mut sum = ctx.zero();
    let mut wk = ctx.real(1);
    for k in 0..=s {
        sum += ctx.real(&wk * binom_f(2 * s + 1, k, ctx));
        wk *= &w;
    }
    sum
}

/// `B1` with the kernel maximum assumed on the real axis.
pub fn bound_b1_axis(
    rho: &Float,
    params: RuleParams,
    f: &dyn Integrand,
    form: MaxModulusForm,
    ctx: &PrecisionContext,
) -> Result<Float> {
    require_rho(rho)?;
    let (n, s) = (params.n() as u32, params.s() as u32);
    let d = match form {
        MaxModulusForm::Conservative => semi_major(rho, ctx) - 1u32,
        MaxModulusForm::Sharp => cosh_coeff(rho, 2, ctx) - 1u32,
    };
    let c = cosh_coeff(rho, 2 * n, ctx) + 1u32;
    // ℓ/2 = π a₁ (1 − a₁⁻²/4 − …), and 2^{s−1/2} = 2^s/√2.
    let half_length = ellipse_length_upper(rho, ctx) / 2u32;
    let denom = ctx.pow2(s as i32) / ctx.real(2).sqrt() * ctx.real(rho.pow((2 * s + 1) * n)) * d.sqrt() * c.pow(s);
    Ok(half_length * root_a(rho, params, ctx) / denom * f.max_on_ellipse(rho, ctx)?)
}

fn b1_with_check(
    rho: &Float,
    params: RuleParams,
    f: &dyn Integrand,
    opts: &BoundOptions,
    ctx: &PrecisionContext,
) -> Result<(Float, Option<Error>)> {
    let value = bound_b1_axis(rho, params, f, opts.max_modulus_form, ctx)?;
    let grid = opts.theta_grid.unwrap_or_else(|| default_grid(params));
    let m = kernel_max_on_ellipse(rho, params, grid, ctx)?;
    if m.on_axis {
        return Ok((value, None));
    }
    let ratio = ctx.real(&m.max_abs / kernel_abs_on_axis(rho, params, ctx)?);
    let violation = Error::OffAxisMaximum {
        rho: rho.to_f64(),
        theta: m.theta_star.to_f64(),
        excess: ctx.real(&ratio - 1u32).to_f64(),
    };
    Ok((value * ratio, Some(violation)))
}

/// `B1(ρ)`, refusing when the kernel modulus does not peak on the real axis
/// at this `ρ` ([`Error::OffAxisMaximum`]).
pub fn bound_b1(
    rho: &Float,
    params: RuleParams,
    f: &dyn Integrand,
    opts: &BoundOptions,
    ctx: &PrecisionContext,
) -> Result<Float> {
    match b1_with_check(rho, params, f, opts, ctx)? {
        (value, None) => Ok(value),
        (_, Some(e)) => Err(e),
    }
}

/// `B1(ρ)` with the axis value replaced by the scanned maximum of `|K|` when
/// that lies off the axis. The flag reports whether the fallback engaged.
pub fn bound_b1_with_fallback(
    rho: &Float,
    params: RuleParams,
    f: &dyn Integrand,
    opts: &BoundOptions,
    ctx: &PrecisionContext,
) -> Result<(Float, bool)> {
    b1_with_check(rho, params, f, opts, ctx).map(|(v, e)| (v, e.is_some()))
}

/// `B2 = 2π max|f| Σ_{k=0}^{s} (−1)^k C(2s+1, s−k) ρ^{2n(s−k)} / (ρ^n (ρ^{2n}−1)^{2s})`.
pub fn bound_b2(
    rho: &Float,
    params: RuleParams,
    f: &dyn Integrand,
    form: ExpansionForm,
    ctx: &PrecisionContext,
) -> Result<Float> {
    require_rho(rho)?;
    let (n, s) = (params.n() as u32, params.s() as i64);
    let w = ctx.real(rho.pow(2 * n));
    let mut num = ctx.zero();
    for k in 0..=s {
        let term = ctx.real(w.clone().pow((s - k) as u32)) * binom_f(2 * s + 1, s - k, ctx);
        if k % 2 == 0 {
            num += term;
        } else {
            num -= term;
        }
    }
    let denom = ctx.real(rho.pow(n)) * ctx.real(&w - 1u32).pow(2 * s as u32);
    let value = ctx.pi() * 2u32 * num / denom * f.max_on_ellipse(rho, ctx)?;
    Ok(match form {
        ExpansionForm::Standard => value,
        ExpansionForm::Halved => value / 2u32,
    })
}

/// `B2` through the series lemma: `2π ρ^{−n} max|f| F(ρ^{−2n})`.
pub fn bound_b2_via_series(
    rho: &Float,
    params: RuleParams,
    f: &dyn Integrand,
    form: ExpansionForm,
    ctx: &PrecisionContext,
) -> Result<Float> {
    require_rho(rho)?;
    let n = params.n() as u32;
    let x = ctx.real(rho.pow(2 * n)).recip();
    let value = ctx.pi() * 2u32 * f_closed(&x, params.s(), ctx)? / ctx.real(rho.pow(n)) * f.max_on_ellipse(rho, ctx)?;
    Ok(match form {
        ExpansionForm::Standard => value,
        ExpansionForm::Halved => value / 2u32,
    })
}

/// `I_l = ∫_0^π cos(2nlθ) / (a_{2n} + cos 2nθ)^{2s} dθ` in closed form:
/// `(−1)^l (2ρ^{2n})^{2s} π Σ_{m<2s} C(2s+l−1,m) C(4s−m−2,2s−1) (ρ^{4n}−1)^m
/// / (ρ^{2nl} (ρ^{4n}−1)^{4s−1})`.
pub fn trig_moment(rho: &Float, params: RuleParams, l: usize, ctx: &PrecisionContext) -> Result<Float> {
    require_rho(rho)?;
    let (n, s) = (params.n() as u32, params.s() as i64);
    if l as i64 > s {
        return Err(Error::Domain {
            op: "trig_moment",
            detail: format!("need l ≤ s, got l={l}, s={s}"),
        });
    }
    let l = l as i64;
    let w = ctx.real(rho.pow(2 * n));
    let q = ctx.real(w.square_ref()) - 1u32;
    let mut sum = ctx.zero();
    let mut qm = ctx.real(1);
    for m in 0..2 * s {
        let c = binom(2 * s + l - 1, m) * binom(4 * s - m - 2, 2 * s - 1);
        sum += ctx.real(&qm * ctx.real(&c));
        qm *= &q;
    }
    let pre = ctx.real(&w * 2u32).pow(2 * s as u32) * ctx.pi();
    let denom = ctx.real(w.pow(l as u32)) * q.pow((4 * s - 1) as u32);
    let value = pre * sum / denom;
    Ok(if l % 2 == 0 { value } else { -value })
}

/// `B3 = (√π / (2^s ρ^{(2s+1)n})) √S max|f|` with
/// `S = Σ_k C(2s+1,k)² ρ^{4nk} I_0 + 2 Σ_{l≥1} ρ^{2nl} Σ_i C(2s+1,i) C(2s+1,i+l) ρ^{4ni} I_l`.
pub fn bound_b3(rho: &Float, params: RuleParams, f: &dyn Integrand, ctx: &PrecisionContext) -> Result<Float> {
    require_rho(rho)?;
    let (n, s) = (params.n() as u32, params.s() as i64);
    let w = ctx.real(rho.pow(2 * n));
    let w2 = ctx.real(w.square_ref());
    let mut total = ctx.zero();
    for l in 0..=s {
        let moment = trig_moment(rho, params, l as usize, ctx)?;
        let mut inner = ctx.zero();
        let mut w2i = ctx.real(1);
        for i in 0..=s - l {
            let c = binom(2 * s + 1, i) * binom(2 * s + 1, i + l);
            inner += ctx.real(&w2i * ctx.real(&c));
            w2i *= &w2;
        }
        let mut term = inner * moment * ctx.real(w.clone().pow(l as u32));
        if l > 0 {
            term *= 2u32;
        }
        total += term;
    }
    if total < 0 {
        return Err(Error::InsufficientPrecision {
            op: "bound_b3",
            detail: format!("moment sum cancelled to a negative value at ρ = {}", rho.to_f64()),
        });
    }
    let pre = ctx.pi().sqrt() / ctx.pow2(s as i32) / ctx.real(rho.pow((2 * s as u32 + 1) * n));
    Ok(pre * total.sqrt() * f.max_on_ellipse(rho, ctx)?)
}

/// `B_i(ρ)`; `B1` is the axis form without the θ-check.
pub fn evaluate_bound(
    kind: BoundKind,
    rho: &Float,
    params: RuleParams,
    f: &dyn Integrand,
    opts: &BoundOptions,
    ctx: &PrecisionContext,
) -> Result<Float> {
    match kind {
        BoundKind::MaxModulus => bound_b1_axis(rho, params, f, opts.max_modulus_form, ctx),
        BoundKind::Expansion => bound_b2(rho, params, f, opts.expansion_form, ctx),
        BoundKind::L1 => bound_b3(rho, params, f, ctx),
    }
}

/// Minimizer of a bound over `ρ`.
#[derive(Debug, Clone)]
pub struct BoundOptimum {
    pub kind: BoundKind,
    pub rho: Float,
    pub value: Float,
    /// `B1` only: the kernel maximum was off the axis at the axis-form
    /// optimum, and the minimization was redone with the scanned maximum.
    pub theta_fallback: bool,
}

fn rho_of(t: &Float, ctx: &PrecisionContext) -> Float {
    ctx.real(t.exp2_ref()) + 1u32
}

fn finite_or_inf(v: Result<Float>, ctx: &PrecisionContext) -> Float {
    match v {
        Ok(v) if !v.is_nan() => v,
        _ => ctx.real(rug::float::Special::Infinity),
    }
}

/// Geometric scan of `ρ − 1` over `2^{−20}..2^{20}`, then golden section on
/// `log₂(ρ − 1)` in the best cell down to a width of `2^{−24}`.
fn scan_and_refine<F>(eval: F, op: &'static str, opts: &BoundOptions, ctx: &PrecisionContext) -> Result<(Float, Float)>
where
    F: Fn(&Float) -> Result<Float> + Sync,
{
    let (lo, hi) = SCAN_LOG2_RANGE;
    let span = (hi - lo) as f64;
    let points = (span * std::f64::consts::LOG10_2 * opts.points_per_decade.max(1) as f64).ceil() as u32;
    let t_at = |j: u32| ctx.real(lo) + ctx.real(span) * j / points;
    let values: Vec<Float> = (0..=points)
        .into_par_iter()
        .map(|j| finite_or_inf(eval(&rho_of(&t_at(j), ctx)), ctx))
        .collect();
    let best = (1..values.len()).fold(0, |b, j| if values[j] < values[b] { j } else { b });
    if values[best].is_infinite() {
        return Err(Error::NoConvergence {
            op,
            detail: "bound is infinite or undefined on the whole scan".into(),
        });
    }
    if best == 0 {
        return Err(Error::NotBracketed { op, edge: "lower" });
    }
    if best == points as usize {
        return Err(Error::NotBracketed { op, edge: "upper" });
    }
    let objective = |t: &Float| Ok(finite_or_inf(eval(&rho_of(t, ctx)), ctx));
    let tol = ctx.pow2(REFINE_LOG2_TOL);
    let e = golden_section_min(objective, &t_at(best as u32 - 1), &t_at(best as u32 + 1), &tol, ctx)?;
    Ok((rho_of(&e.x, ctx), e.value))
}

/// `r_i = inf_ρ B_i(ρ)`.
///
/// `B1` is minimized in its axis form; the kernel maximum is then checked at
/// the minimizer and, if it lies off the axis, the minimization is repeated
/// with the θ-scanned maximum at every `ρ`.
pub fn optimize_bound(
    kind: BoundKind,
    params: RuleParams,
    f: &dyn Integrand,
    opts: &BoundOptions,
    ctx: &PrecisionContext,
) -> Result<BoundOptimum> {
    let op = match kind {
        BoundKind::MaxModulus => "optimize B1",
        BoundKind::Expansion => "optimize B2",
        BoundKind::L1 => "optimize B3",
    };
    let (rho, value) = scan_and_refine(|r| evaluate_bound(kind, r, params, f, opts, ctx), op, opts, ctx)?;
    if kind != BoundKind::MaxModulus {
        return Ok(BoundOptimum {
            kind,
            rho,
            value,
            theta_fallback: false,
        });
    }
    let (_, off_axis) = bound_b1_with_fallback(&rho, params, f, opts, ctx)?;
    if !off_axis {
        return Ok(BoundOptimum {
            kind,
            rho,
            value,
            theta_fallback: false,
        });
    }
    let checked = |r: &Float| bound_b1_with_fallback(r, params, f, opts, ctx).map(|(v, _)| v);
    let (rho, value) = scan_and_refine(checked, op, opts, ctx)?;
    Ok(BoundOptimum {
        kind,
        rho,
        value,
        theta_fallback: true,
    })
}

/// Bounds, minimizers and (optionally) the measured error for one rule and
/// integrand.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub params: RuleParams,
    pub integrand: String,
    pub bits: u32,
    pub r1: Float,
    pub r2: Float,
    pub r3: Float,
    pub rho_star_1: Float,
    pub rho_star_2: Float,
    pub rho_star_3: Float,
    pub actual_error: Option<Float>,
    pub reference_integral: Option<Float>,
    pub flags: Vec<String>,
}

impl BoundReport {
    pub fn r(&self, kind: BoundKind) -> &Float {
        [&self.r1, &self.r2, &self.r3][kind.index()]
    }

    pub fn rho_star(&self, kind: BoundKind) -> &Float {
        [&self.rho_star_1, &self.rho_star_2, &self.rho_star_3][kind.index()]
    }

    pub fn min_bound(&self) -> &Float {
        [&self.r1, &self.r2, &self.r3]
            .into_iter()
            .fold(&self.r1, |a, b| if b < a { b } else { a })
    }

    /// `actual_error ≤ min(r1, r2, r3)`, vacuously true without a measurement.
    pub fn is_valid(&self) -> bool {
        self.actual_error.as_ref().is_none_or(|e| e <= self.min_bound())
    }
}

/// Minimizes the three bounds (concurrently) and, when `with_actual` is set,
/// measures the reference integral and the actual error.
pub fn compute_report(
    params: RuleParams,
    f: &dyn Integrand,
    with_actual: bool,
    opts: &BoundOptions,
    ctx: &PrecisionContext,
) -> Result<BoundReport> {
    let ((b1, b2), (b3, measured)) = rayon::join(
        || {
            rayon::join(
                || optimize_bound(BoundKind::MaxModulus, params, f, opts, ctx),
                || optimize_bound(BoundKind::Expansion, params, f, opts, ctx),
            )
        },
        || {
            rayon::join(
                || optimize_bound(BoundKind::L1, params, f, opts, ctx),
                || {
                    with_actual
                        .then(|| measure_error(&build_rule(params, ctx), f, ctx))
                        .transpose()
                },
            )
        },
    );
    let (b1, b2, b3, measured) = (b1?, b2?, b3?, measured?);
    let mut flags = Vec::new();
    if b1.theta_fallback {
        flags.push("b1_theta_fallback".to_string());
    }
    if opts.max_modulus_form == MaxModulusForm::Sharp {
        flags.push("b1_sharp".to_string());
    }
    if opts.expansion_form == ExpansionForm::Halved {
        flags.push("b2_halved".to_string());
    }
    let (actual_error, reference_integral) = match measured {
        Some(m) => (Some(m.error), Some(m.integral)),
        None => (None, None),
    };
    let report = BoundReport {
        params,
        integrand: f.label(),
        bits: ctx.bits(),
        r1: b1.value,
        r2: b2.value,
        r3: b3.value,
        rho_star_1: b1.rho,
        rho_star_2: b2.rho,
        rho_star_3: b3.rho,
        actual_error,
        reference_integral,
        flags,
    };
    let mut report = report;
    if !report.is_valid() {
        report.flags.push("bound_violation".to_string());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::relative_difference;
    use crate::integrand::{ExpSquare, Polynomial};
    use crate::kernel::{kernel_l1_norm_numeric, kernel_value};
    use crate::quadrature::adaptive_integral;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    fn p(n: usize, s: usize) -> RuleParams {
        RuleParams::new(n, s).unwrap()
    }

    fn moment_by_quadrature(rho: &Float, params: RuleParams, l: usize, ctx: &PrecisionContext) -> Float {
        let n2 = 2 * params.n() as u32;
        let a = cosh_coeff(rho, n2, ctx);
        let f = |t: &Float| {
            let num = ctx.real(t * (n2 * l as u32)).cos();
            let den = ctx.real(&a + ctx.real(t * n2).cos()).pow(2 * params.s() as u32);
            num / den
        };
        let pts: Vec<Float> = (0..=n2).map(|j| ctx.pi() * j / n2).collect();
        adaptive_integral(f, &pts, &ctx.real(1e-40), ctx).unwrap()
    }

    #[test]
    fn moment_examples() {
        let ctx = ctx();
        let rho = ctx.real(2);
        let i0 = trig_moment(&rho, p(1, 1), 0, &ctx).unwrap();
        let expect = ctx.pi() * 4u32 * 16u32 * 17u32 / 3375u32;
        assert!(relative_difference(&i0, &expect) < 1e-70);
        assert!((i0.to_f64() - 1.012756).abs() < 1e-6);
        let i1 = trig_moment(&rho, p(1, 1), 1, &ctx).unwrap();
        let expect = -(ctx.pi() * 2048u32 / 13500u32);
        assert!(relative_difference(&i1, &expect) < 1e-70);
        assert!((i1.to_f64() + 0.476591).abs() < 1e-6);
        assert!(trig_moment(&rho, p(1, 1), 2, &ctx).is_err());
    }

    #[test]
    fn moments_match_quadrature() {
        let ctx = ctx();
        for rho in [1.1, 1.5, 3.0, 10.0] {
            let rho = ctx.real(rho);
            for (n, s) in [(1, 1), (2, 3), (4, 2)] {
                for l in 0..=s {
                    let closed = trig_moment(&rho, p(n, s), l, &ctx).unwrap();
                    let quad = moment_by_quadrature(&rho, p(n, s), l, &ctx);
                    assert!(relative_difference(&closed, &quad) < 1e-30, "ρ={rho} n={n} s={s} l={l}");
                    assert_eq!(closed.is_sign_negative(), l % 2 == 1);
                }
            }
        }
    }

    #[test]
    fn sharp_b1_is_the_linf_reconstruction() {
        let ctx = ctx();
        let rho = ctx.real(1.5);
        let params = p(4, 2);
        let f = ExpSquare::new(1.0).unwrap();
        let a1 = semi_major(&rho, &ctx);
        let k = kernel_value(&ctx.complex((a1, 0)), params, &ctx).unwrap();
        let k_abs = ctx.complex(k.abs()).into_real_imag().0;
        let recon = ellipse_length_upper(&rho, &ctx) / ctx.pi() / 2u32 * k_abs * f.max_on_ellipse(&rho, &ctx).unwrap();
        let sharp = bound_b1_axis(&rho, params, &f, MaxModulusForm::Sharp, &ctx).unwrap();
        assert!(relative_difference(&sharp, &recon) < ctx.half_epsilon());
        let conservative = bound_b1_axis(&rho, params, &f, MaxModulusForm::Conservative, &ctx).unwrap();
        assert!(conservative >= sharp);
    }

    #[test]
    fn b2_forms_agree() {
        let ctx = ctx();
        let f = ExpSquare::new(2.0).unwrap();
        for (rho, n, s) in [(1.5, 2, 2), (1.05, 8, 3), (4.0, 1, 1)] {
            let rho = ctx.real(rho);
            for form in [ExpansionForm::Standard, ExpansionForm::Halved] {
                let a = bound_b2(&rho, p(n, s), &f, form, &ctx).unwrap();
                let b = bound_b2_via_series(&rho, p(n, s), &f, form, &ctx).unwrap();
                assert!(relative_difference(&a, &b) < ctx.half_epsilon());
            }
        }
    }

    #[test]
    fn b3_dominates_l1_quantity() {
        let ctx = ctx();
        let rho = ctx.real(1.3);
        let params = p(8, 1);
        let f = ExpSquare::new(1.0).unwrap();
        let l1 = kernel_l1_norm_numeric(&rho, params, &ctx).unwrap() * f.max_on_ellipse(&rho, &ctx).unwrap();
        assert!(bound_b3(&rho, params, &f, &ctx).unwrap() >= l1);
    }

    #[test]
    fn theta_check_and_fallback() {
        let ctx = ctx();
        let params = p(2, 3);
        let f = ExpSquare::new(1.0).unwrap();
        let opts = BoundOptions::default();
        let rho = ctx.real(1.5);
        assert!(matches!(
            bound_b1(&rho, params, &f, &opts, &ctx),
            Err(Error::OffAxisMaximum { .. })
        ));
        let (value, engaged) = bound_b1_with_fallback(&rho, params, &f, &opts, &ctx).unwrap();
        assert!(engaged);
        assert!(value > bound_b1_axis(&rho, params, &f, opts.max_modulus_form, &ctx).unwrap());

        let rho = ctx.real(8);
        let (value, engaged) = bound_b1_with_fallback(&rho, params, &f, &opts, &ctx).unwrap();
        assert!(!engaged);
        assert_eq!(value, bound_b1(&rho, params, &f, &opts, &ctx).unwrap());
    }

    #[test]
    fn first_table_row() {
        let ctx = ctx();
        let f = ExpSquare::new(1.0).unwrap();
        let report = compute_report(p(8, 1), &f, true, &BoundOptions::default(), &ctx).unwrap();
        for (got, printed) in [(&report.r1, 5.22e-14), (&report.r2, 3.40e-14), (&report.r3, 1.70e-14)] {
            assert!((got.to_f64() / printed - 1.0).abs() < 0.02, "{got} vs {printed}");
        }
        assert!(report.is_valid());
        assert!(report.flags.is_empty());
        for kind in BoundKind::ALL {
            let at = evaluate_bound(kind, report.rho_star(kind), p(8, 1), &f, &BoundOptions::default(), &ctx).unwrap();
            assert_eq!(&at, report.r(kind));
        }
    }

    #[test]
    fn scan_density_does_not_move_the_optimum() {
        let ctx = ctx();
        let f = ExpSquare::new(5.0).unwrap();
        let coarse = BoundOptions::default();
        let fine = BoundOptions {
            points_per_decade: 120,
            ..coarse
        };
        for kind in BoundKind::ALL {
            let a = optimize_bound(kind, p(12, 1), &f, &coarse, &ctx).unwrap();
            let b = optimize_bound(kind, p(12, 1), &f, &fine, &ctx).unwrap();
            assert!(relative_difference(&a.value, &b.value) < 1e-3);
        }
    }

    #[test]
    fn monotone_bound_is_not_bracketed() {
        let ctx = ctx();
        let f = Polynomial::monomial(2);
        let r = optimize_bound(BoundKind::Expansion, p(1, 1), &f, &BoundOptions::default(), &ctx);
        assert_eq!(
            r.unwrap_err(),
            Error::NotBracketed {
                op: "optimize B2",
                edge: "upper"
            }
        );
    }

    #[test]
    fn rejects_rho_at_most_one() {
        let ctx = ctx();
        let f = ExpSquare::new(1.0).unwrap();
        assert!(bound_b2(&ctx.real(1), p(2, 1), &f, ExpansionForm::Standard, &ctx).is_err());
        assert!(bound_b3(&ctx.real(0.5), p(2, 1), &f, &ctx).is_err());
    }
}
