//! Golden-section search on a bracket, at working precision.

use rug::Float;

use crate::context::PrecisionContext;
use crate::error::Result;

/// Result of a one-dimensional search.
#[derive(Debug, Clone)]
pub struct Extremum {
    pub x: Float,
    pub value: Float,
    pub evaluations: usize,
}

/// Minimizes `f` on `[lo, hi]` by golden-section search until the bracket is
/// narrower than `tol`. Unimodality inside the bracket is assumed; if it does
/// not hold, a local minimum is returned. The best of the interior estimate
/// and the two endpoints is reported.
pub fn golden_section_min<F>(f: F, lo: &Float, hi: &Float, tol: &Float, ctx: &PrecisionContext) -> Result<Extremum>
where
    F: Fn(&Float) -> Result<Float>,
{
    let inv_phi = (ctx.real(5).sqrt() - 1u32) / 2u32;
    let mut a = ctx.real(lo);
    let mut b = ctx.real(hi);
    let mut c = ctx.real(&b - ctx.real(&inv_phi * ctx.real(&b - &a)));
    let mut d = ctx.real(&a + ctx.real(&inv_phi * ctx.real(&b - &a)));
    let mut fc = f(&c)?;
    let mut fd = f(&d)?;
    let mut evaluations = 2;
    while ctx.real(&b - &a).abs() > *tol {
        if less(&fc, &fd) {
            b = d;
            d = c;
            fd = fc;
            c = ctx.real(&b - ctx.real(&inv_phi * ctx.real(&b - &a)));
            fc = f(&c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = ctx.real(&a + ctx.real(&inv_phi * ctx.real(&b - &a)));
            fd = f(&d)?;
        }
        evaluations += 1;
        if evaluations > 100_000 {
            break;
        }
    }
    let mut best = if less(&fc, &fd) {
        Extremum {
            x: c,
            value: fc,
            evaluations,
        }
    } else {
        Extremum {
            x: d,
            value: fd,
            evaluations,
        }
    };
    for end in [lo, hi] {
        let v = f(end)?;
        best.evaluations += 1;
        if less(&v, &best.value) {
            best.x = ctx.real(end);
            best.value = v;
        }
    }
    Ok(best)
}

/// Maximizes `f` on `[lo, hi]`; see [`golden_section_min`].
pub fn golden_section_max<F>(f: F, lo: &Float, hi: &Float, tol: &Float, ctx: &PrecisionContext) -> Result<Extremum>
where
    F: Fn(&Float) -> Result<Float>,
{
    let mut e = golden_section_min(|x| f(x).map(|v| -v), lo, hi, tol, ctx)?;
    e.value = -e.value;
    Ok(e)
}

/// Total order on floats in which NaN is larger than everything, so a NaN
/// value never wins a minimization.
pub fn less(a: &Float, b: &Float) -> bool {
    match (a.is_nan(), b.is_nan()) {
        (false, false) => a < b,
        (false, true) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let ctx = PrecisionContext::new(128).unwrap();
        let f = |x: &Float| Ok(ctx.real(x - 0.3).square() + 2u32);
        let tol = ctx.real(1e-20);
        let e = golden_section_min(f, &ctx.real(-1), &ctx.real(2), &tol, &ctx).unwrap();
        assert!(Float::with_val(128, &e.x - 0.3).abs() < 1e-19);
        assert_eq!(e.value.to_f64(), 2.0);
    }

    #[test]
    fn endpoint_minimum_is_reported() {
        let ctx = PrecisionContext::new(128).unwrap();
        let f = |x: &Float| Ok(ctx.real(x * 3u32));
        let e = golden_section_min(f, &ctx.real(1), &ctx.real(4), &ctx.real(1e-10), &ctx).unwrap();
        assert_eq!(e.x, 1);
    }

    #[test]
    fn maximizes_cosine() {
        let ctx = PrecisionContext::new(128).unwrap();
        let f = |x: &Float| Ok(ctx.real(x.cos_ref()));
        let e = golden_section_max(f, &ctx.real(-0.5), &ctx.real(0.7), &ctx.real(1e-25), &ctx).unwrap();
        assert!(e.x.clone().abs() < 1e-12);
        assert!(Float::with_val(128, &e.value - 1u32).abs() < 1e-24);
    }

    #[test]
    fn nan_never_wins() {
        let ctx = PrecisionContext::new(64).unwrap();
        let nan = ctx.real(rug::float::Special::Nan);
        assert!(less(&ctx.real(1e300), &nan));
        assert!(!less(&nan, &ctx.real(0)));
    }
}
