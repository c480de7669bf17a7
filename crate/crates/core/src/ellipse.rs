//! Confocal ellipses `E_ρ = {(u + u⁻¹)/2 : u = ρe^{iθ}}` with foci ±1.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::context::PrecisionContext;

/// A point of `E_ρ` in `(ρ, θ)` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipseCoord {
    pub rho: Float,
    pub theta: Float,
}

impl EllipseCoord {
    pub fn new(rho: Float, theta: Float) -> Self {
        Self { rho, theta }
    }

    /// `u = ρe^{iθ}`.
    pub fn u(&self, ctx: &PrecisionContext) -> Complex {
        let (sin, cos) = ctx.real(&self.theta).sin_cos(ctx.real(0));
        ctx.complex((ctx.real(&self.rho * cos), ctx.real(&self.rho * sin)))
    }

    pub fn z(&self, ctx: &PrecisionContext) -> Complex {
        ellipse_point(self, ctx)
    }
}

/// `a_j(ρ) = (ρ^j + ρ^{-j})/2`.
pub fn cosh_coeff(rho: &Float, j: u32, ctx: &PrecisionContext) -> Float {
    let p = ctx.real(rho.pow(j));
    let inv = ctx.real(p.recip_ref());
    (p + inv) / 2u32
}

/// Semi-major axis `a₁ = (ρ + ρ⁻¹)/2`.
pub fn semi_major(rho: &Float, ctx: &PrecisionContext) -> Float {
    cosh_coeff(rho, 1, ctx)
}

/// Semi-minor axis `b₁ = (ρ − ρ⁻¹)/2`.
pub fn semi_minor(rho: &Float, ctx: &PrecisionContext) -> Float {
    let inv = ctx.real(rho.recip_ref());
    ctx.real(rho - inv) / 2u32
}

/// `z = (u + u⁻¹)/2` for `u = ρe^{iθ}`, i.e. `a₁cos θ + i b₁ sin θ`.
pub fn ellipse_point(c: &EllipseCoord, ctx: &PrecisionContext) -> Complex {
    let (sin, cos) = ctx.real(&c.theta).sin_cos(ctx.real(0));
    let re = semi_major(&c.rho, ctx) * cos;
    let im = semi_minor(&c.rho, ctx) * sin;
    ctx.complex((re, im))
}

/// Upper estimate of the perimeter of `E_ρ`:
/// `2πa₁(1 − a₁⁻²/4 − 3a₁⁻⁴/64 − 5a₁⁻⁶/256)`.
pub fn ellipse_length_upper(rho: &Float, ctx: &PrecisionContext) -> Float {
    let a1 = semi_major(rho, ctx);
    let inv2 = ctx.real(a1.square_ref()).recip();
    let inv4 = ctx.real(inv2.square_ref());
    let inv6 = ctx.real(&inv4 * &inv2);
    let series =
        ctx.real(1) - ctx.real(&inv2 / 4u32) - ctx.real(&inv4 * 3u32) / 64u32 - ctx.real(&inv6 * 5u32) / 256u32;
    ctx.pi() * 2u32 * a1 * series
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_integral;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128).unwrap()
    }

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    /// Arc length of `E_ρ` by adaptive quadrature of `|dz/dθ|` over a quarter.
    fn perimeter(rho: &Float, ctx: &PrecisionContext) -> Float {
        let a = semi_major(rho, ctx);
        let b = semi_minor(rho, ctx);
        let speed = |t: &Float| {
            let (s, c) = ctx.real(t).sin_cos(ctx.real(0));
            (ctx.real(&a * s).square() + ctx.real(&b * c).square()).sqrt()
        };
        let pts = [ctx.zero(), ctx.pi() / 2u32];
        adaptive_integral(speed, &pts, &ctx.real(1e-25), ctx).unwrap() * 4u32
    }

    #[test]
    fn cosh_coeff_values() {
        let ctx = ctx();
        let two = ctx.real(2);
        assert_eq!(cosh_coeff(&two, 1, &ctx), 1.25);
        assert_eq!(cosh_coeff(&two, 2, &ctx), 2.125);
        let near_one = ctx.real(1) + ctx.pow2(-40);
        assert!(close(&cosh_coeff(&near_one, 5, &ctx), 1.0, 1e-10));
    }

    #[test]
    fn a2_minus_one_is_twice_b1_squared() {
        let ctx = ctx();
        for r in [1.0, 1.01, 2.0, 7.5] {
            let rho = ctx.real(r);
            let lhs = cosh_coeff(&rho, 2, &ctx) - 1u32;
            let rhs = semi_minor(&rho, &ctx).square() * 2u32;
            assert!(Float::with_val(128, &lhs - &rhs).abs() < 1e-30);
            assert!(lhs >= 0);
        }
    }

    #[test]
    fn ellipse_point_special_angles() {
        let ctx = ctx();
        let rho = ctx.real(2);
        let z = ellipse_point(&EllipseCoord::new(rho.clone(), ctx.zero()), &ctx);
        assert_eq!(z.real(), &1.25);
        assert!(z.imag().is_zero());

        let z = ellipse_point(&EllipseCoord::new(rho.clone(), ctx.pi() / 2u32), &ctx);
        assert!(z.real().clone().abs() < 1e-35);
        assert!(close(z.imag(), 0.75, 1e-30));

        let theta = ctx.real(0.7);
        let z = ellipse_point(&EllipseCoord::new(ctx.real(1), theta.clone()), &ctx);
        assert!(Float::with_val(128, z.real() - theta.cos()).abs() < 1e-35);

        // Same point through the u-form.
        let c = EllipseCoord::new(ctx.real(3), ctx.real(1.1));
        let u = c.u(&ctx);
        let via_u = ctx.complex(&u + ctx.complex(u.recip_ref())) / 2u32;
        let d = ctx.complex(via_u - c.z(&ctx)).abs();
        assert!(d.real() < &1e-35);
    }

    #[test]
    fn length_estimate_at_rho_two() {
        let ctx = ctx();
        let rho = ctx.real(2);
        let est = ellipse_length_upper(&rho, &ctx);
        let exact = perimeter(&rho, &ctx);
        assert!(close(&est, 6.4064, 1e-3), "{est}");
        assert!(close(&exact, 6.3814, 1e-3), "{exact}");
        assert!(est >= exact);
    }

    #[test]
    fn length_estimate_degenerate_and_large() {
        let ctx = ctx();
        let rho = ctx.real(1) + ctx.pow2(-20);
        let est = ellipse_length_upper(&rho, &ctx);
        assert!(close(&est, 4.2947, 1e-3));
        assert!(est >= perimeter(&rho, &ctx));
        assert!(est >= 4);

        let rho = ctx.real(10);
        let est = ellipse_length_upper(&rho, &ctx);
        let exact = perimeter(&rho, &ctx);
        let rel = ((est.to_f64() - exact.to_f64()) / exact.to_f64()).abs();
        assert!(rel < 3e-3, "rel = {rel}");
    }

    #[test]
    fn length_estimate_dominates_on_log_grid() {
        let ctx = ctx();
        for i in 0..=40 {
            // ρ - 1 from 1e-4 to 99, log-spaced
            let gap = 10f64.powf(-4.0 + 6.0 * i as f64 / 40.0).min(99.0);
            let rho = ctx.real(1.0 + gap);
            let est = ellipse_length_upper(&rho, &ctx);
            let exact = perimeter(&rho, &ctx);
            assert!(est >= exact, "rho = {}", 1.0 + gap);
        }
    }
}
