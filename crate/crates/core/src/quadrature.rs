//! Gauss–Legendre panels at working precision, with adaptive bisection.

use rug::Float;

use crate::context::PrecisionContext;
use crate::error::{Error, Result};

/// Nodes per panel used by [`adaptive_integral`].
pub const DEFAULT_ORDER: usize = 24;

const MAX_DEPTH: u32 = 48;

/// An `m`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<Float>,
    weights: Vec<Float>,
    ctx: PrecisionContext,
}

impl GaussLegendre {
    pub fn new(order: usize, ctx: &PrecisionContext) -> Self {
        assert!(order >= 1, "Gauss-Legendre rule needs at least one node");
        // A few guard bits so the nodes are correct to the last bit of `ctx`.
        let work = PrecisionContext::new(ctx.bits() + 32).expect("precision grows");
        let tol = work.epsilon(8);
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        for i in 0..order.div_ceil(2) {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
            let mut x = work.real(guess);
            let mut deriv = work.zero();
            for _ in 0..64 {
                let (p, dp) = legendre_with_derivative(order, &x, &work);
                let step = p / &dp;
                x -= &step;
                deriv = dp;
                if step.abs() < tol {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(order, &x, &work);
            if !dp.is_zero() {
                deriv = dp;
            }
            let one_minus_x2 = work.real(1) - work.real(x.square_ref());
            let w = work.real(2) / (one_minus_x2 * deriv.square());
            nodes.push(ctx.real(&x));
            weights.push(ctx.real(&w));
        }
        // Mirror the positive half.
        let half = nodes.len();
        let (mut all_nodes, mut all_weights) = (nodes.clone(), weights.clone());
        for i in (0..half).rev() {
            if order % 2 == 1 && i == half - 1 {
                // Centre node, x = 0, already present.
                all_nodes[i] = ctx.zero();
                continue;
            }
            all_nodes.push(ctx.real(-&nodes[i]));
            all_weights.push(weights[i].clone());
        }
        Self {
            nodes: all_nodes,
            weights: all_weights,
            ctx: *ctx,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    /// `∫_a^b f` by this rule on a single panel.
    pub fn integrate<F>(&self, f: &F, a: &Float, b: &Float) -> Float
    where
        F: Fn(&Float) -> Float,
    {
        let ctx = &self.ctx;
        let half = ctx.real(b - a) / 2u32;
        let mid = ctx.real(a + b) / 2u32;
        let mut sum = ctx.zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = ctx.real(&half * x) + &mid;
            sum += ctx.real(w * f(&t));
        }
        sum * half
    }

    fn adaptive<F>(&self, f: &F, a: &Float, b: &Float, whole: Float, tol: &Float, depth: u32) -> Result<Float>
    where
        F: Fn(&Float) -> Float,
    {
        let ctx = &self.ctx;
        let mid = ctx.real(a + b) / 2u32;
        let left = self.integrate(f, a, &mid);
        let right = self.integrate(f, &mid, b);
        let both = ctx.real(&left + &right);
        let diff = ctx.real(&both - &whole).abs();
        if diff <= *tol {
            return Ok(both);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::NoConvergence {
                op: "adaptive Gauss-Legendre",
                detail: format!(
                    "panel [{:.6e}, {:.6e}] still off by {:.3e}",
                    a.to_f64(),
                    b.to_f64(),
                    diff.to_f64()
                ),
            });
        }
        let half_tol = ctx.real(tol / 2u32);
        let l = self.adaptive(f, a, &mid, left, &half_tol, depth + 1)?;
        let r = self.adaptive(f, &mid, b, right, &half_tol, depth + 1)?;
        Ok(l + r)
    }
}

/// `P_m(x)` and `P_m'(x)` for `|x| < 1`.
fn legendre_with_derivative(m: usize, x: &Float, ctx: &PrecisionContext) -> (Float, Float) {
    let mut prev = ctx.real(1);
    let mut cur = ctx.real(x);
    for k in 1..m {
        let k = k as u32;
        let next = (ctx.real(x * &cur) * (2 * k + 1) - ctx.real(&prev * k)) / (k + 1);
        prev = std::mem::replace(&mut cur, next);
    }
    let x2m1 = ctx.real(x.square_ref()) - 1u32;
    let deriv = (ctx.real(x * &cur) - &prev) * m as u32 / x2m1;
    (cur, deriv)
}

/// `∫ f` over the panels delimited by `breakpoints` (sorted ascending), each
/// refined by bisection until the two-half estimate agrees with the
/// whole-panel estimate to `rel_tol` relative to the total.
pub fn adaptive_integral<F>(f: F, breakpoints: &[Float], rel_tol: &Float, ctx: &PrecisionContext) -> Result<Float>
where
    F: Fn(&Float) -> Float,
{
    assert!(breakpoints.len() >= 2, "need at least one panel");
    let rule = GaussLegendre::new(DEFAULT_ORDER, ctx);
    let coarse: Vec<Float> = breakpoints
        .windows(2)
        .map(|w| rule.integrate(&f, &w[0], &w[1]))
        .collect();
    let magnitude = coarse.iter().fold(ctx.zero(), |acc, v| acc + ctx.real(v.abs_ref()));
    let scale = if magnitude.is_zero() { ctx.real(1) } else { magnitude };
    let panel_tol = ctx.real(rel_tol * &scale) / coarse.len() as u32;
    let mut total = ctx.zero();
    for (w, whole) in breakpoints.windows(2).zip(coarse) {
        total += rule.adaptive(&f, &w[0], &w[1], whole, &panel_tol, 0)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn nodes_and_weights_are_consistent() {
        let ctx = PrecisionContext::new(256).unwrap();
        for m in [1usize, 2, 5, 24] {
            let rule = GaussLegendre::new(m, &ctx);
            assert_eq!(rule.order(), m);
            let total = rule.weights().iter().fold(ctx.zero(), |a, w| a + w);
            assert!(Float::with_val(256, total - 2u32).abs() < 1e-70, "m={m}");
        }
        let two = GaussLegendre::new(2, &ctx);
        let expect = ctx.real(3).sqrt().recip();
        assert!(Float::with_val(256, two.nodes()[0].clone() - &expect).abs() < 1e-70);
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        let ctx = PrecisionContext::new(256).unwrap();
        let rule = GaussLegendre::new(10, &ctx);
        // ∫_0^2 x^19 dx = 2^20 / 20
        let v = rule.integrate(&|x: &Float| ctx.real(x.pow(19)), &ctx.real(0), &ctx.real(2));
        let expect = ctx.real(1u32 << 20) / 20u32;
        assert!(Float::with_val(256, v - expect).abs() < 1e-65);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let ctx = PrecisionContext::new(192).unwrap();
        // ∫_{-1}^{1} dx / (x² + 1e-6) = 2·1000·atan(1000)
        let eps = ctx.real(1_000_000).recip();
        let f = |x: &Float| (ctx.real(x.square_ref()) + &eps).recip();
        let pts = [ctx.real(-1), ctx.real(1)];
        let v = adaptive_integral(f, &pts, &ctx.real(1e-40), &ctx).unwrap();
        let expect = ctx.real(1000).atan() * 2000u32;
        let rel = Float::with_val(192, &v - &expect).abs() / expect;
        assert!(rel < 1e-38, "rel = {rel}");
    }
}
