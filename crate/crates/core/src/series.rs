//! Expansion of the remainder in the Chebyshev coefficients of `f`.
//!
//! With `z = (u + u⁻¹)/2`,
//!
//! ```text
//! 1/T_n(z)^{2s} = Σ_k β_k u^{-2ns-k},   ρ_{n,s}(z) = Σ_k γ_k u^{-n-1-k},
//! K_{n,s}(z)    = Σ_k ω_k u^{-(2s+1)n-1-k},   ω = β * γ,
//! ```
//!
//! and for `f = Σ' α_k T_k` the remainder is `R(f) = Σ_k α_{(2s+1)n+k} ε_k`
//! with `ε_0 = ω_0/4`, `ε_k = (ω_k − ω_{k−2})/4`.
//!
//! `β` is an integer and `γ, ω, ε` are rational multiples of π, all computed
//! exactly. Two expressions for `ε` are provided: the convolution one above
//! ([`epsilon_true`]) and a binomial closed form ([`epsilon_paper`]), which
//! evaluates to exactly twice the convolution value.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::context::PrecisionContext;
use crate::error::{Error, Result};
use crate::exact::{binom, sign, PiMultiple};
use crate::rule::RuleParams;

/// Index `k` of an expansion coefficient for the rule `(n, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoeffIndex {
    pub n: usize,
    pub s: usize,
    pub k: usize,
}

impl CoeffIndex {
    pub fn new(params: RuleParams, k: usize) -> Self {
        Self {
            n: params.n(),
            s: params.s(),
            k,
        }
    }

    /// The index `k = 2nm` of block `m`.
    pub fn block_start(params: RuleParams, m: usize) -> Self {
        Self::new(params, 2 * params.n() * m)
    }

    /// `m = k/(2n)` when `k` is a multiple of `2n`.
    pub fn block(&self) -> Option<usize> {
        (self.k % (2 * self.n) == 0).then(|| self.k / (2 * self.n))
    }

    fn with_k(&self, k: usize) -> Self {
        Self { k, ..*self }
    }

    fn s(&self) -> i64 {
        self.s as i64
    }
}

/// `β_k = 2^{2s}(−1)^j C(j+2s−1, 2s−1)` for `k = 2jn`, else 0.
pub fn beta_coeff(idx: CoeffIndex) -> Integer {
    let Some(j) = idx.block() else {
        return Integer::new();
    };
    let (j, s) = (j as i64, idx.s());
    let b = binom(j + 2 * s - 1, 2 * s - 1) << (2 * idx.s as u32);
    b * sign(j)
}

/// `γ_k = (π/2^{2s−1}) Σ_{ν=0}^{j} C(2s+1, s−ν)` for even `k` in block `j`
/// (`2nj ≤ k ≤ 2n(j+1) − 2`), else 0.
pub fn gamma_coeff(idx: CoeffIndex) -> PiMultiple {
    if idx.k % 2 == 1 {
        return PiMultiple::zero();
    }
    let j = (idx.k / (2 * idx.n)) as i64;
    let s = idx.s();
    let sum = (0..=j).fold(Integer::new(), |acc, nu| acc + binom(2 * s + 1, s - nu));
    PiMultiple(Rational::from((sum, Integer::from(1) << (2 * idx.s as u32 - 1))))
}

/// `ω_k = Σ_{j ≤ k} β_j γ_{k−j}`.
pub fn omega_coeff(idx: CoeffIndex) -> PiMultiple {
    let step = 2 * idx.n;
    (0..=idx.k / step).fold(PiMultiple::zero(), |acc, jb| {
        let j = jb * step;
        acc + gamma_coeff(idx.with_k(idx.k - j)) * &beta_coeff(idx.with_k(j))
    })
}

/// `ε_0 = ω_0/4`, `ε_1 = ω_1/4`, `ε_k = (ω_k − ω_{k−2})/4`.
pub fn epsilon_true(idx: CoeffIndex) -> PiMultiple {
    let quarter = Rational::from((1, 4));
    let omega = omega_coeff(idx);
    if idx.k < 2 {
        return omega * &quarter;
    }
    (omega - omega_coeff(idx.with_k(idx.k - 2))) * &quarter
}

/// `π(−1)^m s(2m+2s+1)/((m+s)(m+s+1)) · C(m+2s, 2s) C(2s, s)` for `k = 2nm`,
/// else 0.
pub fn epsilon_paper(idx: CoeffIndex) -> PiMultiple {
    let Some(m) = idx.block() else {
        return PiMultiple::zero();
    };
    let (m, s) = (m as i64, idx.s());
    let num = Integer::from(s * (2 * m + 2 * s + 1)) * binom(m + 2 * s, 2 * s) * binom(2 * s, s);
    let den = Integer::from((m + s) * (m + s + 1));
    PiMultiple(Rational::from((num, den)) * sign(m))
}

/// The same closed form before the binomial identity is applied:
/// `π Σ_{j=m−s}^{m} (−1)^j C(j+2s−1, 2s−1) C(2s+1, s−(m−j))`.
pub fn epsilon_block_sum(s: usize, m: usize) -> PiMultiple {
    let (s, m) = (s as i64, m as i64);
    let sum = ((m - s).max(0)..=m).fold(Integer::new(), |acc, j| {
        acc + binom(j + 2 * s - 1, 2 * s - 1) * binom(2 * s + 1, s - (m - j)) * sign(j)
    });
    PiMultiple::from(sum)
}

/// Both sides of
/// `Σ_{i=0}^{t} (−1)^i C(m+s−1+i, 2s−1) C(2s+1, i)
///   = (−1)^t (s(2m+2s+2) − t)/((m+s)(m+s+1)) · C(m+s+t, 2s) C(2s, t)`.
pub fn binomial_identity_sides(t: usize, m: usize, s: usize) -> Result<(Rational, Rational)> {
    if s == 0 || t > 2 * s {
        return Err(Error::Domain {
            op: "binomial_identity_sides",
            detail: format!("need s ≥ 1 and t ≤ 2s, got t={t}, s={s}"),
        });
    }
    let (t, m, s) = (t as i64, m as i64, s as i64);
    let lhs = (0..=t).fold(Integer::new(), |acc, i| {
        acc + binom(m + s - 1 + i, 2 * s - 1) * binom(2 * s + 1, i) * sign(i)
    });
    let num = Integer::from(s * (2 * m + 2 * s + 2) - t) * binom(m + s + t, 2 * s) * binom(2 * s, t);
    let rhs = Rational::from((num, Integer::from((m + s) * (m + s + 1)))) * sign(t);
    Ok((Rational::from(lhs), rhs))
}

fn check_unit_interval(x: &Float, op: &'static str) -> Result<()> {
    if *x > 0 && *x < 1 {
        Ok(())
    } else {
        Err(Error::Domain {
            op,
            detail: format!("x = {} is outside (0, 1)", x.to_f64()),
        })
    }
}

/// `F(x) = Σ_{k=0}^{s} (−1)^k C(2s+1, s+k+1) x^{s+k} / (1−x)^{2s}`.
pub fn f_closed(x: &Float, s: usize, ctx: &PrecisionContext) -> Result<Float> {
    check_unit_interval(x, "f_closed")?;
    let s = s as i64;
    let mut num = ctx.zero();
    for k in 0..=s {
        let term = ctx.real(x.pow((s + k) as u32)) * ctx.real(&binom(2 * s + 1, s + k + 1));
        if k % 2 == 0 {
            num += term;
        } else {
            num -= term;
        }
    }
    let den = ctx.real(1u32 - ctx.real(x)).pow(2 * s as u32);
    Ok(num / den)
}

/// The first `terms` terms of
/// `F(x) = s C(2s,s) Σ_m C(m+2s, 2s)(2m+2s+1) x^{m+s} / ((m+s)(m+s+1))`.
pub fn f_partial(x: &Float, s: usize, terms: usize, ctx: &PrecisionContext) -> Result<Float> {
    check_unit_interval(x, "f_partial")?;
    let si = s as i64;
    let mut sum = ctx.zero();
    let mut power = ctx.real(x.pow(s as u32));
    for m in 0..terms as i64 {
        let coeff = Rational::from((
            binom(m + 2 * si, 2 * si) * (2 * m + 2 * si + 1),
            Integer::from((m + si) * (m + si + 1)),
        ));
        sum += ctx.real(&coeff) * &power;
        power *= x;
    }
    Ok(sum * ctx.real(&(binom(2 * si, si) * si)))
}

/// `Σ_{m=0}^{M} α_{(2s+1)n+2nm} ε_{2nm}` with `cheb_coeffs[k] = α_k`.
///
/// Only indices present in `cheb_coeffs` contribute. When `max_block` is
/// `None` the sum stops at the first nonzero-sum block whose term falls below
/// `2^{-bits}` relative to the partial sum.
pub fn remainder_via_expansion(
    cheb_coeffs: &[Float],
    params: RuleParams,
    max_block: Option<usize>,
    ctx: &PrecisionContext,
) -> Float {
    let (n, s) = (params.n(), params.s());
    let base = (2 * s + 1) * n;
    let tiny = ctx.epsilon(0);
    let mut sum = ctx.zero();
    for m in 0.. {
        if max_block.is_some_and(|mb| m > mb) {
            break;
        }
        let Some(alpha) = cheb_coeffs.get(base + 2 * n * m) else {
            break;
        };
        let eps = epsilon_true(CoeffIndex::block_start(params, m)).to_float(ctx);
        let term = ctx.real(alpha * &eps);
        let negligible = max_block.is_none()
            && !sum.is_zero()
            && ctx.real(term.abs_ref()) <= ctx.real(&tiny * ctx.real(sum.abs_ref()));
        sum += term;
        if negligible {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::{chebyshev_nodes, chebyshev_t, chebyshev_t_real};
    use crate::integrand::Polynomial;
    use crate::rule::build_rule;
    use rug::Complex;

    fn p(n: usize, s: usize) -> RuleParams {
        RuleParams::new(n, s).unwrap()
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(192).unwrap()
    }

    /// Laurent coefficients `c_j` of `g(u) = Σ_j c_j u^{-offset-j}`, by the
    /// trapezoidal rule on `|u| = ρ` with `points` samples.
    fn cauchy_coefficients<G>(g: G, rho: f64, offset: usize, count: usize, points: usize) -> Vec<Complex>
    where
        G: Fn(&Complex) -> Complex,
    {
        let ctx = ctx();
        let rho = ctx.real(rho);
        let mut out = vec![ctx.complex(0); count];
        for q in 0..points {
            let theta = ctx.pi() * 2u32 * q as u32 / points as u32;
            let (sin, cos) = theta.sin_cos(ctx.zero());
            let u = ctx.complex((ctx.real(&rho * &cos), ctx.real(&rho * &sin)));
            let value = g(&u);
            let mut up = ctx.complex(u.clone().pow(offset as u32));
            for c in out.iter_mut() {
                *c += ctx.complex(&value * &up);
                up *= &u;
            }
        }
        out.into_iter().map(|c| c / points as u32).collect()
    }

    fn joukowski(u: &Complex, ctx: &PrecisionContext) -> Complex {
        ctx.complex(u + ctx.complex(u.recip_ref())) / 2u32
    }

    fn close_to(c: &Complex, target: &Float, tol: f64) -> bool {
        let d = ctx().complex(c - target).abs().into_real_imag().0;
        d < tol
    }

    #[test]
    fn beta_examples_and_cauchy_oracle() {
        assert_eq!(beta_coeff(CoeffIndex::new(p(3, 1), 0)), 4);
        assert_eq!(beta_coeff(CoeffIndex::new(p(3, 1), 6)), -8);
        assert_eq!(beta_coeff(CoeffIndex::new(p(3, 2), 0)), 16);
        assert_eq!(beta_coeff(CoeffIndex::new(p(3, 2), 3)), 0);

        let ctx = ctx();
        for (n, s) in [(1, 1), (2, 2), (3, 3)] {
            let params = p(n, s);
            let g = |u: &Complex| {
                let t = chebyshev_t(n, &joukowski(u, &ctx), &ctx);
                ctx.complex(t.pow(2 * s as u32).recip())
            };
            let coeffs = cauchy_coefficients(g, 3.0, 2 * n * s, 8 * n, 96);
            for (k, c) in coeffs.iter().enumerate() {
                let b = ctx.real(&beta_coeff(CoeffIndex::new(params, k)));
                assert!(close_to(c, &b, 1e-20), "n={n} s={s} k={k}: {c} vs {b}");
            }
        }
    }

    #[test]
    fn gamma_examples_and_integral_oracle() {
        let ctx = ctx();
        let pi = ctx.pi();
        let g = |s, k| gamma_coeff(CoeffIndex::new(p(2, s), k)).to_float(&ctx);
        assert!(Float::with_val(192, g(1, 0) - ctx.real(&pi * 3u32) / 2u32).abs() < 1e-50);
        assert!(Float::with_val(192, g(1, 2)).abs() > 1);
        assert!(Float::with_val(192, g(1, 4) - ctx.real(&pi * 2u32)).abs() < 1e-50);
        assert!(Float::with_val(192, g(2, 0) - ctx.real(&pi * 5u32) / 4u32).abs() < 1e-50);
        assert!(g(1, 3).is_zero());

        // ρ_{n,s}(z) = ∫ ω T_n^{2s+1}/(z−t) by Gauss–Chebyshev with many nodes.
        for (n, s) in [(1, 1), (2, 1), (2, 3)] {
            let params = p(n, s);
            let nodes = chebyshev_nodes(200, &ctx);
            let powers: Vec<Float> = nodes
                .iter()
                .map(|t| chebyshev_t_real(n, t, &ctx).pow(2 * s as u32 + 1))
                .collect();
            let rho = |u: &Complex| {
                let z = joukowski(u, &ctx);
                let mut acc = ctx.complex(0);
                for (t, w) in nodes.iter().zip(&powers) {
                    acc += ctx.complex(w / ctx.complex(&z - t));
                }
                acc * ctx.pi() / 200u32
            };
            let coeffs = cauchy_coefficients(rho, 3.0, n + 1, 6 * n, 96);
            for (k, c) in coeffs.iter().enumerate() {
                let target = gamma_coeff(CoeffIndex::new(params, k)).to_float(&ctx);
                assert!(close_to(c, &target, 1e-20), "n={n} s={s} k={k}: {c} vs {target}");
            }
        }
    }

    #[test]
    fn omega_and_epsilon_examples() {
        let params = p(2, 1);
        assert_eq!(omega_coeff(CoeffIndex::new(params, 0)), PiMultiple::from_ratio(6, 1));
        assert_eq!(omega_coeff(CoeffIndex::new(params, 4)), PiMultiple::from_ratio(-4, 1));
        assert!(omega_coeff(CoeffIndex::new(params, 5)).is_zero());

        let e = |n, s, m| epsilon_true(CoeffIndex::block_start(p(n, s), m));
        assert_eq!(e(1, 1, 0), PiMultiple::from_ratio(3, 2));
        assert_eq!(e(1, 1, 1), PiMultiple::from_ratio(-5, 2));
        assert_eq!(e(1, 2, 0), PiMultiple::from_ratio(5, 1));

        let ep = |s, m| epsilon_paper(CoeffIndex::block_start(p(1, s), m));
        assert_eq!(ep(1, 0), PiMultiple::from_ratio(3, 1));
        assert_eq!(ep(1, 1), PiMultiple::from_ratio(-5, 1));
        assert!(epsilon_paper(CoeffIndex::new(p(3, 2), 5)).is_zero());
    }

    #[test]
    fn parity_and_block_structure() {
        for n in 1..=4 {
            for s in 1..=3 {
                let params = p(n, s);
                for k in 0..=32 * n {
                    let idx = CoeffIndex::new(params, k);
                    if k % 2 == 1 {
                        assert!(omega_coeff(idx).is_zero());
                        assert!(epsilon_true(idx).is_zero());
                    }
                    if idx.block().is_none() {
                        assert!(epsilon_true(idx).is_zero(), "n={n} s={s} k={k}");
                        assert_eq!(beta_coeff(idx), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_is_twice_convolution() {
        for n in 1..=4 {
            for s in 1..=5 {
                for m in 0..=30 {
                    let idx = CoeffIndex::block_start(p(n, s), m);
                    let t = epsilon_true(idx);
                    assert_eq!(epsilon_paper(idx), t.clone() + t, "n={n} s={s} m={m}");
                    assert_eq!(epsilon_paper(idx), epsilon_block_sum(s, m));
                }
            }
        }
    }

    #[test]
    fn epsilon_matches_rule_remainder() {
        let ctx = PrecisionContext::new(256).unwrap();
        for n in 1..=2 {
            for s in 1..=2 {
                let params = p(n, s);
                let rule = build_rule(params, &ctx);
                for m in 0..=1 {
                    let degree = (2 * s + 1) * n + 2 * n * m;
                    let r = rule.remainder(&Polynomial::chebyshev(degree), &ctx.zero()).unwrap();
                    let e = epsilon_true(CoeffIndex::block_start(params, m)).to_float(&ctx);
                    assert!(Float::with_val(256, &r - &e).abs() < ctx.half_epsilon(), "{n} {s} {m}");
                }
            }
        }
    }

    #[test]
    fn binomial_identity_examples() {
        let (l, r) = binomial_identity_sides(1, 2, 1).unwrap();
        assert_eq!(l, -7);
        assert_eq!(r, -7);
        for s in 1..=6 {
            for m in 0..=20 {
                let (l, r) = binomial_identity_sides(0, m, s).unwrap();
                assert_eq!(l, binom((m + s) as i64 - 1, 2 * s as i64 - 1));
                assert_eq!(l, r);
                for t in 1..=2 * s {
                    let (l, r) = binomial_identity_sides(t, m, s).unwrap();
                    assert_eq!(l, r, "t={t} m={m} s={s}");
                }
            }
        }
        assert!(binomial_identity_sides(5, 0, 2).is_err());
    }

    #[test]
    fn f_closed_examples() {
        let ctx = ctx();
        let half = ctx.real(0.5);
        assert_eq!(f_closed(&half, 1, &ctx).unwrap(), 5);
        assert_eq!(f_closed(&half, 2, &ctx).unwrap(), 31);
        assert!(f_closed(&ctx.real(1), 1, &ctx).is_err());
        assert!(f_partial(&ctx.real(0), 1, 4, &ctx).is_err());

        for s in 1..=4 {
            let x = ctx.pow2(-60);
            let ratio = f_closed(&x, s, &ctx).unwrap() / ctx.real(x.pow(s as u32));
            let lead = ctx.real(&binom(2 * s as i64 + 1, s as i64 + 1));
            assert!(Float::with_val(192, ratio / lead - 1u32).abs() < 1e-15);
        }
    }

    #[test]
    fn f_partial_converges_geometrically() {
        let ctx = ctx();
        for x in [0.1, 0.5, 0.9] {
            let x = ctx.real(x);
            for s in 1..=4 {
                let closed = f_closed(&x, s, &ctx).unwrap();
                let err = |m| {
                    let v = f_partial(&x, s, m, &ctx).unwrap();
                    Float::with_val(192, v / &closed - 1u32).abs().to_f64()
                };
                let (e1, e2) = (err(150), err(300));
                assert!(e2 < e1 * 1e-3 || e2 < 1e-50, "x={x} s={s}: {e1} {e2}");
            }
        }
        let x = ctx.real(0.5);
        let v = f_partial(&x, 1, 300, &ctx).unwrap();
        assert!(Float::with_val(192, v - 5u32).abs() < 1e-50);
    }

    #[test]
    fn expansion_remainder_examples() {
        let ctx = ctx();
        let params = p(1, 1);
        let mut t3 = vec![ctx.zero(); 4];
        t3[3] = ctx.real(1);
        let r = remainder_via_expansion(&t3, params, None, &ctx);
        assert!(Float::with_val(192, r - ctx.pi() * 3u32 / 2u32).abs() < 1e-50);

        t3[1] = ctx.real(0.75);
        t3[3] = ctx.real(0.25);
        let r = remainder_via_expansion(&t3, params, Some(5), &ctx);
        assert!(Float::with_val(192, r - ctx.pi() * 3u32 / 8u32).abs() < 1e-50);

        // Odd n: only odd-index coefficients contribute.
        let even: Vec<Float> = (0..40).map(|k| ctx.real(if k % 2 == 0 { 1 } else { 0 })).collect();
        assert!(remainder_via_expansion(&even, p(3, 1), None, &ctx).is_zero());
    }
}
