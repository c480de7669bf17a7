//! The multiple-node rule
//!
//! ```text
//! ∫_{-1}^{1} f(t) T_n(t) dt/√(1-t²) = Σ_ν Σ_{i=0}^{2s-1} A_{i,ν} f^{(i)}(ξ_ν) + R_{n,s}(f)
//! ```
//!
//! with `ξ_ν` the zeros of `T_n`, each used with multiplicity `2s`.
//!
//! The quadrature sum is the exact functional `Q(p) = ∫ p T_n ω` applied to
//! the Hermite interpolant `p` of `f` on those nodes. Since
//! `∫ T_k T_n ω = (π/2) δ_{kn}` for `n ≥ 1`, `Q(p)` is `π/2` times the `T_n`
//! coefficient of `p`, so the rule is evaluated by building the interpolant
//! in Newton form (confluent divided differences), converting it exactly to
//! the Chebyshev basis, and reading off one coefficient. The weights
//! `A_{i,ν}` are `Q` applied to the Hermite cardinal polynomials and are only
//! computed when asked for.

use std::sync::OnceLock;

use rug::Float;

use crate::chebyshev::chebyshev_nodes;
use crate::context::PrecisionContext;
use crate::error::{Error, Result};
use crate::integrand::Integrand;

/// Degree `n` of `T_n` (= number of nodes) and half-multiplicity `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleParams {
    n: usize,
    s: usize,
}

impl RuleParams {
    pub fn new(n: usize, s: usize) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(Error::InvalidParams { n, s });
        }
        Ok(Self { n, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Each node carries `2s` interpolation conditions.
    pub fn multiplicity(&self) -> usize {
        2 * self.s
    }

    /// Total number of samples `f^{(i)}(ξ_ν)`, `2sn`.
    pub fn sample_count(&self) -> usize {
        2 * self.s * self.n
    }

    /// Algebraic degree of exactness, `n(2s+1) − 1`.
    pub fn exactness_degree(&self) -> usize {
        self.n * (2 * self.s + 1) - 1
    }
}

/// A built rule: nodes in decreasing order, plus lazily computed weights.
#[derive(Debug)]
pub struct MultipleNodeRule {
    params: RuleParams,
    ctx: PrecisionContext,
    nodes: Vec<Float>,
    leja: Vec<usize>,
    inv_factorials: Vec<Float>,
    weights: OnceLock<Vec<Vec<Float>>>,
}

/// Builds the rule for `params` at the precision of `ctx`.
pub fn build_rule(params: RuleParams, ctx: &PrecisionContext) -> MultipleNodeRule {
    MultipleNodeRule::new(params, ctx)
}

impl MultipleNodeRule {
    pub fn new(params: RuleParams, ctx: &PrecisionContext) -> Self {
        let nodes = chebyshev_nodes(params.n(), ctx);
        let leja = leja_order(&nodes);
        let mut inv_factorials = Vec::with_capacity(params.multiplicity());
        let mut fact = ctx.real(1);
        for k in 0..params.multiplicity() {
            if k > 0 {
                fact *= k as u32;
            }
            inv_factorials.push(ctx.real(fact.recip_ref()));
        }
        Self {
            params,
            ctx: *ctx,
            nodes,
            leja,
            inv_factorials,
            weights: OnceLock::new(),
        }
    }

    pub fn params(&self) -> RuleParams {
        self.params
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// `ξ_1 > ξ_2 > … > ξ_n`.
    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    /// Order in which the nodes enter the Newton table.
    pub fn leja_order(&self) -> &[usize] {
        &self.leja
    }

    /// `weights()[ν][i] = A_{i,ν+1}`.
    pub fn weights(&self) -> &[Vec<Float>] {
        self.weights.get_or_init(|| self.cardinal_weights())
    }

    /// `f^{(i)}(ξ_ν)` for every node and `i < 2s`.
    pub fn sample(&self, f: &dyn Integrand) -> Result<Vec<Vec<Float>>> {
        let order = self.params.multiplicity() - 1;
        self.nodes
            .iter()
            .map(|x| {
                let d = f.real_derivatives(x, order, &self.ctx)?;
                if d.len() != order + 1 {
                    return Err(Error::Integrand(format!(
                        "{} returned {} derivatives, expected {}",
                        f.label(),
                        d.len(),
                        order + 1
                    )));
                }
                Ok(d)
            })
            .collect()
    }

    /// Newton coefficients of the Hermite interpolant of `data` on the
    /// Leja-ordered node sequence, each node repeated `2s` times.
    pub fn newton_coefficients(&self, data: &[Vec<Float>]) -> Vec<Float> {
        let ctx = &self.ctx;
        let seq = self.node_sequence();
        let len = seq.len();
        let mut col: Vec<Float> = seq.iter().map(|&v| ctx.real(&data[v][0])).collect();
        let mut coef = Vec::with_capacity(len);
        coef.push(col[0].clone());
        for k in 1..len {
            for j in (k..len).rev() {
                let (vj, vjk) = (seq[j], seq[j - k]);
                col[j] = if vj == vjk {
                    ctx.real(&data[vj][k] * &self.inv_factorials[k])
                } else {
                    let num = ctx.real(&col[j] - &col[j - 1]);
                    num / ctx.real(&self.nodes[vj] - &self.nodes[vjk])
                };
            }
            coef.push(col[k].clone());
        }
        coef
    }

    /// Chebyshev coefficients `c_k` (no halving: `p = Σ c_k T_k`) of the
    /// Hermite interpolant of `data`, degree `2sn − 1`.
    pub fn interpolant_chebyshev(&self, data: &[Vec<Float>]) -> Vec<Float> {
        let ctx = &self.ctx;
        let newton = self.newton_coefficients(data);
        let seq = self.node_sequence();
        let len = newton.len();
        // Horner: p ← p·(t − x_k) + c_k, with t·T_0 = T_1, t·T_j = (T_{j+1} + T_{j−1})/2.
        let mut p: Vec<Float> = vec![newton[len - 1].clone()];
        for k in (0..len - 1).rev() {
            let x = &self.nodes[seq[k]];
            let mut q = vec![ctx.zero(); p.len() + 1];
            for (j, c) in p.iter().enumerate() {
                if j == 0 {
                    q[1] += c;
                } else {
                    let half = ctx.real(c / 2u32);
                    q[j + 1] += &half;
                    q[j - 1] += &half;
                }
                q[j] -= ctx.real(c * x);
            }
            q[0] += &newton[k];
            p = q;
        }
        p
    }

    /// The quadrature sum for sampled data: `(π/2)·[T_n coefficient of the interpolant]`.
    pub fn functional(&self, data: &[Vec<Float>]) -> Float {
        let coeffs = self.interpolant_chebyshev(data);
        let c = coeffs.get(self.params.n()).cloned().unwrap_or_else(|| self.ctx.zero());
        self.ctx.pi() / 2u32 * c
    }

    /// `Σ_ν Σ_i A_{i,ν} f^{(i)}(ξ_ν)`, through the interpolant.
    pub fn apply(&self, f: &dyn Integrand) -> Result<Float> {
        Ok(self.functional(&self.sample(f)?))
    }

    /// The same sum through the explicit weights.
    pub fn apply_with_weights(&self, f: &dyn Integrand) -> Result<Float> {
        let data = self.sample(f)?;
        let mut sum = self.ctx.zero();
        for (ws, ds) in self.weights().iter().zip(&data) {
            for (w, d) in ws.iter().zip(ds) {
                sum += self.ctx.real(w * d);
            }
        }
        Ok(sum)
    }

    /// `R = reference − Q(f)`, where `reference` is the exact integral.
    pub fn remainder(&self, f: &dyn Integrand, reference: &Float) -> Result<Float> {
        Ok(self.ctx.real(reference) - self.apply(f)?)
    }

    fn node_sequence(&self) -> Vec<usize> {
        let m = self.params.multiplicity();
        self.leja.iter().flat_map(|&v| std::iter::repeat_n(v, m)).collect()
    }

    fn cardinal_weights(&self) -> Vec<Vec<Float>> {
        let (n, m) = (self.params.n(), self.params.multiplicity());
        let mut data = vec![vec![self.ctx.zero(); m]; n];
        let mut out = vec![Vec::with_capacity(m); n];
        for nu in 0..n {
            for i in 0..m {
                data[nu][i] = self.ctx.real(1);
                out[nu].push(self.functional(&data));
                data[nu][i] = self.ctx.zero();
            }
        }
        out
    }
}

/// Leja ordering: start at the node of largest modulus, then repeatedly take
/// the node maximizing the product of distances to those already chosen.
/// Ties go to the lower index.
fn leja_order(nodes: &[Float]) -> Vec<usize> {
    let xs: Vec<f64> = nodes.iter().map(|x| x.to_f64()).collect();
    let n = xs.len();
    if n == 0 {
        return Vec::new();
    }
    let mut chosen = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let first = (0..n).fold(0, |best, i| if xs[i].abs() > xs[best].abs() { i } else { best });
    chosen.push(first);
    used[first] = true;
    // Log-distances avoid under/overflow of long products.
    let mut score: Vec<f64> = xs.iter().map(|x| (x - xs[first]).abs().ln()).collect();
    while chosen.len() < n {
        let next = (0..n)
            .filter(|&i| !used[i])
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if score[b] >= score[i] => Some(b),
                _ => Some(i),
            })
            .expect("unused node remains");
        used[next] = true;
        chosen.push(next);
        for i in 0..n {
            score[i] += (xs[i] - xs[next]).abs().ln();
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::binom;
    use crate::integrand::Polynomial;
    use proptest::prelude::*;
    use rug::Rational;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    /// `∫ t^k T_n ω dt = π 2^{-k} C(k, (k−n)/2)` when `k ≥ n` and `k − n` is even.
    fn monomial_moment(k: usize, n: usize, ctx: &PrecisionContext) -> Float {
        if k < n || (k - n) % 2 == 1 {
            return ctx.zero();
        }
        ctx.pi() * ctx.real(&binom(k as i64, ((k - n) / 2) as i64)) * ctx.pow2(-(k as i32))
    }

    fn assert_close(a: &Float, b: &Float, tol: &Float) {
        let d = Float::with_val(a.prec(), a - b).abs();
        assert!(d <= *tol, "{a} vs {b}");
    }

    #[test]
    fn rejects_zero_parameters() {
        assert_eq!(RuleParams::new(0, 1), Err(Error::InvalidParams { n: 0, s: 1 }));
        assert!(RuleParams::new(3, 0).is_err());
        let p = RuleParams::new(8, 2).unwrap();
        assert_eq!(p.exactness_degree(), 39);
        assert_eq!(p.sample_count(), 32);
    }

    #[test]
    fn single_node_weights() {
        let ctx = ctx();
        let rule = build_rule(RuleParams::new(1, 1).unwrap(), &ctx);
        assert!(rule.nodes()[0].is_zero());
        let w = rule.weights();
        assert!(w[0][0].clone().abs() < ctx.epsilon(4));
        assert_close(&w[0][1], &(ctx.pi() / 2u32), &ctx.epsilon(4));
    }

    #[test]
    fn weight_map_sizes() {
        let ctx = ctx();
        let rule = build_rule(RuleParams::new(2, 1).unwrap(), &ctx);
        assert_eq!(rule.nodes().len(), 2);
        assert_eq!(rule.weights().iter().map(Vec::len).sum::<usize>(), 4);
        let rule = build_rule(RuleParams::new(2, 3).unwrap(), &ctx);
        assert_eq!(rule.weights().iter().map(Vec::len).sum::<usize>(), 12);
        for k in 0..=13 {
            let q = rule.apply(&Polynomial::monomial(k)).unwrap();
            assert_close(&q, &monomial_moment(k, 2, &ctx), &ctx.half_epsilon());
        }
        let q = rule.apply(&Polynomial::monomial(14)).unwrap();
        assert!(Float::with_val(256, &q - monomial_moment(14, 2, &ctx)).abs() > 1e-3);
    }

    #[test]
    fn low_degree_examples() {
        let ctx = ctx();
        let rule = build_rule(RuleParams::new(1, 1).unwrap(), &ctx);
        let eps = ctx.epsilon(8);
        assert!(rule.apply(&Polynomial::monomial(2)).unwrap().abs() < eps);
        assert!(rule.apply(&Polynomial::monomial(3)).unwrap().abs() < eps);

        let three_pi_8 = ctx.pi() * 3u32 / 8u32;
        let r = rule.remainder(&Polynomial::monomial(3), &three_pi_8).unwrap();
        assert_close(&r, &three_pi_8, &eps);
        let r = rule.remainder(&Polynomial::monomial(2), &ctx.zero()).unwrap();
        assert!(r.abs() < eps);
        let r = rule.remainder(&Polynomial::chebyshev(3), &ctx.zero()).unwrap();
        assert_close(&r, &(ctx.pi() * 3u32 / 2u32), &eps);
    }

    #[test]
    fn t_n_integrates_to_half_pi() {
        let ctx = ctx();
        for n in 1..=6 {
            for s in 1..=3 {
                let rule = build_rule(RuleParams::new(n, s).unwrap(), &ctx);
                let q = rule.apply(&Polynomial::chebyshev(n)).unwrap();
                assert_close(&q, &(ctx.pi() / 2u32), &ctx.half_epsilon());
            }
        }
    }

    #[test]
    fn leja_order_is_a_permutation_starting_at_an_extreme() {
        let ctx = ctx();
        for n in 1..=16 {
            let rule = build_rule(RuleParams::new(n, 1).unwrap(), &ctx);
            let mut order = rule.leja_order().to_vec();
            assert_eq!(order[0], 0);
            order.sort_unstable();
            assert_eq!(order, (0..n).collect::<Vec<_>>());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn weights_agree_with_interpolant_path(
            n in 1usize..6,
            s in 1usize..4,
            coeffs in proptest::collection::vec(-50i64..50, 1..40),
        ) {
            let ctx = ctx();
            let rule = build_rule(RuleParams::new(n, s).unwrap(), &ctx);
            let p = Polynomial::new(coeffs.into_iter().map(Rational::from).collect());
            let a = rule.apply(&p).unwrap();
            let b = rule.apply_with_weights(&p).unwrap();
            let scale = Float::with_val(256, a.abs_ref()).max(&Float::with_val(256, 1));
            prop_assert!(Float::with_val(256, &a - &b).abs() <= ctx.half_epsilon() * scale);
        }
    }
}
