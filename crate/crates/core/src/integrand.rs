//! Integrands: functions with derivatives at complex points and a known
//! maximum modulus on each ellipse `E_ρ`.

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::chebyshev::chebyshev_power_coefficients;
use crate::context::PrecisionContext;
use crate::ellipse::{cosh_coeff, semi_major};
use crate::error::{Error, Result};

pub trait Integrand: Send + Sync {
    /// Short identifier used in reports.
    fn label(&self) -> String;

    /// `[f(z), f'(z), …, f^{(order)}(z)]`, always `order + 1` entries.
    fn derivatives(&self, z: &Complex, order: usize, ctx: &PrecisionContext) -> Result<Vec<Complex>>;

    /// Real-axis specialization of [`Integrand::derivatives`].
    fn real_derivatives(&self, t: &Float, order: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
        let z = ctx.complex((t, 0));
        Ok(self
            .derivatives(&z, order, ctx)?
            .into_iter()
            .map(|c| c.into_real_imag().0)
            .collect())
    }

    /// `max_{z ∈ E_ρ} |f(z)|`, or a rigorous upper bound of it. Must come
    /// from a closed form, never from sampling.
    fn max_on_ellipse(&self, rho: &Float, ctx: &PrecisionContext) -> Result<Float>;

    /// Degree, when the integrand is a polynomial.
    fn polynomial_degree(&self) -> Option<usize> {
        None
    }

    /// True when `f(−t) = f(t)`. Then `∫ f T_n ω` and the rule both vanish
    /// for odd `n`.
    fn is_even(&self) -> bool {
        false
    }
}

/// `f₀(z) = e^{ωz²}`, an entire function whose maximum modulus on `E_ρ` is
/// `e^{ω a₁²}`, attained at `θ = 0`.
///
/// Derivatives are `f₀^{(k)} = p_k(z) e^{ωz²}` with `p₀ = 1` and
/// `p_{k+1} = p_k' + 2ωz p_k`. Writing `p_k(z) = Σ_j c_{k,j} ω^{(k+j)/2} z^j`,
/// the integers `c_{k,j}` are independent of ω and are built exactly.
#[derive(Debug, Clone)]
pub struct ExpSquare {
    omega: Float,
}

impl ExpSquare {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Domain {
                op: "ExpSquare::new",
                detail: format!("growth parameter must be positive and finite, got {omega}"),
            });
        }
        // f64 values are exact in any precision ≥ 53 bits.
        Ok(Self {
            omega: Float::with_val(64, omega),
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega.to_f64()
    }

    /// `c_{k,j}` for `k = 0..=order`; row `k` has entries for `j = 0..=k`.
    pub fn derivative_table(order: usize) -> Vec<Vec<Integer>> {
        let mut rows = vec![vec![Integer::from(1)]];
        for k in 0..order {
            let cur = &rows[k];
            let mut next = vec![Integer::new(); k + 2];
            for (j, c) in cur.iter().enumerate() {
                if c.cmp0().is_eq() {
                    continue;
                }
                if j > 0 {
                    next[j - 1] += Integer::from(c * j as u32);
                }
                next[j + 1] += Integer::from(c * 2u32);
            }
            rows.push(next);
        }
        rows
    }

    fn omega_powers(&self, count: usize, ctx: &PrecisionContext) -> Vec<Float> {
        let w = ctx.real(&self.omega);
        let mut out = Vec::with_capacity(count);
        let mut cur = ctx.real(1);
        for _ in 0..count {
            out.push(cur.clone());
            cur *= &w;
        }
        out
    }
}

impl Integrand for ExpSquare {
    fn label(&self) -> String {
        format!("exp({}*z^2)", self.omega())
    }

    fn derivatives(&self, z: &Complex, order: usize, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
        let table = Self::derivative_table(order);
        let wpow = self.omega_powers(order + 1, ctx);
        let z2 = ctx.complex(z.square_ref());
        let e = (z2 * ctx.real(&self.omega)).exp();
        let mut zpow = Vec::with_capacity(order + 1);
        let mut cur = ctx.complex(1);
        for _ in 0..=order {
            zpow.push(cur.clone());
            cur *= z;
        }
        Ok(table
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let mut p = ctx.complex(0);
                for (j, c) in row.iter().enumerate() {
                    if c.cmp0().is_eq() {
                        continue;
                    }
                    let coeff = ctx.real(c) * &wpow[(k + j) / 2];
                    p += ctx.complex(&zpow[j] * &coeff);
                }
                p * &e
            })
            .collect())
    }

    fn real_derivatives(&self, t: &Float, order: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
        let table = Self::derivative_table(order);
        let wpow = self.omega_powers(order + 1, ctx);
        let e = (ctx.real(t.square_ref()) * &self.omega).exp();
        let mut tpow = Vec::with_capacity(order + 1);
        let mut cur = ctx.real(1);
        for _ in 0..=order {
            tpow.push(cur.clone());
            cur *= t;
        }
        Ok(table
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let mut p = ctx.zero();
                for (j, c) in row.iter().enumerate() {
                    if c.cmp0().is_eq() {
                        continue;
                    }
                    p += ctx.real(c) * &wpow[(k + j) / 2] * &tpow[j];
                }
                p * &e
            })
            .collect())
    }

    fn max_on_ellipse(&self, rho: &Float, ctx: &PrecisionContext) -> Result<Float> {
        let a1 = semi_major(rho, ctx);
        Ok((a1.square() * &self.omega).exp())
    }

    fn is_even(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum PolyKind {
    General,
    Monomial(usize),
    Chebyshev(usize),
}

/// A polynomial with exact rational coefficients (lowest degree first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
    kind: PolyKind,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::new());
        }
        Self {
            coeffs,
            kind: PolyKind::General,
        }
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rational::new(); k + 1];
        coeffs[k] = Rational::from(1);
        Self {
            coeffs,
            kind: PolyKind::Monomial(k),
        }
    }

    /// `T_k(t)`.
    pub fn chebyshev(k: usize) -> Self {
        let coeffs = chebyshev_power_coefficients(k)
            .into_iter()
            .map(Rational::from)
            .collect();
        Self {
            coeffs,
            kind: PolyKind::Chebyshev(k),
        }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn derivative_coeffs(&self, order: usize) -> Vec<Vec<Rational>> {
        let mut out = vec![self.coeffs.clone()];
        for _ in 0..order {
            let last = out.last().expect("non-empty");
            let next: Vec<Rational> = last
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| Rational::from(c * j as u32))
                .collect();
            out.push(if next.is_empty() { vec![Rational::new()] } else { next });
        }
        out
    }
}

impl Integrand for Polynomial {
    fn label(&self) -> String {
        match self.kind {
            PolyKind::Monomial(k) => format!("t^{k}"),
            PolyKind::Chebyshev(k) => format!("T_{k}"),
            PolyKind::General => format!("poly(deg {})", self.degree()),
        }
    }

    fn derivatives(&self, z: &Complex, order: usize, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
        Ok(self
            .derivative_coeffs(order)
            .iter()
            .map(|cs| {
                cs.iter()
                    .rev()
                    .fold(ctx.complex(0), |acc, c| ctx.complex(&acc * z) + ctx.real(c))
            })
            .collect())
    }

    fn real_derivatives(&self, t: &Float, order: usize, ctx: &PrecisionContext) -> Result<Vec<Float>> {
        Ok(self
            .derivative_coeffs(order)
            .iter()
            .map(|cs| {
                cs.iter()
                    .rev()
                    .fold(ctx.zero(), |acc, c| ctx.real(&acc * t) + ctx.real(c))
            })
            .collect())
    }

    fn max_on_ellipse(&self, rho: &Float, ctx: &PrecisionContext) -> Result<Float> {
        let a1 = semi_major(rho, ctx);
        Ok(match self.kind {
            PolyKind::Monomial(k) => a1.pow(k as u32),
            // |T_k(z)|² = (a_{2k} + cos 2kθ)/2 ≤ a_k².
            PolyKind::Chebyshev(k) => cosh_coeff(rho, k as u32, ctx),
            // Triangle inequality: |Σ c_j z^j| ≤ Σ |c_j| a₁^j.
            PolyKind::General => self
                .coeffs
                .iter()
                .rev()
                .fold(ctx.zero(), |acc, c| ctx.real(&acc * &a1) + ctx.real(c).abs()),
        })
    }

    fn polynomial_degree(&self) -> Option<usize> {
        Some(self.degree())
    }

    fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.cmp0().is_eq())
    }
}
