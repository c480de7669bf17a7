//! Exact integer and rational helpers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Integer, Rational};

use crate::context::PrecisionContext;

/// `C(n, k)`, zero when `k < 0`, `n < 0` or `k > n`.
pub fn binom(n: i64, k: i64) -> Integer {
    if k < 0 || n < 0 || k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// `C(n, k)` as a float at working precision.
pub fn binom_f(n: i64, k: i64, ctx: &PrecisionContext) -> Float {
    ctx.real(&binom(n, k))
}

pub fn sign(exp: i64) -> i32 {
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// An exact rational multiple of π, `q·π`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PiMultiple(pub Rational);

impl PiMultiple {
    pub fn zero() -> Self {
        Self(Rational::new())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self(Rational::from((num, den)))
    }

    pub fn coefficient(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0().is_eq()
    }

    pub fn to_float(&self, ctx: &PrecisionContext) -> Float {
        ctx.real(&self.0) * ctx.pi()
    }
}

impl From<Rational> for PiMultiple {
    fn from(q: Rational) -> Self {
        Self(q)
    }
}

impl From<Integer> for PiMultiple {
    fn from(q: Integer) -> Self {
        Self(Rational::from(q))
    }
}

impl Add for PiMultiple {
    type Output = PiMultiple;
    fn add(self, rhs: PiMultiple) -> PiMultiple {
        PiMultiple(self.0 + rhs.0)
    }
}

impl Sub for PiMultiple {
    type Output = PiMultiple;
    fn sub(self, rhs: PiMultiple) -> PiMultiple {
        PiMultiple(self.0 - rhs.0)
    }
}

impl Neg for PiMultiple {
    type Output = PiMultiple;
    fn neg(self) -> PiMultiple {
        PiMultiple(-self.0)
    }
}

impl Mul<&Rational> for PiMultiple {
    type Output = PiMultiple;
    fn mul(self, rhs: &Rational) -> PiMultiple {
        PiMultiple(self.0 * rhs)
    }
}

impl Mul<&Integer> for PiMultiple {
    type Output = PiMultiple;
    fn mul(self, rhs: &Integer) -> PiMultiple {
        PiMultiple(self.0 * rhs)
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}π", self.0)
    }
}
