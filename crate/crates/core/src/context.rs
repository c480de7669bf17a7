//! Working precision shared by every numeric operation.

use rug::float::Constant;
use rug::{Assign, Complex, Float};

use crate::error::{Error, Result};

/// Binary precision under which a computation is carried out.
///
/// The context is a plain value: copying it is free and it can be shared
/// across threads. Constants such as π are recomputed at the context's
/// precision on request and never cached across contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    bits: u32,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::PrecisionTooLow {
                got: bits,
                min: Self::MIN_BITS,
            });
        }
        Ok(Self { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The same computation at twice the precision.
    pub fn doubled(&self) -> Self {
        Self {
            bits: self.bits.saturating_mul(2),
        }
    }

    pub fn real<T>(&self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits, value)
    }

    pub fn complex<T>(&self, value: T) -> Complex
    where
        Complex: Assign<T>,
    {
        Complex::with_val(self.bits, value)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits, Constant::Pi)
    }

    /// `2^e` at working precision.
    pub fn pow2(&self, e: i32) -> Float {
        Float::with_val(self.bits, Float::i_exp(1, e))
    }

    /// `2^(-bits + shift)`: the resolution of the context, loosened by `shift` bits.
    pub fn epsilon(&self, shift: i32) -> Float {
        self.pow2(shift - self.bits as i32)
    }

    /// `2^(-bits/2)`, the tolerance used for identities that lose up to half the working bits.
    pub fn half_epsilon(&self) -> Float {
        self.pow2(-((self.bits / 2) as i32))
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { bits: 512 }
    }
}

/// `|a - b| / |b|`, or `|a|` when `b` is zero.
pub fn relative_difference(a: &Float, b: &Float) -> Float {
    let diff = Float::with_val(a.prec().max(b.prec()), a - b).abs();
    if b.is_zero() {
        diff
    } else {
        diff / b.clone().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert!(matches!(
            PrecisionContext::new(63),
            Err(Error::PrecisionTooLow { got: 63, min: 64 })
        ));
        assert_eq!(PrecisionContext::new(64).unwrap().bits(), 64);
    }

    #[test]
    fn pi_is_computed_at_context_precision() {
        let lo = PrecisionContext::new(64).unwrap();
        let hi = PrecisionContext::new(256).unwrap();
        assert_eq!(lo.pi().prec(), 64);
        assert_eq!(hi.pi().prec(), 256);
        let d = Float::with_val(256, hi.pi() - lo.pi()).abs();
        assert!(d < 1e-18 && !d.is_zero());
    }

    #[test]
    fn epsilon_tracks_bits() {
        let ctx = PrecisionContext::new(128).unwrap();
        assert_eq!(ctx.epsilon(0), Float::with_val(8, Float::i_exp(1, -128)));
        assert_eq!(ctx.half_epsilon(), Float::with_val(8, Float::i_exp(1, -64)));
        assert_eq!(ctx.doubled().bits(), 256);
    }
}
