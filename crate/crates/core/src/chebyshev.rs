//! Chebyshev polynomials of the first kind and their zeros.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::context::PrecisionContext;

/// Above this modulus `T_n(z)` is evaluated as `(uⁿ + u⁻ⁿ)/2` instead of by
/// the three-term recurrence, whose cancellation grows with `|z|`.
pub const RECURRENCE_RADIUS: f64 = 2.0;

/// The exterior inverse of the Joukowski map: the root `u` of
/// `z = (u + u⁻¹)/2` with `|u| ≥ 1`, i.e. `u = z + √(z²−1)` with the branch
/// of the square root chosen so that `|z + √(z²−1)| ≥ 1`.
///
/// Every multivalued expression in the crate is resolved through this map.
pub fn exterior_map(z: &Complex, ctx: &PrecisionContext) -> Complex {
    let root = sqrt_z2_minus_1(z, ctx);
    let plus = ctx.complex(z + &root);
    if plus.clone().abs().real() >= &1 {
        plus
    } else {
        ctx.complex(z - &root)
    }
}

/// `√(z²−1)` on the exterior branch, i.e. `(u − u⁻¹)/2` with `u = exterior_map(z)`.
pub fn exterior_sqrt(z: &Complex, ctx: &PrecisionContext) -> Complex {
    let u = exterior_map(z, ctx);
    let inv = ctx.complex(u.recip_ref());
    ctx.complex(&u - &inv) / 2u32
}

fn sqrt_z2_minus_1(z: &Complex, ctx: &PrecisionContext) -> Complex {
    let z2 = ctx.complex(z.square_ref());
    (z2 - 1u32).sqrt()
}

/// `T_n(z)` for complex `z`.
pub fn chebyshev_t(n: usize, z: &Complex, ctx: &PrecisionContext) -> Complex {
    if n == 0 {
        return ctx.complex(1);
    }
    let modulus = ctx.complex(z.abs_ref());
    if modulus.real() <= &RECURRENCE_RADIUS {
        let mut prev = ctx.complex(1);
        let mut cur = z.clone();
        let two_z = ctx.complex(z * 2u32);
        for _ in 1..n {
            let next = ctx.complex(&two_z * &cur) - &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    } else {
        let u = exterior_map(z, ctx);
        joukowski_power(&u, n, ctx)
    }
}

/// `(uⁿ + u⁻ⁿ)/2`.
pub fn joukowski_power(u: &Complex, n: usize, ctx: &PrecisionContext) -> Complex {
    let un = ctx.complex(u.pow(n as u32));
    let inv = ctx.complex(un.recip_ref());
    (un + inv) / 2u32
}

/// `T_n(x)` for real `x`.
pub fn chebyshev_t_real(n: usize, x: &Float, ctx: &PrecisionContext) -> Float {
    if n == 0 {
        return ctx.real(1);
    }
    if x.clone().abs() <= RECURRENCE_RADIUS {
        let mut prev = ctx.real(1);
        let mut cur = ctx.real(x);
        let two_x = ctx.real(x * 2u32);
        for _ in 1..n {
            let next = ctx.real(&two_x * &cur) - &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    } else {
        // u = x + sign(x)·√(x²−1) has |u| > 1.
        let root = (ctx.real(x.square_ref()) - 1u32).sqrt();
        let u = if x.is_sign_negative() {
            ctx.real(x - root)
        } else {
            ctx.real(x + root)
        };
        let un = ctx.real(u.pow(n as u32));
        let inv = ctx.real(un.recip_ref());
        (un + inv) / 2u32
    }
}

/// Zeros `ξ_ν = cos((2ν−1)π/(2n))` of `T_n`, `ν = 1..n`, in decreasing order.
pub fn chebyshev_nodes(n: usize, ctx: &PrecisionContext) -> Vec<Float> {
    let pi = ctx.pi();
    (1..=n)
        .map(|nu| {
            let angle = ctx.real(&pi * (2 * nu as u64 - 1)) / (2 * n as u64);
            let node = angle.cos();
            // The middle node of an odd rule is exactly zero.
            if 2 * nu - 1 == n {
                ctx.zero()
            } else {
                node
            }
        })
        .collect()
}

/// Power-basis coefficients of `T_k`, lowest degree first.
pub fn chebyshev_power_coefficients(k: usize) -> Vec<rug::Integer> {
    use rug::Integer;
    let mut prev = vec![Integer::from(1)];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![Integer::new(), Integer::from(1)];
    for _ in 1..k {
        let mut next = vec![Integer::new(); cur.len() + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] += Integer::from(c * 2u32);
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}
