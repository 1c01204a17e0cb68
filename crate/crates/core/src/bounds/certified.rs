//! Floating-point arithmetic with certified rounding direction.
//!
//! IEEE-754 `+ − × ÷ √` are correctly rounded, and the rounding error of each
//! is exactly recoverable (TwoSum, FMA residuals). Every helper inspects that
//! error and steps one ulp in the requested direction only when the rounded
//! result lies on the wrong side, so results are tight and always valid
//! bounds. Every finite `f64` is a dyadic rational, so results convert to
//! [`BigRational`] without loss.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Error of `a + b`: `(s, e)` with `s = fl(a + b)` and `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

/// `a / b` rounded up, for `b > 0`.
#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    debug_assert!(b > 0.0);
    let q = a / b;
    // a − q·b is exact; positive means q < a/b
    if (-q).mul_add(b, a) > 0.0 {
        q.next_up()
    } else {
        q
    }
}

/// `a / b` rounded down, for `b > 0`.
#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    debug_assert!(b > 0.0);
    let q = a / b;
    if (-q).mul_add(b, a) < 0.0 {
        q.next_down()
    } else {
        q
    }
}

/// Largest `f64` not exceeding `√a`.
#[inline]
pub fn sqrt_down(a: f64) -> f64 {
    let s = a.sqrt();
    if s.mul_add(s, -a) > 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// Smallest `f64` not below `√a`.
#[inline]
pub fn sqrt_up(a: f64) -> f64 {
    let s = a.sqrt();
    if s.mul_add(s, -a) < 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Exact value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// A positive number `m · 2^e` with `m ∈ [1, 2)`, for products far outside
/// the `f64` exponent range. Multiplication rounds up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledUp {
    m: f64,
    e: i64,
}

fn split(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let bits = x.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        // subnormal: scale into the normal range first (exact)
        let (m, e) = split(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
    (m, raw - 1023)
}

impl ScaledUp {
    pub fn one() -> Self {
        ScaledUp { m: 1.0, e: 0 }
    }

    pub fn from_f64(x: f64) -> Self {
        let (m, e) = split(x);
        ScaledUp { m, e }
    }

    /// `self · x` rounded up, `x > 0`.
    pub fn mul_up(self, x: f64) -> Self {
        let (xm, xe) = split(x);
        let (m, e) = split(mul_up(self.m, xm));
        ScaledUp { m, e: self.e + xe + e }
    }

    pub fn mul_scaled_up(self, o: ScaledUp) -> Self {
        let (m, e) = split(mul_up(self.m, o.m));
        ScaledUp { m, e: self.e + o.e + e }
    }

    pub fn mantissa(&self) -> f64 {
        self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    /// `log2` estimate (not certified; for reporting only).
    pub fn log2_approx(&self) -> f64 {
        self.e as f64 + self.m.log2()
    }

    pub fn to_rational(&self) -> BigRational {
        let m = f64_to_rational(self.m);
        let p = BigInt::one() << self.e.unsigned_abs();
        if self.e >= 0 {
            m * BigRational::from_integer(p)
        } else {
            m / BigRational::from_integer(p)
        }
    }

    /// Exact comparison with an `f64`.
    pub fn le_f64(&self, x: f64) -> bool {
        if x <= 0.0 {
            return false;
        }
        let (xm, xe) = split(x);
        (self.e, self.m) <= (xe, xm)
    }
}

/// Round a positive rational up to a dyadic `k / 2^bits · 2^shift` with about
/// `bits` significant bits. Keeps exact verifiers from carrying huge
/// denominators.
pub fn round_up_dyadic(x: &BigRational, bits: u64) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    let (n, d) = (x.numer(), x.denom());
    let shift = bits as i64 - (n.bits() as i64 - d.bits() as i64);
    let scaled = if shift >= 0 {
        BigRational::new(n << shift as u64, d.clone())
    } else {
        BigRational::new(n.clone(), d << (-shift) as u64)
    };
    let k = scaled.ceil().to_integer();
    if shift >= 0 {
        BigRational::new(k, BigInt::one() << shift as u64)
    } else {
        BigRational::from_integer(k << (-shift) as u64)
    }
}

/// A rational lower bound on `√n` with `bits` fractional bits.
pub fn sqrt_lower_rational(n: &BigInt, bits: u64) -> BigRational {
    let r = (n << (2 * bits)).sqrt();
    BigRational::new(r, BigInt::one() << bits)
}

/// `f64` value of a rational, for reporting only (may overflow to infinity).
pub fn approx(x: &BigRational) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    let (nb, db) = (n.bits().saturating_sub(62), d.bits().saturating_sub(62));
    let nf = (n >> nb).to_f64().unwrap_or(f64::NAN);
    let df = (d >> db).to_f64().unwrap_or(f64::NAN);
    (nf / df) * 2f64.powi((nb as i64 - db as i64).clamp(-100_000, 100_000) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(x: f64) -> BigRational {
        f64_to_rational(x)
    }

    #[test]
    fn directed_ops_bracket_exact_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20_000 {
            let a: f64 = rng.gen_range(1e-3..1e6);
            let b: f64 = rng.gen_range(1e-3..1e6);
            let (qa, qb) = (q(a), q(b));
            assert!(q(add_up(a, b)) >= &qa + &qb && q(add_down(a, b)) <= &qa + &qb);
            assert!(q(sub_up(a, b)) >= &qa - &qb && q(sub_down(a, b)) <= &qa - &qb);
            assert!(q(mul_up(a, b)) >= &qa * &qb && q(mul_down(a, b)) <= &qa * &qb);
            assert!(q(div_up(a, b)) >= &qa / &qb && q(div_down(a, b)) <= &qa / &qb);
            let sd = q(sqrt_down(a));
            let su = q(sqrt_up(a));
            assert!(&sd * &sd <= qa && &su * &su >= qa);
        }
    }

    #[test]
    fn exact_results_are_not_bumped() {
        assert_eq!(div_up(1.0, 2.0), 0.5);
        assert_eq!(mul_up(3.0, 0.5), 1.5);
        assert_eq!(sqrt_down(4.0), 2.0);
        assert_eq!(add_up(1.0, 2.0), 3.0);
    }

    #[test]
    fn scaled_products() {
        let mut s = ScaledUp::one();
        let mut exact = BigRational::one();
        for k in 1..2000 {
            let x = 1.0 + 1.0 / k as f64;
            s = s.mul_up(x);
            exact *= q(x);
        }
        assert!(s.to_rational() >= exact);
        let big = (0..3000).fold(ScaledUp::one(), |acc, _| acc.mul_up(1e10));
        assert!(big.exponent() > 90_000);
    }

    #[test]
    fn dyadic_rounding_is_upward() {
        let x = BigRational::new(BigInt::from(1), BigInt::from(3));
        let r = round_up_dyadic(&x, 20);
        assert!(r >= x && r - &x < BigRational::new(BigInt::one(), BigInt::from(1u64 << 20)));
        let l = sqrt_lower_rational(&BigInt::from(2), 40);
        assert!(&l * &l <= BigRational::from_integer(BigInt::from(2)));
    }
}
