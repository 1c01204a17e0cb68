//! The effective minimum-norm bound.
//!
//! With `δ_j = 0` for `N𝔭_j <= y` and `δ_j = 1/2` above, `η <= η₁ + η₂`
//! where
//!
//! * `η₁ <= W(y)·s·x^{−1/2}` (Rankin's trick; `x` below the smallest norm),
//! * `η₂ <= s²·Σ_{N𝔭 > y} G(N𝔭⁻)/(N𝔭 − 1)²` with `G` the second-moment
//!   prefix product.
//!
//! The η₂ tail past a cutoff `Z = 2^m <= y` is bounded in closed form from
//! `G(Z)` using three classical explicit inequalities for rational primes
//! (`x > 1`):
//!
//! * `Σ_{p<=x} 1/p < log log x + B + 1/log² x`,
//! * `Σ_{p<=x} 1/p > log log x + B − 1/(2 log² x)`,
//! * `π(x) < 1.25506·x/log x`,
//!
//! together with `(6q−2)/(q−1)² <= κ/q` for `q > Z`, `κ = 6/(1−1/Z)²`,
//! `(log t/log Z)^k <= (t/Z)^{k/log Z}`, at most `c` primes of norm `p` and
//! one of norm `p²` above each `p`, and partial summation. Writing
//! `L = log Z`, `k = cκ`, `β = k/L < 1`, `ι = 1/⌊√Z⌋` (quadratic only) and
//! `X = κ(1.5c/L² + ι) < 1`:
//!
//! ```text
//! T(Z) <= K0·[c·1.25506·(2−β)/((1−β)·Z·L) + 1/⌊√Z⌋³],   K0 = G(Z)/((1−X)(1−1/Z)²)
//! ```
//!
//! (the cube term only for quadratic fields). Only `log Z = m·log 2` is
//! needed, and it is replaced by a rational lower bound, so the bound is
//! exactly checkable from its stored inputs.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::certified::{
    add_up, div_up, f64_to_rational, mul_down, mul_up, sub_down, sub_up,
};
use super::sweep::{Snapshot, Sweep};
use super::BoundError;
use crate::ring::FieldSpec;

/// An `f64` strictly below `log 2` (the nearest double happens to round down).
pub const LN2_LOW: f64 = std::f64::consts::LN_2;
/// Rational lower bound on `log 2` used by the exact verifier; it is `>= LN2_LOW`.
pub const LN2_LOW_RATIONAL: (u64, u64) = (693_147_180_559_945_309, 1_000_000_000_000_000_000);
/// The Chebyshev-type constant in `π(x) < A·x/log x`, as `num/den`.
pub const CHEBYSHEV_A: (u64, u64) = (125_506, 100_000);
/// Upper bound on the Mertens constant `B = 0.26149721284764278…`.
pub const MERTENS_B_UP: f64 = 0.261497212847643;
/// Upper bound on `Σ_p 1/p² = 0.45224742004106549…`.
pub const PRIME_ZETA_2_UP: f64 = 0.45224742004107;

fn chebyshev_a_up() -> f64 {
    let a = 1.25506f64;
    let exact = BigRational::new(BigInt::from(CHEBYSHEV_A.0), BigInt::from(CHEBYSHEV_A.1));
    if f64_to_rational(a) >= exact {
        a
    } else {
        a.next_up()
    }
}

fn ln2_low_rational() -> BigRational {
    BigRational::new(BigInt::from(LN2_LOW_RATIONAL.0), BigInt::from(LN2_LOW_RATIONAL.1))
}

/// Search parameters. Cutoffs are powers of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundConfig {
    /// Smallest tail cutoff `y_min = 2^y_min_log2`.
    pub y_min_log2: u32,
    /// Give up when `y` would exceed `2^max_y_log2`.
    pub max_y_log2: u32,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig { y_min_log2: 20, max_y_log2: 36 }
    }
}

/// The closed-form η₂ tail bound at `Z = 2^z_log2`, every field rounded in
/// the safe direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    pub z_log2: u32,
    pub c: u32,
    pub g: f64,
    pub log_z_low: f64,
    pub kappa: f64,
    pub beta: f64,
    pub iota: f64,
    pub x_term: f64,
    pub k0: f64,
    pub t: f64,
}

fn isqrt_pow2(m: u32) -> u64 {
    let z = 1u128 << m;
    let mut r = (z as f64).sqrt() as u128;
    while r * r > z {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= z {
        r += 1;
    }
    r as u64
}

impl TailBound {
    /// `None` unless `β < 1` and `X < 1` (the cutoff is too small).
    pub fn compute(z_log2: u32, c: u32, g: f64) -> Option<TailBound> {
        if !(9..=62).contains(&z_log2) {
            return None;
        }
        let zf = 2f64.powi(z_log2 as i32);
        let l = mul_down(z_log2 as f64, LN2_LOW);
        let omz = sub_down(1.0, 1.0 / zf);
        let omz2 = mul_down(omz, omz);
        let kappa = div_up(6.0, omz2);
        let k = kappa * c as f64;
        let beta = div_up(k, l);
        if beta >= 1.0 {
            return None;
        }
        let m = isqrt_pow2(z_log2) as f64;
        let iota = if c == 2 { div_up(1.0, m) } else { 0.0 };
        let x_term = mul_up(kappa, add_up(div_up(1.5 * c as f64, mul_down(l, l)), iota));
        if x_term >= 1.0 {
            return None;
        }
        let e = div_up(1.0, sub_down(1.0, x_term));
        let k0 = div_up(mul_up(g, e), omz2);
        let num = mul_up(c as f64 * chebyshev_a_up(), sub_up(2.0, beta));
        let den = mul_down(mul_down(sub_down(1.0, beta), zf), l);
        let mut bracket = div_up(num, den);
        if c == 2 {
            bracket = add_up(bracket, div_up(1.0, m * m * m));
        }
        let t = mul_up(k0, bracket);
        Some(TailBound { z_log2, c, g, log_z_low: l, kappa, beta, iota, x_term, k0, t })
    }

    /// The same bound evaluated in exact rational arithmetic from `g`.
    pub fn exact_t(z_log2: u32, c: u32, g: &BigRational) -> Option<BigRational> {
        let one = BigRational::one();
        let q = |n: u64| BigRational::from_integer(BigInt::from(n));
        let z = BigRational::from_integer(BigInt::one() << z_log2);
        let l = q(z_log2 as u64) * ln2_low_rational();
        let omz = &one - z.recip();
        let omz2 = &omz * &omz;
        let kappa = q(6) / &omz2;
        let cq = q(c as u64);
        let beta = &cq * &kappa / &l;
        if beta >= one {
            return None;
        }
        let m = q(isqrt_pow2(z_log2));
        let iota = if c == 2 { m.recip() } else { BigRational::zero() };
        let x_term = &kappa * (q(3) * &cq / (q(2) * &l * &l) + iota);
        if x_term >= one {
            return None;
        }
        let k0 = g / ((&one - x_term) * &omz2);
        let a = BigRational::new(BigInt::from(CHEBYSHEV_A.0), BigInt::from(CHEBYSHEV_A.1));
        let mut bracket = &cq * a * (q(2) - &beta) / ((&one - &beta) * &z * &l);
        if c == 2 {
            bracket += (&m * &m * &m).recip();
        }
        Some(k0 * bracket)
    }
}

/// Certificate that every covering system of the field with multiplicity
/// `<= s` and distinguishable moduli has a modulus of norm `<= x`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCertificate {
    pub field: FieldSpec,
    pub s: usize,
    pub y: u64,
    pub config: BoundConfig,
    pub tail: TailBound,
    pub g_major: BigRational,
    pub t_major: BigRational,
    pub eta2_major: BigRational,
    pub w_major: BigRational,
    /// Number of prime ideals of norm `<= y` in the `W` product.
    pub prime_count: u64,
    pub sqrt_x_log2: u64,
    pub x: BigInt,
    pub eta1_major: BigRational,
}

impl BoundCertificate {
    pub fn summary(&self) -> String {
        format!("min norm ≤ 2^{}", 2 * self.sqrt_x_log2)
    }

    /// Re-derive every inequality from the stored numbers.
    pub fn verify(&self) -> Result<(), String> {
        let one = BigRational::one();
        let c = if self.field.is_rational() { 1 } else { 2 };
        if self.tail.c != c {
            return Err("prime multiplicity constant does not match the field".into());
        }
        if self.tail.z_log2 < self.config.y_min_log2 || (1u128 << self.tail.z_log2) > self.y as u128 {
            return Err("tail cutoff outside [y_min, y]".into());
        }
        if f64_to_rational(self.tail.g) != self.g_major {
            return Err("stored G disagrees with the tail record".into());
        }
        let t = TailBound::exact_t(self.tail.z_log2, c, &self.g_major)
            .ok_or("tail bound preconditions fail at this cutoff")?;
        if t > self.t_major {
            return Err(format!("exact tail {} exceeds stored {}", super::certified::approx(&t), self.tail.t));
        }
        let s = BigRational::from_integer(BigInt::from(self.s));
        if self.eta2_major != &s * &s * &self.t_major {
            return Err("η₂ majorant is not s²·T".into());
        }
        let root = BigInt::one() << self.sqrt_x_log2;
        if self.x != &root * &root {
            return Err("x is not the stored square".into());
        }
        let eta1 = &self.w_major * &s / BigRational::from_integer(root.clone());
        if eta1 != self.eta1_major {
            return Err("η₁ majorant is not W·s/√x".into());
        }
        if &self.eta1_major + &self.eta2_major >= one {
            return Err("η₁ + η₂ >= 1".into());
        }
        let slack = &one - &self.eta2_major;
        let lhs = &self.w_major * &self.w_major * &s * &s;
        let rhs = BigRational::from_integer(self.x.clone()) * &slack * &slack;
        if !(lhs < rhs) || !slack.is_positive() {
            return Err("squared comparison W²s² < x(1−η₂)² fails".into());
        }
        Ok(())
    }
}

impl fmt::Display for BoundCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: s = {}, y = 2^{}, {}", self.field, self.s, self.y.trailing_zeros(), self.summary())
    }
}

/// Caches one sweep per field so that several `s` share the prime work.
#[derive(Clone, Debug)]
pub struct BoundEngine {
    field: FieldSpec,
    config: BoundConfig,
    sweep: Sweep,
}

impl BoundEngine {
    pub fn new(field: &FieldSpec, config: BoundConfig) -> Self {
        BoundEngine { field: field.clone(), config, sweep: Sweep::new(field) }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn config(&self) -> &BoundConfig {
        &self.config
    }

    fn c(&self) -> u32 {
        if self.field.is_rational() {
            1
        } else {
            2
        }
    }

    fn grid_upto(&self, y: u64) -> Vec<u64> {
        (self.config.y_min_log2..64).map(|m| 1u64 << m).take_while(|&z| z <= y).collect()
    }

    /// Snapshot at `z`, extending (or restarting) the sweep as needed.
    pub fn snapshot(&mut self, z: u64) -> Snapshot {
        if let Some(s) = self.sweep.snapshot(z) {
            return *s;
        }
        let mut pts = self.grid_upto(z);
        pts.push(z);
        pts.retain(|p| self.sweep.snapshot(*p).is_none());
        if pts.iter().any(|&p| p < self.sweep.reached()) {
            self.sweep = Sweep::new(&self.field);
            pts = self.grid_upto(z);
            pts.push(z);
        }
        self.sweep.extend(&pts);
        *self.sweep.snapshot(z).expect("recorded")
    }

    /// Upper bound on `W(y) = ∏_{N𝔭 <= y} (1 − N𝔭^{−1/2})^{−1}`.
    pub fn rankin_w(&mut self, y: u64) -> BigRational {
        if y < 2 {
            return BigRational::one();
        }
        self.snapshot(y).w.to_rational()
    }

    pub fn tail(&mut self, z_log2: u32) -> Result<TailBound, BoundError> {
        let z = 1u64 << z_log2;
        let g = self.snapshot(z).g;
        // exact: a power-of-two scaling inside the normal range
        let gf = g.mantissa() * 2f64.powi(g.exponent() as i32);
        if !gf.is_finite() || g.exponent() > 1000 {
            return Err(BoundError::SearchBudgetExceeded("G overflow".into()));
        }
        TailBound::compute(z_log2, self.c(), gf)
            .ok_or(BoundError::YTooSmall { y: BigInt::from(z), y_min: 1 << self.config.y_min_log2 })
    }

    /// `s²·T(Z)` minimized over grid cutoffs `y_min <= Z <= y`.
    pub fn eta2_major(&mut self, s: usize, y: u64) -> Result<(BigRational, TailBound), BoundError> {
        let grid = self.grid_upto(y);
        if grid.is_empty() {
            return Err(BoundError::YTooSmall { y: BigInt::from(y), y_min: 1 << self.config.y_min_log2 });
        }
        self.snapshot(y);
        let mut best: Option<TailBound> = None;
        for z in grid {
            if let Ok(t) = self.tail(z.trailing_zeros()) {
                if best.is_none_or(|b| t.t < b.t) {
                    best = Some(t);
                }
            }
        }
        let best = best.ok_or(BoundError::YTooSmall { y: BigInt::from(y), y_min: 1 << self.config.y_min_log2 })?;
        let s = BigRational::from_integer(BigInt::from(s));
        Ok((&s * &s * f64_to_rational(best.t), best))
    }

    /// `W(y)·s/√x` for a perfect square `x >= 4`.
    pub fn eta1_major(&mut self, s: usize, y: u64, x: &BigInt) -> Result<BigRational, BoundError> {
        let root = x.sqrt();
        if x < &BigInt::from(4) || &(&root * &root) != x {
            return Err(BoundError::XNotPerfectSquare(x.clone()));
        }
        Ok(self.rankin_w(y) * BigRational::from_integer(BigInt::from(s)) / BigRational::from_integer(root))
    }

    /// Doubling search for `y` with `η₂ < 1/2`, then the least `x = 4^k`
    /// with `η₁ < 1 − η₂`.
    pub fn effective_bound(&mut self, s: usize) -> Result<BoundCertificate, BoundError> {
        if s == 0 {
            return Err(BoundError::BadMultiplicity);
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let s3 = (s as u128).pow(3);
        let mut y = (1u128 << self.config.y_min_log2).max(s3);
        let (eta2, tail) = loop {
            if y > 1u128 << self.config.max_y_log2 {
                return Err(BoundError::SearchBudgetExceeded(format!(
                    "no y <= 2^{} gives η₂ < 1/2",
                    self.config.max_y_log2
                )));
            }
            let (eta2, tail) = self.eta2_major(s, y as u64)?;
            if eta2 < half {
                break (eta2, tail);
            }
            y *= 2;
        };
        let y = y as u64;
        let snap = self.snapshot(y);
        let w = snap.w.to_rational();
        let sq = BigRational::from_integer(BigInt::from(s));
        let ratio = &w * &sq / (BigRational::one() - &eta2);
        // least k with 2^k > ratio
        let mut k = (ratio.numer().bits() as i64 - ratio.denom().bits() as i64).max(1) as u64;
        let pow = |k: u64| BigRational::from_integer(BigInt::one() << k);
        while pow(k) <= ratio {
            k += 1;
        }
        while k > 1 && pow(k - 1) > ratio {
            k -= 1;
        }
        let root = BigInt::one() << k;
        let x = &root * &root;
        let eta1 = &w * &sq / BigRational::from_integer(root);
        let cert = BoundCertificate {
            field: self.field.clone(),
            s,
            y,
            config: self.config,
            tail,
            g_major: f64_to_rational(tail.g),
            t_major: f64_to_rational(tail.t),
            eta2_major: eta2,
            w_major: w,
            prime_count: snap.count,
            sqrt_x_log2: k,
            x,
            eta1_major: eta1,
        };
        cert.verify().map_err(|e| BoundError::SearchBudgetExceeded(format!("internal: {e}")))?;
        Ok(cert)
    }
}

/// One-shot [`BoundEngine::rankin_w`].
pub fn rankin_w(field: &FieldSpec, y: u64) -> BigRational {
    BoundEngine::new(field, BoundConfig::default()).rankin_w(y)
}
