//! Independent reference computations. Nothing here calls the engine code
//! paths it is used to check.

use std::collections::HashMap;

use coverdist::{CoveringInstance, FieldSpec, Ideal, RingElement};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A measure as integer numerators over one common denominator.
pub struct Scaled {
    pub den: BigInt,
    pub num: Vec<BigInt>,
}

impl Scaled {
    pub fn new(mass: &[BigRational]) -> Self {
        let den = mass.iter().fold(BigInt::one(), |l, m| l.lcm(m.denom()));
        let num = mass.iter().map(|m| m.numer() * (&den / m.denom())).collect();
        Scaled { den, num }
    }

    pub fn mass(&self, set: impl Iterator<Item = usize>) -> BigRational {
        let s: BigInt = set.map(|x| &self.num[x]).sum();
        BigRational::new(s, self.den.clone())
    }
}

/// Residues grouped by `x mod J`, by direct reduction.
pub struct Fibers {
    pub members: Vec<Vec<usize>>,
}

impl Fibers {
    pub fn of(points: &[RingElement], modulus: &Ideal) -> Self {
        let mut ids: HashMap<RingElement, usize> = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (x, p) in points.iter().enumerate() {
            let key = modulus.reduce(p);
            let next = ids.len();
            let id = *ids.entry(key).or_insert(next);
            if id == members.len() {
                members.push(Vec::new());
            }
            members[id].push(x);
        }
        Fibers { members }
    }
}

/// All residues mod `Q`, in the instance's own order.
pub fn points(inst: &CoveringInstance, n: usize) -> Vec<RingElement> {
    (0..n).map(|i| inst.residue_at(i)).collect()
}

/// Each point is covered iff some class contains it (membership test only).
pub fn covered(inst: &CoveringInstance, pts: &[RingElement]) -> Vec<bool> {
    pts.iter().map(|x| inst.classes().iter().any(|c| c.modulus.in_class(x, &c.residue))).collect()
}

/// `B_j`: points in a class whose largest-norm prime factor is `𝔭_j`.
pub fn targets(inst: &CoveringInstance, pts: &[RingElement]) -> Vec<Vec<bool>> {
    let f = inst.field();
    let depth = inst.depth();
    let mut out = vec![vec![false; pts.len()]; depth + 1];
    for c in inst.classes() {
        let fac = f.factor_ideal(&c.modulus, inst.limits()).unwrap();
        let top = fac.factors.iter().map(|(p, _)| p.norm()).max().unwrap();
        let tops: Vec<_> = fac.factors.iter().filter(|(p, _)| p.norm() == top).collect();
        assert_eq!(tops.len(), 1, "instance modulus must be distinguishable");
        let j = (1..=depth).find(|&j| inst.prime(j).ideal == tops[0].0.ideal).unwrap();
        for (x, p) in pts.iter().enumerate() {
            if c.modulus.in_class(p, &c.residue) {
                out[j][x] = true;
            }
        }
    }
    out
}

/// Prime-power divisors combined: every ideal dividing `Q`.
pub fn divisors(inst: &CoveringInstance) -> Vec<Ideal> {
    let f = inst.field();
    let mut out = vec![f.unit_ideal()];
    for (p, e) in inst.primes() {
        let mut next = Vec::new();
        for d in &out {
            let mut cur = d.clone();
            for _ in 0..*e {
                cur = f.ideal_mul(&cur, &p.ideal);
                next.push(cur.clone());
            }
        }
        out.extend(next);
    }
    out
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn min_contribution(m1: &BigRational, m2: &BigRational, d: &BigRational) -> BigRational {
    if d.is_zero() {
        return m1.clone();
    }
    let b = m2 / (rat(4, 1) * d * (BigRational::one() - d));
    if &b < m1 {
        b
    } else {
        m1.clone()
    }
}

// ---- rational primes ----

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let (mut r, mut b) = (1u128, b as u128 % m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// Number of prime ideals of norm `p` above an odd `p ∤ D` (Euler's
/// criterion on `D`), or for `p | D`, one ramified prime.
pub fn degree_one_count(disc: i64, p: u64) -> u32 {
    if disc == 1 {
        return 1;
    }
    if p == 2 {
        return match disc.rem_euclid(8) {
            0 | 4 => 1,
            1 => 2,
            5 => 0,
            _ => 1,
        };
    }
    let r = disc.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 1;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        2
    } else {
        0
    }
}

pub fn disc_of(field: &FieldSpec) -> i64 {
    if field.is_rational() {
        1
    } else {
        let d = field.d();
        if d.rem_euclid(4) == 1 {
            d
        } else {
            4 * d
        }
    }
}

/// Plain sieve of Eratosthenes.
pub fn sieve(n: usize) -> Vec<u64> {
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= n {
                comp[k] = true;
                k += i;
            }
        }
    }
    out
}

/// Sorted prime-ideal norms `<= n`.
pub fn prime_norms(field: &FieldSpec, n: u64) -> Vec<u64> {
    let disc = disc_of(field);
    let mut out = Vec::new();
    for p in sieve(n as usize) {
        match degree_one_count(disc, p) {
            0 => {
                if p * p <= n {
                    out.push(p * p)
                }
            }
            k => out.extend(std::iter::repeat_n(p, k as usize)),
        }
    }
    out.sort_unstable();
    out
}

/// Segmented odd-only sieve calling `f(p)` for primes in `[2, hi]`.
pub fn each_prime(hi: u64, mut f: impl FnMut(u64)) {
    if hi >= 2 {
        f(2);
    }
    let root = (hi as f64).sqrt() as u64 + 1;
    let small: Vec<u64> = sieve(root as usize).into_iter().filter(|&p| p > 2).collect();
    const SEG: u64 = 1 << 20;
    let mut lo = 3u64;
    let mut seg = vec![0u8; (SEG / 2) as usize];
    while lo <= hi {
        let top = (lo + SEG - 1).min(hi);
        let len = ((top - lo) / 2 + 1) as usize;
        seg[..len].fill(0);
        for &p in &small {
            if p * p > top {
                break;
            }
            let mut start = (lo.div_ceil(p) * p).max(p * p);
            if start % 2 == 0 {
                start += p;
            }
            let mut k = start;
            while k <= top {
                seg[((k - lo) / 2) as usize] = 1;
                k += 2 * p;
            }
        }
        for (i, &c) in seg[..len].iter().enumerate() {
            if c == 0 {
                f(lo + 2 * i as u64);
            }
        }
        lo = top + 1;
        if lo % 2 == 0 {
            lo += 1;
        }
    }
}

/// Natural log of a positive rational, to about 15 digits.
pub fn ln_rational(x: &BigRational) -> f64 {
    ln_int(x.numer()) - ln_int(x.denom())
}

pub fn ln_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Rational bracket `[lo, hi]` for `√n`, `digits` decimal digits.
pub fn sqrt_bracket(n: u64, digits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::from(10u8).pow(digits);
    let r = (BigInt::from(n) * &scale * &scale).sqrt();
    (BigRational::new(r.clone(), scale.clone()), BigRational::new(r + 1, scale))
}

/// `(T, N)` with `ω² = Tω + N`, from the standard integral basis.
pub fn omega_relation(field: &FieldSpec) -> (i64, i64) {
    let d = field.d();
    if field.is_rational() {
        (0, 0)
    } else if d.rem_euclid(4) == 1 {
        (1, (d - 1) / 4)
    } else {
        (0, d)
    }
}
