use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::{FieldSpec, Ideal, Limits, RingError};
use crate::arith::{factor_biguint, kronecker, primes_up_to, sqrt_mod};

/// How a rational prime decomposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    /// The rational field: `(p)` itself.
    Rational,
    Split,
    Inert,
    Ramified,
}

impl Splitting {
    pub fn as_str(&self) -> &'static str {
        match self {
            Splitting::Rational => "rational",
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub under: u64,
    pub splitting: Splitting,
    pub ideal: Ideal,
    /// Root `r` of the minimal polynomial of `ω` mod `p` with `𝔭 = (p, ω − r)`;
    /// absent for inert and rational primes.
    root: Option<u64>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> BigInt {
        self.ideal.norm()
    }

    pub fn norm_u128(&self) -> u128 {
        match self.splitting {
            Splitting::Inert => self.under as u128 * self.under as u128,
            _ => self.under as u128,
        }
    }

    pub fn canonical_key(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        self.ideal.canonical_key()
    }

    /// The Galois conjugate prime (itself unless split).
    pub fn conjugate(&self, field: &FieldSpec) -> PrimeIdeal {
        match (self.splitting, self.root) {
            (Splitting::Split, Some(r)) => {
                let (t, _) = field.omega_relation();
                let p = self.under;
                let r2 = ((t as u64 % p) + p - r) % p;
                prime_from_root(p, r2, Splitting::Split)
            }
            _ => self.clone(),
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ideal)
    }
}

fn prime_from_root(p: u64, r: u64, splitting: Splitting) -> PrimeIdeal {
    let v = (p - r % p) % p;
    PrimeIdeal {
        under: p,
        splitting,
        ideal: Ideal::from_parts_unchecked(BigInt::from(p), BigInt::from(v), BigInt::one()),
        root: Some(r),
    }
}

/// Roots of `X² − T·X − N` mod `p`, ascending and deduplicated.
fn omega_roots(field: &FieldSpec, p: u64) -> Vec<u64> {
    let (t, n) = field.omega_relation();
    let pi = p as i128;
    let tm = (t as i128).rem_euclid(pi);
    let nm = (n as i128).rem_euclid(pi);
    if p == 2 {
        return (0..2u64)
            .filter(|&r| {
                let r = r as i128;
                (r * r - tm * r - nm).rem_euclid(2) == 0
            })
            .collect();
    }
    let disc = (field.discriminant() as i128).rem_euclid(pi) as u64;
    let Some(s) = sqrt_mod(disc, p) else { return Vec::new() };
    let inv2 = (p as u128).div_ceil(2);
    let half = |x: u128| ((x % p as u128) * inv2 % p as u128) as u64;
    let r1 = half(tm as u128 + s as u128);
    let r2 = half(tm as u128 + p as u128 - s as u128);
    let mut roots = vec![r1, r2];
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// All prime ideals above the rational prime `p`, ordered by canonical key.
pub fn primes_above(field: &FieldSpec, p: u64) -> Vec<PrimeIdeal> {
    if field.is_rational() {
        return vec![PrimeIdeal {
            under: p,
            splitting: Splitting::Rational,
            ideal: Ideal::from_parts_unchecked(BigInt::from(p), BigInt::from(0), BigInt::one()),
            root: None,
        }];
    }
    let mut out = match kronecker(field.discriminant(), p) {
        -1 => vec![PrimeIdeal {
            under: p,
            splitting: Splitting::Inert,
            ideal: Ideal::from_parts_unchecked(BigInt::from(p), BigInt::from(0), BigInt::from(p)),
            root: None,
        }],
        0 => {
            let roots = omega_roots(field, p);
            debug_assert_eq!(roots.len(), 1);
            vec![prime_from_root(p, roots[0], Splitting::Ramified)]
        }
        _ => {
            let roots = omega_roots(field, p);
            debug_assert_eq!(roots.len(), 2);
            roots.into_iter().map(|r| prime_from_root(p, r, Splitting::Split)).collect()
        }
    };
    out.sort_by_key(|q| q.canonical_key());
    out
}

/// Every prime ideal of norm `<= y`, ordered by `(norm, u, v, w)`.
pub fn primes_up_to_norm(field: &FieldSpec, y: u64) -> Vec<PrimeIdeal> {
    let mut out: Vec<PrimeIdeal> = Vec::new();
    for p in primes_up_to(y) {
        for q in primes_above(field, p) {
            if q.norm_u128() <= y as u128 {
                out.push(q);
            }
        }
    }
    out.sort_by_key(|q| q.canonical_key());
    out
}

/// Norms of all prime ideals of norm `<= y`, ascending, with repetition.
pub fn prime_norms_up_to(field: &FieldSpec, y: u64) -> Vec<u64> {
    primes_up_to_norm(field, y).iter().map(|q| q.norm_u128() as u64).collect()
}

/// `∏ 𝔭^ν` with the primes in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealFactorization {
    pub factors: Vec<(PrimeIdeal, u32)>,
}

impl IdealFactorization {
    pub fn product(&self, field: &FieldSpec) -> Ideal {
        self.factors
            .iter()
            .fold(field.unit_ideal(), |acc, (q, e)| field.ideal_mul(&acc, &field.ideal_pow(&q.ideal, *e)))
    }

    pub fn max_norm(&self) -> Option<BigInt> {
        self.factors.iter().map(|(q, _)| q.norm()).max()
    }

    /// Exactly one prime factor attains the maximal norm.
    pub fn is_distinguishable(&self) -> bool {
        match self.max_norm() {
            None => false,
            Some(m) => self.factors.iter().filter(|(q, _)| q.norm() == m).count() == 1,
        }
    }

    /// The unique prime factor of largest norm, with its exponent.
    pub fn p_min(&self) -> Result<(&PrimeIdeal, u32), RingError> {
        if self.factors.is_empty() {
            return Err(RingError::UnitIdeal);
        }
        if !self.is_distinguishable() {
            return Err(RingError::PMinOnIndistinguishable);
        }
        let m = self.max_norm().expect("nonempty");
        let (q, e) = self.factors.iter().find(|(q, _)| q.norm() == m).expect("present");
        Ok((q, *e))
    }

    pub fn exponent_of(&self, p: &PrimeIdeal) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }
}

impl fmt::Display for IdealFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "(1)");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(q, e)| if *e == 1 { q.to_string() } else { format!("{q}^{e}") })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl FieldSpec {
    /// Prime ideal decomposition by repeated exact division.
    pub fn factor_ideal(&self, i: &Ideal, limits: &Limits) -> Result<IdealFactorization, RingError> {
        let norm = i.norm();
        let nu = norm.to_biguint().filter(|n| n.bits() > 0).ok_or(RingError::ZeroIdeal)?;
        let rational = if nu == BigUint::one() {
            Vec::new()
        } else {
            factor_biguint(&nu, limits.factor).ok_or_else(|| RingError::NormTooLargeToFactor(norm.clone()))?
        };
        let mut rest = i.clone();
        let mut factors = Vec::new();
        for (p, _) in rational {
            let bp = BigInt::from(p);
            for q in primes_above(self, p) {
                let conj = match q.splitting {
                    Splitting::Split | Splitting::Ramified => Some(q.conjugate(self)),
                    _ => None,
                };
                let mut e = 0;
                while q.ideal.divides(&rest) {
                    rest = match (&conj, q.splitting) {
                        (_, Splitting::Rational) => Ideal::from_parts_unchecked(
                            rest.u() / &bp,
                            BigInt::from(0),
                            BigInt::one(),
                        ),
                        (None, _) => rest.divide_by_integer(&bp),
                        (Some(c), _) => self.ideal_mul(&rest, &c.ideal).divide_by_integer(&bp),
                    };
                    e += 1;
                }
                if e > 0 {
                    factors.push((q, e));
                }
            }
        }
        debug_assert!(rest.is_unit(), "leftover {rest}");
        factors.sort_by_key(|(q, _)| q.canonical_key());
        Ok(IdealFactorization { factors })
    }

    pub fn is_distinguishable(&self, i: &Ideal, limits: &Limits) -> Result<bool, RingError> {
        if i.is_unit() {
            return Err(RingError::UnitIdeal);
        }
        Ok(self.factor_ideal(i, limits)?.is_distinguishable())
    }

    pub fn p_min(&self, i: &Ideal, limits: &Limits) -> Result<PrimeIdeal, RingError> {
        if i.is_unit() {
            return Err(RingError::UnitIdeal);
        }
        Ok(self.factor_ideal(i, limits)?.p_min()?.0.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingElement;

    #[test]
    fn rational_factorization() {
        let q = FieldSpec::rational();
        let f = q.factor_ideal(&q.ideal_of_integer(12).unwrap(), &Limits::default()).unwrap();
        let shape: Vec<_> = f.factors.iter().map(|(p, e)| (p.under, *e)).collect();
        assert_eq!(shape, vec![(2, 2), (3, 1)]);
        assert!(f.is_distinguishable());
        assert_eq!(f.p_min().unwrap().0.under, 3);
    }

    #[test]
    fn gaussian_five_splits() {
        let g = FieldSpec::quadratic(-1).unwrap();
        let five = g.ideal_of_integer(5).unwrap();
        let f = g.factor_ideal(&five, &Limits::default()).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(f.factors.iter().all(|(p, e)| p.norm() == BigInt::from(5) && *e == 1));
        assert_eq!(f.product(&g), five);
        assert!(!f.is_distinguishable());
        assert_eq!(f.p_min().unwrap_err(), RingError::PMinOnIndistinguishable);
    }

    #[test]
    fn ramified_two_in_minus_five() {
        let k = FieldSpec::quadratic(-5).unwrap();
        let two = k.ideal_of_integer(2).unwrap();
        let f = k.factor_ideal(&two, &Limits::default()).unwrap();
        assert_eq!(f.factors.len(), 1);
        let (p, e) = &f.factors[0];
        assert_eq!(*e, 2);
        assert_eq!(p.splitting, Splitting::Ramified);
        let expect = k.ideal_from_generators(&[RingElement::int(2), RingElement::new(1, 1)]).unwrap();
        assert_eq!(p.ideal, expect);
        assert_eq!(k.ideal_mul(&p.ideal, &p.ideal), two);
    }

    #[test]
    fn distinguishable_mixed_product() {
        let g = FieldSpec::quadratic(-1).unwrap();
        let i = g.ideal_mul(&g.ideal_of_integer(3).unwrap(), &g.principal(&RingElement::new(1, 1)).unwrap());
        let pm = g.p_min(&i, &Limits::default()).unwrap();
        assert_eq!(pm.ideal, g.ideal_of_integer(3).unwrap());
        assert_eq!(pm.norm(), BigInt::from(9));
        assert_eq!(g.p_min(&g.unit_ideal(), &Limits::default()).unwrap_err(), RingError::UnitIdeal);
    }

    #[test]
    fn small_prime_lists() {
        let norms = prime_norms_up_to(&FieldSpec::rational(), 10);
        assert_eq!(norms, vec![2, 3, 5, 7]);
        let g = FieldSpec::quadratic(-1).unwrap();
        let ps = primes_up_to_norm(&g, 5);
        let shape: Vec<_> = ps.iter().map(|p| (p.norm_u128(), p.splitting)).collect();
        assert_eq!(
            shape,
            vec![(2, Splitting::Ramified), (5, Splitting::Split), (5, Splitting::Split)]
        );
        assert!(primes_up_to_norm(&g, 1).is_empty());
        assert_eq!(ps[1].conjugate(&g), ps[2]);
    }

    #[test]
    fn splitting_reconstructs_p() {
        for d in [-1i64, -5, 5, 2, -3] {
            let k = FieldSpec::quadratic(d).unwrap();
            for p in primes_up_to(200) {
                let prod = primes_above(&k, p).iter().fold(k.unit_ideal(), |acc, q| {
                    let e = if q.splitting == Splitting::Ramified { 2 } else { 1 };
                    k.ideal_mul(&acc, &k.ideal_pow(&q.ideal, e))
                });
                assert_eq!(prod, k.ideal_of_integer(p).unwrap(), "d={d} p={p}");
            }
        }
    }
}
