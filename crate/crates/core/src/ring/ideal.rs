use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{floor_div, FieldSpec, Limits, RingElement, RingError};

/// A nonzero integral ideal `u·Z + (v + w·ω)·Z` in Hermite normal form.
///
/// The triple is canonical: `u > 0`, `w > 0`, `0 <= v < u`, `w | u`, `w | v`
/// and `u·w | N(v + w·ω)`. In the rational field `v = 0` and `w = 1`, so the
/// ideal is just `u·Z`. Two ideals are equal iff their triples are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    u: BigInt,
    v: BigInt,
    w: BigInt,
}

impl Ideal {
    pub(crate) fn from_parts_unchecked(u: BigInt, v: BigInt, w: BigInt) -> Self {
        Ideal { u, v, w }
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn w(&self) -> &BigInt {
        &self.w
    }

    pub fn hnf(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.u, &self.v, &self.w)
    }

    /// `[O_K : I] = u·w`.
    pub fn norm(&self) -> BigInt {
        &self.u * &self.w
    }

    pub fn is_unit(&self) -> bool {
        self.u.is_one() && self.w.is_one()
    }

    /// Tie-breaking key for primes of equal norm: `(norm, u, v, w)`.
    pub fn canonical_key(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        (self.norm(), self.u.clone(), self.v.clone(), self.w.clone())
    }

    /// Lattice membership: `w | b` and `a − (b/w)·v ≡ 0 (mod u)`.
    pub fn contains(&self, x: &RingElement) -> bool {
        let (n, r) = x.b.div_rem(&self.w);
        if !r.is_zero() {
            return false;
        }
        (&x.a - n * &self.v).is_multiple_of(&self.u)
    }

    /// `x ≡ a (mod I)`.
    pub fn in_class(&self, x: &RingElement, a: &RingElement) -> bool {
        self.contains(&(x - a))
    }

    /// `self | other`, i.e. `other ⊆ self`.
    pub fn divides(&self, other: &Ideal) -> bool {
        self.contains(&RingElement::int(other.u.clone()))
            && self.contains(&RingElement::new(other.v.clone(), other.w.clone()))
    }

    /// Canonical representative `x + y·ω` with `0 <= x < u`, `0 <= y < w`.
    pub fn reduce(&self, x: &RingElement) -> RingElement {
        let n = floor_div(&x.b, &self.w);
        let y = &x.b - &n * &self.w;
        let a = (&x.a - &n * &self.v).mod_floor(&self.u);
        RingElement { a, b: y }
    }

    /// Position of a canonical residue in the order produced by [`Ideal::residues`].
    pub fn residue_index(&self, reduced: &RingElement) -> BigInt {
        &reduced.b * &self.u + &reduced.a
    }

    /// All `norm(Q)` canonical residues, lexicographic in `(y, x)`.
    pub fn residues(&self, limits: &Limits) -> Result<Residues, RingError> {
        let norm = self.norm();
        match norm.to_u64() {
            Some(n) if n <= limits.max_enum => Ok(Residues {
                u: self.u.to_u64().expect("u <= norm"),
                w: self.w.to_u64().expect("w <= norm"),
                next: 0,
                total: n,
            }),
            _ => Err(RingError::EnumerationTooLarge { norm, limit: limits.max_enum }),
        }
    }

    /// Intersection of lattices, computed in closed form: the `y`-coordinates
    /// of `I ∩ J` are the multiples of `k·lcm(w, w')` for which the two
    /// congruences on `x` are compatible, and `u∩ = lcm(u, u')`.
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        let big_w = self.w.lcm(&other.w);
        let g = self.u.gcd(&other.u);
        let c1 = (&big_w / &self.w) * &self.v;
        let c2 = (&big_w / &other.w) * &other.v;
        let c = &c1 - &c2;
        let k = &g / g.gcd(&c);
        let w = &k * &big_w;
        let r1 = (&k * &c1).mod_floor(&self.u);
        let r2 = (&k * &c2).mod_floor(&other.u);
        let (x0, l) = crt(&r1, &self.u, &r2, &other.u).expect("compatible by choice of k");
        Ideal { u: l, v: x0, w }
    }

    pub(crate) fn divide_by_integer(&self, p: &BigInt) -> Ideal {
        debug_assert!(self.u.is_multiple_of(p) && self.v.is_multiple_of(p) && self.w.is_multiple_of(p));
        Ideal { u: &self.u / p, v: &self.v / p, w: &self.w / p }
    }

    pub(crate) fn generators(&self) -> [RingElement; 2] {
        [RingElement::int(self.u.clone()), RingElement::new(self.v.clone(), self.w.clone())]
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_one() && self.v.is_zero() {
            write!(f, "({})", self.u)
        } else {
            write!(f, "[{}, {}, {}]", self.u, self.v, self.w)
        }
    }
}

/// Iterator over the canonical residues of an ideal.
#[derive(Clone, Debug)]
pub struct Residues {
    u: u64,
    w: u64,
    next: u64,
    total: u64,
}

impl Iterator for Residues {
    type Item = RingElement;

    fn next(&mut self) -> Option<RingElement> {
        if self.next >= self.total {
            return None;
        }
        let (y, x) = (self.next / self.u, self.next % self.u);
        self.next += 1;
        Some(RingElement::new(x, y))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Residues {}

impl Residues {
    pub fn shape(&self) -> (u64, u64) {
        (self.u, self.w)
    }
}

/// Solve `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)`; returns `(x mod l, l)`.
fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    let e = m1.extended_gcd(m2);
    let g = e.gcd;
    let diff = r2 - r1;
    if !diff.is_multiple_of(&g) {
        return None;
    }
    let l = m1 / &g * m2;
    let m2g = m2 / &g;
    let t = ((&diff / &g) * &e.x).mod_floor(&m2g);
    Some(((r1 + m1 * t).mod_floor(&l), l))
}

/// HNF of the full-rank sublattice of `Z²` spanned by `vectors`.
pub(crate) fn hnf_of_lattice(mut vecs: Vec<(BigInt, BigInt)>) -> Option<(BigInt, BigInt, BigInt)> {
    vecs.retain(|(a, b)| !(a.is_zero() && b.is_zero()));
    // Euclid on the second coordinate until one vector carries all of it.
    loop {
        let pivot = vecs
            .iter()
            .enumerate()
            .filter(|(_, (_, b))| !b.is_zero())
            .min_by(|x, y| x.1 .1.abs().cmp(&y.1 .1.abs()))
            .map(|(i, _)| i)?;
        let (pa, pb) = vecs[pivot].clone();
        let mut others = false;
        for (i, (a, b)) in vecs.iter_mut().enumerate() {
            if i == pivot || b.is_zero() {
                continue;
            }
            let q = floor_div(b, &pb);
            *a -= &q * &pa;
            *b -= &q * &pb;
            if !b.is_zero() {
                others = true;
            }
        }
        if !others {
            break;
        }
    }
    let pivot = vecs.iter().position(|(_, b)| !b.is_zero())?;
    let (mut v, mut w) = vecs.swap_remove(pivot);
    if w.is_negative() {
        v = -v;
        w = -w;
    }
    let u = vecs.iter().fold(BigInt::zero(), |g, (a, _)| g.gcd(a));
    if u.is_zero() {
        return None;
    }
    let v = v.mod_floor(&u);
    Some((u, v, w))
}

impl FieldSpec {
    /// Validate a user-supplied HNF triple.
    pub fn ideal_from_hnf(
        &self,
        u: impl Into<BigInt>,
        v: impl Into<BigInt>,
        w: impl Into<BigInt>,
    ) -> Result<Ideal, RingError> {
        let (u, v, w) = (u.into(), v.into(), w.into());
        let bad = |m: &str| Err(RingError::InvalidHnf(format!("({u}, {v}, {w}): {m}")));
        if !u.is_positive() || !w.is_positive() {
            return bad("u and w must be positive");
        }
        if v.is_negative() || v >= u {
            return bad("need 0 <= v < u");
        }
        if self.is_rational() {
            if !v.is_zero() || !w.is_one() {
                return bad("rational ideals have v = 0 and w = 1");
            }
            return Ok(Ideal { u, v, w });
        }
        if !u.is_multiple_of(&w) || !v.is_multiple_of(&w) {
            return bad("w must divide u and v");
        }
        let n = self.element_norm(&RingElement::new(v.clone(), w.clone()));
        if !n.is_multiple_of(&(&u * &w)) {
            return bad("lattice is not closed under multiplication by ω");
        }
        Ok(Ideal { u, v, w })
    }

    /// The ideal generated (as an `O_K`-module) by the given elements.
    pub fn ideal_from_generators(&self, gens: &[RingElement]) -> Result<Ideal, RingError> {
        for g in gens {
            self.check_element(g)?;
        }
        if self.is_rational() {
            let u = gens.iter().fold(BigInt::zero(), |g, x| g.gcd(&x.a));
            if u.is_zero() {
                return Err(RingError::ZeroIdeal);
            }
            return Ok(Ideal { u, v: BigInt::zero(), w: BigInt::one() });
        }
        let omega = self.omega();
        let mut vecs = Vec::with_capacity(gens.len() * 2);
        for g in gens {
            let gw = self.mul(g, &omega);
            vecs.push((g.a.clone(), g.b.clone()));
            vecs.push((gw.a, gw.b));
        }
        let (u, v, w) = hnf_of_lattice(vecs).ok_or(RingError::ZeroIdeal)?;
        Ok(Ideal { u, v, w })
    }

    pub fn principal(&self, x: &RingElement) -> Result<Ideal, RingError> {
        self.ideal_from_generators(std::slice::from_ref(x))
    }

    /// `(n)` for a nonzero rational integer `n`.
    pub fn ideal_of_integer(&self, n: impl Into<BigInt>) -> Result<Ideal, RingError> {
        self.principal(&RingElement::int(n))
    }

    pub fn unit_ideal(&self) -> Ideal {
        let w = BigInt::one();
        Ideal { u: BigInt::one(), v: BigInt::zero(), w }
    }

    /// Product ideal: HNF of the four pairwise products of the Z-bases.
    pub fn ideal_mul(&self, i: &Ideal, j: &Ideal) -> Ideal {
        if self.is_rational() {
            return Ideal { u: &i.u * &j.u, v: BigInt::zero(), w: BigInt::one() };
        }
        let mut vecs = Vec::with_capacity(4);
        for x in i.generators().iter() {
            for y in j.generators().iter() {
                let p = self.mul(x, y);
                vecs.push((p.a, p.b));
            }
        }
        let (u, v, w) = hnf_of_lattice(vecs).expect("product of nonzero ideals is nonzero");
        Ideal { u, v, w }
    }

    pub fn ideal_pow(&self, i: &Ideal, e: u32) -> Ideal {
        let mut acc = self.unit_ideal();
        for _ in 0..e {
            acc = self.ideal_mul(&acc, i);
        }
        acc
    }

    /// Galois conjugate ideal.
    pub fn ideal_conjugate(&self, i: &Ideal) -> Ideal {
        if self.is_rational() {
            return i.clone();
        }
        let [g1, g2] = i.generators();
        let c2 = self.conjugate(&g2);
        let (u, v, w) = hnf_of_lattice(vec![(g1.a, g1.b), (c2.a, c2.b)]).expect("full rank");
        Ideal { u, v, w }
    }
}
