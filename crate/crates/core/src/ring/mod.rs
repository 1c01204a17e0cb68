//! Exact arithmetic in the rational integers and in rings of integers of
//! quadratic fields.
//!
//! Elements are written `a + b·ω` over the integral basis `{1, ω}` where
//! `ω = √d` for `d ≡ 2, 3 (mod 4)` and `ω = (1+√d)/2` for `d ≡ 1 (mod 4)`.
//! In the rational field `b` is always zero. Ideals are kept in the
//! two-generator Hermite normal form `u·Z + (v + w·ω)·Z`, see [`Ideal`].

mod ideal;
mod prime;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{is_squarefree, FactorBudget};

pub use ideal::{Ideal, Residues};
pub use prime::{
    primes_above, primes_up_to_norm, prime_norms_up_to, IdealFactorization, PrimeIdeal, Splitting,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("d = {0} is not squarefree")]
    NonSquarefree(i64),
    #[error("d = {0} does not define a quadratic field")]
    DisallowedD(i64),
    #[error("invalid Hermite normal form: {0}")]
    InvalidHnf(String),
    #[error("the zero ideal is not allowed here")]
    ZeroIdeal,
    #[error("the unit ideal (1) has no prime factors")]
    UnitIdeal,
    #[error("ideal is not distinguishable, P_min undefined")]
    PMinOnIndistinguishable,
    #[error("norm {0} exceeds the factorization budget")]
    NormTooLargeToFactor(BigInt),
    #[error("enumerating {norm} residues exceeds the cutoff {limit}")]
    EnumerationTooLarge { norm: BigInt, limit: u64 },
    #[error("element {0} does not belong to the rational field")]
    NotInField(String),
}

/// Desk-scale cutoffs shared by every enumeration or factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `norm(Q)` for which `O_K/Q` may be enumerated.
    pub max_enum: u64,
    pub factor: FactorBudget,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_enum: 100_000_000, factor: FactorBudget::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Quadratic,
}

/// Which generator of the ring of integers is used as `ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OmegaRule {
    /// `ω = √d`, used when `d ≡ 2, 3 (mod 4)`.
    SqrtD,
    /// `ω = (1 + √d)/2`, used when `d ≡ 1 (mod 4)`.
    HalfOnePlusSqrtD,
}

/// The ambient ring: `Z`, or the ring of integers of `Q(√d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    kind: FieldKind,
    d: i64,
    discriminant: i64,
    omega: Option<OmegaRule>,
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec { kind: FieldKind::Rational, d: 1, discriminant: 1, omega: None }
    }

    pub fn quadratic(d: i64) -> Result<Self, RingError> {
        if d == 0 || d == 1 {
            return Err(RingError::DisallowedD(d));
        }
        if !is_squarefree(d) {
            return Err(RingError::NonSquarefree(d));
        }
        let (discriminant, omega) = if d.rem_euclid(4) == 1 {
            (d, OmegaRule::HalfOnePlusSqrtD)
        } else {
            (4 * d, OmegaRule::SqrtD)
        };
        Ok(FieldSpec { kind: FieldKind::Quadratic, d, discriminant, omega: Some(omega) })
    }

    pub fn make(kind: FieldKind, d: i64) -> Result<Self, RingError> {
        match kind {
            FieldKind::Rational => Ok(Self::rational()),
            FieldKind::Quadratic => Self::quadratic(d),
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn is_rational(&self) -> bool {
        self.kind == FieldKind::Rational
    }

    /// The squarefree `d` (1 for the rational field).
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn omega_rule(&self) -> Option<OmegaRule> {
        self.omega
    }

    /// `(T, N)` with `ω² = T·ω + N`.
    pub(crate) fn omega_relation(&self) -> (i64, i64) {
        match self.omega {
            None => (0, 0),
            Some(OmegaRule::SqrtD) => (0, self.d),
            Some(OmegaRule::HalfOnePlusSqrtD) => (1, (self.d - 1) / 4),
        }
    }

    /// Number of prime ideals of degree one above a split prime: 1 for `Z`,
    /// 2 for a quadratic field.
    pub fn degree(&self) -> u32 {
        match self.kind {
            FieldKind::Rational => 1,
            FieldKind::Quadratic => 2,
        }
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let (t, n) = self.omega_relation();
        let bb = &x.b * &y.b;
        RingElement {
            a: &x.a * &y.a + &bb * n,
            b: &x.a * &y.b + &x.b * &y.a + &bb * t,
        }
    }

    /// Element norm `N(a + bω) = a² + T·ab − N·b²`.
    pub fn element_norm(&self, x: &RingElement) -> BigInt {
        let (t, n) = self.omega_relation();
        &x.a * &x.a + &x.a * &x.b * t - &x.b * &x.b * n
    }

    /// Galois conjugate; `ω̄ = T − ω`.
    pub fn conjugate(&self, x: &RingElement) -> RingElement {
        let (t, _) = self.omega_relation();
        RingElement { a: &x.a + &x.b * t, b: -&x.b }
    }

    pub fn omega(&self) -> RingElement {
        RingElement::new(0, 1)
    }

    pub(crate) fn check_element(&self, x: &RingElement) -> Result<(), RingError> {
        if self.is_rational() && !x.b.is_zero() {
            return Err(RingError::NotInField(x.to_string()));
        }
        Ok(())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rational => write!(f, "rational"),
            FieldKind::Quadratic => write!(f, "quadratic:{}", self.d),
        }
    }
}

/// `a + b·ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    pub a: BigInt,
    pub b: BigInt,
}

impl RingElement {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        RingElement { a: a.into(), b: b.into() }
    }

    pub fn int(a: impl Into<BigInt>) -> Self {
        RingElement { a: a.into(), b: BigInt::zero() }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        RingElement { a: &self.a * k, b: &self.b * k }
    }
}

impl std::ops::Add for &RingElement {
    type Output = RingElement;
    fn add(self, o: &RingElement) -> RingElement {
        RingElement { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl std::ops::Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, o: &RingElement) -> RingElement {
        RingElement { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}ω", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}ω", self.a, -&self.b)
        } else {
            write!(f, "{}+{}ω", self.a, self.b)
        }
    }
}

pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}
