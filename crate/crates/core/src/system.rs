//! Finite collections of congruence classes and the distortion instance they
//! induce on `O_K/Q`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::distortion::{DistortionProblem, ProblemError};
use crate::ring::{FieldSpec, Ideal, IdealFactorization, Limits, PrimeIdeal, RingElement, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("no congruence classes given")]
    Empty,
    #[error("modulus of class {0} is not distinguishable")]
    IndistinguishableModulus(usize),
    #[error("modulus of class {0} is the unit ideal")]
    UnitModulus(usize),
    #[error("class {0} does not belong to the declared field")]
    MixedFields(usize),
    #[error("s = {given} is below the multiplicity {actual} of the moduli")]
    MultiplicityTooSmall { given: usize, actual: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// `a + I`, with `a` stored reduced modulo `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CongruenceClass {
    pub residue: RingElement,
    pub modulus: Ideal,
}

impl CongruenceClass {
    pub fn new(residue: RingElement, modulus: Ideal) -> Self {
        let residue = modulus.reduce(&residue);
        CongruenceClass { residue, modulus }
    }
}

/// Per-class data derived from the factorization of its modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub factorization: IdealFactorization,
    /// `j` with `P_min(I) = 𝔭_j` (1-based).
    pub level: usize,
    /// Exponent `r` of `𝔭_j` in `I`.
    pub r: u32,
    /// `H` with `I = H·𝔭_j^r`.
    pub cofactor: Ideal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    Covers,
    Uncovered(RingElement),
}

/// Word-sized copy of an HNF triple for enumeration hot loops.
#[derive(Clone, Copy, Debug)]
struct SmallHnf {
    u: i128,
    v: i128,
    w: i128,
}

impl SmallHnf {
    fn of(i: &Ideal) -> Option<Self> {
        Some(SmallHnf { u: i.u().to_i128()?, v: i.v().to_i128()?, w: i.w().to_i128()? })
    }

    #[inline]
    fn index(&self, a: i128, b: i128) -> usize {
        let n = b.div_euclid(self.w);
        let x = (a - n * self.v).rem_euclid(self.u);
        let y = b - n * self.w;
        (y * self.u + x) as usize
    }
}

#[derive(Clone, Debug)]
pub struct CoveringInstance {
    field: FieldSpec,
    classes: Vec<CongruenceClass>,
    info: Vec<ClassInfo>,
    s: usize,
    q: Ideal,
    primes: Vec<(PrimeIdeal, u32)>,
    levels: Vec<Ideal>,
    target_index: Vec<Vec<usize>>,
    limits: Limits,
}

/// Largest number of classes sharing one modulus.
pub fn multiplicity(moduli: &[&Ideal]) -> usize {
    let mut count: HashMap<&Ideal, usize> = HashMap::new();
    for m in moduli {
        *count.entry(*m).or_default() += 1;
    }
    count.values().copied().max().unwrap_or(0)
}

impl CoveringInstance {
    pub fn validate(
        field: &FieldSpec,
        classes: Vec<CongruenceClass>,
        limits: Limits,
    ) -> Result<Self, SystemError> {
        if classes.is_empty() {
            return Err(SystemError::Empty);
        }
        for (i, c) in classes.iter().enumerate() {
            let (u, v, w) = c.modulus.hnf();
            let back = field.ideal_from_hnf(u.clone(), v.clone(), w.clone());
            if back.as_ref() != Ok(&c.modulus) || (field.is_rational() && !c.residue.b.is_zero()) {
                return Err(SystemError::MixedFields(i));
            }
            if c.modulus.is_unit() {
                return Err(SystemError::UnitModulus(i));
            }
        }
        let classes: Vec<_> =
            classes.into_iter().map(|c| CongruenceClass::new(c.residue, c.modulus)).collect();

        let mut cache: HashMap<Ideal, IdealFactorization> = HashMap::new();
        let mut facs = Vec::with_capacity(classes.len());
        for (i, c) in classes.iter().enumerate() {
            let f = match cache.get(&c.modulus) {
                Some(f) => f.clone(),
                None => {
                    let f = field.factor_ideal(&c.modulus, &limits)?;
                    cache.insert(c.modulus.clone(), f.clone());
                    f
                }
            };
            if !f.is_distinguishable() {
                return Err(SystemError::IndistinguishableModulus(i));
            }
            facs.push(f);
        }

        let q = classes[1..].iter().fold(classes[0].modulus.clone(), |acc, c| acc.intersect(&c.modulus));
        let primes = field.factor_ideal(&q, &limits)?.factors;
        let mut levels = vec![field.unit_ideal()];
        for (p, e) in &primes {
            let next = field.ideal_mul(levels.last().expect("nonempty"), &field.ideal_pow(&p.ideal, *e));
            levels.push(next);
        }
        debug_assert_eq!(levels.last(), Some(&q));

        let mut target_index = vec![Vec::new(); primes.len() + 1];
        let mut info = Vec::with_capacity(classes.len());
        for (i, f) in facs.into_iter().enumerate() {
            let (pm, r) = f.p_min()?;
            let level = 1 + primes.iter().position(|(p, _)| p == pm).expect("P_min divides Q");
            let cofactor = IdealFactorization {
                factors: f.factors.iter().filter(|(p, _)| p != pm).cloned().collect(),
            }
            .product(field);
            target_index[level].push(i);
            info.push(ClassInfo { factorization: f.clone(), level, r, cofactor });
        }
        let s = multiplicity(&classes.iter().map(|c| &c.modulus).collect::<Vec<_>>());
        Ok(CoveringInstance { field: field.clone(), classes, info, s, q, primes, levels, target_index, limits })
    }

    /// An instance carrying only moduli (all residues zero), for
    /// residue-free bounds. `s` may be raised above the true multiplicity.
    pub fn from_moduli(
        field: &FieldSpec,
        moduli: Vec<Ideal>,
        s: Option<usize>,
        limits: Limits,
    ) -> Result<Self, SystemError> {
        let classes = moduli.into_iter().map(|m| CongruenceClass::new(RingElement::zero(), m)).collect();
        let mut inst = Self::validate(field, classes, limits)?;
        if let Some(given) = s {
            if given < inst.s {
                return Err(SystemError::MultiplicityTooSmall { given, actual: inst.s });
            }
            inst.s = given;
        }
        Ok(inst)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn classes(&self) -> &[CongruenceClass] {
        &self.classes
    }

    pub fn class_info(&self) -> &[ClassInfo] {
        &self.info
    }

    pub fn multiplicity(&self) -> usize {
        self.s
    }

    pub fn modulus_q(&self) -> &Ideal {
        &self.q
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// `(𝔭_j, ν_j)` for `j = 1..=J` (index `j − 1`).
    pub fn primes(&self) -> &[(PrimeIdeal, u32)] {
        &self.primes
    }

    pub fn prime(&self, j: usize) -> &PrimeIdeal {
        &self.primes[j - 1].0
    }

    pub fn prime_norms(&self) -> Vec<BigInt> {
        self.primes.iter().map(|(p, _)| p.norm()).collect()
    }

    /// `Q_0 = (1), Q_1, …, Q_J = Q`.
    pub fn levels(&self) -> &[Ideal] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.primes.len()
    }

    /// Classes whose `P_min` is `𝔭_j`.
    pub fn target_index(&self, j: usize) -> &[usize] {
        &self.target_index[j]
    }

    pub fn min_norm(&self) -> BigInt {
        self.classes.iter().map(|c| c.modulus.norm()).min().expect("nonempty")
    }

    fn small_q(&self) -> Result<(SmallHnf, usize), SystemError> {
        let norm = self.q.norm();
        match norm.to_u64() {
            Some(n) if n <= self.limits.max_enum => {
                Ok((SmallHnf::of(&self.q).expect("fits"), n as usize))
            }
            _ => Err(RingError::EnumerationTooLarge { norm, limit: self.limits.max_enum }.into()),
        }
    }

    /// Number of residues mod `Q`, if within the enumeration cutoff.
    pub fn residue_count(&self) -> Result<usize, SystemError> {
        Ok(self.small_q()?.1)
    }

    /// The residue mod `Q` at position `idx` of the canonical order.
    pub fn residue_at(&self, idx: usize) -> RingElement {
        let u = self.q.u().to_u64().expect("enumerable") as usize;
        RingElement::new(BigInt::from(idx % u), BigInt::from(idx / u))
    }

    /// Canonical position of `x mod Q`.
    pub fn index_of(&self, x: &RingElement) -> usize {
        self.q.residue_index(&self.q.reduce(x)).to_usize().expect("enumerable")
    }

    /// Mark every residue mod `Q` lying in `a + I` (with `Q ⊆ I`).
    pub fn mark_class(&self, bits: &mut [bool], residue: &RingElement, modulus: &Ideal) -> Result<(), SystemError> {
        let (q, _) = self.small_q()?;
        let m = SmallHnf::of(modulus).expect("divides Q");
        let (a0, b0) = (residue.a.to_i128().expect("reduced"), residue.b.to_i128().expect("reduced"));
        let (mu, nw) = (q.u / m.u, q.w / m.w);
        for n in 0..nw {
            let (a1, b1) = (a0 + n * m.v, b0 + n * m.w);
            for k in 0..mu {
                bits[q.index(a1 + k * m.u, b1)] = true;
            }
        }
        Ok(())
    }

    /// Membership bitmap of the union of all classes.
    pub fn coverage_bitmap(&self) -> Result<Vec<bool>, SystemError> {
        let n = self.residue_count()?;
        let mut bits = vec![false; n];
        for c in &self.classes {
            self.mark_class(&mut bits, &c.residue, &c.modulus)?;
        }
        Ok(bits)
    }

    /// Brute-force coverage check; the witness is the first uncovered residue.
    pub fn covers(&self) -> Result<Coverage, SystemError> {
        let bits = self.coverage_bitmap()?;
        Ok(match bits.iter().position(|b| !b) {
            None => Coverage::Covers,
            Some(i) => Coverage::Uncovered(self.residue_at(i)),
        })
    }

    /// `B_j` as a bitmap over residues mod `Q`.
    pub fn build_targets(&self, j: usize) -> Result<Vec<bool>, SystemError> {
        let n = self.residue_count()?;
        let mut bits = vec![false; n];
        for &i in &self.target_index[j] {
            let c = &self.classes[i];
            self.mark_class(&mut bits, &c.residue, &c.modulus)?;
        }
        Ok(bits)
    }

    /// Level-`j` label of every residue mod `Q`: its position mod `Q_j`.
    pub fn level_labels(&self, j: usize) -> Result<Vec<u32>, SystemError> {
        let (q, n) = self.small_q()?;
        let l = SmallHnf::of(&self.levels[j]).expect("divides Q");
        Ok((0..n)
            .map(|idx| {
                let (x, y) = ((idx as i128) % q.u, (idx as i128) / q.u);
                l.index(x, y) as u32
            })
            .collect())
    }

    /// The distortion problem on `O_K/Q` with uniform initial measure.
    pub fn distortion_problem(&self) -> Result<DistortionProblem, SystemError> {
        let labels = (0..=self.depth()).map(|j| self.level_labels(j)).collect::<Result<Vec<_>, _>>()?;
        let targets = (1..=self.depth()).map(|j| self.build_targets(j)).collect::<Result<Vec<_>, _>>()?;
        let n = labels[0].len();
        let u = BigRational::new(BigInt::one(), BigInt::from(n));
        Ok(DistortionProblem::new(labels, targets, vec![u; n])?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(c: &[(i64, i64)]) -> CoveringInstance {
        let q = FieldSpec::rational();
        let classes = c
            .iter()
            .map(|&(a, m)| CongruenceClass::new(RingElement::int(a), q.ideal_of_integer(m).unwrap()))
            .collect();
        CoveringInstance::validate(&q, classes, Limits::default()).unwrap()
    }

    #[test]
    fn classic_system() {
        let inst = rat(&[(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)]);
        assert_eq!(inst.multiplicity(), 1);
        assert_eq!(inst.modulus_q().norm(), BigInt::from(12));
        let shape: Vec<_> = inst.primes().iter().map(|(p, e)| (p.under, *e)).collect();
        assert_eq!(shape, vec![(2, 2), (3, 1)]);
        assert_eq!(inst.covers().unwrap(), Coverage::Covers);
        let b1 = inst.build_targets(1).unwrap();
        let idx: Vec<_> = (0..12).filter(|&i| b1[i]).collect();
        assert_eq!(idx, vec![0, 1, 2, 4, 5, 6, 8, 9, 10]);
        let b2 = inst.build_targets(2).unwrap();
        let idx: Vec<_> = (0..12).filter(|&i| b2[i]).collect();
        assert_eq!(idx, vec![0, 3, 5, 6, 7, 9, 11]);
    }

    #[test]
    fn uncovered_witnesses() {
        assert_eq!(rat(&[(0, 2), (1, 4)]).covers().unwrap(), Coverage::Uncovered(RingElement::int(3)));
        assert_eq!(rat(&[(0, 2)]).covers().unwrap(), Coverage::Uncovered(RingElement::int(1)));
    }

    #[test]
    fn multiplicity_counts_moduli() {
        assert_eq!(rat(&[(0, 2), (1, 2), (0, 3)]).multiplicity(), 2);
        let g = FieldSpec::quadratic(-1).unwrap();
        let three = g.ideal_of_integer(3).unwrap();
        let p = g.principal(&RingElement::new(1, 1)).unwrap();
        let a = g.ideal_mul(&p, &three);
        let b = g.ideal_mul(&three, &p);
        assert_eq!(multiplicity(&[&a, &b]), 2);
    }

    #[test]
    fn rejects_bad_moduli() {
        let g = FieldSpec::quadratic(-1).unwrap();
        let five = CongruenceClass::new(RingElement::zero(), g.ideal_of_integer(5).unwrap());
        assert_eq!(
            CoveringInstance::validate(&g, vec![five], Limits::default()).unwrap_err(),
            SystemError::IndistinguishableModulus(0)
        );
        let unit = CongruenceClass::new(RingElement::zero(), g.unit_ideal());
        assert_eq!(
            CoveringInstance::validate(&g, vec![unit], Limits::default()).unwrap_err(),
            SystemError::UnitModulus(0)
        );
        assert_eq!(
            CoveringInstance::validate(&g, vec![], Limits::default()).unwrap_err(),
            SystemError::Empty
        );
    }

    #[test]
    fn problem_is_well_formed() {
        let inst = rat(&[(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)]);
        let p = inst.distortion_problem().unwrap();
        p.check().unwrap();
        assert_eq!(p.depth(), 2);
        assert_eq!(p.fiber_count(1), 4);
        let g = FieldSpec::quadratic(-1).unwrap();
        let m = g.ideal_mul(&g.ideal_of_integer(3).unwrap(), &g.principal(&RingElement::new(1, 1)).unwrap());
        let inst = CoveringInstance::validate(
            &g,
            vec![CongruenceClass::new(RingElement::new(1, 0), m)],
            Limits::default(),
        )
        .unwrap();
        let p = inst.distortion_problem().unwrap();
        p.check().unwrap();
        assert_eq!(p.len(), 18);
    }
}
