//! The distortion method on an arbitrary finite set with an inverse system
//! of projections.
//!
//! Points are `0..n`. A projection at level `j` is given as a dense labelling
//! `S → {0, …, m_j − 1}`; level 0 is the coarsest. Starting from an initial
//! probability measure, each level `j >= 1` reweights mass away from the
//! target set `B_j` inside every level-`(j−1)` fiber, and the moments of the
//! fiber ratio `α_j` control how much mass `B_j` can keep. When
//! `η = Σ_j min{M1_j, M2_j / (4δ_j(1−δ_j))} < 1` the union of the targets
//! cannot be all of `S`.
//!
//! Everything is exact: masses are [`BigRational`]s and every comparison is
//! decided without rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("level {level} is not a refinement of level {}: points {x} and {x2} share a level-{level} fiber but not a level-{} fiber", level - 1, level - 1)]
    Refinement { level: usize, x: usize, x2: usize },
    #[error("target B_{level} is not measurable: points {x} and {x2} share a fiber but only {x} is in B_{level}")]
    Measurability { level: usize, x: usize, x2: usize },
    #[error("initial mass is not level-0 measurable at points {x} and {x2}")]
    InitialNotMeasurable { x: usize, x2: usize },
    #[error("initial mass at point {0} is negative")]
    NegativeMass(usize),
    #[error("initial mass sums to {0}, not 1")]
    MassNotNormalized(BigRational),
    #[error("wrong shape: {0}")]
    Shape(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistortionError {
    #[error("δ_{j} = {delta} is outside [0, 1/2]")]
    DeltaOutOfRange { j: usize, delta: BigRational },
    #[error("expected {expected} δ values, got {got}")]
    DeltaCount { expected: usize, got: usize },
    #[error("state is at level {state}, step needs level {needed}")]
    WrongLevel { state: usize, needed: usize },
    #[error("level {0} does not exist")]
    NoSuchLevel(usize),
    #[error("invalid problem: {0}")]
    Problem(#[from] ProblemError),
    #[error("soundness failure: {0}")]
    Soundness(String),
}

/// The parameters `δ_1, …, δ_J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaPolicy {
    Explicit(Vec<BigRational>),
    /// `δ_j = 0` when `norm(𝔭_j) <= y`, else `1/2`.
    Threshold(BigInt),
}

impl DeltaPolicy {
    /// Concrete δ list for levels whose primes have the given norms.
    pub fn resolve(&self, norms: &[BigInt]) -> Result<Vec<BigRational>, DistortionError> {
        let deltas = match self {
            DeltaPolicy::Explicit(d) => {
                if d.len() != norms.len() {
                    return Err(DistortionError::DeltaCount { expected: norms.len(), got: d.len() });
                }
                d.clone()
            }
            DeltaPolicy::Threshold(y) => norms
                .iter()
                .map(|n| if n <= y { BigRational::zero() } else { half() })
                .collect(),
        };
        for (i, d) in deltas.iter().enumerate() {
            check_delta(i + 1, d)?;
        }
        Ok(deltas)
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn check_delta(j: usize, d: &BigRational) -> Result<(), DistortionError> {
    if d.is_negative() || *d > half() {
        return Err(DistortionError::DeltaOutOfRange { j, delta: d.clone() });
    }
    Ok(())
}

/// Exact sum that keeps a running common denominator; much cheaper than
/// normalizing after every addition when most terms share a denominator.
#[derive(Clone, Debug)]
pub(crate) struct RatSum {
    num: BigInt,
    den: BigInt,
}

impl RatSum {
    pub(crate) fn new() -> Self {
        RatSum { num: BigInt::zero(), den: BigInt::one() }
    }

    pub(crate) fn add(&mut self, x: &BigRational) {
        if x.is_zero() {
            return;
        }
        let (p, q) = (x.numer(), x.denom());
        if *q == self.den {
            self.num += p;
        } else if self.den.is_multiple_of(q) {
            self.num += p * (&self.den / q);
        } else {
            let l = self.den.lcm(q);
            self.num = &self.num * (&l / &self.den) + p * (&l / q);
            self.den = l;
        }
    }

    pub(crate) fn add_scaled(&mut self, x: &BigRational, k: &BigRational) {
        self.add(&(x * k));
    }

    pub(crate) fn value(self) -> BigRational {
        BigRational::new(self.num, self.den)
    }
}

pub fn sum_rationals<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigRational {
    let mut acc = RatSum::new();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

/// A finite set with an inverse system of labellings, targets and an
/// initial measure.
#[derive(Clone, Debug)]
pub struct DistortionProblem {
    n: usize,
    labels: Vec<Vec<u32>>,
    label_counts: Vec<usize>,
    targets: Vec<Vec<bool>>,
    initial: Vec<BigRational>,
}

/// Mass assignment after `level` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionState {
    pub level: usize,
    pub mass: Vec<BigRational>,
    pub history: Vec<BigRational>,
}

impl DistortionState {
    pub fn total(&self) -> BigRational {
        sum_rationals(&self.mass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub j: usize,
    pub delta: BigRational,
    pub m1: BigRational,
    pub m2: BigRational,
    pub contribution: BigRational,
}

/// `min{M1, M2/(4δ(1−δ))}`, read as `M1` when `δ = 0`.
pub fn contribution(m1: &BigRational, m2: &BigRational, delta: &BigRational) -> BigRational {
    if delta.is_zero() {
        return m1.clone();
    }
    let four = BigRational::from_integer(BigInt::from(4));
    let c2 = m2 / (four * delta * (BigRational::one() - delta));
    if c2 < *m1 {
        c2
    } else {
        m1.clone()
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub final_state: DistortionState,
    pub reports: Vec<MomentReport>,
    pub eta: BigRational,
    /// `P_j(B_j)` recorded right after step `j`.
    pub target_mass: Vec<BigRational>,
    /// Every state `P_0, …, P_J`, if requested.
    pub history: Option<Vec<DistortionState>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonCoverCertificate {
    pub eta: BigRational,
    pub reports: Vec<MomentReport>,
    pub final_uncovered_mass: BigRational,
    pub witness: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifyOutcome {
    Certificate(NonCoverCertificate),
    Inconclusive { eta: BigRational, reports: Vec<MomentReport> },
}

impl DistortionProblem {
    /// `labels[j][x]` is the level-`j` fiber of point `x` for `j = 0..=J`;
    /// `targets[j-1][x]` says whether `x ∈ B_j`.
    pub fn new(
        labels: Vec<Vec<u32>>,
        targets: Vec<Vec<bool>>,
        initial: Vec<BigRational>,
    ) -> Result<Self, ProblemError> {
        let n = initial.len();
        if labels.is_empty() {
            return Err(ProblemError::Shape("need at least level 0".into()));
        }
        if targets.len() + 1 != labels.len() {
            return Err(ProblemError::Shape(format!(
                "{} label levels but {} targets",
                labels.len(),
                targets.len()
            )));
        }
        if labels.iter().any(|l| l.len() != n) || targets.iter().any(|t| t.len() != n) {
            return Err(ProblemError::Shape("every level must label every point".into()));
        }
        let label_counts =
            labels.iter().map(|l| l.iter().max().map_or(0, |&m| m as usize + 1)).collect();
        Ok(DistortionProblem { n, labels, label_counts, targets, initial })
    }

    /// Same, with the uniform initial measure.
    pub fn uniform(labels: Vec<Vec<u32>>, targets: Vec<Vec<bool>>) -> Result<Self, ProblemError> {
        let n = labels.first().map_or(0, |l| l.len());
        if n == 0 {
            return Err(ProblemError::Shape("empty point set".into()));
        }
        let u = BigRational::new(BigInt::one(), BigInt::from(n));
        Self::new(labels, targets, vec![u; n])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of distortion levels `J`.
    pub fn depth(&self) -> usize {
        self.targets.len()
    }

    pub fn label(&self, level: usize, x: usize) -> u32 {
        self.labels[level][x]
    }

    pub fn labels(&self, level: usize) -> &[u32] {
        &self.labels[level]
    }

    pub fn fiber_count(&self, level: usize) -> usize {
        self.label_counts[level]
    }

    pub fn in_target(&self, j: usize, x: usize) -> bool {
        self.targets[j - 1][x]
    }

    pub fn target(&self, j: usize) -> &[bool] {
        &self.targets[j - 1]
    }

    pub fn initial_mass(&self) -> &[BigRational] {
        &self.initial
    }

    /// Points in no target.
    pub fn uncovered(&self) -> Vec<bool> {
        (0..self.n).map(|x| self.targets.iter().all(|t| !t[x])).collect()
    }

    /// Verify refinement, target measurability and the initial measure.
    pub fn check(&self) -> Result<(), ProblemError> {
        for j in 1..self.labels.len() {
            let mut parent: Vec<Option<(u32, usize)>> = vec![None; self.label_counts[j]];
            for x in 0..self.n {
                let (l, up) = (self.labels[j][x] as usize, self.labels[j - 1][x]);
                match parent[l] {
                    None => parent[l] = Some((up, x)),
                    Some((p, x2)) if p != up => {
                        return Err(ProblemError::Refinement { level: j, x: x2, x2: x })
                    }
                    _ => {}
                }
            }
        }
        for j in 1..self.labels.len() {
            let mut seen: Vec<Option<(bool, usize)>> = vec![None; self.label_counts[j]];
            for x in 0..self.n {
                let l = self.labels[j][x] as usize;
                let b = self.targets[j - 1][x];
                match seen[l] {
                    None => seen[l] = Some((b, x)),
                    Some((b2, x2)) if b2 != b => {
                        let (inside, other) = if b { (x, x2) } else { (x2, x) };
                        return Err(ProblemError::Measurability { level: j, x: inside, x2: other });
                    }
                    _ => {}
                }
            }
        }
        let mut seen: Vec<Option<usize>> = vec![None; self.label_counts[0]];
        for x in 0..self.n {
            if self.initial[x].is_negative() {
                return Err(ProblemError::NegativeMass(x));
            }
            let l = self.labels[0][x] as usize;
            match seen[l] {
                None => seen[l] = Some(x),
                Some(x2) if self.initial[x2] != self.initial[x] => {
                    return Err(ProblemError::InitialNotMeasurable { x: x2, x2: x })
                }
                _ => {}
            }
        }
        let total = sum_rationals(&self.initial);
        if !total.is_one() {
            return Err(ProblemError::MassNotNormalized(total));
        }
        Ok(())
    }

    pub fn initial_state(&self) -> DistortionState {
        DistortionState { level: 0, mass: self.initial.clone(), history: Vec::new() }
    }

    fn expect_level(&self, state: &DistortionState, j: usize) -> Result<(), DistortionError> {
        if j == 0 || j > self.depth() {
            return Err(DistortionError::NoSuchLevel(j));
        }
        if state.level + 1 != j {
            return Err(DistortionError::WrongLevel { state: state.level, needed: j - 1 });
        }
        Ok(())
    }

    /// `α_j` on each level-`(j−1)` fiber: `|F ∩ B_j| / |F|`.
    pub fn alpha_fibers(&self, j: usize) -> Vec<BigRational> {
        let m = self.label_counts[j - 1];
        let mut size = vec![0u64; m];
        let mut hit = vec![0u64; m];
        for x in 0..self.n {
            let f = self.labels[j - 1][x] as usize;
            size[f] += 1;
            if self.targets[j - 1][x] {
                hit[f] += 1;
            }
        }
        size.iter()
            .zip(&hit)
            .map(|(&s, &h)| {
                if s == 0 {
                    BigRational::zero()
                } else {
                    BigRational::new(BigInt::from(h), BigInt::from(s))
                }
            })
            .collect()
    }

    /// `α_j(x)` for every point.
    pub fn alpha(&self, state: &DistortionState, j: usize) -> Result<Vec<BigRational>, DistortionError> {
        self.expect_level(state, j)?;
        let per_fiber = self.alpha_fibers(j);
        Ok(self.labels[j - 1].iter().map(|&f| per_fiber[f as usize].clone()).collect())
    }

    /// Mass of every fiber at `level`.
    pub fn fiber_masses(&self, state: &DistortionState, level: usize) -> Vec<BigRational> {
        let mut acc = vec![RatSum::new(); self.label_counts[level]];
        for (x, m) in state.mass.iter().enumerate() {
            acc[self.labels[level][x] as usize].add(m);
        }
        acc.into_iter().map(RatSum::value).collect()
    }

    /// Mass of an arbitrary subset.
    pub fn mass_of(&self, state: &DistortionState, set: &[bool]) -> BigRational {
        sum_rationals(state.mass.iter().zip(set).filter(|(_, &b)| b).map(|(m, _)| m))
    }

    /// `(M1, M2) = (E_{j−1}[α_j], E_{j−1}[α_j²])`.
    pub fn moments(
        &self,
        state: &DistortionState,
        j: usize,
    ) -> Result<(BigRational, BigRational), DistortionError> {
        self.expect_level(state, j)?;
        let alpha = self.alpha_fibers(j);
        let fm = self.fiber_masses(state, j - 1);
        let (mut m1, mut m2) = (RatSum::new(), RatSum::new());
        for (a, m) in alpha.iter().zip(&fm) {
            if a.is_zero() {
                continue;
            }
            let am = a * m;
            m2.add_scaled(&am, a);
            m1.add(&am);
        }
        Ok((m1.value(), m2.value()))
    }

    /// One distortion step from `P_{j−1}` to `P_j`.
    pub fn step(
        &self,
        state: &DistortionState,
        j: usize,
        delta: &BigRational,
    ) -> Result<DistortionState, DistortionError> {
        self.expect_level(state, j)?;
        check_delta(j, delta)?;
        let alpha = self.alpha_fibers(j);
        let one = BigRational::one();
        // (factor inside B_j, factor outside B_j) per level-(j−1) fiber
        let factors: Vec<(BigRational, BigRational)> = alpha
            .iter()
            .map(|a| {
                if a < delta {
                    (BigRational::zero(), (&one - a).recip())
                } else if a.is_zero() {
                    (one.clone(), one.clone())
                } else {
                    let den = a * (&one - delta);
                    ((a - delta) / &den, a / &den)
                }
            })
            .collect();
        let target = &self.targets[j - 1];
        let labels = &self.labels[j - 1];
        let mass = state
            .mass
            .iter()
            .enumerate()
            .map(|(x, m)| {
                let (fin, fout) = &factors[labels[x] as usize];
                let f = if target[x] { fin } else { fout };
                if f.is_one() {
                    m.clone()
                } else if f.is_zero() || m.is_zero() {
                    BigRational::zero()
                } else {
                    m * f
                }
            })
            .collect();
        let mut history = state.history.clone();
        history.push(delta.clone());
        Ok(DistortionState { level: j, mass, history })
    }

    /// Run all `J` levels.
    pub fn run(&self, deltas: &[BigRational], keep_history: bool) -> Result<RunOutcome, DistortionError> {
        if deltas.len() != self.depth() {
            return Err(DistortionError::DeltaCount { expected: self.depth(), got: deltas.len() });
        }
        for (i, d) in deltas.iter().enumerate() {
            check_delta(i + 1, d)?;
        }
        self.check()?;
        let mut state = self.initial_state();
        let mut history = keep_history.then(|| vec![state.clone()]);
        let mut reports = Vec::with_capacity(deltas.len());
        let mut target_mass = Vec::with_capacity(deltas.len());
        let mut eta = RatSum::new();
        for (i, delta) in deltas.iter().enumerate() {
            let j = i + 1;
            let (m1, m2) = self.moments(&state, j)?;
            let c = contribution(&m1, &m2, delta);
            eta.add(&c);
            state = self.step(&state, j, delta)?;
            target_mass.push(self.mass_of(&state, self.target(j)));
            reports.push(MomentReport { j, delta: delta.clone(), m1, m2, contribution: c });
            if let Some(h) = history.as_mut() {
                h.push(state.clone());
            }
        }
        Ok(RunOutcome { final_state: state, reports, eta: eta.value(), target_mass, history })
    }

    /// `P_j(B_j)` for each level from a full history, checking the per-step
    /// bound and stability `P_J(B_j) = P_j(B_j)`.
    pub fn per_target_mass(
        &self,
        history: &[DistortionState],
        reports: &[MomentReport],
    ) -> Result<Vec<BigRational>, DistortionError> {
        let depth = self.depth();
        if history.len() != depth + 1 || reports.len() != depth {
            return Err(DistortionError::Soundness("incomplete run history".into()));
        }
        let last = &history[depth];
        let mut out = Vec::with_capacity(depth);
        for j in 1..=depth {
            let pj = self.mass_of(&history[j], self.target(j));
            if pj > reports[j - 1].contribution {
                return Err(DistortionError::Soundness(format!(
                    "P_{j}(B_{j}) = {pj} exceeds {}",
                    reports[j - 1].contribution
                )));
            }
            let pl = self.mass_of(last, self.target(j));
            if pl != pj {
                return Err(DistortionError::Soundness(format!("P_J(B_{j}) = {pl} differs from P_{j}(B_{j}) = {pj}")));
            }
            out.push(pj);
        }
        Ok(out)
    }

    /// Decide `η < 1` and, if so, produce a witness outside every target.
    pub fn certify(&self, deltas: &[BigRational]) -> Result<CertifyOutcome, DistortionError> {
        let out = self.run(deltas, false)?;
        if out.eta >= BigRational::one() {
            return Ok(CertifyOutcome::Inconclusive { eta: out.eta, reports: out.reports });
        }
        let uncovered = self.uncovered();
        let final_uncovered_mass = self.mass_of(&out.final_state, &uncovered);
        if final_uncovered_mass < BigRational::one() - &out.eta {
            return Err(DistortionError::Soundness(format!(
                "uncovered mass {final_uncovered_mass} below 1 − η"
            )));
        }
        let witness = (0..self.n)
            .find(|&x| uncovered[x] && out.final_state.mass[x].is_positive())
            .ok_or_else(|| DistortionError::Soundness("η < 1 but no uncovered point has mass".into()))?;
        Ok(CertifyOutcome::Certificate(NonCoverCertificate {
            eta: out.eta,
            reports: out.reports,
            final_uncovered_mass,
            witness,
        }))
    }
}
