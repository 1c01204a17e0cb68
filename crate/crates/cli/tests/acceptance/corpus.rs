//! Seeded random covering instances.

use std::collections::HashMap;

use coverdist::{CongruenceClass, CoveringInstance, FieldSpec, Ideal, Limits, RingElement};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const MAX_Q_NORM: u64 = 10_000;
pub const MAX_CLASSES: usize = 12;
pub const MAX_S: usize = 4;

pub fn test_fields() -> Vec<FieldSpec> {
    let mut v = vec![FieldSpec::rational()];
    for d in [-1, -5, 5, 2, -3] {
        v.push(FieldSpec::quadratic(d).unwrap());
    }
    v
}

/// Distinguishable ideals of norm `<= bound`, built from small prime powers.
pub fn modulus_pool(field: &FieldSpec, bound: u64) -> Vec<Ideal> {
    let primes = coverdist::ring::primes_up_to_norm(field, bound);
    let mut all = vec![field.unit_ideal()];
    for p in &primes {
        let mut next = Vec::new();
        for i in &all {
            let mut cur = i.clone();
            loop {
                cur = field.ideal_mul(&cur, &p.ideal);
                if cur.norm() > BigInt::from(bound) {
                    break;
                }
                next.push(cur.clone());
            }
        }
        all.extend(next);
    }
    let limits = Limits::default();
    let mut pool: Vec<Ideal> = all
        .into_iter()
        .filter(|i| !i.is_unit() && field.is_distinguishable(i, &limits).unwrap())
        .collect();
    pool.sort_by_key(|i| i.canonical_key());
    pool.dedup();
    pool
}

fn random_residue(rng: &mut ChaCha8Rng, m: &Ideal) -> RingElement {
    let u = m.u().to_i64().unwrap();
    let x = RingElement::new(rng.gen_range(0..u), rng.gen_range(0..u));
    m.reduce(&x)
}

fn fits(field: &FieldSpec, q: &Ideal, moduli: &[Ideal], cand: &Ideal) -> Option<Ideal> {
    let nq = q.intersect(cand);
    if nq.norm() > BigInt::from(MAX_Q_NORM) {
        return None;
    }
    let same = moduli.iter().filter(|m| *m == cand).count();
    if same + 1 > MAX_S {
        return None;
    }
    let _ = field;
    Some(nq)
}

pub struct Sample {
    pub field: FieldSpec,
    pub classes: Vec<CongruenceClass>,
    pub origin: &'static str,
}

/// One random instance; with `complete` the classes are greedily extended
/// toward a cover (first uncovered residue, random admissible modulus).
pub fn random_sample(rng: &mut ChaCha8Rng, field: &FieldSpec, pool: &[Ideal], complete: bool) -> Sample {
    loop {
        let k = rng.gen_range(1..=if complete { 4 } else { MAX_CLASSES });
        let mut classes: Vec<CongruenceClass> = Vec::new();
        let mut moduli: Vec<Ideal> = Vec::new();
        let mut q = field.unit_ideal();
        let mut tries = 0;
        while classes.len() < k && tries < 60 {
            tries += 1;
            let m = pool.choose(rng).unwrap();
            let Some(nq) = fits(field, &q, &moduli, m) else { continue };
            q = nq;
            classes.push(CongruenceClass::new(random_residue(rng, m), m.clone()));
            moduli.push(m.clone());
        }
        if classes.is_empty() {
            continue;
        }
        if complete {
            let mut stuck = 0;
            while classes.len() < MAX_CLASSES && stuck < 40 {
                let inst = CoveringInstance::validate(field, classes.clone(), Limits::default()).unwrap();
                let coverdist::Coverage::Uncovered(x) = inst.covers().unwrap() else { break };
                // prefer small moduli so the completion has a chance to close
                let small: Vec<&Ideal> = pool.iter().filter(|m| m.norm() <= BigInt::from(12)).collect();
                let m = if rng.gen_bool(0.7) && !small.is_empty() { *small.choose(rng).unwrap() } else { pool.choose(rng).unwrap() };
                match fits(field, &q, &moduli, m) {
                    Some(nq) => {
                        q = nq;
                        classes.push(CongruenceClass::new(m.reduce(&x), m.clone()));
                        moduli.push(m.clone());
                    }
                    None => stuck += 1,
                }
            }
        }
        return Sample { field: field.clone(), classes, origin: if complete { "completed" } else { "random" } };
    }
}

fn ints(field: &FieldSpec, c: &[(i64, i64)]) -> Vec<CongruenceClass> {
    c.iter()
        .map(|&(a, m)| {
            let m = field.ideal_of_integer(m).unwrap();
            CongruenceClass::new(m.reduce(&RingElement::int(a)), m)
        })
        .collect()
}

/// Hand-picked instances, covering and not.
pub fn fixed_samples() -> Vec<Sample> {
    let q = FieldSpec::rational();
    let g = FieldSpec::quadratic(-1).unwrap();
    let one_plus_i = g.principal(&RingElement::new(1, 1)).unwrap();
    let five_split: Vec<Ideal> = coverdist::ring::primes_above(&g, 5).into_iter().map(|p| p.ideal).collect();
    let mut out = vec![
        Sample { field: q.clone(), classes: ints(&q, &[(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)]), origin: "classic" },
        Sample { field: q.clone(), classes: ints(&q, &[(0, 2), (1, 4)]), origin: "half-quarter" },
        Sample { field: q.clone(), classes: ints(&q, &[(0, 2), (1, 2)]), origin: "two-halves" },
        Sample { field: q.clone(), classes: ints(&q, &[(0, 3), (1, 3), (2, 3)]), origin: "thirds" },
        Sample { field: q.clone(), classes: ints(&q, &[(0, 2), (1, 4), (3, 8), (7, 8)]), origin: "dyadic" },
        Sample {
            field: g.clone(),
            classes: vec![
                CongruenceClass::new(RingElement::zero(), one_plus_i.clone()),
                CongruenceClass::new(RingElement::int(1), one_plus_i.clone()),
            ],
            origin: "gaussian-halves",
        },
    ];
    let mut cls = Vec::new();
    for a in 0..4 {
        cls.push(CongruenceClass::new(RingElement::int(a), five_split[0].clone()));
    }
    out.push(Sample { field: g.clone(), classes: cls, origin: "gaussian-fifths-partial" });
    out
}

/// The corpus: fixed samples plus `count` seeded random ones spread over
/// the test fields.
pub fn corpus(seed: u64, count: usize) -> Vec<Sample> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = test_fields();
    let pools: HashMap<String, Vec<Ideal>> = fields.iter().map(|f| (f.to_string(), modulus_pool(f, 60))).collect();
    let mut out = fixed_samples();
    for i in 0..count {
        let f = &fields[i % fields.len()];
        let complete = i % 3 == 0;
        out.push(random_sample(&mut rng, f, &pools[&f.to_string()], complete));
    }
    out
}
