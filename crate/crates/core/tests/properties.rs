//! Randomized invariants of the ideal arithmetic and the distortion engine.

use coverdist::{CertifyOutcome, CongruenceClass, Coverage, CoveringInstance, FieldSpec, Limits, RingElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn field(ix: usize) -> FieldSpec {
    match ix {
        0 => FieldSpec::quadratic(-1).unwrap(),
        1 => FieldSpec::quadratic(-5).unwrap(),
        2 => FieldSpec::quadratic(2).unwrap(),
        3 => FieldSpec::quadratic(5).unwrap(),
        _ => FieldSpec::quadratic(-3).unwrap(),
    }
}

fn elem() -> impl Strategy<Value = (i64, i64)> {
    (-12i64..=12, -12i64..=12).prop_filter("nonzero", |&(a, b)| a != 0 || b != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ideal_products_and_intersections(fx in 0usize..5, g1 in elem(), g2 in elem(), h in elem(), p in (-30i64..30, -30i64..30)) {
        let f = field(fx);
        let i = f.ideal_from_generators(&[RingElement::new(g1.0, g1.1), RingElement::new(g2.0, g2.1)]).unwrap();
        let j = f.principal(&RingElement::new(h.0, h.1)).unwrap();
        let ij = f.ideal_mul(&i, &j);
        prop_assert_eq!(&ij, &f.ideal_mul(&j, &i));
        prop_assert_eq!(ij.norm(), i.norm() * j.norm());
        let both = i.intersect(&j);
        prop_assert!(i.divides(&both) && j.divides(&both) && both.divides(&ij));
        // reduction picks the class representative and is idempotent
        let x = RingElement::new(p.0, p.1);
        let r = i.reduce(&x);
        prop_assert!(i.in_class(&x, &r));
        prop_assert_eq!(&i.reduce(&r), &r);
        // unique factorization round-trip
        let fac = f.factor_ideal(&ij, &Limits::default()).unwrap();
        prop_assert_eq!(fac.product(&f), ij);
    }

    #[test]
    fn conjugation_is_an_involution(fx in 0usize..5, g1 in elem(), g2 in elem()) {
        let f = field(fx);
        let i = f.ideal_from_generators(&[RingElement::new(g1.0, g1.1), RingElement::new(g2.0, g2.1)]).unwrap();
        let c = f.ideal_conjugate(&i);
        prop_assert_eq!(c.norm(), i.norm());
        prop_assert_eq!(f.ideal_conjugate(&c), i.clone());
        let prod = f.ideal_mul(&i, &c);
        prop_assert_eq!(prod, f.ideal_of_integer(i.norm()).unwrap());
    }

    #[test]
    fn distortion_run_invariants(
        classes in prop::collection::vec((0i64..12, prop::sample::select(vec![2i64, 3, 4, 5, 6, 8, 9, 10, 12])), 1..7),
        picks in prop::collection::vec(0usize..4, 6),
    ) {
        let q = FieldSpec::rational();
        let cls: Vec<CongruenceClass> = classes
            .iter()
            .map(|&(a, m)| CongruenceClass::new(RingElement::int(a % m), q.ideal_of_integer(m).unwrap()))
            .collect();
        let inst = CoveringInstance::validate(&q, cls, Limits::default()).unwrap();
        let problem = inst.distortion_problem().unwrap();
        let choices = [0i64, 1, 2, 3];
        let deltas: Vec<BigRational> = (0..inst.depth())
            .map(|j| BigRational::new(BigInt::from(choices[picks[j % picks.len()]]), BigInt::from(6)))
            .collect();
        let out = problem.run(&deltas, true).unwrap();
        for state in out.history.as_ref().unwrap() {
            prop_assert!(state.total().is_one());
            prop_assert!(state.mass.iter().all(|m| !m.is_negative()));
        }
        for (j, rep) in out.reports.iter().enumerate() {
            prop_assert!(out.target_mass[j] <= rep.contribution);
            prop_assert!(rep.m2 <= rep.m1);
        }
        let covers = matches!(inst.covers().unwrap(), Coverage::Covers);
        match problem.certify(&deltas).unwrap() {
            CertifyOutcome::Certificate(c) => {
                prop_assert!(!covers);
                prop_assert!(c.eta < BigRational::one());
                let w = inst.residue_at(c.witness);
                prop_assert!(inst.classes().iter().all(|k| !k.modulus.in_class(&w, &k.residue)));
            }
            CertifyOutcome::Inconclusive { eta, .. } => prop_assert!(eta >= BigRational::one()),
        }
    }
}
