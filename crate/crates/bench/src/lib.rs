//! Benchmark fixtures; the benches themselves live in `benches/`.

use coverdist::{CongruenceClass, CoveringInstance, FieldSpec, Limits, RingElement};

/// A rational instance from `(residue, modulus)` pairs.
pub fn rational_instance(classes: &[(i64, i64)]) -> CoveringInstance {
    let q = FieldSpec::rational();
    let cls = classes
        .iter()
        .map(|&(a, m)| CongruenceClass::new(RingElement::int(a), q.ideal_of_integer(m).unwrap()))
        .collect();
    CoveringInstance::validate(&q, cls, Limits::default()).unwrap()
}

/// The classic cover `{0/2, 0/3, 1/4, 5/6, 7/12}`.
pub fn classic() -> CoveringInstance {
    rational_instance(&[(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)])
}

/// Ten classes with `N(Q) = 5040` and depth 4.
pub fn wide() -> CoveringInstance {
    rational_instance(&[(0, 2), (1, 3), (3, 4), (2, 5), (6, 7), (5, 8), (7, 9), (11, 16), (4, 35), (1, 45)])
}
