//! Distortion-method toolkit for covering systems over `Z` and quadratic fields.
//!
//! * [`ring`]: fields, elements, ideals in HNF, factorization.
//! * [`system`]: congruence-class instances, coverage by enumeration, and
//!   the level structure feeding the distortion engine.
//! * [`distortion`]: exact recursive measures, moments, certificates.
//! * [`bounds`]: explicit majorants and the effective minimum-norm bound.
//! * [`json`]: file formats.

pub mod arith;
pub mod bounds;
pub mod distortion;
pub mod json;
pub mod ring;
pub mod system;

pub use bounds::{BoundCertificate, BoundConfig, BoundEngine, BoundError};
pub use distortion::{
    CertifyOutcome, DeltaPolicy, DistortionError, DistortionProblem, DistortionState, MomentReport,
    NonCoverCertificate,
};
pub use ring::{FieldSpec, Ideal, IdealFactorization, Limits, PrimeIdeal, RingElement, RingError, Splitting};
pub use system::{CongruenceClass, CoveringInstance, Coverage, SystemError};
