//! Moebius transformations, adapted curves, discrete variational
//! equations and gauge transformations.

mod moebius;
mod system;

pub use moebius::{FixedPoint, Moebius, MoebiusClass, MoebiusKind, DEFAULT_PERIOD_BOUND};
pub use system::{
    gauge_transform, normalize_system, variational_system, verify_adapted, verify_symplectic_system, AdaptedCurve,
    Adaptedness, DifferenceSystem,
};
