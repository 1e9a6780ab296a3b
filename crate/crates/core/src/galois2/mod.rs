//! Galois data of rank-two difference systems: rank-one classes, relation
//! lattices of diagonal characters, triangular reduction and the resulting
//! non-integrability certificates.

pub mod certificate;
pub mod character;
pub mod classify;
pub mod lattice;
pub mod multiplicative;
pub mod orbits;
pub mod registry;
pub mod solver;
pub mod triangular;

pub use classify::{classify_triangular, GaloisClassification};
pub use certificate::{criterion_for, fired_criterion, nonintegrability_certificate, Certificate, Criterion, HypothesisContext, Verdict};
pub use character::{character_class, CharacterClass, Triviality};
pub use multiplicative::multiplicative_relations;
pub use registry::{AssumptionRegistry, Fact, IntegerLog};
pub use solver::{solve_first_order, FirstOrderSolution};
pub use triangular::{triangularize, TriangularForm, TriangularSearch};
