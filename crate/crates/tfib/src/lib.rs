//! Monodromy-labeled discriminant graphs for torus fibrations.
//!
//! This crate models topological `T^3`-fibrations over 3-manifolds by their
//! combinatorial shadow: a discriminant graph whose edges carry unipotent
//! `SL(3, Z)` monodromy and whose vertices satisfy ordered loop relations.
//! On top of that model it provides
//!
//! - classification of local monodromy into the semistable normal forms
//!   ([`monodromy`]),
//! - validation, dualization and topological invariants of fibration
//!   graphs ([`fibration`]),
//! - Chern-class 1-chains for torus-bundle compactifications and the
//!   synthesis of fibration monodromy from a valid chain ([`chern`]),
//! - crepant resolutions of Gorenstein cones over triangulated lattice
//!   polygons and their dual-complex discriminant graphs ([`toric`]),
//! - the full quintic fibration with its 300-vertex discriminant graph,
//!   chart-transition monodromy and mirror dual ([`quintic`]),
//! - the mirror-quintic divisor lattice: cubic intersection form, lattice
//!   saturation, index consistency and trapezoid flops ([`intersection`]).
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod chern;
pub mod fibration;
pub mod intersection;
pub mod lattice;
pub mod monodromy;
pub mod quintic;
pub mod toric;

pub use fibration::FibrationGraph;
pub use lattice::{IntMatrix, LatticeVector};
pub use monodromy::{FiberKind, FiberType, MonodromyRep, VertexProfile};
