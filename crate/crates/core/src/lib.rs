//! Numerical integral geometry over the shortest closed geodesics of compact
//! symmetric spaces.
//!
//! The crate has four parts:
//!
//! * [`rootsys`] — irreducible (restricted) root systems in their standard
//!   Euclidean realizations, dual-root lattice vectors, midpoint-locus
//!   dimensions, and a bundled table of concrete symmetric spaces.
//! * [`sphere`] — the great-circle transform on S²: spectrally accurate
//!   circle quadrature, real spherical harmonics, the transform's spectrum,
//!   kernel identification, and even-part inversion.
//! * [`cpn`] — a homogeneous-coordinate model of CPⁿ with the Fubini–Study
//!   metric scaled so closed geodesics have length 2π: points, projective
//!   lines, geodesics, antipode and avoiding-line constructions.
//! * [`lab`] — discretized transform experiments on CPⁿ: band-limited
//!   phase-invariant polynomial bases, operator assembly, numerical
//!   rank/kernel analysis, least-squares inversion, and the ball-avoidance
//!   support experiment.
//!
//! Dense operators and their factorizations live in [`linalg`]; both the S²
//! and CPⁿ pipelines share that code path, so rank and kernel verdicts are
//! comparable across the two models.

pub mod cpn;
pub mod lab;
pub mod linalg;
pub mod rootsys;
pub mod sphere;

pub use cpn::{Ball, CPGeodesic, ProjLine, ProjPoint};
pub use lab::{CPBasis, InjectivityReport, SupportReport};
pub use linalg::{KernelAnalysis, TransformOperator};
pub use rootsys::{Family, LatticeVector, RootSystem, SymmetricSpaceDescriptor};
pub use sphere::{GreatCircle, HarmonicBasis, SphereFunction, UnitVec3};
