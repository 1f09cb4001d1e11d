//! Discrete phase-space pipeline: exact linear algebra over odd prime fields,
//! quadrature epistemic states, dagger Frobenius algebras in the category of
//! finite relations, groupoid extraction, and quantization into a concrete
//! finite matrix algebra.
//!
//! The crate is organized around five stages:
//!
//! * [`fplinalg`] — exact arithmetic over `Z_d` and symplectic linear algebra
//!   on the phase space `Z_d^{2n}`.
//! * [`epistricted`] — knowability, epistemic states, affine symplectic
//!   dynamics and sharp measurements, grounded by an exact ontic oracle.
//! * [`relcat`] — finite sets and relations, special dagger Frobenius
//!   algebras, and the concrete block algebra on `Z_d × Z_d`.
//! * [`groupoids`] — groupoids extracted from Frobenius algebras, pair
//!   groupoids, the endomorphism monoid and the multiplication graph.
//! * [`quantize`] — Heisenberg-Weyl operators, the discrete Weyl transform,
//!   metaplectic unitaries, stabilizer projectors, discrete Wigner functions
//!   and the operational-equivalence comparator.

pub mod epistricted;
pub mod fplinalg;
pub mod groupoids;
pub mod quantize;
pub mod relcat;
#[cfg(test)]
pub(crate) mod testutil;

pub use epistricted::{AffineSymplectic, EpistemicState, OnticDistribution, QuadratureFunctional};
pub use fplinalg::{FpMatrix, FpSubspace, FpVector, PrimeField, SubspaceClass};
pub use groupoids::Groupoid;
pub use quantize::{CMatrix, PhaseFn, Pvm, WeylSystem};
pub use relcat::{DaggerFrobenius, FinSet, Relation};

/// Default ceiling on `d^{2n}` for exhaustive enumerations.
pub const ENUMERATION_GUARD: u64 = 1_000_000;
