//! Numerical instantiation of Schwarz-type inequalities for maps of the unit
//! disk into the symmetrized polydisk, quasi-balanced domains and the spectral
//! unit ball.
//!
//! The crate is organised bottom-up:
//!
//! - [`mobius`]: the Möbius pseudodistance on the disk, balls and polydisks,
//!   the Hausdorff pseudodistance it induces on finite sets, and the link to
//!   the Carathéodory distance.
//! - [`sympoly`]: the symmetrization map, its inverse by root extraction,
//!   geometry of the symmetrized polydisk and the fiber-distance functions
//!   `h` and `h1`.
//! - [`quasibalanced`]: weighted circular actions, Minkowski gauges by
//!   bisection and the quasi-balanced Schwarz lemma.
//! - [`spectralball`]: characteristic/minimal polynomials, spectral radius,
//!   minimal Blaschke products and the annihilating self-map of the spectral
//!   unit ball.
//! - [`holomaps`]: seeded families of holomorphic maps out of the disk.
//! - [`harness`]: the trial engine behind the `schwarz-lab` CLI.

pub mod error;
pub mod harness;
pub mod holomaps;
pub mod mobius;
pub mod multiset;
pub mod quasibalanced;
pub mod rng;
pub mod spectralball;
pub mod sympoly;

pub use error::{Error, Result};
pub use multiset::PointMultiset;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
