//! Gaussian-state simulation of continuous-variable quantum teleportation.
//!
//! The crate is organised bottom-up:
//!
//! * [`gaussian`] holds N-mode Gaussian states in the first-moment plus
//!   covariance-matrix representation (ħ = 2, vacuum covariance = identity),
//!   the state factories, symplectic transform builders and the
//!   physicality / Wigner evaluations.
//! * [`protocol`] is the ideal Braunstein–Kimble pipeline: double-homodyne
//!   measurement, feed-forward displacement and the teleportation fidelity.
//! * [`microwave`] models the lossy microwave circuit with JPA/HEMT
//!   amplification, ADC conversion and directional-coupler feed-forward.
//! * [`freespace`] treats a two-mode squeezed resource leaking into a thermal
//!   bath and its re-expression as a locally squeezed thermal resource.
//!
//! Everything is a pure function of its inputs; the Monte Carlo entry points
//! take an explicit seed and use one counter-based RNG stream per shot.

pub mod error;
pub mod format;
pub mod freespace;
pub mod gaussian;
pub mod microwave;
pub mod protocol;
pub mod quadrature;
pub mod sampling;

pub use error::{Error, Result};
pub use gaussian::{
    CovarianceMatrix, GaussianState, QuadratureVector, SymplecticForm, SymplecticTransform,
    DEFAULT_TOL,
};
