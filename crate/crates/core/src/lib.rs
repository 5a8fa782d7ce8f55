//! Simulation of hybrid qubit / bosonic-mode circuits for interferometric
//! phase estimation.
//!
//! The crate is organised bottom-up:
//!
//! - [`hilbert`]: tensor-product state vectors and operators applied to
//!   selected wires by strided kernels.
//! - [`schwinger`]: the dictionary between symmetric N-qubit states and the
//!   N-photon sector of two modes.
//! - [`gates`]: constructors for every unitary used by the protocols.
//! - [`measurement`]: outcome distributions, classical post-processing and
//!   measurement rewrite helpers.
//! - [`circuit`]: circuit IR, exhaustive branch simulator, deferred
//!   measurement and equivalence checking.
//! - [`protocols`]: the phase-estimation protocols, fringe sweeps and
//!   sensitivity analysis.
//! - [`dsl`]: the `.qc` text format.

pub mod circuit;
pub mod config;
pub mod dsl;
pub mod error;
pub mod gates;
pub mod hilbert;
pub mod measurement;
pub mod protocols;
pub mod report;
pub mod schwinger;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
