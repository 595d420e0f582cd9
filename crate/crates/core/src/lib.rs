//! Numerical construction and verification of invariants, action-phase
//! variables, squeezing transformations, exact number-state wavefunctions,
//! and candidate phase operators for the general time-dependent quadratic
//! oscillator H = (X/2)p² + (Y/2)(pq + qp) + (Z/2)q².
//!
//! The crate is organized around one object chain:
//!
//! * [`coefficients`]: the oscillator definition (X, Y, Z) and a catalog
//!   of named closed-form families;
//! * [`dynamics`]: complex mode functions of the classical mode equation
//!   with Wronskian normalization, and Hamiltonian phase-space flow;
//! * [`invariants`]: the linear and quadratic invariants built from a
//!   mode, action-phase variables, and numeric Poisson-bracket and
//!   phase-space-volume oracles;
//! * [`fock`]: exact number-state wavefunctions, orthonormality and
//!   Schrödinger-equation residuals, auxiliary-equation forms, and
//!   truncated ladder matrices;
//! * [`bogoliubov`]: mode-to-mode Bogoliubov coefficients and the squeeze
//!   reduction of general quadratic invariants on truncated matrices;
//! * [`phase`]: matrix realizations of the candidate phase-operator
//!   schemes and their consistency checks.

pub mod bogoliubov;
pub mod coefficients;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod invariants;
pub mod ode;
pub mod operators;
pub mod phase;
pub mod quadrature;

pub use coefficients::{CoefficientProfile, ProfileCatalog, TimeInterval};
pub use dynamics::{ClassicalMode, PhaseTrajectory};
pub use error::{Error, Result};
pub use invariants::{ActionPhase, InvariantFrame, QuadraticInvariantSpec};
pub use operators::OperatorMatrix;
