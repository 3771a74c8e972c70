//! Finite-dimensional quantum measurement toolkit.
//!
//! Dense complex linear algebra over small Hilbert spaces, quantum domain
//! objects (states, effects, POVMs), indirect measurement schemes, optimal
//! two-state discrimination with brute-force oracles, an EPR no-signaling
//! simulator, and informationally complete qubit tomography.

pub mod discrimination;
pub mod error;
pub mod hilbert;
pub mod json;
pub mod mc;
pub mod quantum;
pub mod scheme;
pub mod signaling;
pub mod tomography;

pub use error::{Error, Result};

/// Default numeric tolerance for operator predicates and validity checks,
/// overridable per call.
pub const DEFAULT_TOL: f64 = 1e-9;
