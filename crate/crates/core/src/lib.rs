//! Classical and quantum Bell-type bounds for small multi-qudit systems.
//!
//! Classical bounds come from vertex enumeration of the separable
//! stochastic-matrix polytope. Quantum bounds come from maximizing the
//! tomographic B-form `Tr(C·M)` over measurement Euler angles.

pub mod correlators;
pub mod error;
pub mod layout;
pub mod linalg;
pub mod polytope;
pub mod search;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
