//! Canonical quantum-classical hybrid bracket for a finite-dimensional quantum sector
//! coupled to a classical phase space.

pub mod classical;
pub mod dynamics;
pub mod error;
pub mod hybrid;
mod par;
pub mod positivity;
pub mod sampling;
pub mod scenario;
pub mod su;
pub mod uniqueness;

pub use error::{Error, Result};
