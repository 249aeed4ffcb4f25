//! Coulomb-Kepler problem on the fuzzy space.
//!
//! Wave functions are operators on a two-mode truncated Fock space.
//! [`superops`] builds the Hamiltonian, velocity, angular momentum and
//! Laplace-Runge-Lenz operators as superoperators on those matrices and checks
//! their algebra numerically; [`symbolic`] proves the same identities exactly
//! in the ladder algebra; [`spectrum`] gives bound energies, radial
//! eigenfunctions, the S-matrix and its poles.

pub mod error;
pub mod fock;
pub mod ncwave;
pub mod sparse;
pub mod spectrum;
pub mod superops;
pub mod symbolic;

pub use error::{Error, Result};
