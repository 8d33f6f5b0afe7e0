//! Dynamics of a spinning test body in Schwarzschild space-time.
//!
//! The pole-dipole Mathisson-Papapetrou equations under the Tulczyjew
//! condition reduce, after symmetry reduction, to a three-degree-of-freedom
//! Hamiltonian system in the variables (E, Z, r, P_r). This crate implements
//! the full covariant system, the reduction, circular-orbit families with
//! their linear stability, and the Poincare-section machinery (lifts, maps,
//! fixed points, separatrices, bifurcation scans).
//!
//! Everything works in scaled units: body mass m = 1, black-hole mass mu = 1,
//! so radii are in units of mu and spin is the dimensionless c.

pub mod dual;
pub mod equilibria;
pub mod error;
pub mod full_system;
pub mod geometry;
pub mod integrate;
pub mod poincare;
pub mod reduced;

pub use error::MpError;
pub use full_system::FullState;
pub use reduced::{IntegralParams, ReducedState};
