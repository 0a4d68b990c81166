//! Subsystem trace distances between random pure states.
//!
//! Three independent routes to the same averages:
//!
//! - [`combinatorics`]: exact counts of non-crossing permutations that feed
//!   the even-integer moments of `ρ_A - σ_A`;
//! - [`predictions`]: closed forms for the trace distance of structureless
//!   random states and of charge eigenstates, built on [`special`];
//! - [`quantum`] and [`models`]: Monte Carlo sampling of random states and
//!   exact diagonalization of the SYK model and a chaotic Ising chain.
//!
//! [`harness`] ties them together into reproducible experiments that emit CSV.

pub mod combinatorics;
pub mod error;
pub mod harness;
pub mod models;
pub mod predictions;
pub mod quantum;
pub mod special;

pub use error::{Error, Result};
