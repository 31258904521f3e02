// SPDX-License-Identifier: Apache-2.0

//! Non-adiabatic geometric-phase gates for a driven pair of spin-1/2 systems.
//!
//! * [`linalg`]: 2×2 / 4×4 complex matrices, SU(2) exponentials, distances.
//! * [`spin`]: closed-form single-spin propagator and the dynamic/geometric
//!   phase split of its cyclic states.
//! * [`oracle`]: fourth-order Magnus integrator and numerical phase extraction.
//! * [`gate`]: two-spin Hamiltonian, the diagonal geometric gate, and the
//!   compound contour that cancels dynamic phases.
//! * [`synthesis`]: control-parameter inversion and parameter sweeps.
//! * [`cli`]: config parsing, command dispatch, JSON/CSV emission.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod exec;
pub mod gate;
pub mod linalg;
pub mod oracle;
pub mod spin;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
