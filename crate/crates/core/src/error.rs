// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated (wrong dimension, non-unit axis, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The drive leaves some angle undefined (zero field, zero Rabi frequency).
    #[error("degenerate drive: {0}")]
    DegenerateDrive(String),

    #[error("infeasible target {value}: attainable interval is [{lo}, {hi}]")]
    InfeasibleTarget { value: f64, lo: f64, hi: f64 },

    #[error("spins must be distinguishable: omega01 = {omega01}, omega02 = {omega02}")]
    IndistinctSpins { omega01: f64, omega02: f64 },

    #[error("synthesis did not converge after {iterations} iterations (last iterate {last})")]
    SynthesisFailure { iterations: usize, last: f64 },

    #[error("integrator accuracy not reached: step doubling changed the result by {achieved:e} (tolerance {tolerance:e})")]
    IntegratorAccuracy { achieved: f64, tolerance: f64 },

    #[error("state is not cyclic over the trajectory: |<psi(0)|psi(T)>| = {overlap}")]
    NotCyclic { overlap: f64 },

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
