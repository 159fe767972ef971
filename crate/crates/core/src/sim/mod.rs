// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! State-vector simulation with mid-circuit measurement, reset and
//! classically conditioned gates.

mod distribution;
mod exact;
mod exec;
mod gates;
mod shots;
mod state;
mod unitary;

use thiserror::Error;

use crate::circuit::{Circuit, GateName, RemoteId};

pub use distribution::{hellinger_fidelity, total_variation, Counts, Distribution};
pub use exact::{enumerate_branches, ideal_distribution, ideal_distribution_keyed, Branch};
pub use exec::{BranchEntry, CollapseKind, Executor, OutcomeSource};
pub use gates::{representable, single_qubit_matrix, Mat2};
pub use shots::{run_shots, run_shots_keyed, sample_counts, sample_shot, ShotResult};
pub use state::StateVector;
pub use unitary::{circuit_unitary, equal_up_to_global_phase, Unitary};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("circuit has {qubits} qubits, simulator cap is {cap}")]
    TooLarge { qubits: usize, cap: usize },
    #[error("more than {cap} measurement branches")]
    BranchCap { cap: usize },
    #[error("{count} measurements exceed the branch enumeration limit of {cap}")]
    MeasureCap { count: usize, cap: usize },
    #[error("unexpanded remote placeholder {0}")]
    Placeholder(RemoteId),
    #[error("{0} is not unitary")]
    NonUnitary(GateName),
    #[error("{0} has no exact matrix over this scalar")]
    Unrepresentable(GateName),
    #[error("qubit {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("clbit {index} out of range for {num_clbits} clbits")]
    ClbitOutOfRange { index: usize, num_clbits: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("shot count must be positive")]
    ZeroShots,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    /// Largest circuit width accepted.
    pub qubit_cap: usize,
    /// Largest number of distinct measurement histories explored exactly.
    pub branch_cap: usize,
    /// Most measurements allowed in [`enumerate_branches`].
    pub max_enumerated_measures: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            qubit_cap: 24,
            branch_cap: 1 << 16,
            max_enumerated_measures: 16,
        }
    }
}

impl SimConfig {
    pub fn with_qubit_cap(mut self, cap: usize) -> Self {
        self.qubit_cap = cap;
        self
    }
}

pub(crate) fn check_circuit(c: &Circuit, config: &SimConfig) -> Result<(), SimError> {
    if c.num_qubits() > config.qubit_cap {
        return Err(SimError::TooLarge {
            qubits: c.num_qubits(),
            cap: config.qubit_cap,
        });
    }
    if let Some(id) = c.instructions().iter().find_map(|i| i.placeholder_id()) {
        return Err(SimError::Placeholder(id));
    }
    Ok(())
}
