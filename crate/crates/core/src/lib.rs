// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Layout compiler for distributed quantum circuits.
//!
//! A monolithic circuit is split across several small devices. Gates that
//! cross a device boundary become remote CNOTs implemented by gate
//! teleportation over shared EPR pairs. Every piece is routed and
//! translated for its own device, and the result is merged back into one
//! layout that can be simulated and compared with the original.

pub mod assembler;
pub mod backend;
pub mod bench;
pub mod circuit;
pub mod partition;
pub mod pipeline;
pub mod qasm;
pub mod report;
pub mod scalar;
pub mod scheduler;
pub mod sim;
pub mod transpiler;

pub use circuit::{Circuit, CircuitError, Condition, GateKind, GateName, Instruction, RemoteId};
pub use scalar::{QSqrt2, Scalar};
pub use sim::{Distribution, SimConfig, SimError};

/// Double-precision state vector.
pub type StateVector = sim::StateVector<f64>;
/// Single-precision state vector.
pub type StateVector32 = sim::StateVector<f32>;
/// Exact state vector over ℚ(√2).
pub type ExactStateVector = sim::StateVector<QSqrt2>;
pub type Executor = sim::Executor<f64>;
pub type Unitary = sim::Unitary<f64>;
