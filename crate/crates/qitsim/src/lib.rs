//! Simulator for pulsed quantum information transfer between two four-level
//! qubits sharing a cavity mode.
//!
//! The crate is organized around the stages of that simulation:
//!
//! - [`space`]: tensor-product Hilbert-space algebra (states, operators,
//!   embedding, partial trace);
//! - [`dynamics`]: resonant qubit–cavity and qubit–pulse Hamiltonians, their
//!   closed-form rotations, unitary propagation, and Lindblad evolution with
//!   relaxation, dephasing, and cavity decay;
//! - [`protocol`]: the six-segment transfer schedule, an analytic per-step
//!   oracle, and an executor with idealized, full-coupling, and open-system
//!   modes;
//! - [`analysis`]: fidelity/leakage metrics, timing and decoherence budgets,
//!   and deterministic parameter sweeps.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod protocol;
pub mod space;

pub use error::{QitError, Result};
pub use space::{C64, DensityMatrix, Operator, SpaceLayout, StateVector};
