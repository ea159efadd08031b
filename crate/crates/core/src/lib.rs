//! Quantum steering ellipsoids (QSEs) of two-qubit states and their evolution
//! under local single-qubit channels.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`pauli`]: density-matrix and Pauli-coefficient (Θ) views of one- and
//!   two-qubit states, with validation.
//! - [`channels`]: CPTP qubit channels in Kraus and affine `(M, t)` form,
//!   their classification into unital / completely decohering /
//!   discord-creating, and application to qubit B.
//! - [`steering`]: construction and measurement of the ellipsoids `E_A` and `E_B`.
//! - [`correlations`]: entropies, trace distance, concurrence and B-side
//!   quantum discord (numeric projective optimisation and an X-state path).
//! - [`decomposition`]: splitting a needle-QSE state into two product terms
//!   and building the local channel that prepares it from a
//!   quantum-classical state.
//! - [`families`]: the named state families used throughout (Bell-diagonal,
//!   amplitude-damped Bell-diagonal, needle family, quantum-classical).
//! - [`sweep`]: per-point observables and curve analysis for parameter sweeps.
//!
//! With the default `rand` feature, [`random`] provides samplers for states,
//! channels and SLOCC operators.
#![no_std]

extern crate alloc;

pub mod channels;
pub mod correlations;
pub mod decomposition;
mod error;
pub mod families;
pub mod linalg;
pub mod optimize;
pub mod pauli;
#[cfg(feature = "rand")]
pub mod random;
pub mod steering;
pub mod sweep;

pub use nalgebra;

pub use channels::{ChannelClass, QubitChannel};
pub use correlations::{DiscordMethod, DiscordOptions, DiscordResult};
pub use decomposition::{NeedleDecomposition, PreparationRecipe, TheoremReport};
pub use error::{Error, Result};
pub use pauli::{BlochVector, PauliTheta, Side, SingleQubitState, TwoQubitState, ValidationReport};
pub use steering::{Ellipsoid, EllipsoidSize, SteeredOutcome};
