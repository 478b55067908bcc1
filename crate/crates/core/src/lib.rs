//! Numerics for reciprocal pairs of finite-dimensional quantum channels.
//!
//! A reciprocal pair `{D_{+|λ|}, D_{-|λ|}}` consists of two channels whose
//! output images coincide up to a rigid inversion through the maximally
//! mixed state. Classically the two directions would carry information
//! equally well; quantum mechanically they do not, and this crate computes
//! exactly how unequally:
//!
//! - [`linalg`]: dense complex matrices, tensor products, partial traces,
//!   Hermitian spectra, trace norms.
//! - [`states`]: density matrices, pure states, probability vectors,
//!   entropies, the qubit Bloch parametrization.
//! - [`random`]: seed-threaded Haar sampling of states and unitaries.
//! - [`channels`]: depolarizing channels, Weyl operators and Weyl-covariant
//!   channels, mixers, the (non-CP) inversion map, and the Choi calculus:
//!   apply, extend, compose, Kraus extraction, Choi spectra.
//! - [`capacities`]: closed-form unassisted and entanglement-assisted
//!   capacities, completely positive parameter windows, asymmetry ratios,
//!   and fidelity formulas.
//! - [`oracles`]: independent numerical verification: mutual-information
//!   maximization, minimum-output-entropy search, Monte-Carlo fidelity
//!   averages, and channel twirling.
//! - [`spec`]: the JSON channel descriptions used by the CLI.
//! - [`verify`]: packaged self-check suites over all of the above.
//!
//! All logarithms are base 2; capacities are in bits.

pub mod capacities;
pub mod channels;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod random;
pub mod spec;
pub mod states;
pub mod verify;

pub use capacities::{CapacityKind, CapacityMethod, CapacityReport, CpRange};
pub use channels::{ChannelRep, WccSpec, WeylLabel};
pub use error::{Error, Result};
pub use linalg::{CMat, CVec, C64};
pub use oracles::{MonteCarloEstimate, OptimizationResult};
pub use spec::ChannelSpec;
pub use states::{DensityMatrix, ProbabilityVector, PureState};
