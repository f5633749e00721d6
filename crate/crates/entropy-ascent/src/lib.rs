//! Steepest-entropy-ascent dynamics for finite-level Boltzmann gases.
//!
//! A dilute Boltzmann gas of non-interacting identical particles is described
//! by a probability vector `p` over `N` single-particle energy eigenvalues
//! `e_1, ..., e_N`. Two functionals govern everything in this crate:
//!
//! ```text
//! E = Σ e_i p_i        S = -k Σ p_i ln p_i        Σ p_i = 1
//! ```
//!
//! The crate provides:
//!
//! - [`dynamics`]: the nonlinear steepest-entropy-ascent rate law for the
//!   nonzero probabilities (a ratio of a 3×3 determinant to a 2×2 Gram
//!   determinant), an independent Lagrange-multiplier form of the same law,
//!   and the non-negative entropy-production functional.
//! - [`integrate`]: fixed-step RK4 and adaptive RK45 integrators that
//!   conserve energy and normalization, preserve non-negativity, freeze the
//!   initial support, and produce monotone-entropy trajectories.
//! - [`equilibrium`]: canonical and partially-canonical solvers: partition
//!   functions with overflow-safe shifts, `β` from energy by bracketed root
//!   finding, temperatures (including the negative-temperature branch and
//!   the `β = ±∞` endpoints of a bounded spectrum), and equilibrium
//!   detection.
//! - [`statespace`]: the energy–entropy diagram: the concave `S_max(E)`
//!   boundary, point feasibility, adiabatic availability, available energy
//!   relative to a reservoir, and the Maxwell-demon feasibility check.
//! - [`criteria`]: a validator harness that tests candidate entropy
//!   functionals (Shannon, Tsallis, Rényi, Hartley, quadratic) against
//!   eight operationalized admissibility criteria and records replayable
//!   counterexamples for every failure.
//! - [`cli`]: deterministic file emission (CSV trajectories, JSON
//!   summaries and reports, SVG diagrams) behind the `entropy-ascent`
//!   binary.
//!
//! The `examples/` directory has one runnable program per capability; start
//! with `relaxation.rs`.

pub mod cli;
pub mod criteria;
pub mod dynamics;
pub mod equilibrium;
mod error;
pub mod integrate;
mod optimize;
pub mod spectrum;
pub mod state;
pub mod statespace;

pub use error::Error;
pub use integrate::{IntegratorConfig, Method, Trajectory, TrajectoryPoint};
pub use spectrum::EnergySpectrum;
pub use state::{energy, entropy, xlogx, ModelConstants, StateDistribution, ValidationMode};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Probabilities below this threshold are snapped to exactly zero when a
/// state is constructed, so "out of support" always means a bitwise 0.0.
pub const SUPPORT_EPS: f64 = 1e-14;

/// Tolerance on Σp = 1 accepted by strict validation.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Entries more negative than this are rejected outright; anything in
/// [-NEGATIVE_SLACK, 0) is treated as a rounding artifact and snapped to 0.
pub const NEGATIVE_SLACK: f64 = 1e-12;
