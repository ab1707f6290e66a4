//! Simulation and analysis toolkit for SWAP (sawtooth wave adiabatic passage)
//! laser cooling of a two-level particle in one dimension.
//!
//! The particle lives on a discretized Hilbert space: two internal levels
//! crossed with an integer momentum ladder (units of the photon momentum ħk).
//! Everything is expressed in recoil units, see [`units`].
//!
//! The crate provides
//! - the time-dependent standing-wave Hamiltonian and detuning waveforms
//!   ([`drive`]),
//! - spontaneous-emission machinery with the discretized ∓ħk/0 recoil
//!   pattern ([`dissipation`]),
//! - a dense master-equation integrator and a quantum-jump (Monte Carlo
//!   wave function) trajectory integrator with deterministic seeding
//!   ([`integrate`]),
//! - per-sweep impulse/force diagnostics, temperature and regime
//!   classification ([`analysis`]),
//! - closed-form resonance theory (Landau-Zener, Dopplerons, Bragg) used as
//!   an independent cross-check layer ([`resonance`]),
//! - a Doppler-cooling baseline sharing the same kernels ([`baselines`]).

pub mod analysis;
pub mod baselines;
pub mod dissipation;
pub mod drive;
pub mod error;
pub mod grid;
pub mod integrate;
pub mod linalg;
pub mod resonance;
pub mod state;
pub mod units;

pub use error::{Error, Result};
pub use grid::{InternalLevel, MomentumGrid};
pub use state::{DensityOperator, Expectations, ObservableRecord, SpinMomentumState};
