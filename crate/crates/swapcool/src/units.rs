//! Natural (recoil) units used throughout the crate.
//!
//! Fixed constants, not configurable:
//!
//! * ħ = 1, photon wavenumber k = 1, recoil frequency ω_r = 1,
//!   which forces the mass m = 1/2 so that ω_r = ħk²/2m holds identically.
//! * All frequencies (Ω₀, Δs, γ, sweep slope × time) are in units of ω_r,
//!   times in 1/ω_r, momenta in ħk.
//! * A particle in momentum state β (integer, units of ħk) has velocity
//!   v = p/m = 2β, so its Doppler shift is kv = 2β ω_r.
//! * Kinetic energy of |βħk⟩ is p²/2m = β² ħω_r.
//! * The recoil temperature k_B T_r = ħω_r is 1, so temperatures in units of
//!   ħω_r/k_B satisfy k_B T = 2⟨p²⟩ with ⟨p²⟩ in (ħk)² (since m = 1/2).

pub const HBAR: f64 = 1.0;
pub const WAVENUMBER: f64 = 1.0;
pub const RECOIL_FREQUENCY: f64 = 1.0;
pub const MASS: f64 = 0.5;

/// Doppler shift kv (in ω_r) of a particle with momentum β ħk.
#[inline]
pub fn kv_of_momentum(beta: f64) -> f64 {
    2.0 * beta
}

/// 1D temperature in ħω_r/k_B from the momentum variance ⟨p²⟩ in (ħk)²,
/// k_B T = ⟨p²⟩/m = 2⟨p²⟩.
#[inline]
pub fn temperature_of_p2(mean_p2: f64) -> f64 {
    2.0 * mean_p2
}

/// Recoil temperature T_r in ħω_r/k_B; equilibrated SWAP cooling approaches 2 T_r.
pub const T_RECOIL: f64 = 1.0;
