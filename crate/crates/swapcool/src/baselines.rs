//! Doppler-cooling reference runs for the efficiency comparison.
//!
//! The baseline reuses the SWAP kernels at constant detuning: the same
//! standing-wave Hamiltonian and dissipator, with δ fixed (typically red,
//! δ < 0). Energy-per-photon comparisons then probe the cooling scheme,
//! not differences in machinery.

use crate::drive::{DriveParams, SweepSchedule};
use crate::error::Result;
use crate::integrate::{run_ensemble, EnsembleResult, IntegratorConfig};
use crate::state::SpinMomentumState;

/// Doppler drive: per-beam Rabi frequency Ω and fixed detuning δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerParams {
    pub omega: f64,
    pub delta: f64,
}

/// Doppler-cooling ensemble: constant-detuning standing wave with full
/// dissipation. Records carry ⟨p²⟩ (energy via ⟨p²⟩/2m = ⟨p²⟩ ħω_r in
/// recoil units) against the mean cumulative photon count ξ.
pub fn doppler_cool(
    psi0: &SpinMomentumState,
    doppler: &DopplerParams,
    gamma: f64,
    t_end: f64,
    n_traj: usize,
    base_seed: u64,
    cfg: &IntegratorConfig,
) -> Result<EnsembleResult> {
    let params = DriveParams::new(doppler.omega, gamma)?;
    let schedule = SweepSchedule::Constant { delta: doppler.delta };
    run_ensemble(psi0, &schedule, &params, t_end, n_traj, base_seed, cfg)
}

/// Momentum removed per scattered photon between two points of an
/// ⟨|p|⟩-vs-ξ curve, by linear interpolation in ξ. Returns `None` when the
/// curve does not span the requested window.
pub fn momentum_per_photon(
    xi_curve: &[(f64, f64)], // (mean ξ, mean |p|), ξ non-decreasing
    xi_lo: f64,
    xi_hi: f64,
) -> Option<f64> {
    let p_lo = interp(xi_curve, xi_lo)?;
    let p_hi = interp(xi_curve, xi_hi)?;
    Some((p_lo - p_hi) / (xi_hi - xi_lo))
}

/// Linear interpolation of y(x) on a non-decreasing x grid.
pub fn interp(curve: &[(f64, f64)], x: f64) -> Option<f64> {
    if curve.is_empty() || x < curve[0].0 || x > curve.last().unwrap().0 {
        return None;
    }
    let idx = curve.partition_point(|&(cx, _)| cx < x);
    if idx == 0 {
        return Some(curve[0].1);
    }
    let (x0, y0) = curve[idx - 1];
    let (x1, y1) = curve[idx];
    if x1 == x0 {
        return Some(y1);
    }
    Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}
