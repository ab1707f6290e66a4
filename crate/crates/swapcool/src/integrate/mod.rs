//! Time-evolution engines.
//!
//! Two independent routes integrate the same physics:
//!
//! * [`evolve_master`] — dense master equation in the laser frame,
//!   fixed-step RK4 on the density matrix (the oracle route; cost grows as
//!   dim², so it is meant for modest grids);
//! * [`evolve_trajectory`] — quantum-jump Monte Carlo wave function in the
//!   rotating frame of the instantaneous diagonal, where the n² and δ(t)
//!   phases are applied in closed form and the step size is set by the
//!   detuning offsets instead of the kinetic energies (the production
//!   route for scans and ensembles).
//!
//! Their agreement on shared grids is the primary correctness gate for the
//! stochastic engine.

mod ensemble;
mod master;
mod trajectory;

pub use ensemble::{run_ensemble, EnsembleBin, EnsembleResult, ObservableSe};
pub use master::evolve_master;
pub use trajectory::{evolve_trajectory, JumpEvent, TrajectoryOutput, TrajectorySeed};

use rand::Rng;

use crate::dissipation::{self, JUMP_CHANNELS};
use crate::drive::SweepSchedule;
use crate::error::{Error, Result};
use crate::state::{DensityOperator, SpinMomentumState};

/// Step control and recording policy.
///
/// The step is `min(dt_max, safety / rate)` where `rate` bounds the fastest
/// phase still present in the working frame: in the laser frame that
/// includes the kinetic diagonal (≈ n_max²), in the rotating frame only the
/// detuning offsets (≈ Δs/2 + 2·n_max + 1) and the coupling Ω_s survive.
/// Records land on fixed fractions of the schedule period (never on
/// dt-dependent times), so runs with different step sizes or engines share
/// the same record grid and ensemble averaging never interpolates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt_max: f64,
    pub safety: f64,
    /// Tolerance on master-equation trace drift and related sanity checks.
    pub norm_tolerance: f64,
    /// Number of records per schedule period (or per run for aperiodic
    /// schedules), including the endpoint.
    pub records_per_period: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt_max: f64::INFINITY, safety: 0.1, norm_tolerance: 1e-8, records_per_period: 200 }
    }
}

impl IntegratorConfig {
    pub fn with_safety(mut self, safety: f64) -> Self {
        self.safety = safety;
        self
    }

    pub fn with_records_per_period(mut self, records: usize) -> Self {
        self.records_per_period = records.max(1);
        self
    }

    pub fn with_dt_max(mut self, dt_max: f64) -> Self {
        self.dt_max = dt_max;
        self
    }
}

/// Discretization of a run: fixed step, aligned records, period boundaries.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TimeGrid {
    pub dt: f64,
    pub total_steps: usize,
    pub record_every: usize,
    /// Steps per schedule period when the span is an integer number of
    /// periods (sweep boundaries then fall exactly on steps).
    pub period_steps: Option<usize>,
}

pub(crate) fn build_time_grid(
    schedule: &SweepSchedule,
    span: f64,
    rate: f64,
    cfg: &IntegratorConfig,
) -> Result<TimeGrid> {
    let dt_raw = (cfg.safety / rate).min(cfg.dt_max);
    if !dt_raw.is_finite() || dt_raw < 1e-12 {
        return Err(Error::StepUnderflow { dt: dt_raw, t: 0.0 });
    }
    let rpp = cfg.records_per_period.max(1);
    if let Some(t_s) = schedule.period() {
        let periods = span / t_s;
        let rounded = periods.round();
        if rounded >= 1.0 && (periods - rounded).abs() < 1e-9 {
            let m = rounded as usize;
            let raw = (t_s / dt_raw).ceil().max(1.0) as usize;
            let steps_per_period = rpp * raw.div_ceil(rpp);
            return Ok(TimeGrid {
                dt: t_s / steps_per_period as f64,
                total_steps: m * steps_per_period,
                record_every: steps_per_period / rpp,
                period_steps: Some(steps_per_period),
            });
        }
    }
    let raw = (span / dt_raw).ceil().max(1.0) as usize;
    let total_steps = rpp * raw.div_ceil(rpp);
    Ok(TimeGrid {
        dt: span / total_steps as f64,
        total_steps,
        record_every: total_steps / rpp,
        period_steps: None,
    })
}

/// End-of-ramp projection for the sweep-wait scheme (T_wait → ∞ shortcut),
/// trajectory flavor: with probability P_e the excited fraction decays
/// through one sampled recoil channel (photon emitted); otherwise the state
/// is projected onto the ground subspace and renormalized.
///
/// Returns the post-wait state and the emission channel, if any.
pub fn project_wait_state<R: Rng + ?Sized>(
    state: &SpinMomentumState,
    rng: &mut R,
) -> Result<(SpinMomentumState, Option<usize>)> {
    let psi = state.normalized();
    let p_e = psi.expectations_unchecked().p_e;
    let u: f64 = rng.random();
    if u < p_e {
        let (channel, post) = dissipation::sample_jump(&psi, rng)?;
        Ok((post, Some(channel)))
    } else {
        let mut post = psi;
        let sites = post.grid().sites();
        for a in &mut post.amplitudes_mut()[sites..] {
            *a = num_complex::Complex64::ZERO;
        }
        post.normalize();
        Ok((post, None))
    }
}

/// Master-equation flavor of the wait projection: the ground block is kept,
/// g–e coherences are discarded, and the excited block is redistributed
/// into the ground block through the three recoil channels.
///
/// Returns the projected operator and the expected photon count per channel
/// added by the wait (weight × P_e each).
pub fn project_wait_density(rho: &DensityOperator) -> (DensityOperator, [f64; 3]) {
    let grid = *rho.grid();
    let sites = grid.sites();
    let m = rho.matrix();
    let mut out = DensityOperator::zero(grid);
    let p_e: f64 = (0..sites).map(|s| m[(sites + s, sites + s)].re).sum();
    {
        let o = out.matrix_mut();
        for i in 0..sites {
            for j in 0..sites {
                o[(i, j)] = m[(i, j)];
            }
        }
        let wrap = |s: i64| -> usize { s.rem_euclid(sites as i64) as usize };
        for i in 0..sites {
            for j in 0..sites {
                let val = m[(sites + i, sites + j)];
                if val == num_complex::Complex64::ZERO {
                    continue;
                }
                for ch in JUMP_CHANNELS {
                    let ti = wrap(i as i64 + ch.recoil);
                    let tj = wrap(j as i64 + ch.recoil);
                    o[(ti, tj)] += ch.weight * val;
                }
            }
        }
    }
    let xi = [
        JUMP_CHANNELS[0].weight * p_e,
        JUMP_CHANNELS[1].weight * p_e,
        JUMP_CHANNELS[2].weight * p_e,
    ];
    (out, xi)
}
