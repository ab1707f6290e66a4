//! Force/impulse diagnostics, temperature, regime classification and the
//! capture-range predicate.
//!
//! The per-sweep impulse curves come in two flavors:
//!
//! * [`delta_p_rms`] — the conservative (γ = 0) change of rms momentum over
//!   one sweep from a pure preparation; rms is used because it is blind to
//!   Bragg mixing between |±p⟩.
//! * [`delta_p_avg_steady`] — the dissipative (γ > 0) average impulse with
//!   the internal populations constrained to their per-sweep fixed point.
//!   The master equation is linear, so the end-of-sweep excited population
//!   from a mixed internal preparation x is affine in x:
//!   x′ = (1 − x)·a + x·b with a (b) measured from the pure ground
//!   (excited) preparation, giving the fixed point x* = a/(1 − b + a)
//!   from two runs. Δp_avg and ξ are the same affine combinations.

use rayon::prelude::*;

use crate::drive::{DriveParams, RampSign, SweepSchedule};
use crate::error::{Error, Result};
use crate::grid::{InternalLevel, MomentumGrid};
use crate::integrate::{evolve_master, evolve_trajectory, run_ensemble, IntegratorConfig, TrajectorySeed};
use crate::state::{DensityOperator, SpinMomentumState};
use crate::units;

/// How scan runs pick their momentum grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridPolicy {
    /// The default symmetric grid sized for full cooling runs
    /// (reaches the capture-range momentum Δs/4 plus margin).
    SpecDefault,
    /// Tight window around the initial momentum; single-sweep dynamics stay
    /// local, and the edge monitor aborts the run if the window is wrong.
    /// Symmetric around zero for |p_i| ≤ 60 (keeps the |−p_i⟩ Bragg partner
    /// on the grid), one-sided beyond that.
    Window { margin: i64 },
    /// Explicit grid for every point.
    Fixed(MomentumGrid),
}

impl GridPolicy {
    pub fn grid_for(&self, p_i: i64, delta_s: f64) -> Result<MomentumGrid> {
        match *self {
            GridPolicy::SpecDefault => Ok(MomentumGrid::default_for_initial(p_i, delta_s)),
            GridPolicy::Window { margin } => {
                let m = margin.max(8);
                if p_i.abs() <= 60 {
                    let half = p_i.abs() + m;
                    MomentumGrid::new(-half, half)
                } else if p_i > 0 {
                    MomentumGrid::new(-16, p_i + m)
                } else {
                    MomentumGrid::new(p_i - m, 16)
                }
            }
            GridPolicy::Fixed(g) => Ok(g),
        }
    }
}

/// Execution settings shared by the impulse scans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSettings {
    /// Trajectories per ensemble; 0 selects the dense master-equation route
    /// (exact, no statistical error, slower per point).
    pub n_traj: usize,
    pub base_seed: u64,
    pub grid: GridPolicy,
    pub integ: IntegratorConfig,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            n_traj: 0,
            base_seed: 0,
            grid: GridPolicy::SpecDefault,
            integ: IntegratorConfig::default(),
        }
    }
}

/// Conservative rms impulse over a single sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmsImpulse {
    pub delta_p_rms: f64,
    /// Excited-state probability at the end of the sweep.
    pub p_e_end: f64,
}

/// Change in rms momentum over one sweep from |level, p_i⟩ with γ = 0.
pub fn delta_p_rms(
    level: InternalLevel,
    p_i: i64,
    schedule: &SweepSchedule,
    params: &DriveParams,
    settings: &ScanSettings,
) -> Result<RmsImpulse> {
    if params.gamma != 0.0 {
        return Err(Error::Config(
            "delta_p_rms is the conservative-force diagnostic; it requires gamma = 0".into(),
        ));
    }
    let t_s = schedule
        .period()
        .ok_or_else(|| Error::Config("impulse scans need a ramped schedule".into()))?;
    let grid = settings.grid.grid_for(p_i, schedule.delta_s())?;
    let psi0 = SpinMomentumState::basis(level, p_i, grid)?;
    let out = evolve_trajectory(
        &psi0,
        schedule,
        params,
        0.0,
        t_s,
        TrajectorySeed::new(settings.base_seed, 0),
        &settings.integ,
    )?;
    let last = out.records.last().expect("records include the endpoint");
    Ok(RmsImpulse { delta_p_rms: last.p_rms - (p_i.abs() as f64), p_e_end: last.p_e })
}

/// End-of-sweep observables from one pure internal preparation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepEndpoint {
    pub p_e_end: f64,
    pub delta_p: f64,
    pub xi: f64,
}

/// Dissipative average impulse at the internal-population fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyImpulse {
    pub delta_p_avg: f64,
    pub p_e_ss: f64,
    /// Mean incoherent scattering events per sweep at the fixed point.
    pub xi: f64,
    pub se_delta_p: f64,
    pub se_xi: f64,
    /// Raw endpoints of the two pure preparations behind the fixed point.
    pub ground: PrepEndpoint,
    pub excited: PrepEndpoint,
}

struct PrepResult {
    p_e_end: f64,
    delta_p: f64,
    xi: f64,
    se_p: f64,
    se_xi: f64,
    se_pe: f64,
}

fn one_sweep_from(
    level: InternalLevel,
    p_i: i64,
    schedule: &SweepSchedule,
    params: &DriveParams,
    grid: MomentumGrid,
    settings: &ScanSettings,
    seed_salt: u64,
) -> Result<PrepResult> {
    let t_s = schedule.period().expect("checked by caller");
    if settings.n_traj == 0 {
        let rho0 = DensityOperator::basis(level, p_i, grid)?;
        let (_, records) = evolve_master(&rho0, schedule, params, 0.0, t_s, &settings.integ)?;
        let last = records.last().expect("records include the endpoint");
        Ok(PrepResult {
            p_e_end: last.p_e,
            delta_p: last.mean_p - p_i as f64,
            xi: last.xi_cum,
            se_p: 0.0,
            se_xi: 0.0,
            se_pe: 0.0,
        })
    } else {
        let psi0 = SpinMomentumState::basis(level, p_i, grid)?;
        let ens = run_ensemble(
            &psi0,
            schedule,
            params,
            t_s,
            settings.n_traj,
            settings.base_seed ^ seed_salt,
            &settings.integ,
        )?;
        let last = ens.final_bin();
        Ok(PrepResult {
            p_e_end: last.mean.p_e,
            delta_p: last.mean.mean_p - p_i as f64,
            xi: last.mean.xi_cum,
            se_p: last.se.mean_p,
            se_xi: last.se.xi,
            se_pe: last.se.p_e,
        })
    }
}

/// Average impulse, steady-state excited fraction and scattering count for
/// one sweep at pinned initial momentum p_i (γ > 0). Two runs — one per
/// pure internal preparation — pin the affine population map; momentum is
/// re-prepared at p_i for both.
pub fn delta_p_avg_steady(
    p_i: i64,
    schedule: &SweepSchedule,
    params: &DriveParams,
    settings: &ScanSettings,
) -> Result<SteadyImpulse> {
    if params.gamma <= 0.0 {
        return Err(Error::Config("delta_p_avg_steady requires gamma > 0".into()));
    }
    schedule
        .period()
        .ok_or_else(|| Error::Config("impulse scans need a ramped schedule".into()))?;
    let grid = settings.grid.grid_for(p_i, schedule.delta_s())?;
    let g = one_sweep_from(InternalLevel::Ground, p_i, schedule, params, grid, settings, 0x67)?;
    let e = one_sweep_from(InternalLevel::Excited, p_i, schedule, params, grid, settings, 0x65)?;

    let denom = 1.0 - e.p_e_end + g.p_e_end;
    if denom.abs() < 1e-9 {
        return Err(Error::NonConvergence { denominator: denom });
    }
    let x = g.p_e_end / denom;
    let combine = |gv: f64, ev: f64| (1.0 - x) * gv + x * ev;

    // first-order error propagation; the fixed-point sensitivity enters
    // through ∂x/∂a = (1 − b)/D² and ∂x/∂b = a/D²
    let dx_da = (1.0 - e.p_e_end) / (denom * denom);
    let dx_db = g.p_e_end / (denom * denom);
    let se_x2 = (dx_da * g.se_pe).powi(2) + (dx_db * e.se_pe).powi(2);
    let se_combined = |gv: f64, ev: f64, se_g: f64, se_e: f64| -> f64 {
        (((1.0 - x) * se_g).powi(2) + (x * se_e).powi(2) + (ev - gv).powi(2) * se_x2).sqrt()
    };

    Ok(SteadyImpulse {
        delta_p_avg: combine(g.delta_p, e.delta_p),
        p_e_ss: x,
        xi: combine(g.xi, e.xi),
        se_delta_p: se_combined(g.delta_p, e.delta_p, g.se_p, e.se_p),
        se_xi: se_combined(g.xi, e.xi, g.se_xi, e.se_xi),
        ground: PrepEndpoint { p_e_end: g.p_e_end, delta_p: g.delta_p, xi: g.xi },
        excited: PrepEndpoint { p_e_end: e.p_e_end, delta_p: e.delta_p, xi: e.xi },
    })
}

/// Sweep-direction decomposition Δp± = [(Δp_avg)_pos ± (Δp_avg)_neg]/2.
/// Bragg mixing survives in Δp⁺ and cancels in Δp⁻.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmImpulse {
    pub delta_p_plus: f64,
    pub delta_p_minus: f64,
    pub se: f64,
}

pub fn delta_p_pm(
    p_i: i64,
    schedule: &SweepSchedule,
    params: &DriveParams,
    settings: &ScanSettings,
) -> Result<PmImpulse> {
    let pos = delta_p_avg_steady(
        p_i,
        &schedule.with_ramp_sign(RampSign::Positive),
        params,
        settings,
    )?;
    let mut neg_settings = *settings;
    neg_settings.base_seed ^= 0x9e37_79b9_7f4a_7c15;
    let neg = delta_p_avg_steady(
        p_i,
        &schedule.with_ramp_sign(RampSign::Negative),
        params,
        &neg_settings,
    )?;
    let se = 0.5 * (pos.se_delta_p.powi(2) + neg.se_delta_p.powi(2)).sqrt();
    Ok(PmImpulse {
        delta_p_plus: 0.5 * (pos.delta_p_avg + neg.delta_p_avg),
        delta_p_minus: 0.5 * (pos.delta_p_avg - neg.delta_p_avg),
        se,
    })
}

/// 1D temperature in ħω_r/k_B from ⟨p²⟩ in (ħk)²; valid once the
/// distribution has equilibrated around zero momentum.
pub fn temperature(mean_p2: f64) -> f64 {
    units::temperature_of_p2(mean_p2)
}

/// Momentum-space region by the number of lasers the particle substantially
/// interacts with: (0) |kv| > Δs/2, (1) Ω₀ < |kv| < Δs/2, (2) |kv| < Ω₀.
/// Boundary ties go to the lower-numbered region.
pub fn region_classify(p_i: f64, params: &DriveParams, schedule: &SweepSchedule) -> u8 {
    let kv = units::kv_of_momentum(p_i).abs();
    let half_range = schedule.delta_s() / 2.0;
    if kv >= half_range {
        0
    } else if kv >= params.omega0.abs() {
        1
    } else {
        2
    }
}

/// Capture-range condition Δs > 4|kv| (strict).
pub fn capture_range_ok(kv: f64, delta_s: f64) -> bool {
    delta_s > 4.0 * kv.abs()
}

/// One row of an impulse scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpulseScanPoint {
    pub p_i: f64,
    pub delta_p_rms: Option<f64>,
    pub delta_p_avg: Option<f64>,
    pub p_e_end: Option<f64>,
    pub p_e_ss: Option<f64>,
    pub xi: Option<f64>,
    pub region: u8,
}

/// γ = 0 rms-impulse scan over initial momenta (parallel over points).
pub fn scan_delta_p_rms(
    level: InternalLevel,
    momenta: &[i64],
    schedule: &SweepSchedule,
    params: &DriveParams,
    settings: &ScanSettings,
) -> Result<Vec<ImpulseScanPoint>> {
    momenta
        .par_iter()
        .map(|&p_i| {
            let r = delta_p_rms(level, p_i, schedule, params, settings)?;
            Ok(ImpulseScanPoint {
                p_i: p_i as f64,
                delta_p_rms: Some(r.delta_p_rms),
                delta_p_avg: None,
                p_e_end: Some(r.p_e_end),
                p_e_ss: None,
                xi: None,
                region: region_classify(p_i as f64, params, schedule),
            })
        })
        .collect()
}

/// γ > 0 steady-state impulse scan (ensembles parallelize internally).
pub fn scan_delta_p_avg(
    momenta: &[i64],
    schedule: &SweepSchedule,
    params: &DriveParams,
    settings: &ScanSettings,
) -> Result<Vec<ImpulseScanPoint>> {
    momenta
        .iter()
        .map(|&p_i| {
            let r = delta_p_avg_steady(p_i, schedule, params, settings)?;
            Ok(ImpulseScanPoint {
                p_i: p_i as f64,
                delta_p_rms: None,
                delta_p_avg: Some(r.delta_p_avg),
                p_e_end: None,
                p_e_ss: Some(r.p_e_ss),
                xi: Some(r.xi),
                region: region_classify(p_i as f64, params, schedule),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    fn fig6_schedule() -> SweepSchedule {
        SweepSchedule::sawtooth(360.0, 2.0, 1)
    }

    #[test]
    fn region_classification() {
        let schedule = SweepSchedule::sawtooth(360.0, 2.0, 1);
        let params = DriveParams::new(26.8, 0.0).unwrap();
        assert_eq!(region_classify(50.0, &params, &schedule), 1); // kv = 100
        assert_eq!(region_classify(2.0, &params, &schedule), 2); // kv = 4 < Ω₀
        assert_eq!(region_classify(100.0, &params, &schedule), 0); // kv = 200 > 180
        // ties to the lower-numbered region
        assert_eq!(region_classify(90.0, &params, &schedule), 0); // kv = Δs/2
        assert_eq!(region_classify(13.4, &params, &schedule), 1); // kv = Ω₀
    }

    #[test]
    fn capture_range_predicate() {
        assert!(capture_range_ok(400.0, 1800.0));
        assert!(!capture_range_ok(500.0, 1800.0));
        assert!(!capture_range_ok(450.0, 1800.0)); // strict boundary
        assert!(capture_range_ok(-400.0, 1800.0));
    }

    #[test]
    fn temperature_conversion() {
        assert_relative_eq!(temperature(1.0), 2.0);
        assert_relative_eq!(temperature(0.0), 0.0);
        let omega0 = 3.0;
        assert_relative_eq!(temperature(omega0 / 4.0), omega0 / 2.0);
    }

    #[test]
    fn grid_policies() {
        let g = GridPolicy::SpecDefault.grid_for(10, 120.0).unwrap();
        assert_eq!(g.n_max(), 40);
        let g = GridPolicy::Window { margin: 30 }.grid_for(25, 1800.0).unwrap();
        assert_eq!((g.n_min(), g.n_max()), (-55, 55));
        let g = GridPolicy::Window { margin: 40 }.grid_for(300, 1800.0).unwrap();
        assert_eq!((g.n_min(), g.n_max()), (-16, 340));
        let g = GridPolicy::Window { margin: 40 }.grid_for(-300, 1800.0).unwrap();
        assert_eq!((g.n_min(), g.n_max()), (-340, 16));
    }

    #[test]
    fn delta_p_rms_rejects_dissipative_params() {
        let params = DriveParams::new(26.8, 1.0).unwrap();
        let err = delta_p_rms(
            InternalLevel::Ground,
            50,
            &fig6_schedule(),
            &params,
            &ScanSettings::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn delta_p_avg_requires_gamma() {
        let params = DriveParams::new(26.8, 0.0).unwrap();
        let err = delta_p_avg_steady(25, &fig6_schedule(), &params, &ScanSettings::default());
        assert!(err.is_err());
    }
}
