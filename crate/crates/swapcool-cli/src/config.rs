//! Run configuration: a single structured JSON file. Every physical value
//! is in recoil units and keys carry the `_wr` suffix (frequencies in ω_r,
//! times in 1/ω_r, momenta in ħk).

use serde::{Deserialize, Serialize};
use swapcool::drive::{DriveParams, RampSign, SweepSchedule};
use swapcool::grid::{InternalLevel, MomentumGrid};
use swapcool::integrate::IntegratorConfig;
use swapcool::state::SpinMomentumState;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ScheduleConfig {
    Sawtooth {
        delta_s_wr: f64,
        t_s_wr: f64,
        n_sweeps: u32,
        #[serde(default)]
        ramp_down: bool,
    },
    SweepWait {
        delta_s_wr: f64,
        t_s_wr: f64,
        n_cycles: u32,
        #[serde(default)]
        ramp_down: bool,
    },
    Constant {
        delta_wr: f64,
        t_end_wr: f64,
    },
}

impl ScheduleConfig {
    pub fn to_schedule(&self) -> SweepSchedule {
        let sign = |down: bool| if down { RampSign::Negative } else { RampSign::Positive };
        match *self {
            ScheduleConfig::Sawtooth { delta_s_wr, t_s_wr, n_sweeps, ramp_down } => {
                SweepSchedule::Sawtooth {
                    delta_s: delta_s_wr,
                    t_s: t_s_wr,
                    n_sweeps,
                    ramp_sign: sign(ramp_down),
                }
            }
            ScheduleConfig::SweepWait { delta_s_wr, t_s_wr, n_cycles, ramp_down } => {
                SweepSchedule::SweepWait {
                    delta_s: delta_s_wr,
                    t_s: t_s_wr,
                    n_cycles,
                    ramp_sign: sign(ramp_down),
                }
            }
            ScheduleConfig::Constant { delta_wr, .. } => SweepSchedule::Constant { delta: delta_wr },
        }
    }

    pub fn t_end(&self) -> f64 {
        match *self {
            ScheduleConfig::Sawtooth { t_s_wr, n_sweeps, .. } => t_s_wr * f64::from(n_sweeps),
            ScheduleConfig::SweepWait { t_s_wr, n_cycles, .. } => t_s_wr * f64::from(n_cycles),
            ScheduleConfig::Constant { t_end_wr, .. } => t_end_wr,
        }
    }

    pub fn delta_s(&self) -> f64 {
        match *self {
            ScheduleConfig::Sawtooth { delta_s_wr, .. }
            | ScheduleConfig::SweepWait { delta_s_wr, .. } => delta_s_wr,
            ScheduleConfig::Constant { .. } => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct InitialStateConfig {
    /// "g" or "e"
    pub level: char,
    /// momentum in ħk
    pub n: i64,
}

impl InitialStateConfig {
    pub fn level(&self) -> CliResult<InternalLevel> {
        match self.level {
            'g' => Ok(InternalLevel::Ground),
            'e' => Ok(InternalLevel::Excited),
            c => Err(CliError::Config(format!("initial level must be 'g' or 'e', got '{c}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GridConfig {
    pub n_min: i64,
    pub n_max: i64,
    #[serde(default = "default_edge_tolerance")]
    pub edge_tolerance: f64,
}

fn default_edge_tolerance() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct IntegratorSettings {
    pub safety: f64,
    #[serde(default)]
    pub dt_max_wr: Option<f64>,
    pub records_per_period: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self { safety: 0.1, dt_max_wr: None, records_per_period: 200 }
    }
}

impl IntegratorSettings {
    pub fn to_config(&self) -> IntegratorConfig {
        let mut cfg = IntegratorConfig::default()
            .with_safety(self.safety)
            .with_records_per_period(self.records_per_period);
        if let Some(dt) = self.dt_max_wr {
            cfg = cfg.with_dt_max(dt);
        }
        cfg
    }
}

/// A complete, re-runnable time-series run. This is what `run --config`
/// consumes and what the JSON summary echoes.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub schedule: ScheduleConfig,
    pub omega0_wr: f64,
    pub gamma_wr: f64,
    pub initial: InitialStateConfig,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    /// 0 runs a single deterministic trajectory.
    pub n_traj: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub integrator: IntegratorSettings,
}

impl RunConfig {
    pub fn drive(&self) -> CliResult<DriveParams> {
        DriveParams::new(self.omega0_wr, self.gamma_wr).map_err(CliError::Core)
    }

    pub fn grid(&self) -> CliResult<MomentumGrid> {
        match self.grid {
            Some(g) => Ok(MomentumGrid::new(g.n_min, g.n_max)
                .map_err(CliError::Core)?
                .with_edge_tolerance(g.edge_tolerance)),
            None => Ok(MomentumGrid::default_for_initial(self.initial.n, self.schedule.delta_s())),
        }
    }

    pub fn initial_state(&self) -> CliResult<SpinMomentumState> {
        let grid = self.grid()?;
        SpinMomentumState::basis(self.initial.level()?, self.initial.n, grid)
            .map_err(CliError::Core)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_through_json() {
        let cfg = RunConfig {
            schedule: ScheduleConfig::SweepWait {
                delta_s_wr: 100.0,
                t_s_wr: 60.0,
                n_cycles: 15,
                ramp_down: false,
            },
            omega0_wr: 2.0,
            gamma_wr: 0.0,
            initial: InitialStateConfig { level: 'g', n: 10 },
            grid: None,
            n_traj: 100,
            base_seed: 42,
            integrator: IntegratorSettings::default(),
        };
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(back.schedule.t_end(), 900.0);
        assert!(back.grid().unwrap().n_max() >= 35);
    }

    #[test]
    fn bad_level_is_rejected() {
        let cfg = InitialStateConfig { level: 'x', n: 0 };
        assert!(cfg.level().is_err());
    }
}
