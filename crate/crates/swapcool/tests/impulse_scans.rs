//! Impulse diagnostics: region-1 plateau, diabatic/adiabatic contrast,
//! the steady-state fixed point and its iteration cross-check.

use approx::assert_relative_eq;
use swapcool::analysis::{
    delta_p_avg_steady, delta_p_rms, region_classify, GridPolicy, ScanSettings,
};
use swapcool::drive::{DriveParams, SweepSchedule};
use swapcool::grid::InternalLevel::{Excited, Ground};
use swapcool::integrate::{evolve_master, IntegratorConfig};
use swapcool::state::DensityOperator;

fn rms_settings() -> ScanSettings {
    ScanSettings {
        n_traj: 0,
        base_seed: 0,
        grid: GridPolicy::Window { margin: 30 },
        integ: IntegratorConfig::default().with_records_per_period(2),
    }
}

#[test]
fn region_one_plateau_and_adiabaticity_contrast() {
    // Δs = 360, T_s = 2: κ varied through Ω₀ alone (9.5 vs 26.8)
    let schedule = SweepSchedule::sawtooth(360.0, 2.0, 1);
    let adiabatic = DriveParams::new(26.8, 0.0).unwrap();
    let diabatic = DriveParams::new(9.5, 0.0).unwrap();

    // middle half of region (1), which spans 13.4 < |p| < 90
    let momenta = [34i64, 44, 54, 64, 70];
    let imp: Vec<f64> = momenta
        .iter()
        .map(|&p| {
            assert_eq!(region_classify(p as f64, &adiabatic, &schedule), 1);
            delta_p_rms(Ground, p, &schedule, &adiabatic, &rms_settings())
                .unwrap()
                .delta_p_rms
        })
        .collect();
    // adiabatic ground-state sweeps remove ≈ 2ħk across the plateau
    let mean = imp.iter().sum::<f64>() / imp.len() as f64;
    assert!(mean < -1.4, "plateau mean {mean}");
    for v in &imp {
        assert!(
            (v - mean).abs() < 0.25 * mean.abs(),
            "plateau variation: {v} vs mean {mean}"
        );
    }

    // diabatic sweeps impart less impulse and leave more excitation
    let p_test = 50i64;
    let a = delta_p_rms(Ground, p_test, &schedule, &adiabatic, &rms_settings()).unwrap();
    let d = delta_p_rms(Ground, p_test, &schedule, &diabatic, &rms_settings()).unwrap();
    assert!(a.delta_p_rms.abs() > d.delta_p_rms.abs(), "{} vs {}", a.delta_p_rms, d.delta_p_rms);
    assert!(a.p_e_end < d.p_e_end, "P_e {} vs {}", a.p_e_end, d.p_e_end);

    // an excited-state start in region (1) is pushed away from zero
    let e = delta_p_rms(Excited, p_test, &schedule, &adiabatic, &rms_settings()).unwrap();
    assert!(e.delta_p_rms > 1.0, "excited-start impulse {}", e.delta_p_rms);

    // region (0): far enough beyond the sweep range (several Ω₀ past the
    // last resonance) the particle no longer interacts
    let far = delta_p_rms(Ground, 125, &schedule, &adiabatic, &rms_settings()).unwrap();
    assert_eq!(region_classify(125.0, &adiabatic, &schedule), 0);
    assert!(far.delta_p_rms.abs() < 0.05, "region-0 impulse {}", far.delta_p_rms);
}

#[test]
fn steady_state_fixed_point_matches_sweep_iteration() {
    // the affine fixed point x* = a/(1 − b + a) must agree with explicitly
    // iterating the sweep map on the internal populations (momentum
    // re-pinned each sweep); exact up to integrator error by linearity
    let schedule = SweepSchedule::sawtooth(100.0, 1.0, 1);
    let params = DriveParams::new(14.0, 1.0).unwrap();
    let settings = ScanSettings {
        n_traj: 0,
        base_seed: 0,
        grid: GridPolicy::Window { margin: 18 },
        integ: IntegratorConfig::default().with_safety(0.3).with_records_per_period(2),
    };

    for p_i in [3i64, 6] {
        let steady = delta_p_avg_steady(p_i, &schedule, &params, &settings).unwrap();
        let grid = settings.grid.grid_for(p_i, schedule.delta_s()).unwrap();

        // iterate: x_{k+1} = P_e at sweep end from the mixed preparation x_k
        let mut x = 0.0f64;
        let mut x_used = 0.0;
        let mut last_dp = 0.0;
        for _ in 0..3 {
            let rho0 = DensityOperator::mixture(&[
                (1.0 - x, DensityOperator::basis(Ground, p_i, grid).unwrap()),
                (x, DensityOperator::basis(Excited, p_i, grid).unwrap()),
            ])
            .unwrap();
            let (_, records) =
                evolve_master(&rho0, &schedule, &params, 0.0, 1.0, &settings.integ).unwrap();
            let last = records.last().unwrap();
            x_used = x;
            x = last.p_e;
            last_dp = last.mean_p - p_i as f64;
        }
        // geometric convergence of the population iterate to the fixed point
        assert_relative_eq!(x, steady.p_e_ss, epsilon = 0.02);
        // linearity of the master equation: a mixed preparation reproduces
        // the affine combination of the pure endpoints to integrator error
        let affine_dp =
            (1.0 - x_used) * steady.ground.delta_p + x_used * steady.excited.delta_p;
        assert_relative_eq!(last_dp, affine_dp, epsilon = 1e-5);
        let affine_pe =
            (1.0 - x_used) * steady.ground.p_e_end + x_used * steady.excited.p_e_end;
        assert_relative_eq!(x, affine_pe, epsilon = 1e-6);
    }
}

#[test]
fn zero_momentum_impulse_vanishes_by_parity() {
    let schedule = SweepSchedule::sawtooth(100.0, 1.0, 1);
    let params = DriveParams::new(14.0, 1.0).unwrap();
    let settings = ScanSettings {
        n_traj: 0,
        base_seed: 0,
        grid: GridPolicy::Window { margin: 20 },
        integ: IntegratorConfig::default().with_safety(0.3).with_records_per_period(2),
    };
    let steady = delta_p_avg_steady(0, &schedule, &params, &settings).unwrap();
    assert!(steady.delta_p_avg.abs() < 1e-8, "parity violation: {}", steady.delta_p_avg);
    assert!(steady.xi >= 0.0);
}
