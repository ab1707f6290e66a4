//! Coherent (γ = 0) SWAP transfer: staircase behavior, resonance-pulse
//! timing, probability conservation and discretization convergence.

use approx::assert_relative_eq;
use swapcool::drive::{DriveParams, SweepSchedule};
use swapcool::grid::InternalLevel::Ground;
use swapcool::grid::MomentumGrid;
use swapcool::integrate::{evolve_trajectory, IntegratorConfig, TrajectorySeed};
use swapcool::resonance;
use swapcool::state::SpinMomentumState;

fn coherent_run(
    n0: i64,
    grid: MomentumGrid,
    schedule: &SweepSchedule,
    omega0: f64,
    cfg: &IntegratorConfig,
) -> swapcool::integrate::TrajectoryOutput {
    let psi0 = SpinMomentumState::basis(Ground, n0, grid).unwrap();
    let params = DriveParams::new(omega0, 0.0).unwrap();
    evolve_trajectory(
        &psi0,
        schedule,
        &params,
        0.0,
        schedule.total_time().unwrap(),
        TrajectorySeed::new(0, 0),
        cfg,
    )
    .unwrap()
}

#[test]
fn single_sweep_removes_two_recoils_and_conserves_norm() {
    // adiabatic single sweep from |g, 6ħk⟩: stimulated absorption then
    // emission removes 2ħk; no dissipation, so the norm must hold to 1e-6
    let schedule = SweepSchedule::sawtooth(60.0, 120.0, 1);
    let grid = MomentumGrid::default_for_initial(6, 60.0);
    let out = coherent_run(6, grid, &schedule, 1.0, &IntegratorConfig::default());
    let last = out.records.last().unwrap();
    assert_relative_eq!(last.p_rms, 4.0, epsilon = 0.25);
    assert!(last.p_e < 0.1, "particle should return to the ground state, P_e = {}", last.p_e);
    assert!(
        (out.final_norm_sqr - 1.0).abs() < 1e-6,
        "norm drift {:.3e}",
        out.final_norm_sqr - 1.0
    );
}

#[test]
fn excitation_pulse_timing_matches_resonance_theory() {
    // single sweep from |g, 10ħk⟩ (Δs = 200, T_s = 22, Ω₀ = 5): the P_e
    // pulse spans the interval between stimulated absorption and emission,
    // τ_res = 2(kv − 2ω_r)/α = 3.96, with edges smoothed over τ_jump = 1.1
    let schedule = SweepSchedule::sawtooth(200.0, 22.0, 1);
    let alpha = schedule.alpha().unwrap();
    let grid = MomentumGrid::default_for_initial(10, 200.0);
    let cfg = IntegratorConfig::default().with_records_per_period(400);
    let out = coherent_run(10, grid, &schedule, 5.0, &cfg);

    let rise = out.records.iter().find(|r| r.p_e > 0.5).expect("pulse should rise").t;
    let fall = out.records.iter().rev().find(|r| r.p_e > 0.5).expect("pulse should fall").t;
    let tau_res = resonance::tau_res(20.0, alpha);
    assert_relative_eq!(tau_res, 3.96, max_relative = 1e-12);
    assert_relative_eq!(fall - rise, tau_res, epsilon = 0.8);

    // absorption happens at the left-traveling resonance, T_s/2 + t_left
    let (_, t_left) = resonance::resonance_times(Ground, 10.0, alpha);
    let expected_mid_rise = 11.0 + t_left;
    assert_relative_eq!(rise, expected_mid_rise, epsilon = 0.8);

    // transfer removed 2ħk
    assert_relative_eq!(out.records.last().unwrap().p_rms, 8.0, epsilon = 0.25);
}

#[test]
fn step_halving_changes_coherent_observables_below_1e6() {
    let schedule = SweepSchedule::sawtooth(40.0, 20.0, 1);
    let grid = MomentumGrid::new(-20, 20).unwrap();
    let base = coherent_run(5, grid, &schedule, 2.0, &IntegratorConfig::default());
    let fine = coherent_run(
        5,
        grid,
        &schedule,
        2.0,
        &IntegratorConfig::default().with_safety(0.05),
    );
    let (a, b) = (base.records.last().unwrap(), fine.records.last().unwrap());
    assert!((a.p_rms - b.p_rms).abs() < 1e-6, "Δp_rms = {:.3e}", a.p_rms - b.p_rms);
    assert!((a.p_e - b.p_e).abs() < 1e-6, "ΔP_e = {:.3e}", a.p_e - b.p_e);
    assert!((a.mean_p - b.mean_p).abs() < 1e-6);
}

#[test]
fn grid_doubling_changes_observables_below_1e6() {
    let schedule = SweepSchedule::sawtooth(40.0, 20.0, 1);
    let small = coherent_run(
        5,
        MomentumGrid::new(-20, 20).unwrap(),
        &schedule,
        2.0,
        &IntegratorConfig::default(),
    );
    let large = coherent_run(
        5,
        MomentumGrid::new(-40, 40).unwrap(),
        &schedule,
        2.0,
        &IntegratorConfig::default(),
    );
    let (a, b) = (small.records.last().unwrap(), large.records.last().unwrap());
    assert!((a.p_rms - b.p_rms).abs() < 1e-6, "Δp_rms = {:.3e}", a.p_rms - b.p_rms);
    assert!((a.p_e - b.p_e).abs() < 1e-6);
}

#[test]
fn mirror_initial_momentum_gives_identical_p_rms_trace() {
    let schedule = SweepSchedule::sawtooth(60.0, 30.0, 2);
    let grid = MomentumGrid::new(-25, 25).unwrap();
    let plus = coherent_run(6, grid, &schedule, 1.5, &IntegratorConfig::default());
    let minus = coherent_run(-6, grid, &schedule, 1.5, &IntegratorConfig::default());
    for (a, b) in plus.records.iter().zip(&minus.records) {
        assert!(
            (a.p_rms - b.p_rms).abs() < 1e-10,
            "p_rms mirror deviation {:.3e} at t = {}",
            (a.p_rms - b.p_rms).abs(),
            a.t
        );
    }
}
