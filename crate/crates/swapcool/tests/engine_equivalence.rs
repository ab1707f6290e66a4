//! Trajectory-ensemble vs master-equation agreement: the two engines use
//! different frames (rotating vs laser) and different representations
//! (stochastic pure states vs dense ρ), so agreement within statistical
//! error is the primary correctness gate for the stochastic path.

use swapcool::drive::{DriveParams, SweepSchedule};
use swapcool::grid::InternalLevel::Ground;
use swapcool::grid::MomentumGrid;
use swapcool::integrate::{evolve_master, run_ensemble, IntegratorConfig};
use swapcool::state::{DensityOperator, SpinMomentumState};

#[test]
fn ensemble_matches_master_within_three_standard_errors() {
    // small shared grid; both engines wrap recoils identically, so the
    // comparison is exact engine-vs-engine even though the grid is tight
    // (edge monitoring disabled: truncation is part of the shared model)
    let grid = MomentumGrid::new(-4, 4).unwrap().with_edge_tolerance(1.01);
    let schedule = SweepSchedule::sawtooth(40.0, 1.5, 1);
    let params = DriveParams::new(3.0, 1.0).unwrap();
    let cfg = IntegratorConfig::default().with_records_per_period(8);

    let rho0 = DensityOperator::basis(Ground, 1, grid).unwrap();
    let (_, master_records) = evolve_master(&rho0, &schedule, &params, 0.0, 1.5, &cfg).unwrap();

    let psi0 = SpinMomentumState::basis(Ground, 1, grid).unwrap();
    let ens = run_ensemble(&psi0, &schedule, &params, 1.5, 400, 2024, &cfg).unwrap();

    assert_eq!(master_records.len(), ens.bins.len());
    // compare at the midpoint and the end of the sweep
    for idx in [ens.bins.len() / 2, ens.bins.len() - 1] {
        let m = &master_records[idx];
        let b = &ens.bins[idx];
        let checks = [
            ("⟨p⟩", m.mean_p, b.mean.mean_p, b.se.mean_p),
            ("⟨p²⟩", m.mean_p2, b.mean.mean_p2, b.se.mean_p2),
            ("P_e", m.p_e, b.mean.p_e, b.se.p_e),
            ("ξ", m.xi_cum, b.mean.xi_cum, b.se.xi),
        ];
        for (name, exact, sampled, se) in checks {
            let dev = (exact - sampled).abs();
            let bound = 3.0 * se.max(1e-4);
            assert!(
                dev < bound,
                "bin {idx}: {name} off by {dev:.4} > 3σ = {bound:.4} (master {exact:.4}, ensemble {sampled:.4})"
            );
        }
    }
}

#[test]
fn master_photon_flux_matches_trajectory_jump_count() {
    // free decay: ξ(t) from the master equation is 1 − e^{−γt}; the
    // trajectory mean jump count must agree
    let grid = MomentumGrid::new(-4, 4).unwrap();
    let params = DriveParams::new(0.0, 1.0).unwrap();
    let schedule = SweepSchedule::Constant { delta: 0.0 };
    let cfg = IntegratorConfig::default().with_records_per_period(10);

    let psi0 = SpinMomentumState::basis(swapcool::grid::InternalLevel::Excited, 0, grid).unwrap();
    let ens = run_ensemble(&psi0, &schedule, &params, 2.0, 600, 5, &cfg).unwrap();
    for bin in &ens.bins {
        let expect = 1.0 - (-bin.t).exp();
        let dev = (bin.mean.xi_cum - expect).abs();
        assert!(dev < 3.0 * bin.se.xi.max(1e-3), "ξ({}) off by {dev:.4}", bin.t);
    }
    // emission isotropy in the mean: ±ħk channels balance
    let last = ens.final_bin();
    let asym = (last.mean.jumps[2] - last.mean.jumps[0]).abs();
    assert!(asym < 0.07, "channel asymmetry {asym}");
}
