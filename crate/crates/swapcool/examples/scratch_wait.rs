// scratch: sweep-wait equilibrium vs inter-cycle coherence model
// (A) continuous phases (current engine), (C) |n|-dephased waits
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swapcool::drive::{DriveParams, SweepSchedule};
use swapcool::grid::InternalLevel::Ground;
use swapcool::grid::MomentumGrid;
use swapcool::integrate::{evolve_trajectory, IntegratorConfig, TrajectorySeed};
use swapcool::state::SpinMomentumState;

fn main() {
    let grid = MomentumGrid::new(-30, 30).unwrap();
    let cfg = IntegratorConfig::default().with_safety(0.35).with_records_per_period(2);
    let cycles = 14usize;
    let n_traj = 200usize;
    for omega0 in [2.0f64, 4.0, 6.0] {
        let params = DriveParams::new(omega0, 0.0).unwrap();
        for dephase in [false, true] {
            let mut energy = 0.0;
            for traj in 0..n_traj {
                let mut psi = SpinMomentumState::basis(Ground, 3, grid).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(4242);
                rng.set_stream(traj as u64);
                let mut tail = 0.0;
                for cyc in 0..cycles {
                    let schedule = SweepSchedule::sweep_wait(100.0, 60.0, 1);
                    let out = evolve_trajectory(
                        &psi,
                        &schedule,
                        &params,
                        0.0,
                        60.0,
                        TrajectorySeed::new(4242u64.wrapping_add(1 + cyc as u64), traj as u64),
                        &cfg,
                    )
                    .unwrap();
                    psi = out.state;
                    if dephase {
                        let sites = grid.sites();
                        let amps = psi.amplitudes_mut();
                        for k in 0..=30i64 {
                            let chi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                            let ph = Complex64::from_polar(1.0, chi);
                            for n in [k, -k] {
                                let s = (n - grid.n_min()) as usize;
                                amps[s] *= ph;
                                amps[sites + s] *= ph;
                                if k == 0 {
                                    break;
                                }
                            }
                        }
                    }
                    if cyc + 5 >= cycles {
                        tail += psi.expectations().unwrap().mean_p2 / 5.0;
                    }
                }
                energy += tail / n_traj as f64;
            }
            println!("omega0={omega0} dephase={dephase}: E={energy:.3}");
        }
    }
}
