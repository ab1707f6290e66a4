// scratch: fig11 stationary energy vs omega0 probe
use swapcool::drive::{DriveParams, SweepSchedule};
use swapcool::grid::InternalLevel::Ground;
use swapcool::grid::MomentumGrid;
use swapcool::integrate::{run_ensemble, IntegratorConfig};
use swapcool::state::SpinMomentumState;

fn main() {
    let grid = MomentumGrid::new(-30, 30).unwrap();
    let schedule = SweepSchedule::sweep_wait(100.0, 60.0, 14);
    let cfg = IntegratorConfig::default().with_safety(0.35).with_records_per_period(2);
    let psi0 = SpinMomentumState::basis(Ground, 3, grid).unwrap();
    for omega0 in [0.9f64, 1.2, 1.6, 2.0, 2.5, 4.0, 5.0, 6.0] {
        let params = DriveParams::new(omega0, 0.0).unwrap();
        let t0 = std::time::Instant::now();
        let ens = run_ensemble(&psi0, &schedule, &params, 840.0, 200, 11, &cfg).unwrap();
        let cyc: Vec<f64> = ens.bins.iter().step_by(2).map(|b| b.mean.mean_p2).collect();
        let tail = &cyc[cyc.len() - 5..];
        let e = tail.iter().sum::<f64>() / 5.0;
        println!(
            "omega0={omega0:+.1} kappa={:.2}: E={e:.3} (last cycles {:.2} {:.2} {:.2} {:.2} {:.2})  [{:?}]",
            omega0 * omega0 / (100.0 / 60.0),
            tail[0], tail[1], tail[2], tail[3], tail[4],
            t0.elapsed()
        );
    }
}
