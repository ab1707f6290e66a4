// scratch: deep-adiabatic slope of the stationary energy
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
    for omega0 in [12.0f64, 14.0] {
        let params = DriveParams::new(omega0, 0.0).unwrap();
        let t0 = std::time::Instant::now();
        let ens = run_ensemble(&psi0, &schedule, &params, 840.0, 400, 11, &cfg).unwrap();
        let cyc: Vec<f64> = ens.bins.iter().step_by(2).map(|b| b.mean.mean_p2).collect();
        let ses: Vec<f64> = ens.bins.iter().step_by(2).map(|b| b.se.mean_p2).collect();
        let e = cyc[cyc.len() - 5..].iter().sum::<f64>() / 5.0;
        let se = ses[ses.len() - 5..].iter().sum::<f64>() / 5.0;
        println!("omega0={omega0}: E={e:.3}±{se:.3}  [{:?}]", t0.elapsed());
    }
}
