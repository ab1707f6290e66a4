// scratch: fig6 P_e plateau values as a coupling-convention check
use swapcool::analysis::{delta_p_rms, GridPolicy, ScanSettings};
use swapcool::drive::{DriveParams, SweepSchedule};
use swapcool::grid::InternalLevel::{Excited, Ground};
use swapcool::integrate::IntegratorConfig;

fn main() {
    let schedule = SweepSchedule::sawtooth(360.0, 2.0, 1);
    let settings = ScanSettings {
        n_traj: 0,
        base_seed: 0,
        grid: GridPolicy::Window { margin: 30 },
        integ: IntegratorConfig::default().with_records_per_period(2),
    };
    for omega0 in [9.5f64, 26.8] {
        for p in [40i64, 60] {
            let g = delta_p_rms(Ground, p, &schedule, &DriveParams::new(omega0, 0.0).unwrap(), &settings).unwrap();
            let e = delta_p_rms(Excited, p, &schedule, &DriveParams::new(omega0, 0.0).unwrap(), &settings).unwrap();
            println!(
                "omega0={omega0} p={p}: ground dp_rms={:+.3} P_e_end={:.3} | excited dp_rms={:+.3} P_e_end={:.3}",
                g.delta_p_rms, g.p_e_end, e.delta_p_rms, e.p_e_end
            );
        }
    }
}
