// scratch: fig7/fig8 point calibration
use swapcool::analysis::{delta_p_avg_steady, delta_p_pm, GridPolicy, ScanSettings};
use swapcool::drive::{DriveParams, SweepSchedule};
use swapcool::integrate::IntegratorConfig;

fn main() {
    let schedule = SweepSchedule::sawtooth(1800.0, 1.0, 1);
    let params = DriveParams::new(60.0, 1.0).unwrap();
    let settings = |n: usize, safety: f64| ScanSettings {
        n_traj: n,
        base_seed: 7,
        grid: GridPolicy::Window { margin: 30 },
        integ: IntegratorConfig::default().with_safety(safety).with_records_per_period(2),
    };
    // capture-range bands: toward zero for |kv| < 450 (p < 225),
    // away for 225 < p < 450
    for &p in &[25i64, 80, 150, 250, 300, 350, 470] {
        let t0 = std::time::Instant::now();
        let r = delta_p_avg_steady(p, &schedule, &params, &settings(300, 0.2)).unwrap();
        println!(
            "p={p:4}: dp_avg={:+.3}±{:.3}  P_e_ss={:.3}  xi={:.3}±{:.3}   [{:?}]",
            r.delta_p_avg, r.se_delta_p, r.p_e_ss, r.xi, r.se_xi, t0.elapsed()
        );
    }
    // step-size sensitivity at the headline point
    for safety in [0.1, 0.3] {
        let r = delta_p_avg_steady(25, &schedule, &params, &settings(300, safety)).unwrap();
        println!("p=25 safety={safety}: dp_avg={:+.3}±{:.3} xi={:.3}", r.delta_p_avg, r.se_delta_p, r.xi);
    }
    // fig8 anchor points
    for &p in &[3i64, 5, 30] {
        let t0 = std::time::Instant::now();
        let r = delta_p_pm(p, &schedule, &params, &settings(500, 0.2)).unwrap();
        println!(
            "pm p={p:3}: dp+={:+.3} dp-={:+.3} se={:.3}   [{:?}]",
            r.delta_p_plus, r.delta_p_minus, r.se, t0.elapsed()
        );
    }
}
