// scratch: fig10 equilibrium distribution decomposition
use swapcool::drive::{DriveParams, SweepSchedule};
use swapcool::grid::InternalLevel::Ground;
use swapcool::grid::MomentumGrid;
use swapcool::integrate::{evolve_trajectory, IntegratorConfig, TrajectorySeed};
use swapcool::state::SpinMomentumState;

fn main() {
    let grid = MomentumGrid::default_for_initial(10, 100.0);
    let params = DriveParams::new(2.0, 0.0).unwrap();
    let schedule = SweepSchedule::sweep_wait(100.0, 60.0, 15);
    let cfg = IntegratorConfig::default().with_safety(0.25).with_records_per_period(2);
    let psi0 = SpinMomentumState::basis(Ground, 10, grid).unwrap();
    let n = 400usize;
    let mut dist = vec![0.0f64; grid.sites()];
    let mut p2s = Vec::new();
    for k in 0..n {
        let out = evolve_trajectory(&psi0, &schedule, &params, 0.0, 900.0, TrajectorySeed::new(10, k as u64), &cfg).unwrap();
        let d = out.state.momentum_distribution().unwrap();
        for (s, v) in d.iter().enumerate() { dist[s] += v / n as f64; }
        p2s.push(out.records.last().unwrap().mean_p2);
    }
    let mut total_p2 = 0.0;
    println!("mean final distribution (pop > 2e-4):");
    for (s, v) in dist.iter().enumerate() {
        let m = grid.momentum_of_site(s);
        total_p2 += (m * m) as f64 * v;
        if *v > 2e-4 { println!("  n={m:+3}: {v:.4}"); }
    }
    println!("ensemble <p2> = {total_p2:.3}");
    for cut in [3i64, 5, 8, 12] {
        let (core_pop, core_p2): (f64, f64) = dist.iter().enumerate()
            .filter(|(s, _)| grid.momentum_of_site(*s).abs() <= cut)
            .fold((0.0, 0.0), |(p, q), (s, v)| {
                let m = grid.momentum_of_site(s);
                (p + v, q + (m * m) as f64 * v)
            });
        println!("|p|<={cut}: pop={core_pop:.4} core<p2>={:.3}", core_p2 / core_pop);
    }
    p2s.sort_by(f64::total_cmp);
    println!("per-traj final <p2> quantiles: p50={:.2} p90={:.2} p99={:.2} max={:.2}",
        p2s[n/2], p2s[n*9/10], p2s[n*99/100], p2s[n-1]);
}
