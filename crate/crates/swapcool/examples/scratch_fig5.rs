// scratch: find where the stray fig5 population sits
use swapcool::drive::{DriveParams, SweepSchedule};
use swapcool::grid::InternalLevel::Ground;
use swapcool::grid::MomentumGrid;
use swapcool::integrate::{evolve_trajectory, IntegratorConfig, TrajectorySeed};
use swapcool::state::SpinMomentumState;

fn main() {
    let grid = MomentumGrid::new(-28, 28).unwrap();
    let params = DriveParams::new(1.0, 0.0).unwrap();
    for sweeps in 1..=5u32 {
        let psi0 = SpinMomentumState::basis(Ground, 10, grid).unwrap();
        let schedule = SweepSchedule::sawtooth(120.0, 1000.0, sweeps);
        let cfg = IntegratorConfig::default().with_records_per_period(2);
        let out = evolve_trajectory(&psi0, &schedule, &params, 0.0, 1000.0 * sweeps as f64, TrajectorySeed::new(0,0), &cfg).unwrap();
        let st = out.state;
        let sites = st.grid().sites();
        let mut parts: Vec<(i64, f64, f64)> = Vec::new();
        for n in -28..=28i64 {
            let s = st.grid().site(n).unwrap();
            let pg = st.amplitudes()[s].norm_sqr();
            let pe = st.amplitudes()[sites + s].norm_sqr();
            if pg + pe > 1e-5 { parts.push((n, pg, pe)); }
        }
        let ex = st.expectations().unwrap();
        println!("after sweep {sweeps}: p_rms={:.5} p2={:.5} P_e={:.5}", ex.p_rms, ex.mean_p2, ex.p_e);
        for (n, pg, pe) in parts { println!("   n={n:+3}: P(g)={pg:.5} P(e)={pe:.5}"); }
    }
}
