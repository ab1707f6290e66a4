//! Time-dependent standing-wave drive: detuning waveforms, the laser-frame
//! Hamiltonian and dressed-state eigenvalue sweeps.
//!
//! In the laser frame the Hamiltonian is
//!
//! ```text
//! H = p̂²/2m − (ħ/2) δ(t) σ̂ᶻ + (ħ/2) Ω_s cos(kẑ) σ̂ˣ ,   σ̂ᶻ = |e⟩⟨e| − |g⟩⟨g|
//! ```
//!
//! so in recoil units the diagonal is n² + δ/2 on (g, n) and n² − δ/2 on
//! (e, n), and cos(kẑ) = (e^{ikẑ} + e^{−ikẑ})/2 couples ⟨e, n±1|H|g, n⟩ with
//! strength Ω_s/4 = Ω₀/2. The only time dependence is the scalar δ(t).

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{InternalLevel, MomentumGrid};
use crate::linalg;

/// Laser drive strength and transition linewidth.
///
/// `omega0` is the per-beam Rabi frequency; the standing wave's peak Rabi
/// frequency is Ω_s = 2 Ω₀ exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    pub omega0: f64,
    pub gamma: f64,
}

impl DriveParams {
    pub fn new(omega0: f64, gamma: f64) -> Result<Self> {
        if gamma < 0.0 {
            return Err(Error::NegativeGamma { gamma });
        }
        Ok(Self { omega0, gamma })
    }

    /// Standing-wave peak Rabi frequency Ω_s = 2 Ω₀.
    #[inline]
    pub fn omega_s(&self) -> f64 {
        2.0 * self.omega0
    }

    /// Adiabaticity parameter κ = Ω₀²/α for a ramp slope α.
    #[inline]
    pub fn kappa(&self, alpha: f64) -> f64 {
        self.omega0 * self.omega0 / alpha
    }
}

/// Direction of the linear ramp: `Positive` sweeps red → blue
/// (δ from −Δs/2 to +Δs/2), `Negative` the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RampSign {
    #[default]
    Positive,
    Negative,
}

impl RampSign {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            RampSign::Positive => 1.0,
            RampSign::Negative => -1.0,
        }
    }
}

/// Detuning waveform over a run.
///
/// * `Sawtooth`: δ ramps linearly from −Δs/2 to +Δs/2 every period T_s,
///   centered on atomic resonance, then resets discontinuously. The state
///   is carried unchanged across the reset (laser phase treated as
///   continuous; only δ jumps).
/// * `SweepWait`: single sawtooth ramps separated by waits that are long
///   compared to 1/γ. The wait is not simulated in real time; at the end of
///   each ramp the remaining excited population is projected to the ground
///   state with the accompanying recoil (T_wait → ∞ shortcut).
/// * `Constant`: fixed detuning (Doppler-baseline configuration).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepSchedule {
    Sawtooth { delta_s: f64, t_s: f64, n_sweeps: u32, ramp_sign: RampSign },
    SweepWait { delta_s: f64, t_s: f64, n_cycles: u32, ramp_sign: RampSign },
    Constant { delta: f64 },
}

impl SweepSchedule {
    pub fn sawtooth(delta_s: f64, t_s: f64, n_sweeps: u32) -> Self {
        SweepSchedule::Sawtooth { delta_s, t_s, n_sweeps, ramp_sign: RampSign::Positive }
    }

    pub fn sweep_wait(delta_s: f64, t_s: f64, n_cycles: u32) -> Self {
        SweepSchedule::SweepWait { delta_s, t_s, n_cycles, ramp_sign: RampSign::Positive }
    }

    pub fn with_ramp_sign(mut self, sign: RampSign) -> Self {
        match &mut self {
            SweepSchedule::Sawtooth { ramp_sign, .. }
            | SweepSchedule::SweepWait { ramp_sign, .. } => *ramp_sign = sign,
            SweepSchedule::Constant { .. } => {}
        }
        self
    }

    /// Ramp slope α = Δs/T_s; `None` for a constant detuning.
    pub fn alpha(&self) -> Option<f64> {
        match self {
            SweepSchedule::Sawtooth { delta_s, t_s, .. }
            | SweepSchedule::SweepWait { delta_s, t_s, .. } => Some(delta_s / t_s),
            SweepSchedule::Constant { .. } => None,
        }
    }

    /// Signed dδ/dt within a ramp (0 for constant detuning). Integrators
    /// use it to extend the current ramp continuously across a step, so
    /// that RK4 stages touching an exact reset time see the pre-reset
    /// detuning.
    pub fn slope(&self) -> f64 {
        match self {
            SweepSchedule::Sawtooth { delta_s, t_s, ramp_sign, .. }
            | SweepSchedule::SweepWait { delta_s, t_s, ramp_sign, .. } => {
                ramp_sign.sign() * delta_s / t_s
            }
            SweepSchedule::Constant { .. } => 0.0,
        }
    }

    /// Ramp period, if periodic.
    pub fn period(&self) -> Option<f64> {
        match self {
            SweepSchedule::Sawtooth { t_s, .. } | SweepSchedule::SweepWait { t_s, .. } => {
                Some(*t_s)
            }
            SweepSchedule::Constant { .. } => None,
        }
    }

    /// Full sweep range Δs (0 for constant detuning).
    pub fn delta_s(&self) -> f64 {
        match self {
            SweepSchedule::Sawtooth { delta_s, .. } | SweepSchedule::SweepWait { delta_s, .. } => {
                *delta_s
            }
            SweepSchedule::Constant { .. } => 0.0,
        }
    }

    /// Scheduled run duration (ramp time only; waits are instantaneous).
    pub fn total_time(&self) -> Option<f64> {
        match self {
            SweepSchedule::Sawtooth { t_s, n_sweeps, .. } => Some(t_s * f64::from(*n_sweeps)),
            SweepSchedule::SweepWait { t_s, n_cycles, .. } => Some(t_s * f64::from(*n_cycles)),
            SweepSchedule::Constant { .. } => None,
        }
    }

    /// Whether the schedule projects the excited state at each ramp end.
    pub fn projects_at_period(&self) -> bool {
        matches!(self, SweepSchedule::SweepWait { .. })
    }

    /// Instantaneous detuning δ(t). At exact multiples of T_s the sawtooth
    /// has already reset, i.e. δ(k T_s) = −Δs/2 for a positive ramp.
    pub fn detuning(&self, t: f64) -> f64 {
        match self {
            SweepSchedule::Sawtooth { delta_s, t_s, ramp_sign, .. }
            | SweepSchedule::SweepWait { delta_s, t_s, ramp_sign, .. } => {
                let tau = t.rem_euclid(*t_s);
                ramp_sign.sign() * (-delta_s / 2.0 + delta_s / t_s * tau)
            }
            SweepSchedule::Constant { delta } => *delta,
        }
    }

    /// Accumulated detuning phase ∫₀ᵗ δ(t′) dt′. Each full sawtooth period
    /// integrates to zero, so only the fractional part of the period
    /// contributes; the integral is continuous across resets.
    pub fn detuning_integral(&self, t: f64) -> f64 {
        match self {
            SweepSchedule::Sawtooth { delta_s, t_s, ramp_sign, .. }
            | SweepSchedule::SweepWait { delta_s, t_s, ramp_sign, .. } => {
                let tau = t.rem_euclid(*t_s);
                ramp_sign.sign() * (-delta_s / 2.0 * tau + delta_s / t_s * tau * tau / 2.0)
            }
            SweepSchedule::Constant { delta } => delta * t,
        }
    }
}

/// Sparse laser-frame Hamiltonian at a fixed detuning.
///
/// The structure is fully determined by the grid: a real diagonal plus a
/// uniform real coupling Ω₀/2 between (g, n) and (e, n±1). Hermitian by
/// construction for every t.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    grid: MomentumGrid,
    diag: Vec<f64>,
    coupling: f64,
}

/// Builds the laser-frame Hamiltonian for detuning `delta`.
pub fn hamiltonian(grid: &MomentumGrid, params: &DriveParams, delta: f64) -> HamiltonianMatrix {
    let sites = grid.sites();
    let mut diag = vec![0.0; 2 * sites];
    for site in 0..sites {
        let n = grid.momentum_of_site(site) as f64;
        let kinetic = n * n;
        diag[site] = kinetic + delta / 2.0; // ground
        diag[sites + site] = kinetic - delta / 2.0; // excited
    }
    HamiltonianMatrix { grid: *grid, diag, coupling: params.omega0 / 2.0 }
}

impl HamiltonianMatrix {
    #[inline]
    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    #[inline]
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Uniform off-diagonal coupling ⟨e, n±1|H|g, n⟩ = Ω₀/2.
    #[inline]
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn element(&self, level_row: InternalLevel, n_row: i64, level_col: InternalLevel, n_col: i64) -> Result<Complex64> {
        let i = self.grid.index(level_row, n_row)?;
        let j = self.grid.index(level_col, n_col)?;
        if i == j {
            return Ok(Complex64::new(self.diag[i], 0.0));
        }
        let coupled = level_row != level_col && (n_row - n_col).abs() == 1;
        Ok(if coupled { Complex64::new(self.coupling, 0.0) } else { Complex64::ZERO })
    }

    /// out = H ψ (dense vector over the flat index space).
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let sites = self.grid.sites();
        debug_assert_eq!(psi.len(), 2 * sites);
        let c = self.coupling;
        let (g, e) = psi.split_at(sites);
        let (out_g, out_e) = out.split_at_mut(sites);
        for s in 0..sites {
            let mut acc = self.diag[s] * g[s];
            if s + 1 < sites {
                acc += c * e[s + 1];
            }
            if s > 0 {
                acc += c * e[s - 1];
            }
            out_g[s] = acc;
        }
        for s in 0..sites {
            let mut acc = self.diag[sites + s] * e[s];
            if s > 0 {
                acc += c * g[s - 1];
            }
            if s + 1 < sites {
                acc += c * g[s + 1];
            }
            out_e[s] = acc;
        }
    }

    /// Number of coupled (g, n) ↔ (e, n′) pairs; 2·(sites − 1) exactly.
    pub fn nonzero_offdiagonal_pairs(&self) -> usize {
        2 * (self.grid.sites() - 1)
    }

    pub fn to_dense(&self) -> Array2<Complex64> {
        let sites = self.grid.sites();
        let d = 2 * sites;
        let mut m = Array2::zeros((d, d));
        for i in 0..d {
            m[(i, i)] = Complex64::new(self.diag[i], 0.0);
        }
        let c = Complex64::new(self.coupling, 0.0);
        for s in 0..sites {
            for t in [s.wrapping_sub(1), s + 1] {
                if t < sites {
                    m[(sites + t, s)] = c;
                    m[(s, sites + t)] = c;
                }
            }
        }
        m
    }
}

/// Four-state dressed manifold for a particle entering a sweep in |g, p⟩ in
/// the high-velocity regime: {|g,p⟩, |e,p−ħk⟩, |g,p−2ħk⟩, |e,p−3ħk⟩}.
pub fn four_state_set(p: i64) -> [(InternalLevel, i64); 4] {
    [
        (InternalLevel::Ground, p),
        (InternalLevel::Excited, p - 1),
        (InternalLevel::Ground, p - 2),
        (InternalLevel::Excited, p - 3),
    ]
}

/// Instantaneous eigenvalues (ascending) of the Hamiltonian restricted to
/// the four-state set around `p`.
pub fn dressed_eigenvalues(
    grid: &MomentumGrid,
    params: &DriveParams,
    delta: f64,
    p: i64,
) -> Result<Vec<f64>> {
    let states = four_state_set(p);
    if !grid.contains(p) || !grid.contains(p - 3) {
        return Err(Error::SubspaceOffGrid { p, lowest: p - 3 });
    }
    let h = hamiltonian(grid, params, delta);
    let m = restrict(&h, &states);
    Ok(linalg::hermitian_eigenvalues(&m))
}

/// Instantaneous eigenvalues (ascending) over the full grid.
pub fn dressed_eigenvalues_full(
    grid: &MomentumGrid,
    params: &DriveParams,
    delta: f64,
) -> Vec<f64> {
    let h = hamiltonian(grid, params, delta);
    linalg::hermitian_eigenvalues(&h.to_dense())
}

/// Dressed eigenvalue curves over a detuning scan with diabatic-state
/// tracking: curve k follows the eigenvector with maximal overlap against
/// the previous scan point instead of staying sorted. Useful for plotting
/// the physical path through avoided crossings.
pub fn dressed_track(
    grid: &MomentumGrid,
    params: &DriveParams,
    deltas: &[f64],
    p: i64,
) -> Result<Vec<Vec<f64>>> {
    let states = four_state_set(p);
    if !grid.contains(p) || !grid.contains(p - 3) {
        return Err(Error::SubspaceOffGrid { p, lowest: p - 3 });
    }
    let mut curves: Vec<Vec<f64>> = vec![Vec::with_capacity(deltas.len()); states.len()];
    let mut previous: Option<Array2<Complex64>> = None;
    // permutation[k] = column of the current eigenbasis assigned to curve k
    let mut permutation: Vec<usize> = (0..states.len()).collect();
    for &delta in deltas {
        let h = hamiltonian(grid, params, delta);
        let m = restrict(&h, &states);
        let (vals, vecs) = linalg::hermitian_eigen(&m);
        if let Some(prev) = &previous {
            permutation = follow_by_overlap(prev, &vecs, &permutation);
        }
        for (k, &col) in permutation.iter().enumerate() {
            curves[k].push(vals[col]);
        }
        previous = Some(vecs);
    }
    Ok(curves)
}

fn restrict(h: &HamiltonianMatrix, states: &[(InternalLevel, i64)]) -> Array2<Complex64> {
    let k = states.len();
    let mut m = Array2::zeros((k, k));
    for (i, &(li, ni)) in states.iter().enumerate() {
        for (j, &(lj, nj)) in states.iter().enumerate() {
            m[(i, j)] = h.element(li, ni, lj, nj).expect("states checked on grid");
        }
    }
    m
}

/// Greedy overlap assignment: for each tracked curve pick the unclaimed new
/// eigenvector with the largest |⟨v_old|v_new⟩|.
fn follow_by_overlap(
    prev: &Array2<Complex64>,
    next: &Array2<Complex64>,
    permutation: &[usize],
) -> Vec<usize> {
    let k = permutation.len();
    let mut claimed = vec![false; k];
    let mut out = vec![0usize; k];
    for (curve, &old_col) in permutation.iter().enumerate() {
        let mut best = (0usize, -1.0f64);
        for new_col in 0..k {
            if claimed[new_col] {
                continue;
            }
            let overlap: Complex64 =
                (0..k).map(|i| prev[(i, old_col)].conj() * next[(i, new_col)]).sum();
            let mag = overlap.norm();
            if mag > best.1 {
                best = (new_col, mag);
            }
        }
        claimed[best.0] = true;
        out[curve] = best.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::grid::InternalLevel::{Excited, Ground};

    #[test]
    fn sawtooth_detuning_waveform() {
        let s = SweepSchedule::sawtooth(100.0, 60.0, 3);
        assert_relative_eq!(s.detuning(30.0), 0.0); // midpoint of ramp
        assert_relative_eq!(s.detuning(0.0), -50.0);
        assert_relative_eq!(s.detuning(60.0), -50.0); // reset
        assert_relative_eq!(s.detuning(59.999), 50.0, max_relative = 1e-3);
        assert_relative_eq!(s.alpha().unwrap(), 100.0 / 60.0);

        let neg = s.with_ramp_sign(RampSign::Negative);
        assert_relative_eq!(neg.detuning(0.0), 50.0);
        assert_relative_eq!(neg.detuning(30.0), 0.0);

        let c = SweepSchedule::Constant { delta: -40.0 };
        assert_relative_eq!(c.detuning(123.0), -40.0);
    }

    #[test]
    fn detuning_integral_matches_quadrature() {
        // quadrature panels aligned to the reset discontinuities
        let t_s = 7.0;
        let s = SweepSchedule::sawtooth(120.0, t_s, 4);
        for &t in &[0.0f64, 1.3, 6.9, 7.0, 7.1, 13.95, 20.0] {
            let mut quad = 0.0;
            let mut lo = 0.0;
            while lo < t - 1e-12 {
                let hi = ((lo / t_s).floor() + 1.0) * t_s;
                let hi = hi.min(t);
                let steps = 50_000;
                let dt = (hi - lo) / steps as f64;
                quad += (0..steps).map(|i| s.detuning(lo + (i as f64 + 0.5) * dt) * dt).sum::<f64>();
                lo = hi;
            }
            assert_relative_eq!(s.detuning_integral(t), quad, epsilon = 1e-6, max_relative = 1e-6);
        }
        // full periods integrate to zero
        assert_relative_eq!(s.detuning_integral(14.0), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hamiltonian_elements() {
        let grid = MomentumGrid::new(-8, 8).unwrap();
        let params = DriveParams::new(2.0, 0.0).unwrap();
        let h = hamiltonian(&grid, &params, 0.0);
        assert_relative_eq!(h.element(Excited, 5, Ground, 4).unwrap().re, 1.0); // Ω₀/2
        assert_relative_eq!(h.element(Excited, 3, Ground, 4).unwrap().re, 1.0);
        assert_eq!(h.element(Excited, 6, Ground, 4).unwrap(), Complex64::ZERO);
        assert_eq!(h.element(Ground, 5, Ground, 4).unwrap(), Complex64::ZERO);

        let h = hamiltonian(&grid, &params, 10.0);
        assert_relative_eq!(h.element(Ground, 4, Ground, 4).unwrap().re, 21.0); // 16 + 5
        assert_relative_eq!(h.element(Excited, 3, Excited, 3).unwrap().re, 4.0); // 9 − 5
    }

    #[test]
    fn resonance_condition_matches_resonance_times() {
        // the (g,n) and (e,n±1) diagonals cross exactly at the detunings
        // corresponding to the appendix resonance times α t = ±2β + 1
        let grid = MomentumGrid::new(-15, 15).unwrap();
        let params = DriveParams::new(3.0, 0.0).unwrap();
        for n in [-7i64, -2, 0, 1, 4, 9] {
            let delta_right = (2 * n + 1) as f64;
            let h = hamiltonian(&grid, &params, delta_right);
            assert_relative_eq!(
                h.element(Ground, n, Ground, n).unwrap().re,
                h.element(Excited, n + 1, Excited, n + 1).unwrap().re,
                max_relative = 1e-14,
            );
            let delta_left = (-2 * n + 1) as f64;
            let h = hamiltonian(&grid, &params, delta_left);
            assert_relative_eq!(
                h.element(Ground, n, Ground, n).unwrap().re,
                h.element(Excited, n - 1, Excited, n - 1).unwrap().re,
                max_relative = 1e-14,
            );
        }
    }

    #[test]
    fn dense_form_is_hermitian_and_sparse() {
        let grid = MomentumGrid::new(-5, 6).unwrap();
        let params = DriveParams::new(1.7, 0.3).unwrap();
        let h = hamiltonian(&grid, &params, -12.3);
        let m = h.to_dense();
        let d = m.nrows();
        let mut nonzero_pairs = 0;
        for i in 0..d {
            for j in 0..d {
                assert_eq!(m[(i, j)], m[(j, i)].conj(), "H must equal H† exactly");
                if i < j && m[(i, j)] != Complex64::ZERO {
                    nonzero_pairs += 1;
                }
            }
        }
        assert_eq!(nonzero_pairs, h.nonzero_offdiagonal_pairs());
        assert_eq!(nonzero_pairs, 2 * (grid.sites() - 1));
    }

    #[test]
    fn apply_matches_dense() {
        let grid = MomentumGrid::new(-4, 4).unwrap();
        let params = DriveParams::new(0.9, 0.0).unwrap();
        let h = hamiltonian(&grid, &params, 3.7);
        let dense = h.to_dense();
        let d = grid.dim();
        let psi: Vec<Complex64> =
            (0..d).map(|i| Complex64::new((i as f64 * 0.31).sin(), (i as f64 * 0.17).cos())).collect();
        let mut out = vec![Complex64::ZERO; d];
        h.apply(&psi, &mut out);
        for i in 0..d {
            let expect: Complex64 = (0..d).map(|j| dense[(i, j)] * psi[j]).sum();
            assert!((out[i] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn uncoupled_dressed_eigenvalues_are_bare_diagonals() {
        let grid = MomentumGrid::new(-6, 8).unwrap();
        let params = DriveParams::new(0.0, 0.0).unwrap();
        let delta = -7.0;
        let vals = dressed_eigenvalues(&grid, &params, delta, 4).unwrap();
        let mut bare: Vec<f64> = four_state_set(4)
            .iter()
            .map(|&(l, n)| {
                let kin = (n * n) as f64;
                match l {
                    Ground => kin + delta / 2.0,
                    Excited => kin - delta / 2.0,
                }
            })
            .collect();
        bare.sort_by(f64::total_cmp);
        for (v, b) in vals.iter().zip(&bare) {
            assert_relative_eq!(v, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn dressed_subspace_off_grid_errors() {
        let grid = MomentumGrid::new(-2, 6).unwrap();
        let params = DriveParams::new(1.0, 0.0).unwrap();
        assert!(dressed_eigenvalues(&grid, &params, 0.0, 0).is_err());
    }

    #[test]
    fn single_photon_avoided_crossing_gap_is_omega0() {
        // scan δ near the (g,p) ↔ (e,p−1) crossing at δ = −(2p−1); the
        // two-level avoided-crossing gap is 2·(Ω₀/2) = Ω₀ up to corrections
        let grid = MomentumGrid::new(-10, 10).unwrap();
        let omega0 = 0.4;
        let params = DriveParams::new(omega0, 0.0).unwrap();
        let p = 4i64;
        let crossing = -(2.0 * p as f64 - 1.0);
        let mut min_gap = f64::INFINITY;
        let mut d = crossing - 1.0;
        while d <= crossing + 1.0 {
            let vals = dressed_eigenvalues(&grid, &params, d, p).unwrap();
            let gap = vals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            min_gap = min_gap.min(gap);
            d += 2e-3;
        }
        assert_relative_eq!(min_gap, omega0, max_relative = 0.02);
    }

    #[test]
    fn eigenvalue_continuity_and_tracking() {
        // sorted eigenvalues move by O(step · slope); the slope of every
        // branch is bounded by 1/2 in δ (plus level repulsion near
        // crossings, bounded by the coupling scale)
        let grid = MomentumGrid::new(-10, 10).unwrap();
        let params = DriveParams::new(2.0, 0.0).unwrap();
        let p = 4i64;
        let deltas: Vec<f64> = (0..2000).map(|i| -25.0 + 50.0 * i as f64 / 1999.0).collect();
        let step = deltas[1] - deltas[0];
        let mut prev: Option<Vec<f64>> = None;
        for &d in &deltas {
            let vals = dressed_eigenvalues(&grid, &params, d, p).unwrap();
            if let Some(p) = &prev {
                for (a, b) in p.iter().zip(&vals) {
                    assert!(
                        (a - b).abs() <= 10.0 * step * 50.0,
                        "sorted eigenvalue jumped by {} over δ step {}",
                        (a - b).abs(),
                        step
                    );
                }
            }
            prev = Some(vals);
        }

        let curves = dressed_track(&grid, &params, &deltas, p).unwrap();
        assert_eq!(curves.len(), 4);
        // tracked curves cross, so they must not be globally ordered;
        // sorted curves must be
        assert!(curves.iter().all(|c| c.len() == deltas.len()));
    }
}
