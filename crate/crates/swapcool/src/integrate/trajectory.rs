//! Quantum-jump (Monte Carlo wave function) trajectory integrator.
//!
//! Works in the rotating frame of the instantaneous diagonal of the
//! laser-frame Hamiltonian: the kinetic (n²) and detuning (δ(t)/2) phases
//! are applied in closed form, leaving only the coupling Ω₀/2 with
//! per-pair phase factors
//!
//! ```text
//! ⟨e, n±1| H̃(t) |g, n⟩ = (Ω₀/2) · exp(i[(±2n + 1)(t − t0) − ∫δ])
//! ```
//!
//! so the step size is governed by the detuning offsets (≲ Δs/2 + 2n + 1)
//! instead of the kinetic energies (n²). The factors are generated from a
//! power table of u = e^{2i(t−t0)} indexed by |n|, which also makes the
//! dynamics of momentum-mirrored initial states bit-exactly mirrored.
//!
//! Jumps follow the waiting-time algorithm: evolve under the non-Hermitian
//! effective Hamiltonian (−iγ/2 on every excited diagonal) until the
//! squared norm falls to a uniform target r, locate the jump time by
//! bisection, collapse through a sampled recoil channel, renormalize and
//! redraw r. Collapse operators carry the matching frame phases.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dissipation::{draw_channel, JUMP_CHANNELS};
use crate::drive::{DriveParams, SweepSchedule};
use crate::error::{Error, Result};
use crate::grid::MomentumGrid;
use crate::integrate::{build_time_grid, IntegratorConfig};
use crate::state::{ObservableRecord, SpinMomentumState, NORM_TOLERANCE};

/// Reproducible trajectory identity: ChaCha8 seeded with `base`, stream set
/// to `stream`. Ensembles assign stream = trajectory index, so results do
/// not depend on how work is partitioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectorySeed {
    pub base: u64,
    pub stream: u64,
}

impl TrajectorySeed {
    pub fn new(base: u64, stream: u64) -> Self {
        Self { base, stream }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base);
        rng.set_stream(self.stream);
        rng
    }
}

/// One spontaneous emission in a trajectory. Emissions produced by the
/// sweep-wait projection carry the ramp-boundary timestamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    pub t: f64,
    pub channel: usize,
}

/// Result of a single stochastic trajectory.
#[derive(Debug, Clone)]
pub struct TrajectoryOutput {
    /// Normalized physical state at t1, rotated back to the laser frame.
    pub state: SpinMomentumState,
    pub records: Vec<ObservableRecord>,
    pub jumps: Vec<JumpEvent>,
    /// Squared norm before the final renormalization; for γ = 0 runs this
    /// measures the integrator's probability-conservation error.
    pub final_norm_sqr: f64,
}

/// Integrates one quantum trajectory from t0 to t1. Deterministic given
/// `seed`; γ = 0 reduces to Schrödinger evolution with zero jumps.
pub fn evolve_trajectory(
    psi0: &SpinMomentumState,
    schedule: &SweepSchedule,
    params: &DriveParams,
    t0: f64,
    t1: f64,
    seed: TrajectorySeed,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryOutput> {
    if !(t1 > t0) {
        return Err(Error::Config(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    let norm_sqr = psi0.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sqr, tolerance: NORM_TOLERANCE });
    }
    if params.gamma < 0.0 {
        return Err(Error::NegativeGamma { gamma: params.gamma });
    }

    let grid = *psi0.grid();
    let mut engine = Engine::new(grid, schedule, params, t0);
    let tg = build_time_grid(schedule, t1 - t0, engine.rate(), cfg)?;
    let jump_tol = 1e-6 * schedule.period().unwrap_or(t1 - t0);

    let mut rng = seed.rng();
    let stochastic = params.gamma > 0.0;
    let mut r_target = if stochastic { draw_survival_target(&mut rng) } else { 0.0 };

    let mut phi: Vec<Complex64> = psi0.amplitudes().to_vec();
    let mut xi = [0u64; 3];
    let mut jumps = Vec::new();
    let mut records = Vec::with_capacity(tg.total_steps / tg.record_every + 2);

    let record_state = |phi: &[Complex64], t: f64, xi: &[u64; 3]| -> Result<ObservableRecord> {
        let mut snap = SpinMomentumState::from_amplitudes(grid, phi.to_vec())?;
        snap.normalize();
        let edge = snap.edge_population();
        if edge > grid.edge_tolerance() {
            return Err(Error::EdgeBreach { t, population: edge, tolerance: grid.edge_tolerance() });
        }
        let ex = snap.expectations_unchecked();
        let j = [xi[0] as f64, xi[1] as f64, xi[2] as f64];
        Ok(ObservableRecord::new(t, ex, j.iter().sum(), j))
    };
    records.push(record_state(&phi, t0, &xi)?);

    let mut seg_backup = phi.clone();
    for step in 0..tg.total_steps {
        let t_step = t0 + step as f64 * tg.dt;
        let t_next = t0 + (step + 1) as f64 * tg.dt;

        if stochastic {
            seg_backup.copy_from_slice(&phi);
        }
        engine.rk4_step(&mut phi, t_step, tg.dt);

        if stochastic {
            let mut seg_t = t_step;
            let mut seg_len = tg.dt;
            while norm_sqr_of(&phi) <= r_target {
                // jump inside (seg_t, seg_t + seg_len]: locate by bisection
                let (offset, at_jump) =
                    engine.bisect_jump(&seg_backup, seg_t, seg_len, r_target, jump_tol);
                let t_jump = seg_t + offset;
                let channel = draw_channel(&mut rng);
                let post = engine.collapse(&at_jump, channel, t_jump - t0)?;
                xi[channel] += 1;
                jumps.push(JumpEvent { t: t_jump, channel });
                r_target = draw_survival_target(&mut rng);

                let remaining = seg_len - offset;
                seg_backup.copy_from_slice(&post);
                phi = post;
                seg_t = t_jump;
                seg_len = remaining;
                if seg_len <= tg.dt * 1e-9 {
                    break;
                }
                engine.rk4_step(&mut phi, seg_t, seg_len);
            }
        }

        let at_boundary =
            tg.period_steps.is_some_and(|spp| (step + 1) % spp == 0) && schedule.projects_at_period();
        if at_boundary {
            let (post, channel) = engine.project_wait(&phi, t_next - t0, &mut rng)?;
            phi = post;
            if let Some(c) = channel {
                xi[c] += 1;
                jumps.push(JumpEvent { t: t_next, channel: c });
            }
            if stochastic {
                r_target = draw_survival_target(&mut rng);
            }
        }

        if (step + 1) % tg.record_every == 0 {
            let ns = norm_sqr_of(&phi);
            if !ns.is_finite() || (!stochastic && (ns - 1.0).abs() > 1e-4) {
                return Err(Error::NotPhysical {
                    what: "norm conservation (integration unstable?)",
                    deviation: (ns - 1.0).abs(),
                    tolerance: 1e-4,
                });
            }
            records.push(record_state(&phi, t_next, &xi)?);
        }
    }

    let final_norm_sqr = norm_sqr_of(&phi);
    engine.rotate_to_lab(&mut phi, t1 - t0);
    let mut state = SpinMomentumState::from_amplitudes(grid, phi)?;
    state.normalize();
    Ok(TrajectoryOutput { state, records, jumps, final_norm_sqr })
}

fn norm_sqr_of(phi: &[Complex64]) -> f64 {
    phi.iter().map(|a| a.norm_sqr()).sum()
}

/// Uniform survival target in (0, 1).
fn draw_survival_target<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let r: f64 = rng.random();
    if r == 0.0 {
        f64::MIN_POSITIVE
    } else {
        r
    }
}

/// Rotating-frame stepper state: phase tables and RK4 buffers.
struct Engine<'a> {
    grid: MomentumGrid,
    sites: usize,
    coupling: f64,
    half_gamma: f64,
    schedule: &'a SweepSchedule,
    t0: f64,
    det_scale: f64,
    /// u^k table, u = e^{2i(t − t0)}, k = 0..=K
    pw: Vec<Complex64>,
    plus: [Vec<Complex64>; 3],
    minus: [Vec<Complex64>; 3],
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    stage: Vec<Complex64>,
}

impl<'a> Engine<'a> {
    fn new(grid: MomentumGrid, schedule: &'a SweepSchedule, params: &DriveParams, t0: f64) -> Self {
        let sites = grid.sites();
        let k_max = grid.n_min().unsigned_abs().max(grid.n_max().unsigned_abs()) as usize;
        let det_scale = match schedule {
            SweepSchedule::Constant { delta } => delta.abs(),
            _ => schedule.delta_s() / 2.0,
        };
        let dim = 2 * sites;
        Self {
            grid,
            sites,
            coupling: params.omega0 / 2.0,
            half_gamma: 0.5 * params.gamma,
            schedule,
            t0,
            det_scale,
            pw: vec![Complex64::ONE; k_max + 1],
            plus: std::array::from_fn(|_| vec![Complex64::ZERO; sites]),
            minus: std::array::from_fn(|_| vec![Complex64::ZERO; sites]),
            k1: vec![Complex64::ZERO; dim],
            k2: vec![Complex64::ZERO; dim],
            k3: vec![Complex64::ZERO; dim],
            k4: vec![Complex64::ZERO; dim],
            stage: vec![Complex64::ZERO; dim],
        }
    }

    /// Fastest phase still present in the rotating frame.
    fn rate(&self) -> f64 {
        let n_big =
            self.grid.n_min().unsigned_abs().max(self.grid.n_max().unsigned_abs()) as f64;
        (2.0 * self.coupling.abs() * 2.0)
            + 2.0 * self.half_gamma
            + (2.0 * n_big + 1.0)
            + self.det_scale
    }

    /// Fills phase-table slot `slot` for the stage at `t_start + offset`,
    /// extending the current ramp continuously across the step so stages
    /// touching an exact reset time see the pre-reset detuning.
    fn fill_tables(&mut self, slot: usize, t_start: f64, offset: f64) {
        let tau = (t_start - self.t0) + offset;
        let integral = self.schedule.detuning_integral(t_start)
            - self.schedule.detuning_integral(self.t0)
            + self.schedule.detuning(t_start) * offset
            + 0.5 * self.schedule.slope() * offset * offset;
        let u = Complex64::from_polar(1.0, 2.0 * tau);
        self.pw[0] = Complex64::ONE;
        for k in 1..self.pw.len() {
            self.pw[k] = self.pw[k - 1] * u;
        }
        let base = Complex64::from_polar(1.0, tau - integral);
        let n_min = self.grid.n_min();
        let plus = &mut self.plus[slot];
        let minus = &mut self.minus[slot];
        for s in 0..self.sites {
            let n = n_min + s as i64;
            let up = lookup(&self.pw, n);
            plus[s] = base * up; // e^{i[(2n+1)τ − ∫δ]}
            minus[s] = base * up.conj(); // e^{i[(−2n+1)τ − ∫δ]}
        }
    }

    /// out = −i H̃(t) φ − (γ/2) Π_e φ with tables from `slot`.
    fn rhs(&self, slot: usize, phi: &[Complex64], out: &mut [Complex64]) {
        let sites = self.sites;
        let c = self.coupling;
        let plus = &self.plus[slot];
        let minus = &self.minus[slot];
        let (pg, pe) = phi.split_at(sites);
        let (og, oe) = out.split_at_mut(sites);
        for s in 0..sites {
            let mut acc = Complex64::ZERO;
            if s + 1 < sites {
                acc += plus[s].conj() * pe[s + 1];
            }
            if s > 0 {
                acc += minus[s].conj() * pe[s - 1];
            }
            og[s] = Complex64::new(c * acc.im, -c * acc.re);
        }
        for s in 0..sites {
            let mut acc = Complex64::ZERO;
            if s > 0 {
                acc += plus[s - 1] * pg[s - 1];
            }
            if s + 1 < sites {
                acc += minus[s + 1] * pg[s + 1];
            }
            let mut v = Complex64::new(c * acc.im, -c * acc.re);
            if self.half_gamma > 0.0 {
                v -= self.half_gamma * pe[s];
            }
            oe[s] = v;
        }
    }

    /// One RK4 step of size h starting at absolute time t.
    fn rk4_step(&mut self, phi: &mut [Complex64], t: f64, h: f64) {
        self.fill_tables(0, t, 0.0);
        self.fill_tables(1, t, 0.5 * h);
        self.fill_tables(2, t, h);

        let dim = phi.len();
        let mut k1 = std::mem::take(&mut self.k1);
        let mut k2 = std::mem::take(&mut self.k2);
        let mut k3 = std::mem::take(&mut self.k3);
        let mut k4 = std::mem::take(&mut self.k4);
        let mut stage = std::mem::take(&mut self.stage);

        self.rhs(0, phi, &mut k1);
        for i in 0..dim {
            stage[i] = phi[i] + 0.5 * h * k1[i];
        }
        self.rhs(1, &stage, &mut k2);
        for i in 0..dim {
            stage[i] = phi[i] + 0.5 * h * k2[i];
        }
        self.rhs(1, &stage, &mut k3);
        for i in 0..dim {
            stage[i] = phi[i] + h * k3[i];
        }
        self.rhs(2, &stage, &mut k4);
        let w = h / 6.0;
        for i in 0..dim {
            phi[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }

        self.k1 = k1;
        self.k2 = k2;
        self.k3 = k3;
        self.k4 = k4;
        self.stage = stage;
    }

    /// Finds the jump offset in (0, seg_len] where the squared norm first
    /// reaches `target`, to absolute tolerance `tol` in time. Returns the
    /// offset and the state there.
    fn bisect_jump(
        &mut self,
        backup: &[Complex64],
        seg_t: f64,
        seg_len: f64,
        target: f64,
        tol: f64,
    ) -> (f64, Vec<Complex64>) {
        let mut lo = 0.0f64;
        let mut hi = seg_len;
        let mut at_hi: Option<Vec<Complex64>> = None;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            let mut trial = backup.to_vec();
            self.rk4_step(&mut trial, seg_t, mid);
            if norm_sqr_of(&trial) <= target {
                hi = mid;
                at_hi = Some(trial);
            } else {
                lo = mid;
            }
        }
        let state = at_hi.unwrap_or_else(|| {
            let mut s = backup.to_vec();
            self.rk4_step(&mut s, seg_t, hi);
            s
        });
        (hi, state)
    }

    /// Collapse through `channel` at frame time τ = t − t0, with the
    /// rotating-frame phases e^{2i n s τ} on the shifted channels.
    /// Shifts wrap at the grid boundary (the edge monitor owns that
    /// contract), matching the dissipator convention.
    fn collapse(&mut self, phi: &[Complex64], channel: usize, tau: f64) -> Result<Vec<Complex64>> {
        let sites = self.sites;
        let recoil = JUMP_CHANNELS[channel].recoil;
        let mut post = vec![Complex64::ZERO; phi.len()];
        if recoil != 0 {
            let u = Complex64::from_polar(1.0, 2.0 * tau);
            self.pw[0] = Complex64::ONE;
            for k in 1..self.pw.len() {
                self.pw[k] = self.pw[k - 1] * u;
            }
        }
        let n_min = self.grid.n_min();
        for s in 0..sites {
            let a = phi[sites + s];
            if a == Complex64::ZERO {
                continue;
            }
            let n = n_min + s as i64;
            let phase = match recoil {
                1 => lookup(&self.pw, n),
                -1 => lookup(&self.pw, -n),
                _ => Complex64::ONE,
            };
            let t = (s as i64 + recoil).rem_euclid(sites as i64) as usize;
            post[t] += phase * a;
        }
        let ns = norm_sqr_of(&post);
        if ns <= f64::MIN_POSITIVE {
            return Err(Error::NoExcitedPopulation);
        }
        let inv = 1.0 / ns.sqrt();
        for v in &mut post {
            *v *= inv;
        }
        Ok(post)
    }

    /// Sweep-wait projection at frame time τ (ramp boundary).
    fn project_wait<R: Rng + ?Sized>(
        &mut self,
        phi: &[Complex64],
        tau: f64,
        rng: &mut R,
    ) -> Result<(Vec<Complex64>, Option<usize>)> {
        let sites = self.sites;
        let ns = norm_sqr_of(phi);
        let p_e: f64 = phi[sites..].iter().map(|a| a.norm_sqr()).sum::<f64>() / ns;
        let u: f64 = rng.random();
        if u < p_e {
            let channel = draw_channel(rng);
            let post = self.collapse(phi, channel, tau)?;
            Ok((post, Some(channel)))
        } else {
            let mut post = phi.to_vec();
            for a in &mut post[sites..] {
                *a = Complex64::ZERO;
            }
            let ns = norm_sqr_of(&post);
            if ns <= f64::MIN_POSITIVE {
                return Err(Error::NoExcitedPopulation);
            }
            let inv = 1.0 / ns.sqrt();
            for a in &mut post {
                *a *= inv;
            }
            Ok((post, None))
        }
    }

    /// Applies e^{−iθ_j(τ)} to return to the laser frame at span τ.
    fn rotate_to_lab(&self, phi: &mut [Complex64], tau: f64) {
        let sites = self.sites;
        let dj = self.schedule.detuning_integral(self.t0 + tau)
            - self.schedule.detuning_integral(self.t0);
        for s in 0..sites {
            let n = self.grid.momentum_of_site(s) as f64;
            let kin = n * n * tau;
            phi[s] *= Complex64::from_polar(1.0, -(kin + 0.5 * dj));
            phi[sites + s] *= Complex64::from_polar(1.0, -(kin - 0.5 * dj));
        }
    }
}

#[inline]
fn lookup(pw: &[Complex64], n: i64) -> Complex64 {
    if n >= 0 {
        pw[n as usize]
    } else {
        pw[(-n) as usize].conj()
    }
}
