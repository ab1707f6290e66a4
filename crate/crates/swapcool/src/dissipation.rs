//! Spontaneous emission: the Lindblad dissipator with discretized recoil,
//! the non-Hermitian effective Hamiltonian, and jump-channel sampling for
//! quantum trajectories.
//!
//! The dipole radiation pattern is approximated by recoils of −ħk, 0 and
//! +ħk with probabilities 1/5 : 3/5 : 1/5, so the dissipator is
//!
//! ```text
//! L(ρ) = −(γ/2){σ̂⁺σ̂⁻, ρ}
//!        + γ [ (3/5) σ̂⁻ρσ̂⁺ + (1/5) S₊ σ̂⁻ρσ̂⁺ S₊† + (1/5) S₋ σ̂⁻ρσ̂⁺ S₋† ]
//! ```
//!
//! with S± the ±ħk momentum shift. All three channels share the operator
//! σ̂⁻, so jump-channel selection is state-independent.
//!
//! On the truncated grid the shifts wrap cyclically at the boundary, which
//! keeps S± exactly unitary and the dissipator exactly trace-preserving
//! for any operator. The integrators separately enforce the grid edge
//! contract (population on the outermost sites below the grid's
//! `edge_tolerance`), so the wrap is never physically significant in a
//! valid run.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use crate::drive::HamiltonianMatrix;
use crate::error::{Error, Result};
use crate::state::{DensityOperator, SpinMomentumState};

/// One spontaneous-emission recoil channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpChannel {
    /// Branching fraction of the total decay rate γ.
    pub weight: f64,
    /// Momentum kick in ħk.
    pub recoil: i64,
}

impl JumpChannel {
    /// Decay rate of this channel, weight·γ.
    #[inline]
    pub fn rate(&self, gamma: f64) -> f64 {
        self.weight * gamma
    }
}

/// The three recoil channels, ordered (Δp = −ħk, 0, +ħk) to match
/// [`crate::state::ObservableRecord::jumps`].
pub const JUMP_CHANNELS: [JumpChannel; 3] = [
    JumpChannel { weight: 0.2, recoil: -1 },
    JumpChannel { weight: 0.6, recoil: 0 },
    JumpChannel { weight: 0.2, recoil: 1 },
];

/// Non-Hermitian effective Hamiltonian for trajectory evolution between
/// jumps: H_eff = H − i(γ/2) σ̂⁺σ̂⁻, i.e. −iγ/2 added to every excited
/// diagonal entry.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    h: HamiltonianMatrix,
    gamma: f64,
}

pub fn effective_hamiltonian(h: HamiltonianMatrix, gamma: f64) -> Result<EffectiveHamiltonian> {
    if gamma < 0.0 {
        return Err(Error::NegativeGamma { gamma });
    }
    Ok(EffectiveHamiltonian { h, gamma })
}

impl EffectiveHamiltonian {
    #[inline]
    pub fn hamiltonian(&self) -> &HamiltonianMatrix {
        &self.h
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// out = H_eff ψ.
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        self.h.apply(psi, out);
        let sites = self.h.grid().sites();
        let half_gamma = 0.5 * self.gamma;
        for s in 0..sites {
            out[sites + s] -= Complex64::new(0.0, half_gamma) * psi[sites + s];
        }
    }

    pub fn to_dense(&self) -> Array2<Complex64> {
        let mut m = self.h.to_dense();
        let sites = self.h.grid().sites();
        for s in 0..sites {
            m[(sites + s, sites + s)] -= Complex64::new(0.0, 0.5 * self.gamma);
        }
        m
    }
}

/// Dissipator contribution dρ/dt = L(ρ). The result is traceless.
pub fn lindblad_apply(rho: &DensityOperator, gamma: f64) -> Result<Array2<Complex64>> {
    if gamma < 0.0 {
        return Err(Error::NegativeGamma { gamma });
    }
    let grid = rho.grid();
    let sites = grid.sites();
    let d = grid.dim();
    let m = rho.matrix();
    let mut out = Array2::<Complex64>::zeros((d, d));
    if gamma == 0.0 {
        return Ok(out);
    }

    // −(γ/2){σ̂⁺σ̂⁻, ρ}: −γ on e–e elements, −γ/2 on g–e and e–g coherences
    for i in 0..d {
        for j in 0..d {
            let excited_row = i >= sites;
            let excited_col = j >= sites;
            let factor = match (excited_row, excited_col) {
                (true, true) => -gamma,
                (true, false) | (false, true) => -0.5 * gamma,
                (false, false) => 0.0,
            };
            if factor != 0.0 {
                out[(i, j)] += factor * m[(i, j)];
            }
        }
    }

    // feeding terms: the e–e block lands in the g–g block, recoil-shifted
    let wrap = |s: i64| -> usize { s.rem_euclid(sites as i64) as usize };
    for i in 0..sites {
        for j in 0..sites {
            let val = m[(sites + i, sites + j)];
            if val == Complex64::ZERO {
                continue;
            }
            for ch in JUMP_CHANNELS {
                let r = ch.rate(gamma);
                let ti = wrap(i as i64 + ch.recoil);
                let tj = wrap(j as i64 + ch.recoil);
                out[(ti, tj)] += r * val;
            }
        }
    }
    Ok(out)
}

/// Applies one emission through `channel`: shift(σ̂⁻ ψ), renormalized.
/// The ground-state amplitudes of the input are annihilated by σ̂⁻.
pub fn apply_jump(state: &SpinMomentumState, channel: &JumpChannel) -> Result<SpinMomentumState> {
    let grid = *state.grid();
    let sites = grid.sites();
    let amps = state.amplitudes();
    let mut post = SpinMomentumState::zero(grid);
    {
        let out = post.amplitudes_mut();
        for s in 0..sites {
            let a = amps[sites + s];
            if a == Complex64::ZERO {
                continue;
            }
            let target = (s as i64 + channel.recoil).rem_euclid(sites as i64) as usize;
            out[target] += a;
        }
    }
    if post.norm_sqr() <= f64::MIN_POSITIVE {
        return Err(Error::NoExcitedPopulation);
    }
    post.normalize();
    Ok(post)
}

/// Draws an emission channel (state-independent probabilities 1/5:3/5:1/5)
/// and returns it with the post-jump state. Errors if the state has no
/// excited population.
pub fn sample_jump<R: Rng + ?Sized>(
    state: &SpinMomentumState,
    rng: &mut R,
) -> Result<(usize, SpinMomentumState)> {
    let idx = draw_channel(rng);
    let post = apply_jump(state, &JUMP_CHANNELS[idx])?;
    Ok((idx, post))
}

/// Channel index drawn with the branching fractions; the cumulative order
/// follows [`JUMP_CHANNELS`].
pub(crate) fn draw_channel<R: Rng + ?Sized>(rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (k, ch) in JUMP_CHANNELS.iter().enumerate() {
        acc += ch.weight;
        if u < acc {
            return k;
        }
    }
    JUMP_CHANNELS.len() - 1
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::drive::{hamiltonian, DriveParams};
    use crate::grid::InternalLevel::{Excited, Ground};
    use crate::grid::MomentumGrid;

    fn grid() -> MomentumGrid {
        MomentumGrid::new(-6, 6).unwrap()
    }

    #[test]
    fn channel_weights() {
        let total: f64 = JUMP_CHANNELS.iter().map(|c| c.weight).sum();
        assert_eq!(total, 1.0);
        // ⟨Δp⟩ = 0 and ⟨Δp²⟩ = 2/5 (ħk)² over the emission channels
        let mean: f64 = JUMP_CHANNELS.iter().map(|c| c.weight * c.recoil as f64).sum();
        let var: f64 = JUMP_CHANNELS.iter().map(|c| c.weight * (c.recoil * c.recoil) as f64).sum();
        assert_eq!(mean, 0.0);
        assert_relative_eq!(var, 0.4);
        assert_relative_eq!(JUMP_CHANNELS[1].rate(2.5), 1.5);
    }

    #[test]
    fn effective_hamiltonian_diagonal() {
        let g = grid();
        let params = DriveParams::new(1.3, 0.0).unwrap();
        let h = hamiltonian(&g, &params, 4.2);

        let heff = effective_hamiltonian(h.clone(), 0.0).unwrap();
        assert_eq!(heff.to_dense(), h.to_dense());

        let heff = effective_hamiltonian(h.clone(), 1.0).unwrap();
        let m = heff.to_dense();
        let sites = g.sites();
        for s in 0..sites {
            assert_eq!(m[(s, s)].im, 0.0);
            assert_relative_eq!(m[(sites + s, sites + s)].im, -0.5);
        }

        assert!(effective_hamiltonian(h, -0.1).is_err());
    }

    #[test]
    fn dissipator_on_basis_states() {
        let g = grid();
        // ground state is dark
        let rho = DensityOperator::basis(Ground, 0, g).unwrap();
        let d = lindblad_apply(&rho, 1.0).unwrap();
        assert!(d.iter().all(|z| z.norm() == 0.0));

        // |e,0⟩⟨e,0| decays into the three recoil channels
        let rho = DensityOperator::basis(Excited, 0, g).unwrap();
        let d = lindblad_apply(&rho, 1.0).unwrap();
        let sites = g.sites();
        let site0 = g.site(0).unwrap();
        assert_relative_eq!(d[(site0, site0)].re, 0.6);
        assert_relative_eq!(d[(site0 + 1, site0 + 1)].re, 0.2);
        assert_relative_eq!(d[(site0 - 1, site0 - 1)].re, 0.2);
        assert_relative_eq!(d[(sites + site0, sites + site0)].re, -1.0);
    }

    #[test]
    fn dissipator_is_traceless_and_drains_p_e() {
        let g = grid();
        let dim = g.dim();
        let sites = g.sites();
        let mut x = 0.7f64;
        let mut next = || {
            x = (x * 83.0 + 0.241).fract();
            x - 0.5
        };
        for trial in 0..50 {
            let mut m = Array2::<Complex64>::zeros((dim, dim));
            for i in 0..dim {
                for j in i..dim {
                    if i == j {
                        m[(i, j)] = Complex64::new(next().abs(), 0.0);
                    } else {
                        let z = Complex64::new(next(), next());
                        m[(i, j)] = z;
                        m[(j, i)] = z.conj();
                    }
                }
            }
            let tr: f64 = (0..dim).map(|i| m[(i, i)].re).sum();
            m.mapv_inplace(|z| z / tr);
            let rho = DensityOperator::from_matrix(g, m).unwrap();
            let gamma = 0.5 + 0.1 * trial as f64;
            let d = lindblad_apply(&rho, gamma).unwrap();
            let trace: Complex64 = d.diag().sum();
            assert!(trace.norm() < 1e-12, "dissipator trace {} not ~0", trace);

            // total excited population drains at rate γ P_e
            let p_e: f64 = (0..sites).map(|s| rho.matrix()[(sites + s, sites + s)].re).sum();
            let dp_e: f64 = (0..sites).map(|s| d[(sites + s, sites + s)].re).sum();
            assert_relative_eq!(dp_e, -gamma * p_e, max_relative = 1e-10);
        }
    }

    #[test]
    fn jump_application() {
        let g = grid();
        let s = SpinMomentumState::basis(Excited, 5, g).unwrap();
        let post = apply_jump(&s, &JUMP_CHANNELS[0]).unwrap(); // Δp = −ħk
        assert_relative_eq!(post.amplitude(Ground, 4).unwrap().norm(), 1.0);

        // superposition: ground amplitude annihilated, zero-recoil channel
        let mut s = SpinMomentumState::zero(g);
        let a = Complex64::new(0.5f64.sqrt(), 0.0);
        s.amplitudes_mut()[g.index(Excited, 2).unwrap()] = a;
        s.amplitudes_mut()[g.index(Ground, 6).unwrap()] = a;
        let post = apply_jump(&s, &JUMP_CHANNELS[1]).unwrap();
        assert_relative_eq!(post.amplitude(Ground, 2).unwrap().norm(), 1.0);
        assert_relative_eq!(post.norm_sqr(), 1.0);

        // no excited population → no jump
        let s = SpinMomentumState::basis(Ground, 1, g).unwrap();
        assert!(apply_jump(&s, &JUMP_CHANNELS[1]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(sample_jump(&s, &mut rng).is_err());
    }

    #[test]
    fn channel_frequencies_match_branching() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let draws = 100_000usize;
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            counts[draw_channel(&mut rng)] += 1;
        }
        for (k, ch) in JUMP_CHANNELS.iter().enumerate() {
            let expect = ch.weight * draws as f64;
            let sigma = (draws as f64 * ch.weight * (1.0 - ch.weight)).sqrt();
            let dev = (counts[k] as f64 - expect).abs();
            assert!(dev < 3.0 * sigma, "channel {k}: {} vs {expect} (3σ = {})", counts[k], 3.0 * sigma);
        }
    }

    #[test]
    fn sample_jump_is_deterministic_per_seed() {
        let g = grid();
        let mut s = SpinMomentumState::zero(g);
        let a = Complex64::new(0.5f64.sqrt(), 0.0);
        s.amplitudes_mut()[g.index(Excited, 2).unwrap()] = a;
        s.amplitudes_mut()[g.index(Excited, -1).unwrap()] = a;
        let (c1, p1) = sample_jump(&s, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let (c2, p2) = sample_jump(&s, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(p1, p2);
    }
}
