//! Pure states, density operators and the observables recorded during runs.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{InternalLevel, MomentumGrid};
use crate::linalg;

pub const NORM_TOLERANCE: f64 = 1e-8;
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const PSD_TOLERANCE: f64 = 1e-8;

/// Expectation values of a normalized state or unit-trace density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectations {
    /// ⟨p⟩ in ħk
    pub mean_p: f64,
    /// ⟨p²⟩ in (ħk)²
    pub mean_p2: f64,
    /// sqrt(⟨p²⟩)
    pub p_rms: f64,
    /// ⟨|p|⟩ in ħk
    pub mean_abs_p: f64,
    /// excited-state population
    pub p_e: f64,
}

/// One row of a recorded time series.
///
/// `xi_cum` counts spontaneous emissions (all three recoil channels) since
/// the start of the run; `jumps` resolves it per recoil channel
/// (Δp = −ħk, 0, +ħk). For master-equation runs these are expected values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRecord {
    pub t: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub p_rms: f64,
    pub p_e: f64,
    pub mean_abs_p: f64,
    pub xi_cum: f64,
    pub jumps: [f64; 3],
}

impl ObservableRecord {
    pub fn new(t: f64, ex: Expectations, xi_cum: f64, jumps: [f64; 3]) -> Self {
        Self {
            t,
            mean_p: ex.mean_p,
            mean_p2: ex.mean_p2,
            p_rms: ex.p_rms,
            p_e: ex.p_e,
            mean_abs_p: ex.mean_abs_p,
            xi_cum,
            jumps,
        }
    }
}

/// Complex amplitude vector over (internal level) × (momentum site), the
/// pure-state workhorse. Ground block first, then excited, site-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMomentumState {
    grid: MomentumGrid,
    amps: Vec<Complex64>,
}

impl SpinMomentumState {
    /// Zero state (all amplitudes 0).
    pub fn zero(grid: MomentumGrid) -> Self {
        Self { grid, amps: vec![Complex64::ZERO; grid.dim()] }
    }

    /// Unit-norm basis state |level, n ħk⟩.
    pub fn basis(level: InternalLevel, n: i64, grid: MomentumGrid) -> Result<Self> {
        let idx = grid.index(level, n)?;
        let mut s = Self::zero(grid);
        s.amps[idx] = Complex64::ONE;
        Ok(s)
    }

    pub fn from_amplitudes(grid: MomentumGrid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.dim() {
            return Err(Error::Config(format!(
                "amplitude vector length {} does not match grid dimension {}",
                amps.len(),
                grid.dim()
            )));
        }
        Ok(Self { grid, amps })
    }

    #[inline]
    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, level: InternalLevel, n: i64) -> Result<Complex64> {
        Ok(self.amps[self.grid.index(level, n)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            let inv = 1.0 / n;
            for a in &mut self.amps {
                *a *= inv;
            }
        }
    }

    pub fn normalized(&self) -> Self {
        let mut s = self.clone();
        s.normalize();
        s
    }

    /// Expectation values. Errors unless the state is normalized within
    /// `NORM_TOLERANCE`; internal callers normalize copies first.
    pub fn expectations(&self) -> Result<Expectations> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr, tolerance: NORM_TOLERANCE });
        }
        Ok(self.expectations_unchecked())
    }

    /// Expectation values of the normalized state without the norm contract
    /// check (used on renormalized copies inside the integrators).
    pub(crate) fn expectations_unchecked(&self) -> Expectations {
        let sites = self.grid.sites();
        let mut mean_p = 0.0;
        let mut mean_p2 = 0.0;
        let mut mean_abs_p = 0.0;
        let mut p_e = 0.0;
        for site in 0..sites {
            let n = self.grid.momentum_of_site(site) as f64;
            let pg = self.amps[site].norm_sqr();
            let pe = self.amps[sites + site].norm_sqr();
            let pop = pg + pe;
            mean_p += n * pop;
            mean_p2 += n * n * pop;
            mean_abs_p += n.abs() * pop;
            p_e += pe;
        }
        Expectations { mean_p, mean_p2, p_rms: mean_p2.sqrt(), mean_abs_p, p_e }
    }

    /// Probability distribution over momentum, marginalized over the
    /// internal level. Requires a normalized state.
    pub fn momentum_distribution(&self) -> Result<Vec<f64>> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr, tolerance: NORM_TOLERANCE });
        }
        let sites = self.grid.sites();
        Ok((0..sites)
            .map(|s| self.amps[s].norm_sqr() + self.amps[sites + s].norm_sqr())
            .collect())
    }

    /// Total population on the two outermost sites of each edge (both levels).
    pub fn edge_population(&self) -> f64 {
        let sites = self.grid.sites();
        self.grid
            .edge_sites()
            .iter()
            .map(|&s| self.amps[s].norm_sqr() + self.amps[sites + s].norm_sqr())
            .sum()
    }
}

/// Hermitian, unit-trace operator over the same (level, momentum) index
/// space, for master-equation runs. Indexing matches
/// [`MomentumGrid::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    grid: MomentumGrid,
    mat: Array2<Complex64>,
}

impl DensityOperator {
    pub fn zero(grid: MomentumGrid) -> Self {
        let d = grid.dim();
        Self { grid, mat: Array2::zeros((d, d)) }
    }

    pub fn basis(level: InternalLevel, n: i64, grid: MomentumGrid) -> Result<Self> {
        Self::from_pure(&SpinMomentumState::basis(level, n, grid)?)
    }

    /// ρ = |ψ⟩⟨ψ|.
    pub fn from_pure(psi: &SpinMomentumState) -> Result<Self> {
        let d = psi.grid().dim();
        let mut mat = Array2::zeros((d, d));
        for (i, a) in psi.amplitudes().iter().enumerate() {
            for (j, b) in psi.amplitudes().iter().enumerate() {
                mat[(i, j)] = a * b.conj();
            }
        }
        Ok(Self { grid: *psi.grid(), mat })
    }

    /// Statistical mixture Σ wᵢ ρᵢ. Weights must sum to 1 for a valid state.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        let grid = parts
            .first()
            .ok_or_else(|| Error::Config("empty mixture".into()))?
            .1
            .grid;
        let mut out = Self::zero(grid);
        for (w, rho) in parts {
            out.mat.scaled_add(Complex64::new(*w, 0.0), &rho.mat);
        }
        Ok(out)
    }

    #[inline]
    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    #[inline]
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    #[inline]
    pub fn matrix_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.mat
    }

    pub fn from_matrix(grid: MomentumGrid, mat: Array2<Complex64>) -> Result<Self> {
        if mat.nrows() != grid.dim() || mat.ncols() != grid.dim() {
            return Err(Error::Config(format!(
                "matrix shape {:?} does not match grid dimension {}",
                mat.dim(),
                grid.dim()
            )));
        }
        Ok(Self { grid, mat })
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.diag().sum()
    }

    pub fn purity(&self) -> f64 {
        // tr(ρ²) for Hermitian ρ equals Σ |ρ_ij|²
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.mat.nrows();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let dev = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Validates Hermiticity, unit trace and positive semidefiniteness
    /// (up to the documented tolerances). O(dim³); intended for checks on
    /// modest grids, not inside integration loops.
    pub fn check_physical(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITICITY_TOLERANCE {
            return Err(Error::NotPhysical {
                what: "Hermiticity",
                deviation: herm,
                tolerance: HERMITICITY_TOLERANCE,
            });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > NORM_TOLERANCE || tr.im.abs() > NORM_TOLERANCE {
            return Err(Error::BadTrace { trace: tr.re, tolerance: NORM_TOLERANCE });
        }
        let eigs = linalg::hermitian_eigenvalues(&self.mat);
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOLERANCE {
            return Err(Error::NotPhysical {
                what: "positive semidefiniteness",
                deviation: -min,
                tolerance: PSD_TOLERANCE,
            });
        }
        Ok(())
    }

    pub fn expectations(&self) -> Result<Expectations> {
        let tr = self.trace().re;
        if (tr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::BadTrace { trace: tr, tolerance: NORM_TOLERANCE });
        }
        Ok(self.expectations_unchecked())
    }

    pub(crate) fn expectations_unchecked(&self) -> Expectations {
        let sites = self.grid.sites();
        let mut mean_p = 0.0;
        let mut mean_p2 = 0.0;
        let mut mean_abs_p = 0.0;
        let mut p_e = 0.0;
        for site in 0..sites {
            let n = self.grid.momentum_of_site(site) as f64;
            let pg = self.mat[(site, site)].re;
            let pe = self.mat[(sites + site, sites + site)].re;
            let pop = pg + pe;
            mean_p += n * pop;
            mean_p2 += n * n * pop;
            mean_abs_p += n.abs() * pop;
            p_e += pe;
        }
        Expectations { mean_p, mean_p2, p_rms: mean_p2.max(0.0).sqrt(), mean_abs_p, p_e }
    }

    pub fn momentum_distribution(&self) -> Result<Vec<f64>> {
        let tr = self.trace().re;
        if (tr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::BadTrace { trace: tr, tolerance: NORM_TOLERANCE });
        }
        let sites = self.grid.sites();
        Ok((0..sites)
            .map(|s| self.mat[(s, s)].re + self.mat[(sites + s, sites + s)].re)
            .collect())
    }

    pub fn edge_population(&self) -> f64 {
        let sites = self.grid.sites();
        self.grid
            .edge_sites()
            .iter()
            .map(|&s| self.mat[(s, s)].re + self.mat[(sites + s, sites + s)].re)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::grid::InternalLevel::{Excited, Ground};

    fn grid() -> MomentumGrid {
        MomentumGrid::new(-12, 12).unwrap()
    }

    #[test]
    fn basis_state_construction() {
        let s = SpinMomentumState::basis(Ground, 10, grid()).unwrap();
        assert_relative_eq!(s.norm_sqr(), 1.0);
        let ex = s.expectations().unwrap();
        assert_eq!((ex.mean_p, ex.mean_p2, ex.p_rms, ex.p_e), (10.0, 100.0, 10.0, 0.0));

        let s = SpinMomentumState::basis(Excited, -1, grid()).unwrap();
        assert_eq!(s.expectations().unwrap().p_e, 1.0);

        let g = grid();
        assert!(SpinMomentumState::basis(Ground, g.n_max() + 1, g).is_err());
    }

    #[test]
    fn expectations_of_superposition() {
        // √½|g,0⟩ + √¼|e,+1⟩ + √¼|e,−1⟩: the end state of the coherent
        // staircase, p_rms = 1/√2 and P_e = 1/2.
        let g = grid();
        let mut s = SpinMomentumState::zero(g);
        s.amplitudes_mut()[g.index(Ground, 0).unwrap()] = Complex64::new(0.5f64.sqrt(), 0.0);
        s.amplitudes_mut()[g.index(Excited, 1).unwrap()] = Complex64::new(0.5, 0.0);
        s.amplitudes_mut()[g.index(Excited, -1).unwrap()] = Complex64::new(0.0, 0.5);
        let ex = s.expectations().unwrap();
        assert_relative_eq!(ex.p_rms, 0.5f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(ex.p_e, 0.5, max_relative = 1e-12);
        assert_relative_eq!(ex.mean_p, 0.0);
    }

    #[test]
    fn expectations_of_even_superposition() {
        let g = grid();
        let mut s = SpinMomentumState::zero(g);
        let a = Complex64::new(0.5f64.sqrt(), 0.0);
        s.amplitudes_mut()[g.index(Ground, 2).unwrap()] = a;
        s.amplitudes_mut()[g.index(Ground, -2).unwrap()] = a;
        let ex = s.expectations().unwrap();
        assert_relative_eq!(ex.mean_p, 0.0);
        assert_relative_eq!(ex.mean_p2, 4.0);
        assert_relative_eq!(ex.p_rms, 2.0);
        assert_eq!(ex.p_e, 0.0);
    }

    #[test]
    fn expectations_reject_unnormalized() {
        let mut s = SpinMomentumState::basis(Ground, 0, grid()).unwrap();
        s.amplitudes_mut()[3] = Complex64::new(0.5, 0.0);
        assert!(s.expectations().is_err());
    }

    #[test]
    fn momentum_distribution_delta_and_mixture() {
        let g = grid();
        let s = SpinMomentumState::basis(Ground, 3, g).unwrap();
        let dist = s.momentum_distribution().unwrap();
        assert_eq!(dist[g.site(3).unwrap()], 1.0);
        assert_relative_eq!(dist.iter().sum::<f64>(), 1.0);

        let rho = DensityOperator::mixture(&[
            (0.5, DensityOperator::basis(Ground, 1, g).unwrap()),
            (0.5, DensityOperator::basis(Excited, -1, g).unwrap()),
        ])
        .unwrap();
        let dist = rho.momentum_distribution().unwrap();
        assert_relative_eq!(dist[g.site(1).unwrap()], 0.5);
        assert_relative_eq!(dist[g.site(-1).unwrap()], 0.5);
        assert_relative_eq!(dist.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn density_operator_checks() {
        let g = grid();
        let rho = DensityOperator::basis(Excited, 2, g).unwrap();
        rho.check_physical().unwrap();
        assert_relative_eq!(rho.purity(), 1.0);
        let ex = rho.expectations().unwrap();
        assert_eq!((ex.mean_p, ex.p_e), (2.0, 1.0));

        let mut bad = rho.clone();
        bad.matrix_mut()[(0, 1)] = Complex64::new(0.3, 0.0);
        assert!(bad.check_physical().is_err());
    }
}
