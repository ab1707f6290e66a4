//! Discretized Hilbert space: two internal levels × integer momentum ladder.

use crate::error::{Error, Result};

/// Internal electronic level of the two-level particle. The e–g energy
/// splitting is absorbed into the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InternalLevel {
    Ground,
    Excited,
}

/// Integer momentum grid in units of ħk, inclusive on both ends.
///
/// All couplings in the model (laser ±ħk, spontaneous recoil ∈ {−ħk, 0, +ħk})
/// preserve integrality, so a finite integer ladder is exact apart from
/// truncation. Truncation is policed by `edge_tolerance`: any evolution must
/// keep the total population on the two outermost sites of each edge below it,
/// otherwise the run fails hard with [`Error::EdgeBreach`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    n_min: i64,
    n_max: i64,
    edge_tolerance: f64,
}

pub const DEFAULT_EDGE_TOLERANCE: f64 = 1e-8;

impl MomentumGrid {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if !(n_min < 0 && 0 < n_max) {
            return Err(Error::InvalidGrid { n_min, n_max });
        }
        Ok(Self { n_min, n_max, edge_tolerance: DEFAULT_EDGE_TOLERANCE })
    }

    pub fn with_edge_tolerance(mut self, edge_tolerance: f64) -> Self {
        self.edge_tolerance = edge_tolerance;
        self
    }

    /// Symmetric default grid for a run starting at momentum `n_initial`:
    /// n_max = |n_initial| + max(10, ceil(Δs/4) − |n_initial| + 10).
    /// Heated trajectories random-walk outward and capture-range scans reach
    /// |kv| ≈ Δs/2 (momentum Δs/4), hence the sweep-range-dependent margin.
    pub fn default_for_initial(n_initial: i64, delta_s: f64) -> Self {
        let n_abs = n_initial.abs();
        let reach = (delta_s / 4.0).ceil() as i64;
        let margin = 10i64.max(reach - n_abs + 10);
        let n_max = n_abs + margin;
        Self { n_min: -n_max, n_max, edge_tolerance: DEFAULT_EDGE_TOLERANCE }
    }

    #[inline]
    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    #[inline]
    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    #[inline]
    pub fn edge_tolerance(&self) -> f64 {
        self.edge_tolerance
    }

    /// Number of momentum sites.
    #[inline]
    pub fn sites(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    /// Total Hilbert-space dimension (2 × sites).
    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.sites()
    }

    #[inline]
    pub fn contains(&self, n: i64) -> bool {
        self.n_min <= n && n <= self.n_max
    }

    /// Site index of momentum n.
    #[inline]
    pub fn site(&self, n: i64) -> Result<usize> {
        if self.contains(n) {
            Ok((n - self.n_min) as usize)
        } else {
            Err(Error::IndexOutOfGrid { n, n_min: self.n_min, n_max: self.n_max })
        }
    }

    /// Flat state index of (level, n): ground block first, then excited.
    #[inline]
    pub fn index(&self, level: InternalLevel, n: i64) -> Result<usize> {
        let site = self.site(n)?;
        Ok(match level {
            InternalLevel::Ground => site,
            InternalLevel::Excited => self.sites() + site,
        })
    }

    /// Momentum of a site index.
    #[inline]
    pub fn momentum_of_site(&self, site: usize) -> i64 {
        self.n_min + site as i64
    }

    pub fn momenta(&self) -> impl Iterator<Item = i64> + '_ {
        self.n_min..=self.n_max
    }

    /// Site indices of the two outermost sites on each edge.
    pub fn edge_sites(&self) -> [usize; 4] {
        let s = self.sites();
        [0, 1.min(s - 1), s.saturating_sub(2), s - 1]
    }
}

impl std::fmt::Display for InternalLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InternalLevel::Ground => write!(f, "g"),
            InternalLevel::Excited => write!(f, "e"),
        }
    }
}
