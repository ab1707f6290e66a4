//! Trajectory ensembles with deterministic seeding and scheduling-independent
//! reduction.
//!
//! Trajectory k uses stream k of the base-seeded ChaCha generator, so the
//! ensemble is reproducible no matter how the work is partitioned.
//! Reduction is chunked: fixed-size blocks of trajectories are summed
//! serially inside a parallel task, and the per-chunk sums are merged in
//! chunk order, so the result is bit-identical for any worker count.

use rayon::prelude::*;

use crate::drive::{DriveParams, SweepSchedule};
use crate::error::{Error, Result};
use crate::integrate::trajectory::{evolve_trajectory, TrajectorySeed};
use crate::integrate::IntegratorConfig;
use crate::state::{ObservableRecord, SpinMomentumState};

const CHUNK_SIZE: usize = 16;

/// Standard errors of the ensemble means (zero for a single trajectory).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ObservableSe {
    pub mean_p: f64,
    pub mean_p2: f64,
    pub p_rms: f64,
    pub p_e: f64,
    pub mean_abs_p: f64,
    pub xi: f64,
}

/// One time bin of the ensemble average. `mean.p_rms` is √⟨⟨p²⟩⟩ (the rms
/// of the ensemble), not the average of per-trajectory rms values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleBin {
    pub t: f64,
    pub mean: ObservableRecord,
    pub se: ObservableSe,
}

#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub bins: Vec<EnsembleBin>,
    pub n_traj: usize,
    pub base_seed: u64,
    /// Per-trajectory RNG streams (trajectory index k uses stream k).
    pub streams: Vec<u64>,
}

impl EnsembleResult {
    pub fn final_bin(&self) -> &EnsembleBin {
        self.bins.last().expect("ensemble has at least the initial bin")
    }
}

#[derive(Clone)]
struct BinAccum {
    t: f64,
    // mean_p, mean_p2, p_e, mean_abs_p, xi, jumps[3]
    sum: [f64; 8],
    // squares of the first five
    sumsq: [f64; 5],
}

fn accumulate(bins: &mut Vec<BinAccum>, records: &[ObservableRecord]) -> Result<()> {
    if bins.is_empty() {
        bins.extend(records.iter().map(|r| BinAccum { t: r.t, sum: [0.0; 8], sumsq: [0.0; 5] }));
    }
    if bins.len() != records.len() {
        return Err(Error::Config(format!(
            "trajectory produced {} records, expected {}",
            records.len(),
            bins.len()
        )));
    }
    for (bin, r) in bins.iter_mut().zip(records) {
        let vals = [r.mean_p, r.mean_p2, r.p_e, r.mean_abs_p, r.xi_cum];
        for (k, v) in vals.iter().enumerate() {
            bin.sum[k] += v;
            bin.sumsq[k] += v * v;
        }
        for c in 0..3 {
            bin.sum[5 + c] += r.jumps[c];
        }
    }
    Ok(())
}

fn merge(into: &mut Vec<BinAccum>, other: Vec<BinAccum>) {
    if into.is_empty() {
        *into = other;
        return;
    }
    for (a, b) in into.iter_mut().zip(other) {
        for k in 0..8 {
            a.sum[k] += b.sum[k];
        }
        for k in 0..5 {
            a.sumsq[k] += b.sumsq[k];
        }
    }
}

/// Runs `n_traj` quantum trajectories from `psi0` over [0, t_end] and
/// averages the records per time bin. Trajectories run in parallel;
/// results are independent of the worker count and identical to serial
/// execution.
pub fn run_ensemble(
    psi0: &SpinMomentumState,
    schedule: &SweepSchedule,
    params: &DriveParams,
    t_end: f64,
    n_traj: usize,
    base_seed: u64,
    cfg: &IntegratorConfig,
) -> Result<EnsembleResult> {
    if n_traj == 0 {
        return Err(Error::Config("ensemble needs at least one trajectory".into()));
    }
    let n_chunks = n_traj.div_ceil(CHUNK_SIZE);
    let partials: Vec<Vec<BinAccum>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| -> Result<Vec<BinAccum>> {
            let lo = chunk * CHUNK_SIZE;
            let hi = ((chunk + 1) * CHUNK_SIZE).min(n_traj);
            let mut acc: Vec<BinAccum> = Vec::new();
            for traj in lo..hi {
                let out = evolve_trajectory(
                    psi0,
                    schedule,
                    params,
                    0.0,
                    t_end,
                    TrajectorySeed::new(base_seed, traj as u64),
                    cfg,
                )
                .map_err(|e| Error::Trajectory { index: traj, source: Box::new(e) })?;
                accumulate(&mut acc, &out.records)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut total: Vec<BinAccum> = Vec::new();
    for acc in partials {
        merge(&mut total, acc);
    }

    let n = n_traj as f64;
    let se_of = |sum: f64, sumsq: f64| -> f64 {
        if n_traj < 2 {
            return 0.0;
        }
        let mean = sum / n;
        let var = ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    };
    let bins: Vec<EnsembleBin> = total
        .into_iter()
        .map(|b| {
            let mean_p = b.sum[0] / n;
            let mean_p2 = b.sum[1] / n;
            let p_e = b.sum[2] / n;
            let mean_abs_p = b.sum[3] / n;
            let xi = b.sum[4] / n;
            let jumps = [b.sum[5] / n, b.sum[6] / n, b.sum[7] / n];
            let p_rms = mean_p2.max(0.0).sqrt();
            let se_p2 = se_of(b.sum[1], b.sumsq[1]);
            EnsembleBin {
                t: b.t,
                mean: ObservableRecord {
                    t: b.t,
                    mean_p,
                    mean_p2,
                    p_rms,
                    p_e,
                    mean_abs_p,
                    xi_cum: xi,
                    jumps,
                },
                se: ObservableSe {
                    mean_p: se_of(b.sum[0], b.sumsq[0]),
                    mean_p2: se_p2,
                    p_rms: if p_rms > 1e-12 { se_p2 / (2.0 * p_rms) } else { 0.0 },
                    p_e: se_of(b.sum[2], b.sumsq[2]),
                    mean_abs_p: se_of(b.sum[3], b.sumsq[3]),
                    xi: se_of(b.sum[4], b.sumsq[4]),
                },
            }
        })
        .collect();

    Ok(EnsembleResult {
        bins,
        n_traj,
        base_seed,
        streams: (0..n_traj as u64).collect(),
    })
}
