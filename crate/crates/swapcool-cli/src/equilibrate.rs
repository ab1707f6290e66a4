//! Equilibration detection for sweep-wait cooling runs.
//!
//! A run is declared equilibrated once the least-squares slope of ⟨p²⟩
//! against cycle index, over a trailing window, falls below a fraction of
//! the current ⟨p²⟩ per cycle. The paper reports only that the energy
//! "asymptotes", so the window and threshold are explicit knobs.

use serde::{Deserialize, Serialize};
use swapcool::integrate::EnsembleResult;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct EquilibrationCriterion {
    /// Window length in cycles.
    pub window: usize,
    /// Slope threshold as a fraction of the current ⟨p²⟩ per cycle.
    pub slope_frac: f64,
}

impl Default for EquilibrationCriterion {
    fn default() -> Self {
        Self { window: 5, slope_frac: 0.02 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EquilibrationVerdict {
    pub equilibrated: bool,
    /// First cycle index (1-based, counting completed cycles) at which the
    /// criterion held.
    pub at_cycle: Option<usize>,
    pub final_slope_per_cycle: f64,
    pub criterion: EquilibrationCriterion,
}

/// Stationary energy estimate from an equilibrated run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StationaryEnergy {
    /// ⟨p²⟩/2m averaged over the final window, in ħω_r.
    pub energy: f64,
    pub uncertainty: f64,
    /// k_B T = 2⟨p²⟩ in ħω_r.
    pub temperature: f64,
    pub verdict: EquilibrationVerdict,
}

/// Least-squares slope of y against 0..n.
fn slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    if y.len() < 2 {
        return 0.0;
    }
    let xm = (n - 1.0) / 2.0;
    let ym = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, v) in y.iter().enumerate() {
        let dx = i as f64 - xm;
        num += dx * (v - ym);
        den += dx * dx;
    }
    num / den
}

/// Per-cycle ⟨p²⟩ series (cycle ends, including cycle 0 = initial state)
/// extracted from ensemble bins recorded on the period grid.
pub fn cycle_series(ens: &EnsembleResult, records_per_period: usize) -> (Vec<f64>, Vec<f64>) {
    let mut p2 = Vec::new();
    let mut se = Vec::new();
    for (i, bin) in ens.bins.iter().enumerate() {
        if i % records_per_period == 0 {
            p2.push(bin.mean.mean_p2);
            se.push(bin.se.mean_p2);
        }
    }
    (p2, se)
}

/// Applies the criterion to a per-cycle ⟨p²⟩ series and averages the final
/// window. Errors with an explicit status if the run never equilibrates.
pub fn stationary_energy(
    p2_per_cycle: &[f64],
    se_per_cycle: &[f64],
    criterion: &EquilibrationCriterion,
) -> CliResult<StationaryEnergy> {
    let w = criterion.window.max(2);
    if p2_per_cycle.len() < w + 1 {
        return Err(CliError::Config(format!(
            "need at least {} cycles for a window of {}, got {}",
            w + 1,
            w,
            p2_per_cycle.len() - 1
        )));
    }
    let mut at_cycle = None;
    for end in w..p2_per_cycle.len() {
        let win = &p2_per_cycle[end + 1 - w..=end];
        let s = slope(win);
        let current = p2_per_cycle[end].abs().max(1e-12);
        if s.abs() < criterion.slope_frac * current {
            at_cycle = Some(end);
            break;
        }
    }
    let final_win = &p2_per_cycle[p2_per_cycle.len() - w..];
    let final_slope = slope(final_win);
    let verdict = EquilibrationVerdict {
        equilibrated: at_cycle.is_some(),
        at_cycle,
        final_slope_per_cycle: final_slope,
        criterion: *criterion,
    };
    if at_cycle.is_none() {
        return Err(CliError::NotEquilibrated {
            cycles: p2_per_cycle.len() - 1,
            slope: final_slope.abs(),
            threshold: criterion.slope_frac * p2_per_cycle.last().unwrap().abs(),
        });
    }

    let mean_p2 = final_win.iter().sum::<f64>() / w as f64;
    // statistical error of the window mean vs scatter of the window itself
    let mean_se = se_per_cycle[se_per_cycle.len() - w..].iter().sum::<f64>() / w as f64;
    let sd = (final_win.iter().map(|v| (v - mean_p2).powi(2)).sum::<f64>() / (w as f64 - 1.0))
        .sqrt()
        / (w as f64).sqrt();
    let uncertainty = mean_se.max(sd);

    // in recoil units ⟨p²⟩/2m = ⟨p²⟩ ħω_r numerically
    Ok(StationaryEnergy {
        energy: mean_p2,
        uncertainty,
        temperature: swapcool::analysis::temperature(mean_p2),
        verdict,
    })
}

/// Least-squares linear fit y = a + b x; returns (a, b).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        num += (xi - xm) * (yi - ym);
        den += (xi - xm) * (xi - xm);
    }
    let b = num / den;
    (ym - b * xm, b)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn detects_equilibration_of_decaying_series() {
        // 100 → 1 exponential decay settling by cycle ~10
        let p2: Vec<f64> = (0..=14).map(|k| 1.0 + 99.0 * (-(k as f64)).exp()).collect();
        let se = vec![0.05; p2.len()];
        let crit = EquilibrationCriterion::default();
        let out = stationary_energy(&p2, &se, &crit).unwrap();
        assert!(out.verdict.equilibrated);
        assert!(out.verdict.at_cycle.unwrap() <= 12);
        assert_relative_eq!(out.energy, 1.0, epsilon = 0.05);
        assert_relative_eq!(out.temperature, 2.0 * out.energy);
    }

    #[test]
    fn flags_non_equilibrated_series() {
        let p2: Vec<f64> = (0..=10).map(|k| 100.0 - 5.0 * k as f64).collect();
        let se = vec![0.05; p2.len()];
        let err = stationary_energy(&p2, &se, &EquilibrationCriterion::default());
        assert!(matches!(err, Err(CliError::NotEquilibrated { .. })));
    }

    #[test]
    fn linear_fit_recovers_slope() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [2.1, 4.1, 6.1, 8.1];
        let (a, b) = linear_fit(&x, &y);
        assert_relative_eq!(b, 2.0, epsilon = 1e-12);
        assert_relative_eq!(a, 0.1, epsilon = 1e-12);
    }
}
