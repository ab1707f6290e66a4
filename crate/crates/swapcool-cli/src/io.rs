//! CSV and JSON output with byte-stable formatting: identical config and
//! seed produce identical files.
//!
//! Time-series CSV column order (documented contract):
//! `t, mean_p, mean_p2, p_rms, p_e, xi_cum` then, for ensembles, the
//! standard errors `se_mean_p, se_mean_p2, se_p_rms, se_p_e, se_xi`,
//! then the extras `mean_abs_p[, se_mean_abs_p], jumps_minus, jumps_zero,
//! jumps_plus`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use swapcool::integrate::EnsembleResult;
use swapcool::state::ObservableRecord;

use crate::error::{CliError, CliResult};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Fixed float formatting: round-trip exact via hex would be unreadable;
/// 17 significant digits reproduce every f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.17e}")
}

pub fn write_trajectory_csv(path: &Path, records: &[ObservableRecord]) -> CliResult<()> {
    let mut out = String::new();
    out.push_str("t,mean_p,mean_p2,p_rms,p_e,xi_cum,mean_abs_p,jumps_minus,jumps_zero,jumps_plus\n");
    for r in records {
        let cols = [
            r.t,
            r.mean_p,
            r.mean_p2,
            r.p_rms,
            r.p_e,
            r.xi_cum,
            r.mean_abs_p,
            r.jumps[0],
            r.jumps[1],
            r.jumps[2],
        ];
        push_row(&mut out, &cols);
    }
    fs::write(path, out).map_err(io_err(path))
}

pub fn write_ensemble_csv(path: &Path, ens: &EnsembleResult) -> CliResult<()> {
    let mut out = String::new();
    out.push_str(
        "t,mean_p,mean_p2,p_rms,p_e,xi_cum,se_mean_p,se_mean_p2,se_p_rms,se_p_e,se_xi,\
         mean_abs_p,se_mean_abs_p,jumps_minus,jumps_zero,jumps_plus\n",
    );
    for b in &ens.bins {
        let cols = [
            b.t,
            b.mean.mean_p,
            b.mean.mean_p2,
            b.mean.p_rms,
            b.mean.p_e,
            b.mean.xi_cum,
            b.se.mean_p,
            b.se.mean_p2,
            b.se.p_rms,
            b.se.p_e,
            b.se.xi,
            b.mean.mean_abs_p,
            b.se.mean_abs_p,
            b.mean.jumps[0],
            b.mean.jumps[1],
            b.mean.jumps[2],
        ];
        push_row(&mut out, &cols);
    }
    fs::write(path, out).map_err(io_err(path))
}

/// Generic scan CSV: caller provides the header and rows.
pub fn write_scan_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> CliResult<()> {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        push_row(&mut out, row);
    }
    fs::write(path, out).map_err(io_err(path))
}

fn push_row(out: &mut String, cols: &[f64]) {
    let mut first = true;
    for c in cols {
        if !first {
            out.push(',');
        }
        out.push_str(&fmt_f64(*c));
        first = false;
    }
    out.push('\n');
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

pub fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

/// Writes a table to any sink (used by the `analytic` subcommand).
pub fn print_table<W: Write>(
    mut w: W,
    title: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> std::io::Result<()> {
    writeln!(w, "# {title}")?;
    writeln!(w, "{}", header.join("  "))?;
    for row in rows {
        writeln!(w, "{}", row.join("  "))?;
    }
    writeln!(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_round_trip_exact() {
        for v in [0.1, 2.0 / 3.0, 1e-300, -4.0 * std::f64::consts::PI, 123456.789] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{v} vs {s}");
        }
    }
}
