use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swapcool::analysis::{
    delta_p_avg_steady, delta_p_pm, delta_p_rms, GridPolicy, ScanSettings,
};
use swapcool::drive::{dressed_eigenvalues, dressed_track, DriveParams, SweepSchedule};
use swapcool::grid::{InternalLevel, MomentumGrid};
use swapcool::integrate::IntegratorConfig;
use swapcool::resonance;
use swapcool_cli::config::RunConfig;
use swapcool_cli::error::{CliError, CliResult};
use swapcool_cli::presets::{run_config, run_preset, Overrides, PRESET_NAMES};
use swapcool_cli::io;

/// Simulator and analysis toolkit for sawtooth-wave adiabatic passage
/// (SWAP) laser cooling of a two-level particle in 1D. All quantities are
/// in recoil units (frequencies in ω_r, times in 1/ω_r, momenta in ħk).
#[derive(Parser)]
#[command(name = "swapcool", version, about)]
struct Cli {
    /// Output directory for CSV/JSON results
    #[arg(long, global = true, env = "SWAPCOOL_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,

    /// Worker threads for trajectory ensembles (default: all cores);
    /// results are independent of this setting
    #[arg(long, global = true, env = "SWAPCOOL_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a figure preset or an explicit JSON config file
    Run {
        /// One of: fig3, fig4, fig5, fig6, fig7, fig8, fig10, fig11, fig12
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Path to a RunConfig JSON file
        #[arg(long)]
        config: Option<PathBuf>,
        /// Base RNG seed override
        #[arg(long)]
        seed: Option<u64>,
        /// Trajectory count override
        #[arg(long)]
        traj: Option<usize>,
        /// Sweeps / sweep-wait cycles override
        #[arg(long)]
        periods: Option<u32>,
        /// Integrator safety factor override
        #[arg(long)]
        safety: Option<f64>,
        /// Scan momenta override (ħk, comma-separated)
        #[arg(long, value_delimiter = ',')]
        momenta: Option<Vec<i64>>,
        /// Ω₀ grid override for fig11 (comma-separated)
        #[arg(long, value_delimiter = ',')]
        omega0: Option<Vec<f64>>,
    },
    /// Force/impulse scan with explicit parameters
    Scan {
        /// rms (γ = 0 conservative), avg (steady-state impulse) or pm
        /// (sweep-direction decomposition)
        #[arg(long)]
        kind: String,
        /// Initial momenta in ħk, comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        momenta: Vec<i64>,
        #[arg(long)]
        delta_s: f64,
        #[arg(long)]
        t_s: f64,
        #[arg(long)]
        omega0: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// Trajectories per ensemble (0 = dense master equation)
        #[arg(long, default_value_t = 0)]
        traj: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Initial internal level for rms scans: g or e
        #[arg(long, default_value = "g")]
        prep: char,
        /// Momentum-window margin for the per-point grid
        #[arg(long, default_value_t = 30)]
        margin: i64,
        #[arg(long, default_value_t = 0.15)]
        safety: f64,
        /// Output CSV file name (under --out-dir)
        #[arg(long, default_value = "scan.csv")]
        out: String,
    },
    /// Closed-form resonance-theory evaluations as a table
    Analytic {
        /// Per-beam Rabi frequency for the parameter-specific rows
        #[arg(long, default_value_t = 2.0)]
        omega0: f64,
        /// Ramp slope α for the parameter-specific rows
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Also run the numerical two-level Landau-Zener cross-check
        #[arg(long)]
        lz_check: bool,
    },
    /// Dressed-state eigenvalue sweep around a momentum state
    Dressed {
        #[arg(long, default_value_t = 2.0)]
        omega0: f64,
        /// Momentum p of the tracked four-state set {g,p; e,p−1; g,p−2; e,p−3}
        #[arg(long, default_value_t = 4)]
        p: i64,
        #[arg(long, default_value_t = -25.0)]
        delta_min: f64,
        #[arg(long, default_value_t = 25.0)]
        delta_max: f64,
        #[arg(long, default_value_t = 1001)]
        steps: usize,
        #[arg(long, default_value = "dressed.csv")]
        out: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        // ignore the error if a pool already exists (tests, repeat calls)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { preset, config, seed, traj, periods, safety, momenta, omega0 } => {
            let ov = Overrides { n_traj: traj, seed, periods, safety, momenta, omega0_list: omega0 };
            match (preset, config) {
                (Some(name), None) => {
                    if !PRESET_NAMES.contains(&name.as_str()) {
                        return Err(CliError::UnknownPreset(name));
                    }
                    run_preset(&name, &ov, &cli.out_dir)
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    let mut cfg = RunConfig::from_json(&text)?;
                    if let Some(s) = seed {
                        cfg.base_seed = s;
                    }
                    if let Some(n) = traj {
                        cfg.n_traj = n;
                    }
                    let stem = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().to_string())
                        .unwrap_or_else(|| "config_run".into());
                    run_config(&stem, &cfg, &cli.out_dir).map(|_| ())
                }
                _ => Err(CliError::Config("provide exactly one of --preset or --config".into())),
            }
        }
        Command::Scan {
            kind,
            momenta,
            delta_s,
            t_s,
            omega0,
            gamma,
            traj,
            seed,
            prep,
            margin,
            safety,
            out,
        } => {
            io::ensure_dir(&cli.out_dir)?;
            let schedule = SweepSchedule::sawtooth(delta_s, t_s, 1);
            let params = DriveParams::new(omega0, gamma)?;
            let settings = ScanSettings {
                n_traj: traj,
                base_seed: seed,
                grid: GridPolicy::Window { margin },
                integ: IntegratorConfig::default()
                    .with_safety(safety)
                    .with_records_per_period(2),
            };
            let path = cli.out_dir.join(out);
            match kind.as_str() {
                "rms" => {
                    let level = match prep {
                        'g' => InternalLevel::Ground,
                        'e' => InternalLevel::Excited,
                        c => {
                            return Err(CliError::Config(format!(
                                "prep must be 'g' or 'e', got '{c}'"
                            )))
                        }
                    };
                    let mut rows = Vec::new();
                    for &p_i in &momenta {
                        let r = delta_p_rms(level, p_i, &schedule, &params, &settings)?;
                        rows.push(vec![p_i as f64, r.delta_p_rms, r.p_e_end]);
                    }
                    io::write_scan_csv(&path, "p_i,delta_p_rms,p_e_end", &rows)?;
                }
                "avg" => {
                    let mut rows = Vec::new();
                    for &p_i in &momenta {
                        let r = delta_p_avg_steady(p_i, &schedule, &params, &settings)?;
                        rows.push(vec![
                            p_i as f64,
                            r.delta_p_avg,
                            r.se_delta_p,
                            r.p_e_ss,
                            r.xi,
                            r.se_xi,
                        ]);
                    }
                    io::write_scan_csv(&path, "p_i,delta_p_avg,se_delta_p,p_e_ss,xi,se_xi", &rows)?;
                }
                "pm" => {
                    let mut rows = Vec::new();
                    for &p_i in &momenta {
                        let r = delta_p_pm(p_i, &schedule, &params, &settings)?;
                        rows.push(vec![p_i as f64, r.delta_p_plus, r.delta_p_minus, r.se]);
                    }
                    io::write_scan_csv(&path, "p_i,delta_p_plus,delta_p_minus,se", &rows)?;
                }
                other => {
                    return Err(CliError::Config(format!(
                        "scan kind must be rms, avg or pm, got '{other}'"
                    )))
                }
            }
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Analytic { omega0, alpha, lz_check } => {
            analytic_tables(omega0, alpha, lz_check);
            Ok(())
        }
        Command::Dressed { omega0, p, delta_min, delta_max, steps, out } => {
            io::ensure_dir(&cli.out_dir)?;
            let reach = (p.abs() + 8).max(10);
            let grid = MomentumGrid::new(-reach, reach)?;
            let params = DriveParams::new(omega0, 0.0)?;
            let deltas: Vec<f64> = (0..steps.max(2))
                .map(|i| delta_min + (delta_max - delta_min) * i as f64 / (steps.max(2) - 1) as f64)
                .collect();
            let tracked = dressed_track(&grid, &params, &deltas, p)?;
            let mut rows = Vec::with_capacity(deltas.len());
            for (i, &d) in deltas.iter().enumerate() {
                let vals = dressed_eigenvalues(&grid, &params, d, p)?;
                let mut row = vec![d];
                row.extend(vals);
                row.extend(tracked.iter().map(|c| c[i]));
                rows.push(row);
            }
            let path = cli.out_dir.join(out);
            io::write_scan_csv(
                &path,
                "delta,eig0,eig1,eig2,eig3,track0,track1,track2,track3",
                &rows,
            )?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn analytic_tables(omega0: f64, alpha: f64, lz_check: bool) {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    let f = |v: f64| format!("{v:>12.6}");

    let kappas = [0.25, 0.5, 1.0, 2.0, 4.0];
    let mut rows: Vec<Vec<String>> = Vec::new();
    for &k in &kappas {
        let o = (k * alpha).sqrt();
        let mut row = vec![f(k), f(o), f(resonance::lz_probability(o, alpha))];
        if lz_check {
            row.push(f(resonance::lz_transfer_numeric(o, alpha)));
        }
        rows.push(row);
    }
    let header: &[&str] = if lz_check {
        &["       kappa", "      omega0", "         P_a", "   P_numeric"]
    } else {
        &["       kappa", "      omega0", "         P_a"]
    };
    io::print_table(&mut w, &format!("Landau-Zener transfer at alpha = {alpha}"), header, &rows)
        .ok();

    let rows: Vec<Vec<String>> = [0.0f64, 1.0, 4.0, 10.0]
        .iter()
        .map(|&beta| {
            let (tr_g, tl_g) = resonance::resonance_times(InternalLevel::Ground, beta, alpha);
            let (tr_e, tl_e) = resonance::resonance_times(InternalLevel::Excited, beta, alpha);
            vec![f(beta), f(tr_g), f(tl_g), f(tr_e), f(tl_e), f(resonance::tau_res(2.0 * beta, alpha))]
        })
        .collect();
    io::print_table(
        &mut w,
        &format!("resonance times at alpha = {alpha} (ramp-centered)"),
        &["        beta", "   t_right_g", "    t_left_g", "   t_right_e", "    t_left_e", "     tau_res"],
        &rows,
    )
    .ok();

    let kappa = resonance::adiabaticity(omega0, alpha);
    let rows = vec![vec![
        f(omega0),
        f(alpha),
        f(kappa),
        f(resonance::tau_jump(omega0, alpha)),
        f(resonance::min_momentum_bound(kappa, 1.0)),
    ]];
    io::print_table(
        &mut w,
        "drive parameters (min momentum bound quoted at gamma = 1)",
        &["      omega0", "       alpha", "       kappa", "    tau_jump", " p_min_bound"],
        &rows,
    )
    .ok();

    let rows: Vec<Vec<String>> = [6.0f64, 8.0, 12.0]
        .iter()
        .map(|&kv| {
            let gap = resonance::doppleron_gap(omega0, kv).unwrap_or(f64::NAN);
            let prob = resonance::doppleron_prob(omega0, alpha, kv).unwrap_or(f64::NAN);
            let flags = resonance::regime_flags(omega0, kv);
            vec![
                f(kv),
                f(resonance::doppleron_time(1, kv, alpha)),
                f(gap),
                f(prob),
                format!("{:>12}", flags.high_velocity),
                format!("{:>12}", flags.doppleron),
            ]
        })
        .collect();
    io::print_table(
        &mut w,
        "first-order Dopplerons",
        &["          kv", "  alpha*t1", "     gap", "       P_a1", "   high_vel", "   doppleron"],
        &rows,
    )
    .ok();
}
