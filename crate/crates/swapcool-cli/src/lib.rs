//! Harness for the SWAP cooling simulator: figure presets, configuration
//! parsing, CSV/JSON serialization and equilibration detection.
//!
//! All physical numbers are in recoil units; configuration keys carry the
//! `_wr` suffix as a reminder (frequencies in ω_r, times in 1/ω_r,
//! momenta in ħk).

pub mod config;
pub mod equilibrate;
pub mod error;
pub mod io;
pub mod presets;

pub use error::{CliError, CliResult};

/// Schema version stamped into every JSON summary.
pub const SCHEMA_VERSION: u32 = 1;

pub fn code_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
