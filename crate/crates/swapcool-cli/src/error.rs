use serde::Serialize;
use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] swapcool::Error),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Config(String),

    #[error("unknown preset '{0}' (expected one of fig3, fig4, fig5, fig6, fig7, fig8, fig10, fig11, fig12)")]
    UnknownPreset(String),

    #[error("equilibration not reached within {cycles} cycles (|slope| = {slope:.3e} > {threshold:.3e})")]
    NotEquilibrated { cycles: usize, slope: f64, threshold: f64 },
}

/// Machine-readable error shape printed to stderr on failure.
#[derive(Serialize)]
pub struct ErrorJson<'a> {
    pub kind: &'a str,
    pub error: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(_) => "core",
            CliError::Io { .. } => "io",
            CliError::Config(_) => "config",
            CliError::UnknownPreset(_) => "unknown_preset",
            CliError::NotEquilibrated { .. } => "not_equilibrated",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorJson { kind: self.kind(), error: self.to_string() })
            .unwrap_or_else(|_| format!("{{\"kind\":\"{}\"}}", self.kind()))
    }
}
