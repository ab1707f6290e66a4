use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("momentum index {n} outside grid [{n_min}, {n_max}]")]
    IndexOutOfGrid { n: i64, n_min: i64, n_max: i64 },

    #[error("invalid momentum grid: require n_min < 0 < n_max, got [{n_min}, {n_max}]")]
    InvalidGrid { n_min: i64, n_max: i64 },

    #[error(
        "edge population {population:.3e} exceeds tolerance {tolerance:.1e} at t = {t:.6} \
         (grid too small)"
    )]
    EdgeBreach { t: f64, population: f64, tolerance: f64 },

    #[error("state norm² = {norm_sqr:.12} violates normalization within {tolerance:.1e}")]
    NotNormalized { norm_sqr: f64, tolerance: f64 },

    #[error("density operator trace = {trace:.12} violates unit trace within {tolerance:.1e}")]
    BadTrace { trace: f64, tolerance: f64 },

    #[error("density operator violates {what}: deviation {deviation:.3e} > {tolerance:.1e}")]
    NotPhysical { what: &'static str, deviation: f64, tolerance: f64 },

    #[error("negative decay rate gamma = {gamma}")]
    NegativeGamma { gamma: f64 },

    #[error("jump requested but excited population is zero")]
    NoExcitedPopulation,

    #[error("step size underflow: dt = {dt:.3e} at t = {t:.6}")]
    StepUnderflow { dt: f64, t: f64 },

    #[error("steady-state fixed point is degenerate (1 - b + a = {denominator:.3e})")]
    NonConvergence { denominator: f64 },

    #[error("{what} undefined at kv = 3 ω_r (Doppleron singularity)")]
    DopplerSingularity { what: &'static str },

    #[error("Bragg integration interval [{t_i}, {t_f}] crosses the zero of the detuning")]
    BraggCrossesZero { t_i: f64, t_f: f64 },

    #[error("dressed subspace for p = {p} ħk requires momenta down to {lowest} ħk, off grid")]
    SubspaceOffGrid { p: i64, lowest: i64 },

    #[error("{0}")]
    Config(String),

    #[error("trajectory {index} failed: {source}")]
    Trajectory {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}
