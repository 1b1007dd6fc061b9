use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the resonance pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("marking infeasible: disks {first} and {second} overlap (gap {gap:e})")]
    MarkingInfeasible { first: usize, second: usize, gap: f64 },

    #[error("invalid Moebius matrix: {0}")]
    InvalidMatrix(String),

    #[error("word enumeration would produce {projected} entries, above the cap of {cap}")]
    Resource { projected: u128, cap: u128 },

    #[error("trace overflow at word length {length}: |tr| = {trace:e} exceeds the safe threshold")]
    TraceOverflow { length: usize, trace: f64 },

    #[error("non-hyperbolic composite for word {word}: |tr| = {trace}")]
    Degenerate { word: String, trace: f64 },

    #[error("pressure root not bracketed below z = {z_cap:e} (truncation order too small?)")]
    NoPressureRoot { z_cap: f64 },

    #[error("dimension bracket invalid: P(0) = {p0}, P(1) = {p1}")]
    Bracket { p0: f64, p1: f64 },

    #[error("zero on or near the contour (min |f| = {min_abs:e}); jitter the box")]
    BoundaryZero { min_abs: f64 },

    #[error("argument-principle quadrature did not converge (residual {residual:.3})")]
    NonConvergence { residual: f64 },

    #[error("boundary jitter schedule exhausted")]
    JitterExhausted,

    #[error("Newton iteration diverged from {start}")]
    Divergence { start: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate interval: {0}")]
    DegenerateInterval(String),

    #[error("interpolation point {x} outside sampled range [{lo}, {hi}]")]
    InterpolationRange { x: f64, lo: f64, hi: f64 },

    #[error("empty mollifier window around R = {0}")]
    EmptyWindow(f64),

    #[error("non-finite value in column `{column}`")]
    NonFinite { column: String },

    #[error("stale cache {path}: {reason}; delete it or rerun to regenerate")]
    StaleCache { path: PathBuf, reason: String },

    #[error("corrupt cache {path}: {reason}")]
    CorruptCache { path: PathBuf, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::MarkingInfeasible { .. } => "marking_infeasible",
            Error::InvalidMatrix(_) => "invalid_matrix",
            Error::Resource { .. } => "resource",
            Error::TraceOverflow { .. } => "trace_overflow",
            Error::Degenerate { .. } => "degenerate",
            Error::NoPressureRoot { .. } => "no_pressure_root",
            Error::Bracket { .. } => "bracket",
            Error::BoundaryZero { .. } => "boundary_zero",
            Error::NonConvergence { .. } => "non_convergence",
            Error::JitterExhausted => "jitter_exhausted",
            Error::Divergence { .. } => "divergence",
            Error::InsufficientData(_) => "insufficient_data",
            Error::DegenerateInterval(_) => "degenerate_interval",
            Error::InterpolationRange { .. } => "interpolation_range",
            Error::EmptyWindow(_) => "empty_window",
            Error::NonFinite { .. } => "non_finite",
            Error::StaleCache { .. } => "stale_cache",
            Error::CorruptCache { .. } => "corrupt_cache",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }

    /// Process exit status: 3 configuration, 4 infeasible marking,
    /// 5 numerical failure, 6 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MarkingInfeasible { .. } => 4,
            Error::TraceOverflow { .. }
            | Error::Degenerate { .. }
            | Error::NoPressureRoot { .. }
            | Error::Bracket { .. }
            | Error::BoundaryZero { .. }
            | Error::NonConvergence { .. }
            | Error::JitterExhausted
            | Error::Divergence { .. }
            | Error::NonFinite { .. } => 5,
            Error::Io { .. } | Error::StaleCache { .. } | Error::CorruptCache { .. } => 6,
            _ => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
