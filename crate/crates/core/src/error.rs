use thiserror::Error;

/// Errors raised by the rate models, the scenario loader and the sweep tools.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is out of range: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("division by zero while computing {0}")]
    DivisionByZero(&'static str),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error(
        "reverse reconciliation needs equal detector efficiencies (fast g_det = {fast}, slow g_det = {slow})"
    )]
    MismatchedEfficiency { fast: f64, slow: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("unknown figure preset {0} (expected 1..=9)")]
    UnknownPreset(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Grid(_)
            | Error::UnknownPreset(_)
            | Error::MismatchedEfficiency { .. } => 2,
            Error::Domain { .. } | Error::DivisionByZero(_) | Error::NoRoot(_) => 3,
        }
    }
}

/// Checks `lo <= value <= hi` (NaN fails).
pub(crate) fn ensure_in(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    expected: &'static str,
) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected,
        })
    }
}

pub(crate) fn ensure(
    cond: bool,
    name: &'static str,
    value: f64,
    expected: &'static str,
) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected,
        })
    }
}
