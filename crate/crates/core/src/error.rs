use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("matrix must be square with even dimension, got {rows}x{cols}")]
    NotPhaseSpace { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    Asymmetric { asymmetry: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("mode index {mode} out of range for {modes}-mode state")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("covariance matrix is singular (det = {det:e})")]
    Singular { det: f64 },

    #[error("unphysical input: {0}")]
    Unphysical(String),

    #[error("direct sum of an empty list")]
    EmptyDirectSum,

    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("thermal-bath equivalence invalid: margin {margin:e} <= 0")]
    Constraint { margin: f64 },

    #[error("shot count must be at least 1")]
    NoShots,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            expected,
        })
    }
}
