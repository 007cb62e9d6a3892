use thiserror::Error;

/// Density-matrix invariant that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Hermiticity,
    Trace,
    Positivity,
    Normalization,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::Hermiticity => "hermiticity",
            Invariant::Trace => "trace",
            Invariant::Positivity => "positivity",
            Invariant::Normalization => "normalization",
        }
    }
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("dimension {dim} does not factor as {d_a} x {d_b}")]
    NonFactoring { dim: usize, d_a: usize, d_b: usize },

    #[error("operation requires equal subsystem dimensions, got {d_a} x {d_b}")]
    NonSquareBipartition { d_a: usize, d_b: usize },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("{invariant} invariant violated: {detail}")]
    Invariant {
        invariant: Invariant,
        detail: String,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(name: &'static str, value: f64, range: impl Into<String>) -> Error {
    Error::OutOfRange {
        name,
        value,
        range: range.into(),
    }
}
