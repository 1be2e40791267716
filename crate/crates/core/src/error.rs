use thiserror::Error;

/// Which unitarity relation of a quaternionic coin failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitarityRelation {
    /// `|a|² + |b|² = 1` or `|c|² + |d|² = 1`
    RowNorm,
    /// `a·conj(c) + b·conj(d) = 0`
    RowOrthogonality,
    /// `conj(a)·b + conj(c)·d = 0`
    ColumnOrthogonality,
    /// `|a|² = |d|²`
    DiagonalModulus,
    /// `|b|² = |c|²`
    OffDiagonalModulus,
}

impl UnitarityRelation {
    pub fn name(self) -> &'static str {
        match self {
            UnitarityRelation::RowNorm => "row-norm",
            UnitarityRelation::RowOrthogonality => "row-orthogonality",
            UnitarityRelation::ColumnOrthogonality => "column-orthogonality",
            UnitarityRelation::DiagonalModulus => "diagonal-modulus",
            UnitarityRelation::OffDiagonalModulus => "off-diagonal-modulus",
        }
    }
}

impl std::fmt::Display for UnitarityRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum QqwError {
    #[error("coin is not unitary: {relation} residual {residual:e}")]
    NotUnitary {
        relation: UnitarityRelation,
        residual: f64,
    },

    #[error("{what} is not normalized: |alpha|^2+|beta|^2 = {norm_sqr}")]
    NotNormalized { what: String, norm_sqr: f64 },

    #[error("path enumeration with l+m = {n} exceeds the limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("outside the domain of the formula: {0}")]
    Domain(String),

    #[error("eigenvalues coincide at theta = {theta}")]
    Degenerate { theta: f64 },

    #[error("eigenvector construction degenerate (|A||B| = {ab:e}) at theta = {theta}, lambda = {lambda}")]
    DegenerateAB { theta: f64, lambda: f64, ab: f64 },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("file not found: {0}")]
    FileNotFound(String),

    #[error("malformed JSON at line {line}: {msg}")]
    MalformedJson { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl QqwError {
    /// Process exit code: 1 usage/input, 2 domain, 3 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            QqwError::Usage(_)
            | QqwError::FileNotFound(_)
            | QqwError::MalformedJson { .. }
            | QqwError::Io(_) => 1,
            QqwError::NotUnitary { .. }
            | QqwError::NotNormalized { .. }
            | QqwError::TooLarge { .. }
            | QqwError::Domain(_) => 2,
            QqwError::Degenerate { .. } | QqwError::DegenerateAB { .. } | QqwError::Numeric(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, QqwError>;
