use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Mismatch(String),

    #[error("axis {axis} out of range for a jet in {nvars} variables")]
    BadAxis { axis: usize, nvars: usize },

    #[error("singular jet: {0}")]
    Singular(String),

    #[error("jet has a nonzero constant term; exp_jet needs a(0) = 0")]
    NonzeroConstant,

    #[error("one-form is not closed to order {order}")]
    NotClosedOneForm { order: usize },

    #[error("two-form is not closed to order {order}")]
    NotClosedTwoForm { order: usize },

    #[error("antisymmetric part of the prescribed tensor is not closed")]
    AntisymmetricPartNotClosed,

    #[error("Ricci tensor is not symmetric (trace form is not closed)")]
    RicciNotSymmetric,

    #[error("unsupported construction {tag} in dimension {n}: {reason}")]
    Unsupported {
        tag: String,
        n: usize,
        reason: String,
    },

    #[error("free data does not match the census: {0}")]
    SlotMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("assembled system is not of Cauchy-Kowalevski form: {0}")]
    NotCauchyKowalevski(String),

    #[error("right-hand side failed at Picard iteration {iteration}: {source}")]
    Evaluator {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable reason used by the CLI and the C ABI.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::Mismatch(_) => "shape-mismatch",
            Error::BadAxis { .. } => "bad-axis",
            Error::Singular(_) => "singular-jet",
            Error::NonzeroConstant => "nonzero-constant-term",
            Error::NotClosedOneForm { .. } => "one-form-not-closed",
            Error::NotClosedTwoForm { .. } => "two-form-not-closed",
            Error::AntisymmetricPartNotClosed => "antisymmetric-part-not-closed",
            Error::RicciNotSymmetric => "ricci-not-symmetric",
            Error::Unsupported { .. } => "unsupported-construction",
            Error::SlotMismatch(_) => "slot-mismatch",
            Error::Precondition(_) => "precondition-violated",
            Error::NotCauchyKowalevski(_) => "not-cauchy-kowalevski",
            Error::Evaluator { source, .. } => source.reason(),
            Error::Parse(_) => "parse-error",
            Error::Json(_) => "malformed-json",
            Error::Io(_) => "io-error",
        }
    }

    /// True for rejections of mathematically inadmissible input, as opposed
    /// to malformed input or I/O failures.
    pub fn is_precondition(&self) -> bool {
        match self {
            Error::Singular(_)
            | Error::NonzeroConstant
            | Error::NotClosedOneForm { .. }
            | Error::NotClosedTwoForm { .. }
            | Error::AntisymmetricPartNotClosed
            | Error::RicciNotSymmetric
            | Error::Unsupported { .. }
            | Error::Precondition(_) => true,
            Error::Evaluator { source, .. } => source.is_precondition(),
            _ => false,
        }
    }
}
