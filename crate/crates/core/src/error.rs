use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite quaternion component")]
    NonFinite,
    #[error("not a unit imaginary quaternion: {0}")]
    NotUnitImaginary(String),
    #[error("point {0} is real; its slice is ambiguous")]
    RealPointAmbiguous(String),
    #[error("unsupported region kind for this operation: {0}")]
    UnsupportedRegionKind(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("symmetrization has imaginary residue {residual:e}")]
    SymmetrizationNotReal { residual: f64 },
    #[error("not divisible (max remainder norm {remainder:e})")]
    NotDivisible { remainder: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("evaluation at a pole: {0}")]
    PoleEvaluation(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("syntax error at offset {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::NonFinite => "NonFinite",
            Error::NotUnitImaginary(_) => "NotUnitImaginary",
            Error::RealPointAmbiguous(_) => "RealPointAmbiguous",
            Error::UnsupportedRegionKind(_) => "UnsupportedRegionKind",
            Error::InvalidRegion(_) => "InvalidRegion",
            Error::SymmetrizationNotReal { .. } => "SymmetrizationNotReal",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::NoConvergence(_) => "NoConvergence",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::PoleEvaluation(_) => "PoleEvaluation",
            Error::UnknownIdentity(_) => "UnknownIdentity",
            Error::SyntaxError { .. } => "SyntaxError",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
