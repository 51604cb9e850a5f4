use alloc::string::String;
use core::fmt;

/// Failures while building or using the field tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    RejectsReducible(&'static str),
    RejectsImprimitive,
    RejectsNonPrime(u32),
    WrongLevel,
    Unsupported(u32),
    Parse(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::RejectsReducible(what) => write!(f, "{} is reducible", what),
            FieldError::RejectsImprimitive => f.write_str("cubic polynomial is not primitive"),
            FieldError::RejectsNonPrime(n) => write!(f, "{} is not a prime (power)", n),
            FieldError::WrongLevel => f.write_str("element is not in the expected field"),
            FieldError::Unsupported(n) => write!(f, "field order {} is too large", n),
            FieldError::Parse(msg) => write!(f, "field spec: {}", msg),
        }
    }
}

impl core::error::Error for FieldError {}

/// Failures of the geometric layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeomError {
    Field(FieldError),
    MixedAmbient,
    SingularMatrix,
    BudgetExceeded { needed: u64, budget: u64 },
    LineAtInfinity,
    NotASubline,
    LineMeetsSubplane,
    TransversalSearchFailed,
    ClassificationInconsistent,
    FrameMismatch,
    OddCharacteristic,
    DegenerateConic,
    NoGenerator,
    TooFewPoints,
    AmbientMismatch,
    PointNotOnCurve,
    PointOutsidePlane,
    CoverPlaneAmbiguous,
    QTooSmall,
    NotASubplane,
    InvalidCover,
    Serialization(String),
}

impl From<FieldError> for GeomError {
    fn from(e: FieldError) -> Self {
        GeomError::Field(e)
    }
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::Field(e) => e.fmt(f),
            GeomError::MixedAmbient => f.write_str("objects live in different ambient spaces"),
            GeomError::SingularMatrix => f.write_str("matrix is singular"),
            GeomError::BudgetExceeded { needed, budget } => {
                write!(f, "enumeration of {} objects exceeds budget {}", needed, budget)
            }
            GeomError::LineAtInfinity => f.write_str("line is the line at infinity"),
            GeomError::NotASubline => f.write_str("point set is not an order-q subline"),
            GeomError::LineMeetsSubplane => f.write_str("line meets the subplane"),
            GeomError::TransversalSearchFailed => f.write_str("transversal lines not found"),
            GeomError::ClassificationInconsistent => f.write_str("special conics disagree on the conic cover"),
            GeomError::FrameMismatch => f.write_str("frame does not belong to the subplane"),
            GeomError::OddCharacteristic => f.write_str("nuclei exist only in even characteristic"),
            GeomError::DegenerateConic => f.write_str("conic is degenerate"),
            GeomError::NoGenerator => f.write_str("subplane has no generator homography"),
            GeomError::TooFewPoints => f.write_str("too few points"),
            GeomError::InvalidCover => f.write_str("planes do not form two covers of the splash"),
            GeomError::AmbientMismatch => f.write_str("curve ambient does not meet the structure as required"),
            GeomError::PointNotOnCurve => f.write_str("point is not on the curve"),
            GeomError::PointOutsidePlane => f.write_str("point is outside the plane"),
            GeomError::CoverPlaneAmbiguous => f.write_str("cover plane through point is not unique"),
            GeomError::QTooSmall => f.write_str("q is too small for this construction"),
            GeomError::NotASubplane => f.write_str("point set is not an order-q subplane"),
            GeomError::Serialization(msg) => write!(f, "serialization: {}", msg),
        }
    }
}

impl core::error::Error for GeomError {}
