use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors raised by the library.
///
/// The CLI reports these by [`Error::name`], so variant names are part of
/// the user-facing surface.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a splitting type needs at least one summand")]
    EmptyType,
    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
    #[error("slope is zero, the slope panel is undefined")]
    ZeroSlope,
    #[error("slope is negative, the minimal slope ratio is only defined for positive slope")]
    NegativeSlope,
    #[error("types differ in rank or degree (rank {rank_a} / degree {degree_a} vs rank {rank_b} / degree {degree_b})")]
    ShapeMismatch {
        rank_a: usize,
        degree_a: i64,
        rank_b: usize,
        degree_b: i64,
    },
    #[error("ranks differ: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("quotient rank {m} outside 1..={rank}")]
    OutOfRange { m: usize, rank: usize },
    #[error("invalid alignment: {0}")]
    InvalidAlignment(String),
    #[error("slope {degree}/{rank} is not an integer (glue {copy_factor} copies first)")]
    NonIntegerSlope {
        degree: i64,
        rank: usize,
        copy_factor: u64,
    },
    #[error("rank {0} exceeds the supported maximum of 5")]
    RankTooLarge(usize),
    #[error("type {0} is not sequential")]
    NotSequential(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("class is not in the nef cone")]
    NotInNefCone,
    #[error("class lies in no chamber")]
    NoChamber,
    #[error("anticanonical degree of the class is not positive")]
    ZeroDegree,
    #[error("chambers sharing this class disagree on the expected slope panel")]
    BoundaryMismatch,
    #[error("anticanonical functional is zero")]
    ZeroFunctional,
    #[error(
        "degree slice is unbounded: the anticanonical functional is not positive on every nef ray"
    )]
    UnboundedSlice,
    #[error("lattice rank {0} exceeds the supported maximum of 4")]
    DimensionTooLarge(usize),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid counting configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable variant name, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyType => "EmptyType",
            Error::Parse { .. } => "Parse",
            Error::ZeroSlope => "ZeroSlope",
            Error::NegativeSlope => "NegativeSlope",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::InvalidAlignment(_) => "InvalidAlignment",
            Error::NonIntegerSlope { .. } => "NonIntegerSlope",
            Error::RankTooLarge(_) => "RankTooLarge",
            Error::NotSequential(_) => "NotSequential",
            Error::InvalidFiltration(_) => "InvalidFiltration",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotInNefCone => "NotInNefCone",
            Error::NoChamber => "NoChamber",
            Error::ZeroDegree => "ZeroDegree",
            Error::BoundaryMismatch => "BoundaryMismatch",
            Error::ZeroFunctional => "ZeroFunctional",
            Error::UnboundedSlice => "UnboundedSlice",
            Error::DimensionTooLarge(_) => "DimensionTooLarge",
            Error::InvalidModel(_) => "InvalidModel",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}
