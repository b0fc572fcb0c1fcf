use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed root sequence: {0}")]
    MalformedRoots(String),

    #[error("sequence is not admissible at steps {0:?}")]
    Inadmissible(Vec<usize>),

    #[error("invalid enumeration parameters: {0}")]
    Parameters(String),

    #[error("pairing hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid filtered data: {0}")]
    FilteredData(String),

    #[error("expected {expected}-side jump data")]
    WrongSide { expected: &'static str },

    #[error("residue outside the canonical branch: {0}")]
    Branch(String),

    #[error("character exponent {0} is outside 0..=5")]
    CharacterExponent(i64),

    #[error("point {x}+{y}i is below the height floor {floor}")]
    BelowFloor { x: f64, y: f64, floor: f64 },

    #[error("invalid finite-difference step {0}")]
    Step(f64),

    #[error("matrix {0:?} is not in SL2(Z)")]
    NotSl2(#[doc = "rows"] [[i64; 2]; 2]),

    #[error("scaling factor must be nonzero")]
    ZeroLambda,

    #[error("parse error: {0}")]
    Parse(String),
}
