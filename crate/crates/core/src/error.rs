use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid cyclic factor {0}: every factor must be at least 1")]
    InvalidFactor(u64),

    #[error("shape mismatch: expected {expected} coordinates, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("coordinate {value} out of range for factor {modulus} at position {position}")]
    CoordinateOutOfRange { position: usize, value: u64, modulus: u64 },

    #[error("groups differ: {left:?} vs {right:?}")]
    GroupMismatch { left: Vec<u64>, right: Vec<u64> },

    #[error("character {0:?} is not in the annihilator of the subgroup")]
    NotInAnnihilator(Vec<u64>),

    #[error("coset index {index} out of range ({count} cosets)")]
    CosetOutOfRange { index: usize, count: usize },

    #[error("invalid weight {weight} at point {point}")]
    InvalidWeight { point: usize, weight: f64 },

    #[error("measure domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: String, found: String },

    #[error("measure has {found} points, expected {expected}")]
    MeasureLength { expected: usize, found: usize },

    #[error("function has {found} values, expected {expected}")]
    FunctionLength { expected: usize, found: usize },

    #[error("sectors {first} and {second} overlap at character {point:?}")]
    OverlappingSupports {
        first: usize,
        second: usize,
        point: Vec<u64>,
    },

    #[error("sector {sector} has multiplicity 0")]
    ZeroMultiplicity { sector: usize },

    #[error("W_{sector}({point:?}) is not an isometry: max |W*W - I| = {deviation:e}")]
    NonIsometric {
        sector: usize,
        point: Vec<u64>,
        deviation: f64,
    },

    #[error("S_{sector}({point:?}) is not unitary: max deviation {deviation:e}")]
    NonUnitary {
        sector: usize,
        point: Vec<u64>,
        deviation: f64,
    },

    #[error("E dimension {e_dim} is smaller than the largest multiplicity {required}")]
    EDimTooSmall { e_dim: usize, required: usize },

    #[error("no matrix given for sector {sector} at character {point:?}")]
    MissingMatrix { sector: usize, point: Vec<u64> },

    #[error(
        "matrix for sector {sector} at {point:?} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}"
    )]
    MatrixShape {
        sector: usize,
        point: Vec<u64>,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },

    #[error("expected {expected} isometry fields, found {found}")]
    FieldCount { expected: usize, found: usize },

    #[error("class measure does not match the spectral class: {0}")]
    ClassMeasure(String),

    #[error("state norm is {norm}, expected 1")]
    NonUnitState { norm: f64 },

    #[error("vector {index} has norm {norm}, expected 1")]
    NonUnitVector { index: usize, norm: f64 },

    #[error("state has dimension {found}, expected {expected}")]
    StateDimension { expected: usize, found: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("index {0} outside the observable window")]
    IndexOutsideWindow(String),

    #[error("coefficient at frequency {frequency} exceeds the degree window {degree}")]
    DegreeWindow { frequency: i64, degree: i64 },

    #[error("incompatible operands: {0}")]
    Incompatible(String),
}

impl Error {
    /// True for errors raised while admitting a POVM construction.
    pub fn is_build_rejection(&self) -> bool {
        matches!(
            self,
            Error::NonIsometric { .. }
                | Error::EDimTooSmall { .. }
                | Error::MissingMatrix { .. }
                | Error::MatrixShape { .. }
                | Error::FieldCount { .. }
                | Error::OverlappingSupports { .. }
                | Error::ZeroMultiplicity { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
