use thiserror::Error;

/// Errors raised across the library. Variant names double as the error
/// identifiers printed by the CLI and mapped to FFI error codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("EmptyInput: facet list is empty")]
    EmptyInput,
    #[error("MalformedFacet: {0}")]
    MalformedFacet(String),
    #[error("FaceNotInComplex: {0}")]
    FaceNotInComplex(String),
    #[error("NotPure: facets have mixed dimensions {0:?}")]
    NotPure(Vec<usize>),
    #[error("NotOrientable: {0}")]
    NotOrientable(String),
    #[error("NotRegular: {0}")]
    NotRegular(String),
    #[error("DimensionOutOfRange: dimension {dim} not valid here (complex dimension {max})")]
    DimensionOutOfRange { dim: usize, max: usize },
    #[error("InvalidWeight: {0}")]
    InvalidWeight(String),
    #[error("NonFiniteMatrix: matrix has non-finite entries")]
    NonFiniteMatrix,
    #[error("HeterogeneousDegreeSum: sum of 1/deg E differs between faces ({min} vs {max})")]
    HeterogeneousDegreeSum { min: f64, max: f64 },
    #[error("NoQualifyingEigenvalue: no eigenvalue satisfies the theorem's side condition")]
    NoQualifyingEigenvalue,
    #[error("InvalidMeasure: {0}")]
    InvalidMeasure(String),
    #[error("BoundaryDegreeZero: boundary face {0} has degree 0")]
    BoundaryDegreeZero(String),
    #[error("DisconnectedSupports: measure supports contain points at infinite distance")]
    DisconnectedSupports,
    #[error("DisconnectedPair: faces {0} and {1} are not connected")]
    DisconnectedPair(String, String),
    #[error("DisconnectedComplex: faces of dimension {0} are not connected")]
    DisconnectedComplex(usize),
    #[error("NotAdjacent: faces {0} and {1} do not share a codimension-1 face")]
    NotAdjacent(String, String),
    #[error("NonPositiveK: curvature lower bound {0} must be positive")]
    NonPositiveK(f64),
    #[error("IsolatedVertex: vertex {0} has no neighbors")]
    IsolatedVertex(usize),
    #[error("NonPositiveGraphCurvature: graph curvature lower bound {0} is not positive")]
    NonPositiveGraphCurvature(f64),
    #[error("Solver: {0}")]
    Solver(String),
    #[error("ParseError{}: {message}", location(*.line, *.column))]
    Parse {
        line: Option<usize>,
        column: Option<usize>,
        message: String,
    },
    #[error("WeightCoverageError: weights missing for faces {0:?}")]
    WeightCoverage(Vec<String>),
    #[error("UnknownGenerator: {0}")]
    UnknownGenerator(String),
    #[error("BadParams: {0}")]
    BadParams(String),
    #[error("Io: {0}")]
    Io(String),
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l}, column {c}"),
        (Some(l), None) => format!(" at line {l}"),
        _ => String::new(),
    }
}

impl Error {
    /// Short identifier, e.g. `NotOrientable`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::MalformedFacet(_) => "MalformedFacet",
            Error::FaceNotInComplex(_) => "FaceNotInComplex",
            Error::NotPure(_) => "NotPure",
            Error::NotOrientable(_) => "NotOrientable",
            Error::NotRegular(_) => "NotRegular",
            Error::DimensionOutOfRange { .. } => "DimensionOutOfRange",
            Error::InvalidWeight(_) => "InvalidWeight",
            Error::NonFiniteMatrix => "NonFiniteMatrix",
            Error::HeterogeneousDegreeSum { .. } => "HeterogeneousDegreeSum",
            Error::NoQualifyingEigenvalue => "NoQualifyingEigenvalue",
            Error::InvalidMeasure(_) => "InvalidMeasure",
            Error::BoundaryDegreeZero(_) => "BoundaryDegreeZero",
            Error::DisconnectedSupports => "DisconnectedSupports",
            Error::DisconnectedPair(..) => "DisconnectedPair",
            Error::DisconnectedComplex(_) => "DisconnectedComplex",
            Error::NotAdjacent(..) => "NotAdjacent",
            Error::NonPositiveK(_) => "NonPositiveK",
            Error::IsolatedVertex(_) => "IsolatedVertex",
            Error::NonPositiveGraphCurvature(_) => "NonPositiveGraphCurvature",
            Error::Solver(_) => "Solver",
            Error::Parse { .. } => "ParseError",
            Error::WeightCoverage(_) => "WeightCoverageError",
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::BadParams(_) => "BadParams",
            Error::Io(_) => "Io",
        }
    }

    /// True for errors caused by the caller's input rather than by the math.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::EmptyInput
                | Error::MalformedFacet(_)
                | Error::Parse { .. }
                | Error::WeightCoverage(_)
                | Error::UnknownGenerator(_)
                | Error::BadParams(_)
                | Error::Io(_)
                | Error::InvalidWeight(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
