use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range {1}")]
    DimensionOutOfRange(usize, &'static str),
    #[error("n = 6 enumeration runs for hours; pass the long-running flag to allow it")]
    LongRunningRequired,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("simplex needs {expected} vertices, found {found}")]
    VertexCount { expected: usize, found: usize },
    #[error("invalid vertex string {0:?}")]
    InvalidVertex(String),
    #[error("simplex repeats vertex {0}")]
    RepeatedVertex(String),
    #[error("simplex {index} is degenerate")]
    DegenerateSimplex { index: usize },
    #[error("column profile entry {value} is outside 1..={n}")]
    DegenerateProfile { value: usize, n: usize },
    #[error("axis {axis} is outside 1..={n}")]
    AxisOutOfRange { axis: usize, n: usize },
    #[error("parameter t = {0} is outside [0, 1]")]
    ParameterOutOfRange(String),
    #[error("weight vector is invalid: {0}")]
    InvalidWeights(String),
    #[error("constraint class list is empty")]
    EmptyClassList,
    #[error("unsupported polytope {0:?}; only \"cube\" is accepted")]
    UnsupportedPolytope(String),
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
