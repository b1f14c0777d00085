use thiserror::Error;

/// Failures raised while building, measuring or rewriting triangulations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("simplex {index} has {found} vertices, expected {expected}")]
    BadArity {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("complex has no top simplices")]
    Empty,
    #[error("unknown vertex index {0}")]
    UnknownVertex(usize),
    #[error("top simplex {0} repeats a vertex lift")]
    RepeatedVertex(usize),
    #[error("codimension-one cell {cell} lies in {count} top-simplex slots, expected 2")]
    NonManifold { cell: String, count: usize },
    #[error("cofaces of {cell} induce equal orientations")]
    OrientationClash { cell: String },
    #[error("deck action fixes cell {0}")]
    NonFreeAction(String),
    #[error("link of hinge {0} is not a single closed cycle")]
    OpenLink(String),
    #[error("squared distances are not realizable by a Euclidean simplex")]
    NotRealizable,
    #[error("degenerate simplex: {0}")]
    Degenerate(String),
    #[error("no non-degenerate sample after {0} attempts")]
    ResampleExhausted(usize),
    #[error("metric is curved: max |omega| = {max_abs:e}")]
    CurvedInput { max_abs: f64 },
    #[error("developing map disagrees on re-entry by {residual:e}")]
    Monodromy { residual: f64 },
    #[error("gauge basis is degenerate: {0}")]
    GaugeDegenerate(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("singular pivot block: {0}")]
    Singular(String),
    #[error("inadmissible move site: {0}")]
    DegenerateSite(String),
    #[error("edge is surrounded by {0} top simplices, expected 4")]
    WrongLink(usize),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
