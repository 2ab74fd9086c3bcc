use thiserror::Error;

#[derive(Debug, Error)]
pub enum FkError {
    #[error("invalid geometry: {0}")]
    BadGeometry(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("empty set")]
    EmptySet,
    #[error("inverted interval ({0}, {1}]")]
    InvertedInterval(f64, f64),
    #[error("stream horizon {horizon} too short, need {needed}")]
    HorizonExceeded { needed: f64, horizon: f64 },
    #[error("geometry mismatch: configuration over {got} edges, geometry has {want}")]
    GeometryMismatch { got: usize, want: usize },
    #[error("{edges} edges exceeds the cap of {cap} for this operation")]
    OverCap { edges: usize, cap: usize },
    #[error("absolute continuity violated: reference vanishes on a charged state")]
    AbsoluteContinuity,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
