use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("unsupported bit depth: {0}")]
    UnsupportedBitDepth(String),

    #[error("image decoding failed: {0}")]
    Decode(String),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("coordinate ({x}, {y}) lies outside a {width}x{height} domain")]
    OutOfBounds {
        x: i64,
        y: i64,
        width: usize,
        height: usize,
    },

    #[error("template {template:?} does not fit inside image {image:?}")]
    TemplateTooLarge {
        template: (usize, usize),
        image: (usize, usize),
    },

    #[error("domain too small: {0}")]
    DomainTooSmall(String),

    #[error("exact enumeration supports at most {max} foreground points, got {count}")]
    TooManyPoints { count: usize, max: usize },

    #[error("seed set is empty")]
    EmptySeeds,

    #[error("seed at ({x}, {y}) lies outside the object")]
    SeedOutsideObject { x: usize, y: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("curve table has no series named {0:?}")]
    MissingSeries(String),

    #[error("distance field is empty")]
    EmptyField,
}

pub type Result<T> = std::result::Result<T, Error>;
