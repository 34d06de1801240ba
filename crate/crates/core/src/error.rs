use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("point lies outside the projection tube (dist {dist:.3e}, tube radius {radius:.3e})")]
    OutsideTube { dist: f64, radius: f64 },

    #[error("operation requires a smooth curve; curve is in polygon mode")]
    PolygonMode,

    #[error("time step {dt:.3e} exceeds the stability bound {bound:.3e}")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("vorticity is not divergence free (max |div| = {0:.3e})")]
    NotDivergenceFree(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("unknown series `{name}`; available: {available}")]
    UnknownSeries { name: String, available: String },
}

impl Error {
    pub(crate) fn arg(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
