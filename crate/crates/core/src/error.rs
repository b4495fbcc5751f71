use std::fmt;
use std::path::PathBuf;

/// A single violated invariant, keyed by its dotted field path.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub reason: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {}", join_violations(.0))]
    InvalidConfig(Vec<Violation>),

    #[error("unsupported carrier {0} GHz (expected one of 28, 50, 70, 90)")]
    UnsupportedCarrier(f64),

    #[error("degenerate geometry: {what} distance {distance_m} m is below the 1e-9 m guard")]
    DegenerateGeometry { what: &'static str, distance_m: f64 },

    #[error("invalid angle {field} = {degrees} deg (must lie in [0, 90))")]
    InvalidAngle { field: &'static str, degrees: f64 },

    #[error("invalid power: {0}")]
    InvalidPower(String),

    #[error("scenarios cannot be compared: {0}")]
    MismatchedScenarios(String),

    #[error(
        "target {target} is not bracketed: edge_min({lo}) = {value_lo}, edge_min({hi}) = {value_hi}"
    )]
    Bracket {
        lo: f64,
        hi: f64,
        value_lo: f64,
        value_hi: f64,
        target: f64,
    },

    #[error("target {target} infeasible: {n_max} elements reach edge_min = {achieved}")]
    Infeasible {
        n_max: u32,
        achieved: f64,
        target: f64,
    },

    #[error("no user points fall in the cell-edge band")]
    EmptyEdgeBand,

    #[error("operation requires an IRS-assisted scenario")]
    RequiresIrs,

    #[error("user drop is invalid: {0}")]
    InvalidDrop(String),

    #[error("at user ({x}, {y}, {z}): {source}")]
    AtPoint {
        x: f64,
        y: f64,
        z: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error in {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("nothing to report")]
    EmptyReport,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Strips any `AtPoint` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            e => e,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
