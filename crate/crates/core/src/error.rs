use thiserror::Error;

use crate::lattice::EdgeLabel;

/// Errors reported by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid order {0}: order must be at least {1}")]
    InvalidOrder(u32, u32),

    #[error("triangle ({p}, {q}) does not exist at order {order}")]
    InvalidTriangle { order: u32, p: u32, q: u32 },

    #[error("edge label {label} is out of range for order {order}")]
    LabelOutOfRange { label: EdgeLabel, order: u32 },

    #[error("vertex ({i}, {j}, {k}) is not a lattice vertex of order {order}")]
    InvalidVertex { order: u32, i: i32, j: i32, k: i32 },

    #[error("invalid bias: {0}")]
    InvalidBias(String),

    #[error("invalid grove: {0}")]
    InvalidGrove(String),

    #[error("invalid tiling: {0}")]
    InvalidTiling(String),

    #[error("{what} is limited to order {limit} (requested {requested}); set GROVE_COST_GUARD=off to lift")]
    CostGuard {
        what: &'static str,
        limit: u32,
        requested: u32,
    },

    #[error("recurrence division is not exact: {0}")]
    InexactDivision(String),

    #[error("malformed term: {0}")]
    MalformedTerm(String),

    #[error("point is not on the plane x + y + z = -1")]
    OffPlane,

    #[error("point is not outside the boundary, it has no corner sector")]
    NoSector,

    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("power series has a zero constant term")]
    ZeroConstantTerm,

    #[error("depth {depth} is too small, need at least {min}")]
    DepthTooSmall { depth: u32, min: u32 },

    #[error("experiment has nothing to run: {0}")]
    EmptyExperiment(String),

    #[error("internal consistency fault: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
