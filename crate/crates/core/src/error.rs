use thiserror::Error;

use crate::surd::SurdError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Surd(#[from] SurdError),
    #[error("generator {gen} out of range for a group with {rank} generators")]
    UnknownGenerator { gen: usize, rank: usize },
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("resource limit: {what} has {size} elements, cap is {cap}")]
    ResourceLimit { what: &'static str, size: usize, cap: usize },
    #[error("integer overflow in normal form computation")]
    Overflow,
    #[error("broken short exact sequence: {0}")]
    BrokenSes(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("the identity has no sign")]
    NoSign,
    #[error("no basepoint is moved by a nonidentity element")]
    InsufficientBasepoints,
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
    #[error("wrong constructor: {0}")]
    WrongConstructor(String),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("word is not in the kernel of the projection to the direct product")]
    NotInKernel,
    #[error("invalid amalgam oracle: {0}")]
    InvalidOracle(String),
    #[error("orbit undecided: cone equality unknown after {} representatives", .0.representatives.len())]
    OrbitUndecided(Box<crate::action::OrbitReport>),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Resource caps, overridable through `LO_BALL_CAP`, `LO_CENSUS_CAP` and
/// `LO_LIST_CAP`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest word ball that may be materialized.
    pub ball_cap: usize,
    /// Largest ball (nonidentity elements) the census solver accepts.
    pub census_cap: usize,
    /// Longest list of ball cones a census may produce.
    pub list_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { ball_cap: 250_000, census_cap: 2_000, list_cap: 1_000_000 }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        if let Some(v) = std::env::var("LO_BALL_CAP").ok().and_then(|s| s.parse().ok()) {
            l.ball_cap = v;
        }
        if let Some(v) = std::env::var("LO_CENSUS_CAP").ok().and_then(|s| s.parse().ok()) {
            l.census_cap = v;
        }
        if let Some(v) = std::env::var("LO_LIST_CAP").ok().and_then(|s| s.parse().ok()) {
            l.list_cap = v;
        }
        l
    }
}
