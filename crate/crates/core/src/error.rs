use thiserror::Error;

use crate::classify::ClassificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: i64, strands: usize },

    #[error("braid words need at least 2 strands, got {0}")]
    TooFewStrands(usize),

    #[error("strand count mismatch: {left} vs {right}")]
    StrandCountMismatch { left: usize, right: usize },

    #[error("invalid strand pair ({i}, {j}) for {n} strands")]
    InvalidPair { i: usize, j: usize, n: usize },

    #[error("invalid flip index {i} for {n} strands")]
    InvalidIndex { i: usize, n: usize },

    #[error("operation supports {supported}, got {got} strands")]
    UnsupportedStrandCount { got: usize, supported: &'static str },

    #[error("braid word is not pure")]
    NotPure,

    #[error(
        "class (perm parity {parity}, exponent sum {esum} mod 4) violates the parity invariant"
    )]
    InvalidClass { parity: u8, esum: u8 },

    #[error("segment {segment} has a near-zero axis with nonzero angle")]
    ZeroAxis { segment: usize },

    #[error("parameter {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("rotation path is not closed (max deviation {deviation:.3e})")]
    NotClosed { deviation: f64 },

    #[error("quaternion lift endpoint {w:.6} is near neither +1 nor -1")]
    NumericalAmbiguity { w: f64 },

    #[error("consecutive samples {index} and {next} differ by {angle:.4} rad (> pi/2)", next = index + 1)]
    SparseSampling { index: usize, angle: f64 },

    #[error("sample {0} is not a valid orientation")]
    NotNormalizable(usize),

    #[error("need at least 2 orientation samples, got {0}")]
    TooFewSamples(usize),

    #[error("degenerate triangle (area {area:.3e})")]
    DegenerateTriangle { area: f64 },

    #[error("spherical braid is not anchored at the base configuration")]
    NotAnchored,

    #[error("malformed spherical braid: {0}")]
    MalformedBraid(String),

    #[error("no projection pole with enough clearance (best {clearance:.3e} rad)")]
    NoClearPole { clearance: f64 },

    #[error("sample within {angle:.3e} rad of the projection pole")]
    PoleCollision { angle: f64 },

    #[error("strands {a} and {b} cross with equal depth at t = {time:.9}")]
    DegenerateCrossing { time: f64, a: usize, b: usize },

    #[error("three strands coincide in projection near t = {time:.9}")]
    TripleCrossing { time: f64 },

    #[error("extracted braid word is not pure: {0}")]
    NotPureResult(String),

    #[error("classification routes disagree: braid route {braid}, lift route {lift}", braid = .0.class, lift = .0.lift_class)]
    Disagreement(Box<ClassificationReport>),

    #[error("illegal move {step} in certificate: {reason}")]
    IllegalMove { step: usize, reason: String },

    #[error("certificate replay ended at {got}, expected {expected}")]
    EndMismatch { got: String, expected: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
