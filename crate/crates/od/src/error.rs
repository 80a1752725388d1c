//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, OdError>;

/// Everything that can go wrong while building, inspecting or checking diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OdError {
    /// A projection that only exists on collapses was applied to another term.
    #[error("no body: `{0}` is not a collapse")]
    NoBody(String),
    /// An operation that needs a collapse received another kind of term.
    #[error("`{0}` is not a collapse")]
    NotCollapse(String),
    /// An operation that needs a non-empty Q part received an empty one.
    #[error("`{0}` is not in D^Q (empty Q part)")]
    NotInDQ(String),
    /// A subscript or successor base is not a regular diagram.
    #[error("`{0}` is not in R")]
    NotRegular(String),
    /// The successor operator was applied to the top regular diagram.
    #[error("successor of p is not available")]
    SuccessorOfPi,
    /// The level parameter N is below 4.
    #[error("N must be at least 4, got {0}")]
    BadLevel(u32),
    /// An index j lies outside the admissible range.
    #[error("index {j} out of range [{lo}, {hi}]")]
    IndexOutOfRange { j: u32, lo: u32, hi: u32 },
    /// Syntax error in the term notation.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    /// Malformed rope descriptor file.
    #[error("descriptor error at line {line}: {message}")]
    Descriptor { line: usize, message: String },
    /// Structurally inconsistent rope descriptor.
    #[error("invalid rope descriptor: {0}")]
    BadRope(String),
    /// A stepping-value input needed by synthesis is missing.
    #[error("missing st input for index {0}")]
    MissingSt(u32),
    /// The root of a rope must be p when the top quadruple is emitted.
    #[error("rope root must be p, found `{0}`")]
    RootNotPi(String),
    /// rg was requested for an index outside In.
    #[error("index {0} is not in In")]
    NotInIn(u32),
    /// The hypothesis of the body-bound construction failed.
    #[error("body bound hypothesis violated: {0}")]
    BodyBoundHypothesis(String),
    /// A constructed body failed its own bound; indicates a defect.
    #[error("bound violated: {0}")]
    BoundViolated(String),
    /// A comparison was requested on a diagram that fails validity.
    #[error("compare on invalid diagram `{0}`")]
    InvalidDiagram(String),
    /// A term lies outside the {0,+,f} fragment handled by the oracle.
    #[error("`{0}` is outside the Veblen fragment")]
    OutOfFragment(String),
    /// A descent step failed to decrease.
    #[error("descent violation: `{from}` to `{to}` is not a strict decrease")]
    DescentViolation { from: String, to: String },
}
