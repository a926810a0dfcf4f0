use thiserror::Error;

/// Errors raised by the estimation and optimization pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HrisError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sub-frame index {index} out of range (B = {count})")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        actual: String,
    },

    #[error("infeasible pilot design: {users} users need at least {users} slots, got {slots}")]
    InfeasiblePilots { users: usize, slots: usize },

    /// The linear sounding operator does not have full column rank.
    #[error("not identifiable: numerical rank {rank} < {required} unknowns")]
    Identifiability { rank: usize, required: usize },

    #[error("parameter at the box boundary: {0} (nudge it inward by 1e-6)")]
    Boundary(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, HrisError>;

impl HrisError {
    pub(crate) fn dims(context: &'static str, expected: (usize, usize), actual: (usize, usize)) -> Self {
        HrisError::DimensionMismatch {
            context,
            expected: format!("{}x{}", expected.0, expected.1),
            actual: format!("{}x{}", actual.0, actual.1),
        }
    }
}
