use thiserror::Error;

use crate::shift::{QVertex, QuotientEdge};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("attempted to invert zero")]
    ZeroInverse,

    #[error("singular matrix representative")]
    Singular,

    #[error("dimension must be 2 or 3, got {0}")]
    Dimension(usize),

    #[error("invariant breakpoints did not plateau: {0}")]
    NoPlateau(String),

    #[error("endpoint invariants {0:?} -> {1:?} are not sector-adjacent by a type-1 edge")]
    NotSectorAdjacent(QVertex, QVertex),

    #[error("oracle budget exceeded: {leaves} leaves requested, limit is {limit}")]
    BudgetExceeded { leaves: u128, limit: u128 },

    #[error("invalid quotient edge index (2k, 2l) = ({0}, {1})")]
    InvalidEdge(i64, i64),

    #[error("quotient edge {0} was not reached by the lift search")]
    Unreachable(QuotientEdge),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),
}
