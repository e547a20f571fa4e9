//! Finite topological spaces and their ideal-sequential notions.
//!
//! On a finite space, convergence of a sequence is decided by which fiber
//! unions lie in the ideal, so every notion reduces to finitely many
//! membership queries. Points are indices; sets of points are bitmasks.

mod inotions;
mod space;

pub use inotions::{
    check_thm212_bc, i_closure, is_i_closed, is_i_compact, is_i_continuous, is_i_open, is_i_sequential,
    is_i_us, seq_limits, CompactReport, FinMap, FinSeq, Limits, MembershipTable, ResidueSeq, Thm212Report,
};
pub use space::{enumerate_topologies, FinSpace, MAX_POINTS};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopoError {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Set(#[from] crate::setexpr::SetError),
}

pub type TopoResult<T> = std::result::Result<T, TopoError>;
