//! Ideal convergence over ℕ = {1, 2, 3, ...}.
//!
//! The crate is organised bottom-up:
//!
//! * [`setexpr`] symbolic subsets of ℕ with exact prefix counting, finiteness
//!   classification and natural density.
//! * [`ideals`] the ideal catalog with three-valued, certificate-carrying
//!   membership decisions.
//! * [`seq`] finitely presented sequences and I-limit analysis.
//! * [`shrink`] witnesses for the shrinking conditions (B) and (C).
//! * [`topolab`] finite topological spaces and the I-notions on them.
//! * [`onepoint`] the one-point I-compactification of finite spaces and the
//!   circle model of ℝ.

pub mod ideals;
pub mod onepoint;
pub mod seq;
pub mod setexpr;
pub mod shrink;
pub mod topolab;

pub use ideals::{contains, IdealSpec, MembershipVerdict, Verdict};
pub use setexpr::{Finiteness, SetExpr};

/// Default window used by windowed checks (2^12).
pub const DEFAULT_WINDOW: u64 = 1 << 12;
