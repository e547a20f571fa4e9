//! Symbolic subsets of ℕ = {1, 2, 3, ...}.
//!
//! A [`SetExpr`] is a closed grammar of leaves (finite lists, residue
//! classes, dyadic blocks, tails and counted enumerations) combined with
//! boolean operators. Everything can be enumerated exactly on a window
//! `[1..N]`; finiteness and density are decided structurally where a rule
//! applies and reported as unknown otherwise.

mod counted;
mod density;
mod periodic;
mod profile;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use counted::{
    EvalSet, EveryOther, Listed, OnePerBlock, PowersOfTwo, SquareIndexed, Squares,
};
pub use density::{asymptotic_bounds, density, AsymptoticBounds, DensityResult};
pub(crate) use periodic::Periodic;
pub use profile::{BlockProfile, Trace};

/// Largest window any enumeration will materialise.
pub const MAX_WINDOW: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, SetError>;

/// Three-valued finiteness classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Finiteness {
    Finite,
    Infinite,
    Unknown,
}

impl fmt::Display for Finiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Finiteness::Finite => "finite",
            Finiteness::Infinite => "infinite",
            Finiteness::Unknown => "unknown",
        })
    }
}

/// Structural facts a counted enumeration declares about itself.
#[derive(Debug, Clone, Default)]
pub struct Facts {
    pub finiteness: Option<Finiteness>,
    /// Declared natural density, `countBound(N)/N -> density`.
    pub density: Option<num_rational::BigRational>,
    pub profile: Option<BlockProfile>,
    /// Human-readable justification for the declared facts.
    pub note: Option<String>,
    /// A declared superset.
    pub within: Option<Box<SetExpr>>,
}

/// A computable, strictly increasing enumeration together with its own
/// counting function.
pub trait Enumeration: Send + Sync {
    /// Canonical name; two enumerations with the same name are equal.
    fn name(&self) -> String;
    /// All elements in `[1..n]`, strictly increasing.
    fn generate(&self, n: u64) -> Result<Vec<u64>>;
    /// `|self ∩ [1..n]|`.
    fn count_bound(&self, n: u64) -> Result<u64>;
    fn facts(&self) -> Facts {
        Facts::default()
    }
}

/// Shared handle to an [`Enumeration`].
#[derive(Clone)]
pub struct Counted(Arc<dyn Enumeration>);

impl Counted {
    pub fn new<E: Enumeration + 'static>(e: E) -> Self {
        Counted(Arc::new(e))
    }

    pub fn name(&self) -> String {
        self.0.name()
    }

    pub fn facts(&self) -> Facts {
        self.0.facts()
    }

    pub fn count_bound(&self, n: u64) -> Result<u64> {
        self.0.count_bound(n)
    }

    /// Enumerate on `[1..n]`, checking monotonicity and agreement with the
    /// declared counting function.
    pub fn checked_members(&self, n: u64) -> Result<Vec<u64>> {
        let xs = self.0.generate(n)?;
        let mut prev = 0u64;
        for &x in &xs {
            if x <= prev || x > n {
                return Err(SetError::Malformed(format!(
                    "counted({}) generator is not strictly increasing within [1..{n}] at {x}",
                    self.name()
                )));
            }
            prev = x;
        }
        let bound = self.0.count_bound(n)?;
        if bound != xs.len() as u64 {
            return Err(SetError::Malformed(format!(
                "counted({}) generated {} elements up to {n} but countBound says {bound}",
                self.name(),
                xs.len()
            )));
        }
        Ok(xs)
    }
}

impl fmt::Debug for Counted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Counted({})", self.name())
    }
}

impl PartialEq for Counted {
    fn eq(&self, other: &Self) -> bool {
        self.name() == other.name()
    }
}

impl Eq for Counted {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    /// Strictly increasing list of naturals ≥ 1.
    Finite(Vec<u64>),
    /// `{n : n ≡ residue (mod modulus)}`, `modulus ≥ 1`, `residue < modulus`.
    Arith { residue: u64, modulus: u64 },
    /// Δᵢ: naturals whose 2-adic valuation is `i - 1`, `i ≥ 1`.
    Block(u32),
    Counted(Counted),
    /// `{n : n ≥ start}`, `start ≥ 1`.
    Tail(u64),
    Union(Box<SetExpr>, Box<SetExpr>),
    Inter(Box<SetExpr>, Box<SetExpr>),
    Diff(Box<SetExpr>, Box<SetExpr>),
    Compl(Box<SetExpr>),
}

impl SetExpr {
    /// Finite set from arbitrary naturals; sorts and deduplicates, rejects 0.
    pub fn finite<I: IntoIterator<Item = u64>>(xs: I) -> Result<Self> {
        let mut v: Vec<u64> = xs.into_iter().collect();
        if v.contains(&0) {
            return Err(SetError::Argument("0 is not a natural number here".into()));
        }
        v.sort_unstable();
        v.dedup();
        Ok(SetExpr::Finite(v))
    }

    pub fn empty() -> Self {
        SetExpr::Finite(Vec::new())
    }

    pub fn naturals() -> Self {
        SetExpr::Tail(1)
    }

    pub fn arith(residue: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(SetError::Argument("arith modulus must be ≥ 1".into()));
        }
        Ok(SetExpr::Arith {
            residue: residue % modulus,
            modulus,
        })
    }

    pub fn block(i: u32) -> Result<Self> {
        if i == 0 || i > 64 {
            return Err(SetError::Argument(format!("block index {i} outside 1..=64")));
        }
        Ok(SetExpr::Block(i))
    }

    pub fn tail(start: u64) -> Self {
        SetExpr::Tail(start.max(1))
    }

    pub fn counted<E: Enumeration + 'static>(e: E) -> Self {
        SetExpr::Counted(Counted::new(e))
    }

    pub fn evens() -> Self {
        SetExpr::Arith { residue: 0, modulus: 2 }
    }

    pub fn odds() -> Self {
        SetExpr::Arith { residue: 1, modulus: 2 }
    }

    pub fn union(self, other: SetExpr) -> Self {
        SetExpr::Union(Box::new(self), Box::new(other))
    }

    pub fn inter(self, other: SetExpr) -> Self {
        SetExpr::Inter(Box::new(self), Box::new(other))
    }

    pub fn diff(self, other: SetExpr) -> Self {
        SetExpr::Diff(Box::new(self), Box::new(other))
    }

    pub fn compl(self) -> Self {
        SetExpr::Compl(Box::new(self))
    }

    /// Union of many sets; the empty union is `Finite([])`.
    pub fn union_all<I: IntoIterator<Item = SetExpr>>(sets: I) -> Self {
        sets.into_iter()
            .reduce(SetExpr::union)
            .unwrap_or_else(SetExpr::empty)
    }

    /// Intersection that drops a trivial `Tail(1)` operand.
    pub fn inter_simplified(self, other: SetExpr) -> Self {
        match (self, other) {
            (SetExpr::Tail(1), e) | (e, SetExpr::Tail(1)) => e,
            (a, b) => a.inter(b),
        }
    }

    /// Exact membership of a single natural.
    pub fn contains_point(&self, n: u64) -> Result<bool> {
        if n == 0 {
            return Ok(false);
        }
        Ok(match self {
            SetExpr::Finite(xs) => xs.binary_search(&n).is_ok(),
            SetExpr::Arith { residue, modulus } => n % modulus == *residue,
            SetExpr::Block(i) => n.trailing_zeros() == i - 1,
            SetExpr::Tail(s) => n >= *s,
            SetExpr::Counted(c) => c.checked_members(n)?.last() == Some(&n),
            SetExpr::Union(a, b) => a.contains_point(n)? || b.contains_point(n)?,
            SetExpr::Inter(a, b) => a.contains_point(n)? && b.contains_point(n)?,
            SetExpr::Diff(a, b) => a.contains_point(n)? && !b.contains_point(n)?,
            SetExpr::Compl(a) => !a.contains_point(n)?,
        })
    }

    /// Indicator vector of length `n + 1`; index 0 is always `false`.
    pub fn indicator(&self, n: u64) -> Result<Vec<bool>> {
        if n > MAX_WINDOW {
            return Err(SetError::Argument(format!("window {n} exceeds {MAX_WINDOW}")));
        }
        let len = n as usize + 1;
        let mut v = vec![false; len];
        match self {
            SetExpr::Finite(xs) => {
                for &x in xs.iter().take_while(|&&x| x <= n) {
                    v[x as usize] = true;
                }
            }
            SetExpr::Arith { residue, modulus } => {
                let first = if *residue == 0 { *modulus } else { *residue };
                let mut x = first;
                while x <= n {
                    v[x as usize] = true;
                    x = match x.checked_add(*modulus) {
                        Some(y) => y,
                        None => break,
                    };
                }
            }
            SetExpr::Block(i) => {
                let step = 1u64.checked_shl(*i).unwrap_or(0);
                let first = 1u64 << (i - 1);
                let mut x = first;
                while x <= n {
                    v[x as usize] = true;
                    if step == 0 {
                        break;
                    }
                    x = match x.checked_add(step) {
                        Some(y) => y,
                        None => break,
                    };
                }
            }
            SetExpr::Tail(s) => {
                for slot in v.iter_mut().skip(*s as usize) {
                    *slot = true;
                }
            }
            SetExpr::Counted(c) => {
                for x in c.checked_members(n)? {
                    v[x as usize] = true;
                }
            }
            SetExpr::Union(a, b) => {
                let (x, y) = (a.indicator(n)?, b.indicator(n)?);
                for i in 1..len {
                    v[i] = x[i] || y[i];
                }
            }
            SetExpr::Inter(a, b) => {
                let (x, y) = (a.indicator(n)?, b.indicator(n)?);
                for i in 1..len {
                    v[i] = x[i] && y[i];
                }
            }
            SetExpr::Diff(a, b) => {
                let (x, y) = (a.indicator(n)?, b.indicator(n)?);
                for i in 1..len {
                    v[i] = x[i] && !y[i];
                }
            }
            SetExpr::Compl(a) => {
                let x = a.indicator(n)?;
                for i in 1..len {
                    v[i] = !x[i];
                }
            }
        }
        Ok(v)
    }

    /// Eventually periodic normal form, when every leaf admits one and the
    /// combined period stays small.
    pub(crate) fn periodic(&self) -> Option<Periodic> {
        Periodic::of(self)
    }

    /// Structural per-block trace profile.
    pub fn block_profile(&self) -> BlockProfile {
        BlockProfile::of(self)
    }
}

/// `e ∩ [1..n]` in increasing order.
pub fn members(e: &SetExpr, n: u64) -> Result<Vec<u64>> {
    if n < 1 {
        return Err(SetError::Argument("window must be ≥ 1".into()));
    }
    let v = e.indicator(n)?;
    Ok((1..=n).filter(|&i| v[i as usize]).collect())
}

/// `|e ∩ [1..n]|`.
pub fn count_prefix(e: &SetExpr, n: u64) -> Result<u64> {
    if n < 1 {
        return Err(SetError::Argument("window must be ≥ 1".into()));
    }
    Ok(e.indicator(n)?.iter().filter(|&&b| b).count() as u64)
}

/// Structural finiteness classification. Never wrong; falls back to
/// [`Finiteness::Unknown`].
pub fn classify_finiteness(e: &SetExpr) -> Finiteness {
    if let Some(p) = e.periodic() {
        return if p.is_eventually_empty() {
            Finiteness::Finite
        } else {
            Finiteness::Infinite
        };
    }
    let by_rule = match e {
        SetExpr::Finite(_) => Finiteness::Finite,
        SetExpr::Arith { .. } | SetExpr::Block(_) | SetExpr::Tail(_) => Finiteness::Infinite,
        SetExpr::Counted(c) => c.facts().finiteness.unwrap_or(Finiteness::Unknown),
        SetExpr::Union(a, b) => match (classify_finiteness(a), classify_finiteness(b)) {
            (Finiteness::Finite, Finiteness::Finite) => Finiteness::Finite,
            (Finiteness::Infinite, _) | (_, Finiteness::Infinite) => Finiteness::Infinite,
            _ => Finiteness::Unknown,
        },
        SetExpr::Inter(a, b) => match (classify_finiteness(a), classify_finiteness(b)) {
            (Finiteness::Finite, _) | (_, Finiteness::Finite) => Finiteness::Finite,
            _ if declared_within(a, b) => classify_finiteness(a),
            _ if declared_within(b, a) => classify_finiteness(b),
            _ => Finiteness::Unknown,
        },
        SetExpr::Diff(a, b) => match (classify_finiteness(a), classify_finiteness(b)) {
            (Finiteness::Finite, _) => Finiteness::Finite,
            (Finiteness::Infinite, Finiteness::Finite) => Finiteness::Infinite,
            _ => Finiteness::Unknown,
        },
        SetExpr::Compl(a) => match classify_finiteness(a) {
            Finiteness::Finite => Finiteness::Infinite,
            _ => Finiteness::Unknown,
        },
    };
    if by_rule != Finiteness::Unknown {
        return by_rule;
    }
    let by_profile = e.block_profile().finiteness();
    if by_profile != Finiteness::Unknown {
        return by_profile;
    }
    if asymptotic_bounds(e).lower_positive() {
        return Finiteness::Infinite;
    }
    Finiteness::Unknown
}

/// `a` is counted with a declared superset that is provably inside `b`.
fn declared_within(a: &SetExpr, b: &SetExpr) -> bool {
    let SetExpr::Counted(c) = a else {
        return false;
    };
    c.facts()
        .within
        .and_then(|w| w.diff(b.clone()).periodic())
        .is_some_and(|p| p.is_empty())
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Finite(xs) => {
                f.write_str("finite{")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("}")
            }
            SetExpr::Arith { residue, modulus } => write!(f, "arith({residue},{modulus})"),
            SetExpr::Block(i) => write!(f, "block({i})"),
            SetExpr::Counted(c) => write!(f, "counted({})", c.name()),
            SetExpr::Tail(s) => write!(f, "tail({s})"),
            SetExpr::Union(a, b) => write!(f, "union({a},{b})"),
            SetExpr::Inter(a, b) => write!(f, "inter({a},{b})"),
            SetExpr::Diff(a, b) => write!(f, "diff({a},{b})"),
            SetExpr::Compl(a) => write!(f, "compl({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_block(i: u32, n: u64) -> Vec<u64> {
        (1..=n).filter(|&x| {
            let mut v = 0;
            let mut y = x;
            while y % 2 == 0 {
                y /= 2;
                v += 1;
            }
            v == i - 1
        })
        .collect()
    }

    #[test]
    fn members_examples() {
        assert_eq!(members(&SetExpr::evens(), 6).unwrap(), vec![2, 4, 6]);
        assert_eq!(members(&SetExpr::Block(1), 10).unwrap(), brute_block(1, 10));
        assert_eq!(members(&SetExpr::Block(1), 10).unwrap(), vec![1, 3, 5, 7, 9]);
        let e = SetExpr::tail(1).diff(SetExpr::evens());
        assert_eq!(members(&e, 5).unwrap(), vec![1, 3, 5]);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_prefix(&SetExpr::evens(), 100).unwrap(), 50);
        assert_eq!(brute_block(2, 16), vec![2, 6, 10, 14]);
        assert_eq!(count_prefix(&SetExpr::Block(2), 16).unwrap(), 4);
        let squares_brute = (1..=100u64).filter(|&x| (1..=10).any(|r| r * r == x)).count();
        assert_eq!(squares_brute, 10);
        assert_eq!(count_prefix(&SetExpr::counted(Squares), 100).unwrap(), 10);
    }

    #[test]
    fn finiteness_examples() {
        assert_eq!(
            classify_finiteness(&SetExpr::finite([1, 2, 3]).unwrap()),
            Finiteness::Finite
        );
        assert_eq!(classify_finiteness(&SetExpr::odds()), Finiteness::Infinite);
        let e = SetExpr::counted(Squares).inter(SetExpr::evens());
        assert_eq!(classify_finiteness(&e), Finiteness::Unknown);
    }

    #[test]
    fn finiteness_of_disjoint_progressions() {
        let e = SetExpr::arith(1, 4).unwrap().inter(SetExpr::arith(2, 4).unwrap());
        assert_eq!(classify_finiteness(&e), Finiteness::Finite);
        let e = SetExpr::Block(3).inter(SetExpr::arith(0, 3).unwrap());
        assert_eq!(classify_finiteness(&e), Finiteness::Infinite);
    }

    #[test]
    fn zero_and_bad_arguments_rejected() {
        assert!(SetExpr::finite([0, 1]).is_err());
        assert!(SetExpr::arith(0, 0).is_err());
        assert!(SetExpr::block(0).is_err());
        assert!(members(&SetExpr::evens(), 0).is_err());
    }

    struct Broken;
    impl Enumeration for Broken {
        fn name(&self) -> String {
            "broken".into()
        }
        fn generate(&self, n: u64) -> Result<Vec<u64>> {
            Ok(if n >= 3 { vec![3, 2] } else { vec![] })
        }
        fn count_bound(&self, n: u64) -> Result<u64> {
            Ok(if n >= 3 { 2 } else { 0 })
        }
    }

    struct Miscounted;
    impl Enumeration for Miscounted {
        fn name(&self) -> String {
            "miscounted".into()
        }
        fn generate(&self, n: u64) -> Result<Vec<u64>> {
            Ok((1..=n).collect())
        }
        fn count_bound(&self, n: u64) -> Result<u64> {
            Ok(n / 2)
        }
    }

    #[test]
    fn malformed_counted_sets_are_errors() {
        assert!(matches!(
            members(&SetExpr::counted(Broken), 5),
            Err(SetError::Malformed(_))
        ));
        assert!(matches!(
            count_prefix(&SetExpr::counted(Miscounted), 5),
            Err(SetError::Malformed(_))
        ));
    }

    #[test]
    fn block_partition_small() {
        let n = 64;
        let mut seen = vec![0u32; n as usize + 1];
        for i in 1..=7 {
            for x in members(&SetExpr::Block(i), n).unwrap() {
                seen[x as usize] += 1;
            }
        }
        assert!(seen[1..].iter().all(|&c| c == 1));
    }

    #[test]
    fn display_round_shape() {
        let e = SetExpr::Block(3).union(SetExpr::finite([2, 5]).unwrap()).compl();
        assert_eq!(e.to_string(), "compl(union(block(3),finite{2,5}))");
    }
}
