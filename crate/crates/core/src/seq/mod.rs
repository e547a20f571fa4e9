//! Finitely presented sequences `(x_n)_{n∈M}` and their ideal convergence.
//!
//! A sequence I-converges to `ξ` when every `A(ε) = {n ∈ M : d(x_n, ξ) ≥ ε}`
//! lies in `I/_M`. Convergence is certified on a finite ε-grid only.

mod expr;
mod ops;
mod prop26;
mod solve;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::setexpr::{SetError, SetExpr};

pub use expr::{block_coords, Expr, ParseError};
pub use ops::{
    a_eps, default_grid, i_cluster_points, i_converges, i_eventually_constant, i_eventually_in,
    is_nonthin, Convergence, ConvergenceVerdict, EventuallyIn, Region, Truth,
};
pub use prop26::{
    prop26_counterexample, prop26_extract, prop26_sequence, Extraction, Prop26Analysis, RangeRule,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("unsupported presentation: {0}")]
    Unsupported(String),
    #[error("witness error: {0}")]
    Witness(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Set(#[from] SetError),
}

pub type SeqResult<T> = std::result::Result<T, SeqError>;

/// Absolute tolerance for floating-point distances.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// A point of one of the supported metric spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Real(BigRational),
    Plane(f64, f64),
    /// A point of a finite space with the discrete metric.
    Label(String),
}

impl Point {
    pub fn int(v: i64) -> Point {
        Point::Real(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn real(p: i64, q: i64) -> Point {
        Point::Real(BigRational::new(p.into(), q.into()))
    }

    pub fn label(s: impl Into<String>) -> Point {
        Point::Label(s.into())
    }

    pub fn codomain(&self) -> Codomain {
        match self {
            Point::Real(_) => Codomain::Real,
            Point::Plane(..) => Codomain::Plane,
            Point::Label(_) => Codomain::FinitePoints,
        }
    }

    /// `d(self, other) ≥ eps`, or `> eps` when `strict`.
    pub fn far_from(&self, other: &Point, eps: &BigRational, strict: bool) -> SeqResult<bool> {
        match (self, other) {
            (Point::Real(a), Point::Real(b)) => {
                let d = (a - b).abs();
                Ok(if strict { &d > eps } else { &d >= eps })
            }
            (Point::Plane(x1, y1), Point::Plane(x2, y2)) => {
                let d = (x1 - x2).hypot(y1 - y2);
                let e = eps.to_f64().unwrap_or(f64::INFINITY);
                Ok(if strict { d > e + FLOAT_TOLERANCE } else { d >= e - FLOAT_TOLERANCE })
            }
            (Point::Label(a), Point::Label(b)) => {
                let d = BigRational::from_integer(BigInt::from((a != b) as u8));
                Ok(if strict { &d > eps } else { &d >= eps })
            }
            _ => Err(SeqError::Argument(format!("points {self} and {other} live in different spaces"))),
        }
    }

    /// Equality up to the float tolerance.
    pub fn same(&self, other: &Point) -> bool {
        self.far_from(other, &BigRational::zero(), true).ok() == Some(false)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(r) => write!(f, "{r}"),
            Point::Plane(x, y) => write!(f, "({x}, {y})"),
            Point::Label(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Codomain {
    Real,
    Plane,
    FinitePoints,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    /// `x_n` given by an expression in `n`.
    ClosedForm(Expr),
    /// `x_n = p` for `n` in the fiber of `p`.
    FiberMap(Vec<(Point, SetExpr)>),
    /// `x_n` for `n = 2^k + r` given by an expression in `k, r`; explicit
    /// values for `n ≤ initial.len()`.
    BlockFormula { formula: Expr, initial: Vec<BigRational> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeqPresentation {
    pub domain: SetExpr,
    pub body: Body,
    pub codomain: Codomain,
}

impl SeqPresentation {
    pub fn closed_form(e: Expr) -> Self {
        SeqPresentation {
            domain: SetExpr::naturals(),
            body: Body::ClosedForm(e),
            codomain: Codomain::Real,
        }
    }

    /// Parse a closed form over ℕ.
    pub fn parse_closed(src: &str) -> Result<Self, ParseError> {
        Ok(Self::closed_form(Expr::parse(src)?))
    }

    /// Codomain taken from the first point.
    pub fn fibers(fibers: Vec<(Point, SetExpr)>) -> SeqResult<Self> {
        let codomain = fibers
            .first()
            .map(|(p, _)| p.codomain())
            .ok_or_else(|| SeqError::Presentation("fiber map needs at least one fiber".into()))?;
        if fibers.iter().any(|(p, _)| p.codomain() != codomain) {
            return Err(SeqError::Presentation("fiber points from different spaces".into()));
        }
        let domain = if covers_naturals(&fibers) {
            SetExpr::naturals()
        } else {
            SetExpr::union_all(fibers.iter().map(|(_, f)| f.clone()))
        };
        Ok(SeqPresentation {
            domain,
            body: Body::FiberMap(fibers),
            codomain,
        })
    }

    pub fn block_formula(formula: Expr, initial: Vec<BigRational>) -> Self {
        SeqPresentation {
            domain: SetExpr::naturals(),
            body: Body::BlockFormula { formula, initial },
            codomain: Codomain::Real,
        }
    }

    pub fn with_domain(mut self, m: SetExpr) -> Self {
        self.domain = m;
        self
    }

    /// `x_n`; `n` must lie in the domain.
    pub fn value(&self, n: u64) -> SeqResult<Point> {
        if !self.domain.contains_point(n)? {
            return Err(SeqError::Argument(format!("{n} is outside the domain {}", self.domain)));
        }
        match &self.body {
            Body::ClosedForm(e) => Ok(Point::Real(e.eval(n)?)),
            Body::BlockFormula { formula, initial } => match initial.get(n as usize - 1) {
                Some(v) => Ok(Point::Real(v.clone())),
                None => Ok(Point::Real(formula.eval(n)?)),
            },
            Body::FiberMap(fs) => {
                let mut hit = None;
                for (p, f) in fs {
                    if f.contains_point(n)? {
                        if hit.is_some() {
                            return Err(SeqError::Presentation(format!("fibers overlap at {n}")));
                        }
                        hit = Some(p);
                    }
                }
                hit.cloned()
                    .ok_or_else(|| SeqError::Presentation(format!("no fiber contains {n}")))
            }
        }
    }

    /// Natural-number value `x_n`, for sequences of indices.
    pub fn nat_value(&self, n: u64) -> SeqResult<u64> {
        match self.value(n)? {
            Point::Real(r) if r.is_integer() && r.is_positive() => r
                .to_integer()
                .to_u64()
                .ok_or_else(|| SeqError::Presentation(format!("x_{n} = {r} is too large"))),
            p => Err(SeqError::Presentation(format!("x_{n} = {p} is not a natural number"))),
        }
    }

    /// `(n, x_n)` for the domain elements in `[1..window]`.
    pub fn values_upto(&self, window: u64) -> SeqResult<Vec<(u64, Point)>> {
        let dom = crate::setexpr::members(&self.domain, window)?;
        let Body::FiberMap(fs) = &self.body else {
            return dom.into_iter().map(|n| Ok((n, self.value(n)?))).collect();
        };
        let inds = fs
            .iter()
            .map(|(_, f)| f.indicator(window))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = Vec::with_capacity(dom.len());
        for n in dom {
            let mut hits = fs.iter().zip(&inds).filter(|(_, ind)| ind[n as usize]);
            let ((p, _), _) = hits
                .next()
                .ok_or_else(|| SeqError::Presentation(format!("no fiber contains {n}")))?;
            if hits.next().is_some() {
                return Err(SeqError::Presentation(format!("fibers overlap at {n}")));
            }
            out.push((n, p.clone()));
        }
        Ok(out)
    }

    /// Check the fiber and block-formula invariants on `[1..window]`.
    pub fn validate(&self, window: u64) -> SeqResult<()> {
        self.values_upto(window)?;
        if let Body::FiberMap(fs) = &self.body {
            for (i, (p, _)) in fs.iter().enumerate() {
                if fs[..i].iter().any(|(q, _)| q.same(p)) {
                    return Err(SeqError::Presentation(format!("point {p} has two fibers")));
                }
            }
        }
        Ok(())
    }
}

/// Structural check that the fibers cover ℕ: either the union has an
/// exact normal form equal to ℕ, or one fiber is `ℕ \ (union of the rest)`.
fn covers_naturals(fibers: &[(Point, SetExpr)]) -> bool {
    let all = SetExpr::union_all(fibers.iter().map(|(_, f)| f.clone()));
    if let Some(p) = SetExpr::naturals().diff(all).periodic() {
        return p.is_empty();
    }
    fibers.iter().enumerate().any(|(j, (_, f))| match f {
        SetExpr::Diff(a, b) if **a == SetExpr::naturals() => {
            let rest = SetExpr::union_all(
                fibers.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, (_, g))| g.clone()),
            );
            **b == rest
        }
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_formula_values() {
        let s = prop26_sequence();
        let v: Vec<u64> = (1..=8).map(|n| s.nat_value(n).unwrap()).collect();
        assert_eq!(v, vec![2, 1, 4, 3, 8, 7, 6, 5]);
    }

    #[test]
    fn fiber_validation() {
        let ok = SeqPresentation::fibers(vec![(Point::int(0), SetExpr::odds()), (Point::int(1), SetExpr::evens())])
            .unwrap();
        assert!(ok.validate(1 << 10).is_ok());
        let bad = SeqPresentation::fibers(vec![(Point::int(0), SetExpr::Tail(1)), (Point::int(1), SetExpr::evens())])
            .unwrap();
        assert!(bad.validate(10).is_err());
    }

    #[test]
    fn distances() {
        let eps = BigRational::new(1.into(), 2.into());
        assert!(Point::label("a").far_from(&Point::label("b"), &eps, false).unwrap());
        assert!(!Point::label("a").far_from(&Point::label("a"), &eps, false).unwrap());
        assert!(Point::Plane(0.0, 1.0).far_from(&Point::Plane(0.0, -1.0), &eps, false).unwrap());
        assert!(Point::int(1).far_from(&Point::label("a"), &eps, false).is_err());
    }
}
