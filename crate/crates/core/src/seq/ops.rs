use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::solve::solve_far;
use super::{Body, Point, SeqError, SeqPresentation, SeqResult};
use crate::ideals::{contains, IdealSpec, MembershipVerdict, Verdict};
use crate::setexpr::{EvalSet, SetError, SetExpr};

/// Three-valued truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    /// `True` for `In`.
    pub fn of_in(v: Verdict) -> Truth {
        match v {
            Verdict::In => Truth::True,
            Verdict::Out => Truth::False,
            Verdict::Unknown => Truth::Unknown,
        }
    }

    pub fn as_option(self) -> Option<bool> {
        match self {
            Truth::True => Some(true),
            Truth::False => Some(false),
            Truth::Unknown => None,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convergence {
    Converges,
    Diverges,
    Unknown,
}

impl fmt::Display for Convergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convergence::Converges => "converges",
            Convergence::Diverges => "diverges",
            Convergence::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone)]
pub struct EpsilonCheck {
    pub eps: BigRational,
    pub set: SetExpr,
    pub membership: MembershipVerdict,
}

#[derive(Debug, Clone)]
pub struct ConvergenceVerdict {
    pub verdict: Convergence,
    pub per_epsilon: Vec<EpsilonCheck>,
}

/// `{2⁻¹, …, 2⁻⁸}`.
pub fn default_grid() -> Vec<BigRational> {
    (1..=8).map(|k| BigRational::new(BigInt::one(), BigInt::one() << k)).collect()
}

fn check_grid(grid: &[BigRational]) -> SeqResult<()> {
    if grid.is_empty() {
        return Err(SeqError::Argument("ε-grid is empty".into()));
    }
    if grid.iter().any(|e| !e.is_positive()) {
        return Err(SeqError::Argument("ε-grid entries must be positive".into()));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SeqError::Argument("ε-grid must be strictly descending".into()));
    }
    Ok(())
}

fn check_point(seq: &SeqPresentation, p: &Point) -> SeqResult<()> {
    if p.codomain() != seq.codomain {
        return Err(SeqError::Argument(format!("{p} is not a point of the codomain")));
    }
    Ok(())
}

fn seq_to_set_error(e: SeqError) -> SetError {
    match e {
        SeqError::Set(s) => s,
        other => SetError::Malformed(other.to_string()),
    }
}

/// Indices whose value satisfies `pred`, backed by evaluation.
fn evaluated(
    seq: &SeqPresentation,
    name: String,
    pred: impl Fn(&Point) -> SeqResult<bool> + Send + Sync + 'static,
) -> SetExpr {
    let s = seq.clone();
    SetExpr::counted(EvalSet::new(name, move |n| {
        if !s.domain.contains_point(n)? {
            return Ok(false);
        }
        s.value(n).and_then(|v| pred(&v)).map_err(seq_to_set_error)
    }))
}

/// `{n ∈ M : d(x_n, center) ≥ radius}` (`>` when `strict`).
fn far_set(seq: &SeqPresentation, center: &Point, radius: &BigRational, strict: bool) -> SeqResult<SetExpr> {
    match (&seq.body, center) {
        (Body::FiberMap(fs), _) => {
            let mut parts = Vec::new();
            for (p, f) in fs {
                if p.far_from(center, radius, strict)? {
                    parts.push(f.clone());
                }
            }
            Ok(SetExpr::union_all(parts))
        }
        (Body::ClosedForm(e), Point::Real(c)) => match solve_far(e, c, radius, strict) {
            Some(Ok(s)) => Ok(s.inter_simplified(seq.domain.clone())),
            Some(Err(n)) if seq.domain.contains_point(n)? => {
                Err(SeqError::Presentation(format!("x_n is undefined at n = {n}")))
            }
            _ => Ok(fallback_far(seq, center, radius, strict)),
        },
        _ => Ok(fallback_far(seq, center, radius, strict)),
    }
}

fn fallback_far(seq: &SeqPresentation, center: &Point, radius: &BigRational, strict: bool) -> SetExpr {
    let op = if strict { ">" } else { "≥" };
    let name = format!("{{n : d(x_n,{center}) {op} {radius}}}");
    let (c, r) = (center.clone(), radius.clone());
    evaluated(seq, name, move |v| v.far_from(&c, &r, strict))
}

/// `A(ε) = {n ∈ M : d(x_n, ξ) ≥ ε}`.
pub fn a_eps(seq: &SeqPresentation, xi: &Point, eps: &BigRational) -> SeqResult<SetExpr> {
    if !eps.is_positive() {
        return Err(SeqError::Argument("ε must be positive".into()));
    }
    check_point(seq, xi)?;
    far_set(seq, xi, eps, false)
}

fn local_ideal(seq: &SeqPresentation, ideal: &IdealSpec) -> IdealSpec {
    ideal.restricted_to(seq.domain.clone())
}

/// I-convergence to `xi`, certified on the ε-grid.
pub fn i_converges(
    seq: &SeqPresentation,
    xi: &Point,
    ideal: &IdealSpec,
    grid: &[BigRational],
) -> SeqResult<ConvergenceVerdict> {
    check_grid(grid)?;
    let local = local_ideal(seq, ideal);
    let mut per_epsilon = Vec::new();
    for eps in grid {
        let set = a_eps(seq, xi, eps)?;
        let membership = contains(&local, &set);
        per_epsilon.push(EpsilonCheck {
            eps: eps.clone(),
            set,
            membership,
        });
    }
    let verdict = if per_epsilon.iter().any(|c| c.membership.is_out()) {
        Convergence::Diverges
    } else if per_epsilon.iter().all(|c| c.membership.is_in()) {
        Convergence::Converges
    } else {
        Convergence::Unknown
    };
    Ok(ConvergenceVerdict { verdict, per_epsilon })
}

/// Nonthin means `M ∉ I`.
pub fn is_nonthin(seq: &SeqPresentation, ideal: &IdealSpec) -> Truth {
    Truth::of_in(contains(ideal, &seq.domain).verdict.flip())
}

/// The point `α` with `{n ∈ M : x_n ≠ α} ∈ I/_M`, if any.
pub fn i_eventually_constant(
    seq: &SeqPresentation,
    ideal: &IdealSpec,
) -> SeqResult<Option<(Point, MembershipVerdict)>> {
    let Body::FiberMap(fs) = &seq.body else {
        return Err(SeqError::Unsupported("eventual constancy needs a fiber map".into()));
    };
    let local = local_ideal(seq, ideal);
    let mut found: Vec<(Point, MembershipVerdict)> = Vec::new();
    for (alpha, _) in fs {
        if found.iter().any(|(p, _)| p.same(alpha)) {
            continue;
        }
        let others = SetExpr::union_all(fs.iter().filter(|(p, _)| !p.same(alpha)).map(|(_, f)| f.clone()));
        let v = contains(&local, &others);
        if v.is_in() {
            found.push((alpha.clone(), v));
        }
    }
    if found.len() > 1 {
        return Err(SeqError::Argument(format!(
            "{} and {} both qualify, so the domain is thin",
            found[0].0, found[1].0
        )));
    }
    Ok(found.pop())
}

/// Target sets for [`i_eventually_in`].
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Points(Vec<Point>),
    /// Real interval, open unless `closed`.
    Interval { lo: BigRational, hi: BigRational, closed: bool },
    /// Open ball.
    Ball { center: Point, radius: BigRational },
}

impl Region {
    pub fn contains(&self, p: &Point) -> SeqResult<bool> {
        match self {
            Region::Points(ps) => Ok(ps.iter().any(|q| q.same(p))),
            Region::Interval { lo, hi, closed } => match p {
                Point::Real(x) => Ok(if *closed { lo <= x && x <= hi } else { lo < x && x < hi }),
                _ => Err(SeqError::Argument("intervals hold real points only".into())),
            },
            Region::Ball { center, radius } => Ok(!p.far_from(center, radius, false)?),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EventuallyIn {
    pub truth: Truth,
    /// `{n ∈ M : x_n ∉ S}`.
    pub out_set: SetExpr,
    pub membership: MembershipVerdict,
}

fn outside(seq: &SeqPresentation, region: &Region) -> SeqResult<SetExpr> {
    if let Body::FiberMap(fs) = &seq.body {
        let mut parts = Vec::new();
        for (p, f) in fs {
            if !region.contains(p)? {
                parts.push(f.clone());
            }
        }
        return Ok(SetExpr::union_all(parts));
    }
    let two = BigRational::from_integer(2.into());
    match region {
        Region::Points(ps) if !ps.is_empty() && seq.codomain == super::Codomain::Real => {
            let mut acc: Option<SetExpr> = None;
            for p in ps {
                let s = far_set(seq, p, &BigRational::zero(), true)?;
                acc = Some(match acc {
                    None => s,
                    Some(a) => a.inter(s),
                });
            }
            Ok(acc.unwrap())
        }
        Region::Interval { lo, hi, closed } => {
            let c = Point::Real((lo + hi) / &two);
            far_set(seq, &c, &((hi - lo) / &two), *closed)
        }
        Region::Ball { center, radius } => far_set(seq, center, radius, false),
        _ => {
            let r = region.clone();
            Ok(evaluated(seq, "{n : x_n ∉ S}".into(), move |v| Ok(!r.contains(v)?)))
        }
    }
}

/// `{n ∈ M : x_n ∉ S} ∈ I/_M`.
pub fn i_eventually_in(seq: &SeqPresentation, region: &Region, ideal: &IdealSpec) -> SeqResult<EventuallyIn> {
    let out_set = outside(seq, region)?;
    let membership = contains(&local_ideal(seq, ideal), &out_set);
    Ok(EventuallyIn {
        truth: Truth::of_in(membership.verdict),
        out_set,
        membership,
    })
}

/// Candidates whose near-sets `{n ∈ M : d(x_n, ξ) < ε}` are certainly
/// outside `I/_M` for every ε of the grid.
pub fn i_cluster_points(
    seq: &SeqPresentation,
    ideal: &IdealSpec,
    candidates: &[Point],
    grid: &[BigRational],
) -> SeqResult<Vec<Point>> {
    if candidates.is_empty() {
        return Err(SeqError::Argument("no candidate points".into()));
    }
    check_grid(grid)?;
    let local = local_ideal(seq, ideal);
    let mut out = Vec::new();
    'cand: for xi in candidates {
        for eps in grid {
            let near = seq.domain.clone().diff(a_eps(seq, xi, eps)?);
            if !contains(&local, &near).is_out() {
                continue 'cand;
            }
        }
        out.push(xi.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setexpr::{members, Squares};

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn closed(src: &str) -> SeqPresentation {
        SeqPresentation::parse_closed(src).unwrap()
    }

    fn note22() -> SeqPresentation {
        SeqPresentation::fibers(vec![(Point::int(0), SetExpr::odds()), (Point::int(1), SetExpr::evens())]).unwrap()
    }

    #[test]
    fn a_eps_examples() {
        assert_eq!(a_eps(&closed("1/n"), &Point::int(0), &q(1, 10)).unwrap(), SetExpr::Finite((1..=10).collect()));
        assert_eq!(a_eps(&note22(), &Point::int(0), &q(1, 2)).unwrap(), SetExpr::evens());
        assert_eq!(a_eps(&closed("n"), &Point::int(0), &q(1, 1)).unwrap(), SetExpr::Tail(1));
        assert!(a_eps(&closed("n"), &Point::int(0), &q(0, 1)).is_err());
    }

    #[test]
    fn convergence_examples() {
        let v = i_converges(&note22(), &Point::int(0), &IdealSpec::EvenFin, &[q(1, 2), q(1, 4)]).unwrap();
        assert_eq!(v.verdict, Convergence::Converges);

        let sq = SeqPresentation::fibers(vec![
            (Point::int(1), SetExpr::counted(Squares)),
            (Point::int(0), SetExpr::naturals().diff(SetExpr::counted(Squares))),
        ])
        .unwrap();
        let v = i_converges(&sq, &Point::int(0), &IdealSpec::DensityZero, &[q(1, 2)]).unwrap();
        assert_eq!(v.verdict, Convergence::Converges);
        assert_eq!(members(&v.per_epsilon[0].set, 50).unwrap(), vec![1, 4, 9, 16, 25, 36, 49]);

        let v = i_converges(&closed("(-1)^n"), &Point::int(1), &IdealSpec::Fin, &[q(1, 2)]).unwrap();
        assert_eq!(v.verdict, Convergence::Diverges);
        assert!(i_converges(&closed("n"), &Point::int(0), &IdealSpec::Fin, &[q(1, 4), q(1, 2)]).is_err());
    }

    #[test]
    fn nonthin_examples() {
        let on = |m: SetExpr| closed("n").with_domain(m);
        assert_eq!(is_nonthin(&on(SetExpr::evens()), &IdealSpec::EvenFin), Truth::False);
        assert_eq!(is_nonthin(&on(SetExpr::odds()), &IdealSpec::EvenFin), Truth::True);
        assert_eq!(is_nonthin(&on(SetExpr::naturals()), &IdealSpec::Fin), Truth::True);
    }

    #[test]
    fn eventually_constant_examples() {
        let (p, _) = i_eventually_constant(&note22(), &IdealSpec::EvenFin).unwrap().unwrap();
        assert_eq!(p, Point::int(0));
        let five = SeqPresentation::fibers(vec![(Point::int(5), SetExpr::naturals())]).unwrap();
        assert_eq!(i_eventually_constant(&five, &IdealSpec::Fin).unwrap().unwrap().0, Point::int(5));
        let alt = SeqPresentation::fibers(vec![(Point::int(-1), SetExpr::odds()), (Point::int(1), SetExpr::evens())])
            .unwrap();
        assert!(i_eventually_constant(&alt, &IdealSpec::Fin).unwrap().is_none());
        assert!(matches!(
            i_eventually_constant(&closed("n"), &IdealSpec::Fin),
            Err(SeqError::Unsupported(_))
        ));
    }

    #[test]
    fn eventually_in_examples() {
        let r = i_eventually_in(&note22(), &Region::Points(vec![Point::int(0)]), &IdealSpec::EvenFin).unwrap();
        assert_eq!(r.truth, Truth::True);
        assert_eq!(r.out_set, SetExpr::evens());

        let band = Region::Interval {
            lo: q(-1, 100),
            hi: q(1, 100),
            closed: false,
        };
        let r = i_eventually_in(&closed("1/n"), &band, &IdealSpec::Fin).unwrap();
        assert_eq!(r.truth, Truth::True);
        assert_eq!(r.out_set, SetExpr::Finite((1..=100).collect()));

        let r = i_eventually_in(&closed("(-1)^n"), &Region::Points(vec![Point::int(1)]), &IdealSpec::Fin).unwrap();
        assert_eq!(r.truth, Truth::False);
    }

    #[test]
    fn cluster_examples() {
        let pts = [Point::int(-1), Point::int(0), Point::int(1)];
        let c = i_cluster_points(&closed("(-1)^n"), &IdealSpec::Fin, &pts, &[q(1, 2)]).unwrap();
        assert_eq!(c, vec![Point::int(-1), Point::int(1)]);
        let c = i_cluster_points(&note22(), &IdealSpec::EvenFin, &[Point::int(0), Point::int(1)], &[q(1, 2)]).unwrap();
        assert_eq!(c, vec![Point::int(0)]);
        let c = i_cluster_points(&closed("n"), &IdealSpec::Fin, &[Point::int(0), Point::int(1), Point::int(2)], &[q(1, 2)])
            .unwrap();
        assert!(c.is_empty());
    }
}
