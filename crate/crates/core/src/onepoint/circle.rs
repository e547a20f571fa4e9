//! The circle `S¹ = ℝ ∪ {α}`: opens are the usual opens of `S¹∖{α}` together
//! with the cofinite sets containing `α`. Points are sampled, the topology
//! is applied by rule.

use std::f64::consts::PI;
use std::fmt;

use crate::ideals::{contains, IdealSpec, Verdict};
use crate::seq::Truth;
use crate::setexpr::SetExpr;
use crate::topolab::{TopoError, TopoResult};

pub const CIRCLE_TOLERANCE: f64 = 1e-9;

/// Coordinates of the point at infinity.
pub const CIRCLE_ALPHA: (f64, f64) = (0.0, -1.0);

/// Embedding of `ℝ` onto `S¹∖{α}`: the upper semicircle for `|x| ≤ 1`, the
/// lower one (inverse stereographic projection) beyond.
pub fn circle_e(x: f64) -> (f64, f64) {
    if x.abs() <= 1.0 {
        (x, (1.0 - x * x).sqrt())
    } else {
        let d = x * x + 1.0;
        (2.0 * x / d, -(x * x - 1.0) / d)
    }
}

/// The map with the outer branch on the upper semicircle. It fails to be
/// injective: it sends `0.8` and `2` to the same point.
pub fn circle_e_upper(x: f64) -> (f64, f64) {
    if x.abs() <= 1.0 {
        (x, (1.0 - x * x).sqrt())
    } else {
        let d = x * x + 1.0;
        (2.0 * x / d, (x * x - 1.0) / d)
    }
}

pub fn circle_e_inverse(p: (f64, f64)) -> TopoResult<f64> {
    let (a, b) = p;
    if ((a * a + b * b).sqrt() - 1.0).abs() > CIRCLE_TOLERANCE {
        return Err(TopoError::Argument(format!("({a}, {b}) is not on the unit circle")));
    }
    if dist(p, CIRCLE_ALPHA) <= CIRCLE_TOLERANCE {
        return Err(TopoError::Argument("α has no preimage".into()));
    }
    Ok(if b > 0.0 { a } else { a / (1.0 + b) })
}

fn dist(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

fn angle(p: (f64, f64)) -> f64 {
    p.1.atan2(p.0)
}

fn angular_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    let d = (angle(p) - angle(q)).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn at_angle(t: f64) -> (f64, f64) {
    (t.cos(), t.sin())
}

/// A point of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CirclePoint {
    Alpha,
    At(f64, f64),
}

impl CirclePoint {
    /// A point on the circle; points within tolerance of `α` become `α`.
    pub fn new(x: f64, y: f64) -> TopoResult<Self> {
        if (x.hypot(y) - 1.0).abs().is_nan() || (x.hypot(y) - 1.0).abs() > CIRCLE_TOLERANCE {
            return Err(TopoError::Argument(format!("({x}, {y}) is not on the unit circle")));
        }
        Ok(if dist((x, y), CIRCLE_ALPHA) <= CIRCLE_TOLERANCE { CirclePoint::Alpha } else { CirclePoint::At(x, y) })
    }

    /// `e(x)`.
    pub fn of_real(x: f64) -> Self {
        let (a, b) = circle_e(x);
        CirclePoint::At(a, b)
    }

    pub fn coords(self) -> (f64, f64) {
        match self {
            CirclePoint::Alpha => CIRCLE_ALPHA,
            CirclePoint::At(x, y) => (x, y),
        }
    }

    pub fn is_alpha(self) -> bool {
        self == CirclePoint::Alpha
    }

    pub fn same(self, other: CirclePoint) -> bool {
        dist(self.coords(), other.coords()) <= CIRCLE_TOLERANCE
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CirclePoint::Alpha => f.write_str("α"),
            CirclePoint::At(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// Grid scan of a map `ℝ → S¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct Injectivity {
    pub points: usize,
    /// Largest `| |e(x)| - 1 |`.
    pub max_norm_error: f64,
    /// Smallest distance between images of distinct grid points, with the
    /// grid values attaining it.
    pub min_distance: f64,
    pub closest: (f64, f64),
    /// Images follow the grid in cyclic order, so the map does not fold
    /// back over itself between grid points.
    pub cyclic_order: bool,
    pub injective: bool,
}

/// Images of `n ≥ 3` evenly spaced points of `[lo, hi]`. Sorting by angle
/// makes the closest pair an angular neighbour, so the scan is `n log n`.
pub fn grid_injectivity(e: fn(f64) -> (f64, f64), lo: f64, hi: f64, n: usize) -> Injectivity {
    let n = n.max(3);
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let images: Vec<(f64, f64)> = xs.iter().map(|&x| e(x)).collect();
    let max_norm_error = images.iter().map(|p| (p.0.hypot(p.1) - 1.0).abs()).fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| angle(images[i]).total_cmp(&angle(images[j])));
    let (mut min_distance, mut closest) = (f64::INFINITY, (xs[0], xs[1]));
    let mut steps = [0usize; 2];
    for w in 0..n {
        let (i, j) = (order[w], order[(w + 1) % n]);
        let d = dist(images[i], images[j]);
        if d < min_distance {
            min_distance = d;
            closest = (xs[i], xs[j]);
        }
        if (i + 1) % n == j {
            steps[0] += 1;
        }
        if (j + 1) % n == i {
            steps[1] += 1;
        }
    }
    let cyclic_order = steps.contains(&n);
    Injectivity {
        points: n,
        max_norm_error,
        min_distance,
        closest,
        cyclic_order,
        injective: cyclic_order && min_distance > 0.0,
    }
}

fn merge_fibers(fibers: &[(CirclePoint, SetExpr)]) -> Vec<(CirclePoint, SetExpr)> {
    let mut out: Vec<(CirclePoint, SetExpr)> = Vec::new();
    for (p, f) in fibers {
        match out.iter_mut().find(|(q, _)| q.same(*p)) {
            Some((_, g)) => *g = SetExpr::union(g.clone(), f.clone()),
            None => out.push((*p, f.clone())),
        }
    }
    out
}

fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Truth {
    let mut unknown = false;
    for v in verdicts {
        match v {
            Verdict::Out => return Truth::False,
            Verdict::Unknown => unknown = true,
            Verdict::In => {}
        }
    }
    if unknown {
        Truth::Unknown
    } else {
        Truth::True
    }
}

/// Convergence to `α` of the sequence with the given value fibers, relative
/// to the ideal restricted to its domain: every fiber off `α` must be small.
pub fn circle_converges_to_alpha(fibers: &[(CirclePoint, SetExpr)], ideal: &IdealSpec) -> Truth {
    let fibers = merge_fibers(fibers);
    let local = ideal.restricted_to(SetExpr::union_all(fibers.iter().map(|(_, f)| f.clone())));
    combine(fibers.iter().filter(|(p, _)| !p.is_alpha()).map(|(_, f)| contains(&local, f).verdict))
}

/// The same verdict from the definition: for every cofinite open
/// `U = S¹∖F` around `α`, with `F` ranging over sets of attained values,
/// the indices landing in `F` form a small set.
pub fn circle_converges_by_opens(fibers: &[(CirclePoint, SetExpr)], ideal: &IdealSpec) -> Truth {
    let fibers = merge_fibers(fibers);
    let local = ideal.restricted_to(SetExpr::union_all(fibers.iter().map(|(_, f)| f.clone())));
    let values: Vec<&SetExpr> = fibers.iter().filter(|(p, _)| !p.is_alpha()).map(|(_, f)| f).collect();
    combine((1u64..1 << values.len()).map(|mask| {
        let outside = SetExpr::union_all((0..values.len()).filter(|i| mask >> i & 1 == 1).map(|i| values[i].clone()));
        contains(&local, &outside).verdict
    }))
}

/// How two distinct points relate under the circle topology.
#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    /// Disjoint open arcs of the given half-width (radians) around each
    /// point, both avoiding `α`.
    Arcs { half_width: f64 },
    /// The argument that no disjoint neighbourhoods exist, with an instance:
    /// the arc around the ordinary point and a cofinite set missing
    /// `excluded` share `common`.
    NotSeparated {
        steps: Vec<String>,
        half_width: f64,
        excluded: Vec<CirclePoint>,
        common: CirclePoint,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub p: CirclePoint,
    pub q: CirclePoint,
    pub separation: Separation,
}

impl PairReport {
    pub fn separated(&self) -> bool {
        matches!(self.separation, Separation::Arcs { .. })
    }
}

const SAMPLE_HALF_WIDTH: f64 = 0.1;
const SAMPLE_EXCLUDED: usize = 8;

pub fn circle_pair(p: CirclePoint, q: CirclePoint) -> TopoResult<PairReport> {
    if p.same(q) {
        return Err(TopoError::Argument(format!("{p} and {q} coincide")));
    }
    let separation = match (p.is_alpha(), q.is_alpha()) {
        (false, false) => {
            let (a, b) = (p.coords(), q.coords());
            let gap = angular_distance(a, b).min(angular_distance(a, CIRCLE_ALPHA)).min(angular_distance(b, CIRCLE_ALPHA));
            Separation::Arcs { half_width: gap / 3.0 }
        }
        _ => {
            let ordinary = if p.is_alpha() { q } else { p }.coords();
            let half_width = SAMPLE_HALF_WIDTH.min(angular_distance(ordinary, CIRCLE_ALPHA) / 2.0);
            let base = angle(ordinary);
            let excluded: Vec<CirclePoint> = (0..SAMPLE_EXCLUDED)
                .map(|j| {
                    let (x, y) = at_angle(base + half_width * j as f64 / SAMPLE_EXCLUDED as f64);
                    CirclePoint::At(x, y)
                })
                .collect();
            let (x, y) = at_angle(base + half_width / (2 * SAMPLE_EXCLUDED) as f64);
            let common = CirclePoint::At(x, y);
            debug_assert!(excluded.iter().all(|e| !e.same(common)));
            Separation::NotSeparated {
                steps: vec![
                    "an open set containing α is cofinite".into(),
                    format!("an open set containing {} contains an arc around it, so it is infinite", CirclePoint::At(ordinary.0, ordinary.1)),
                    "an infinite set meets every cofinite set".into(),
                ],
                half_width,
                excluded,
                common,
            }
        }
    };
    Ok(PairReport { p, q, separation })
}

/// `α` and `e(0)` have no disjoint neighbourhoods.
pub fn circle_not_hausdorff() -> PairReport {
    circle_pair(CirclePoint::Alpha, CirclePoint::of_real(0.0)).expect("distinct points")
}
