use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{classify_finiteness, Finiteness, Result, SetError, SetExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityResult {
    Exact(BigRational),
    /// Min and max of the prefix ratios `|e ∩ [1..n]| / n` over
    /// `n ∈ [window/2, window]`.
    Bounds {
        lower: BigRational,
        upper: BigRational,
        window: u64,
    },
    Unknown,
}

/// Proven bounds on the lower and upper asymptotic density: `lower ≤
/// liminf` and `limsup ≤ upper`. Equal bounds mean the density exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticBounds {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl AsymptoticBounds {
    fn exact(d: BigRational) -> Self {
        AsymptoticBounds {
            lower: d.clone(),
            upper: d,
        }
    }

    fn trivial() -> Self {
        AsymptoticBounds {
            lower: BigRational::zero(),
            upper: BigRational::one(),
        }
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        (self.lower == self.upper).then_some(&self.lower)
    }

    pub fn lower_positive(&self) -> bool {
        self.lower > BigRational::zero()
    }

    pub fn upper_zero(&self) -> bool {
        self.upper.is_zero()
    }
}

fn ratio(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn clamp01(x: BigRational) -> BigRational {
    if x < BigRational::zero() {
        BigRational::zero()
    } else if x > BigRational::one() {
        BigRational::one()
    } else {
        x
    }
}

/// Structural density bounds by rule table.
pub fn asymptotic_bounds(e: &SetExpr) -> AsymptoticBounds {
    if let Some(p) = e.periodic() {
        return AsymptoticBounds::exact(p.density());
    }
    match e {
        SetExpr::Finite(_) => AsymptoticBounds::exact(BigRational::zero()),
        SetExpr::Arith { modulus, .. } => AsymptoticBounds::exact(ratio(1, *modulus)),
        SetExpr::Block(i) => AsymptoticBounds::exact(BigRational::new(
            BigInt::one(),
            BigInt::one() << *i as usize,
        )),
        SetExpr::Tail(_) => AsymptoticBounds::exact(BigRational::one()),
        SetExpr::Counted(c) => {
            let facts = c.facts();
            if let Some(d) = facts.density {
                AsymptoticBounds::exact(d)
            } else if facts.finiteness == Some(Finiteness::Finite) {
                AsymptoticBounds::exact(BigRational::zero())
            } else {
                AsymptoticBounds::trivial()
            }
        }
        SetExpr::Union(a, b) => {
            let (x, y) = (asymptotic_bounds(a), asymptotic_bounds(b));
            let disjoint = classify_finiteness(&(**a).clone().inter((**b).clone()))
                == Finiteness::Finite;
            let lower = if disjoint {
                &x.lower + &y.lower
            } else {
                x.lower.clone().max(y.lower.clone())
            };
            AsymptoticBounds {
                lower: clamp01(lower),
                upper: clamp01(x.upper + y.upper),
            }
        }
        SetExpr::Inter(..) => inter_chain_bounds(e),
        SetExpr::Diff(a, b) => inter_bounds(asymptotic_bounds(a), compl_bounds(asymptotic_bounds(b))),
        SetExpr::Compl(a) => compl_bounds(asymptotic_bounds(a)),
    }
}

/// Flattens nested intersections, drops repeated factors and merges the
/// periodic ones before applying the pairwise bound, which would otherwise
/// lose density on `A ∩ P ∩ P`.
fn inter_chain_bounds(e: &SetExpr) -> AsymptoticBounds {
    fn flatten<'a>(e: &'a SetExpr, out: &mut Vec<&'a SetExpr>) {
        match e {
            SetExpr::Inter(a, b) => {
                flatten(a, out);
                flatten(b, out);
            }
            other => {
                if !out.contains(&other) {
                    out.push(other)
                }
            }
        }
    }
    let mut factors = Vec::new();
    flatten(e, &mut factors);
    let (periodic, rest): (Vec<&SetExpr>, Vec<&SetExpr>) = factors.into_iter().partition(|f| f.periodic().is_some());
    let periodic = periodic.into_iter().cloned().reduce(SetExpr::inter);
    periodic
        .iter()
        .chain(rest)
        .map(asymptotic_bounds)
        .reduce(inter_bounds)
        .unwrap_or_else(|| AsymptoticBounds::exact(BigRational::one()))
}

fn inter_bounds(x: AsymptoticBounds, y: AsymptoticBounds) -> AsymptoticBounds {
    AsymptoticBounds {
        lower: clamp01(&x.lower + &y.lower - BigRational::one()),
        upper: x.upper.min(y.upper),
    }
}

fn compl_bounds(x: AsymptoticBounds) -> AsymptoticBounds {
    AsymptoticBounds {
        lower: BigRational::one() - x.upper,
        upper: BigRational::one() - x.lower,
    }
}

/// Natural density of `e`: exact when the rule table decides it, otherwise
/// empirical prefix-ratio bounds on `[window/2, window]`.
pub fn density(e: &SetExpr, window: u64) -> Result<DensityResult> {
    if window < 1 {
        return Err(SetError::Argument("density window must be ≥ 1".into()));
    }
    let b = asymptotic_bounds(e);
    if let Some(d) = b.exact_value() {
        return Ok(DensityResult::Exact(d.clone()));
    }
    if window > super::MAX_WINDOW {
        return Ok(DensityResult::Unknown);
    }
    let ind = e.indicator(window)?;
    let from = (window / 2).max(1);
    let mut count = 0u64;
    let mut lower: Option<(u64, u64)> = None;
    let mut upper: Option<(u64, u64)> = None;
    for n in 1..=window {
        if ind[n as usize] {
            count += 1;
        }
        if n < from {
            continue;
        }
        // compare count/n without division
        if lower.is_none_or(|(c, m)| (count as u128) * (m as u128) < (c as u128) * (n as u128)) {
            lower = Some((count, n));
        }
        if upper.is_none_or(|(c, m)| (count as u128) * (m as u128) > (c as u128) * (n as u128)) {
            upper = Some((count, n));
        }
    }
    let (lc, ln) = lower.expect("nonempty checkpoint range");
    let (uc, un) = upper.expect("nonempty checkpoint range");
    Ok(DensityResult::Bounds {
        lower: ratio(lc, ln),
        upper: ratio(uc, un),
        window,
    })
}
