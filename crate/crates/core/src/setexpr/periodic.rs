use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::SetExpr;

const MAX_PERIOD: u64 = 1 << 16;
const MAX_START: u64 = 1 << 16;

/// Eventually periodic set: `n ≥ start` is a member iff `residues[n % period]`,
/// smaller `n` are listed in `head` (indexed by `n`, slot 0 unused).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Periodic {
    pub period: u64,
    pub residues: Vec<bool>,
    pub start: u64,
    pub head: Vec<bool>,
}

impl Periodic {
    fn pure(period: u64, residues: Vec<bool>) -> Self {
        Periodic {
            period,
            residues,
            start: 1,
            head: vec![false],
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            false
        } else if n < self.start {
            self.head[n as usize]
        } else {
            self.residues[(n % self.period) as usize]
        }
    }

    pub fn of(e: &SetExpr) -> Option<Periodic> {
        match e {
            SetExpr::Finite(xs) => {
                let max = xs.last().copied().unwrap_or(0);
                if max + 1 > MAX_START {
                    return None;
                }
                let mut head = vec![false; max as usize + 1];
                for &x in xs {
                    head[x as usize] = true;
                }
                Some(Periodic {
                    period: 1,
                    residues: vec![false],
                    start: max + 1,
                    head,
                })
            }
            SetExpr::Arith { residue, modulus } => {
                if *modulus > MAX_PERIOD {
                    return None;
                }
                let mut r = vec![false; *modulus as usize];
                r[*residue as usize] = true;
                Some(Periodic::pure(*modulus, r))
            }
            SetExpr::Block(i) => {
                let period = 1u64.checked_shl(*i)?;
                if period > MAX_PERIOD {
                    return None;
                }
                let mut r = vec![false; period as usize];
                r[(period / 2) as usize] = true;
                Some(Periodic::pure(period, r))
            }
            SetExpr::Tail(s) => {
                if *s > MAX_START {
                    return None;
                }
                Some(Periodic {
                    period: 1,
                    residues: vec![true],
                    start: *s,
                    head: vec![false; *s as usize],
                })
            }
            SetExpr::Counted(_) => None,
            SetExpr::Union(a, b) => Self::combine(&Self::of(a)?, &Self::of(b)?, |x, y| x || y),
            SetExpr::Inter(a, b) => Self::combine(&Self::of(a)?, &Self::of(b)?, |x, y| x && y),
            SetExpr::Diff(a, b) => Self::combine(&Self::of(a)?, &Self::of(b)?, |x, y| x && !y),
            SetExpr::Compl(a) => {
                let p = Self::of(a)?;
                Some(Periodic {
                    period: p.period,
                    residues: p.residues.iter().map(|b| !b).collect(),
                    start: p.start,
                    head: std::iter::once(false)
                        .chain(p.head.iter().skip(1).map(|b| !b))
                        .collect(),
                })
            }
        }
    }

    fn combine(a: &Periodic, b: &Periodic, op: impl Fn(bool, bool) -> bool) -> Option<Periodic> {
        let period = a.period.lcm(&b.period);
        if period > MAX_PERIOD {
            return None;
        }
        let start = a.start.max(b.start);
        let residues = (0..period)
            .map(|r| op(a.residues[(r % a.period) as usize], b.residues[(r % b.period) as usize]))
            .collect();
        let head = (0..start)
            .map(|n| n > 0 && op(a.contains(n), b.contains(n)))
            .collect();
        Some(Periodic {
            period,
            residues,
            start,
            head,
        })
    }

    pub fn is_eventually_empty(&self) -> bool {
        !self.residues.iter().any(|&b| b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_eventually_empty() && !self.head.iter().any(|&b| b)
    }

    pub fn density(&self) -> BigRational {
        let c = self.residues.iter().filter(|&&b| b).count();
        BigRational::new(BigInt::from(c), BigInt::from(self.period))
    }

    /// Members below `start`.
    pub fn head_members(&self) -> Vec<u64> {
        (1..self.start).filter(|&n| self.head[n as usize]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setexpr::members;

    #[test]
    fn periodic_agrees_with_enumeration() {
        let exprs = vec![
            SetExpr::Block(3).union(SetExpr::finite([1, 2, 100]).unwrap()),
            SetExpr::arith(2, 6).unwrap().compl().diff(SetExpr::Tail(40)),
            SetExpr::Tail(17).inter(SetExpr::odds()),
        ];
        for e in exprs {
            let p = Periodic::of(&e).unwrap();
            let m = members(&e, 500).unwrap();
            let q: Vec<u64> = (1..=500).filter(|&n| p.contains(n)).collect();
            assert_eq!(m, q, "{e}");
        }
    }

    #[test]
    fn large_moduli_have_no_normal_form() {
        assert!(Periodic::of(&SetExpr::arith(0, 1 << 20).unwrap()).is_none());
        assert!(Periodic::of(&SetExpr::Block(30)).is_none());
    }
}
