//! Exact solution sets of `|x_n - c| ≥ ρ` (or `> ρ`) for closed forms that
//! are rational functions of `n` on each parity class.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::expr::{pow, Expr};
use crate::setexpr::SetExpr;

/// Largest root bound we are willing to scan below.
const MAX_BOUND: u64 = 1 << 20;
const MAX_DEGREE: usize = 64;

/// Dense polynomial, coefficients from degree 0 upwards, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly(Vec<BigRational>);

impl Poly {
    fn constant(c: BigRational) -> Poly {
        Poly(vec![c]).trim()
    }

    fn n() -> Poly {
        Poly(vec![BigRational::zero(), BigRational::one()])
    }

    fn trim(mut self) -> Poly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    fn add(&self, o: &Poly) -> Poly {
        let len = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        Poly((0..len).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect()).trim()
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trim()
    }

    fn scale(&self, c: &BigRational) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trim()
    }

    fn eval(&self, n: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * n + c)
    }

    /// Smallest tried `B` (a float Fujiwara estimate, then doublings) such
    /// that `p(x + B)` has all coefficients of the leading sign, so `p` has
    /// the sign of its leading coefficient on `(B, ∞)`. Exact certificate,
    /// `None` past the scan limit.
    fn root_bound(&self) -> Option<u64> {
        let d = self.degree();
        if d == 0 {
            return Some(0);
        }
        let lead = self.0[d].to_f64().unwrap_or(f64::NAN).abs();
        let estimate = (1..=d)
            .map(|k| {
                let c = self.0[d - k].to_f64().unwrap_or(f64::NAN).abs() / lead;
                let c = if k == d { c / 2.0 } else { c };
                2.0 * c.powf(1.0 / k as f64)
            })
            .fold(1.0, f64::max);
        let mut b = if estimate.is_finite() && estimate < MAX_BOUND as f64 { estimate.ceil() as u64 } else { 1 };
        while b < MAX_BOUND {
            if self.shift_has_lead_sign(b) {
                return Some(b);
            }
            b *= 2;
        }
        None
    }

    fn shift_has_lead_sign(&self, b: u64) -> bool {
        // Horner-style Taylor shift
        let b = BigRational::from_integer(b.into());
        let mut c = self.0.clone();
        let d = c.len() - 1;
        for i in 0..d {
            for j in (i..d).rev() {
                let t = &c[j + 1] * &b;
                c[j] += t;
            }
        }
        let lead_pos = c[d].is_positive();
        c.iter().all(|x| x.is_zero() || x.is_positive() == lead_pos)
    }

    /// Integer polynomial with the same sign pattern.
    fn clear_denominators(&self) -> Vec<BigInt> {
        let l = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.0.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()
    }
}

fn eval_int(p: &[BigInt], n: u64) -> BigInt {
    let n = BigInt::from(n);
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * &n + c)
}

#[derive(Debug, Clone)]
struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    fn constant(c: BigRational) -> RatFn {
        RatFn {
            num: Poly::constant(c),
            den: Poly::constant(BigRational::one()),
        }
    }

    fn as_constant(&self) -> Option<BigRational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    fn checked(self) -> Option<RatFn> {
        (self.num.degree() <= MAX_DEGREE && self.den.degree() <= MAX_DEGREE && !self.den.is_zero()).then_some(self)
    }
}

/// Symbolic form of `e` on indices `n ≡ parity (mod 2)`.
fn symbolic(e: &Expr, parity: u64) -> Option<RatFn> {
    let r = match e {
        Expr::Const(c) => RatFn::constant(c.clone()),
        Expr::N => RatFn {
            num: Poly::n(),
            den: Poly::constant(BigRational::one()),
        },
        Expr::K | Expr::R => return None,
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (x, y) = (symbolic(a, parity)?, symbolic(b, parity)?);
            let yn = if matches!(e, Expr::Sub(..)) { y.num.neg() } else { y.num };
            RatFn {
                num: x.num.mul(&y.den).add(&yn.mul(&x.den)),
                den: x.den.mul(&y.den),
            }
        }
        Expr::Mul(a, b) => {
            let (x, y) = (symbolic(a, parity)?, symbolic(b, parity)?);
            RatFn {
                num: x.num.mul(&y.num),
                den: x.den.mul(&y.den),
            }
        }
        Expr::Div(a, b) => {
            let (x, y) = (symbolic(a, parity)?, symbolic(b, parity)?);
            RatFn {
                num: x.num.mul(&y.den),
                den: x.den.mul(&y.num),
            }
        }
        Expr::Neg(a) => {
            let x = symbolic(a, parity)?;
            RatFn {
                num: x.num.neg(),
                den: x.den,
            }
        }
        Expr::Pow(a, b) => {
            let base = symbolic(a, parity)?;
            let exp = symbolic(b, parity)?;
            if let Some(m) = exp.as_constant() {
                let m = m.is_integer().then(|| m.to_integer().to_i64()).flatten()?;
                if m.unsigned_abs() as usize > MAX_DEGREE {
                    return None;
                }
                let mut acc = RatFn::constant(BigRational::one());
                for _ in 0..m.unsigned_abs() {
                    acc = RatFn {
                        num: acc.num.mul(&base.num),
                        den: acc.den.mul(&base.den),
                    };
                }
                if m < 0 {
                    acc = RatFn { num: acc.den, den: acc.num };
                }
                acc
            } else {
                // (-1)^P(n) with P an integer polynomial: P(n) ≡ P(parity) mod 2
                let c = base.as_constant()?;
                if c != -BigRational::one() {
                    return None;
                }
                let d = exp.den.as_constant()?;
                let p = exp.num.scale(&d.recip());
                if !p.0.iter().all(|c| c.is_integer()) {
                    return None;
                }
                let v = p.eval(&BigRational::from_integer(parity.into())).to_integer();
                RatFn::constant(pow(&c, if v.is_even() { 0 } else { 1 }).unwrap())
            }
        }
    };
    r.checked()
}

/// Solution set of `|x_n - center| ≥ radius` (strict: `>`), exact when
/// the closed form is symbolic on both parity classes. `None` when it is
/// not, or when the root bound exceeds the scan limit.
pub(crate) fn solve_far(
    e: &Expr,
    center: &BigRational,
    radius: &BigRational,
    strict: bool,
) -> Option<Result<SetExpr, u64>> {
    let mut eventual = [false; 2];
    let mut tests: Vec<Vec<BigInt>> = Vec::new();
    let mut dens: Vec<Vec<BigInt>> = Vec::new();
    let mut bound = 1u64;
    for parity in 0..2u64 {
        let f = symbolic(e, parity)?;
        // (num - c·den)² - ρ²·den²
        let shifted = f.num.add(&f.den.scale(center).neg());
        let p = shifted.mul(&shifted).add(&f.den.mul(&f.den).scale(&(radius * radius)).neg());
        eventual[parity as usize] = match p.0.last() {
            None => !strict,
            Some(lead) => lead.is_positive(),
        };
        bound = bound.max(p.root_bound()?).max(f.den.root_bound()?);
        tests.push(p.clear_denominators());
        dens.push(f.den.clear_denominators());
    }
    let start = bound + 1;
    let mut head = Vec::new();
    for n in 1..start {
        let par = (n % 2) as usize;
        if eval_int(&dens[par], n).is_zero() {
            return Some(Err(n));
        }
        let v = eval_int(&tests[par], n);
        if v.is_positive() || (!strict && v.is_zero()) {
            head.push(n);
        }
    }
    Some(Ok(assemble(head, start, eventual)))
}

/// Eventually periodic set with period 2 as a compact expression.
fn assemble(mut head: Vec<u64>, mut start: u64, eventual: [bool; 2]) -> SetExpr {
    while start > 1 {
        let n = start - 1;
        let member = head.last() == Some(&n);
        if member != eventual[(n % 2) as usize] {
            break;
        }
        if member {
            head.pop();
        }
        start = n;
    }
    let tail = match eventual {
        [true, true] => Some(SetExpr::Tail(start)),
        [false, false] => None,
        [even, _] => {
            let cls = SetExpr::arith(if even { 0 } else { 1 }, 2).unwrap();
            Some(if start == 1 { cls } else { cls.inter(SetExpr::Tail(start)) })
        }
    };
    match (head.is_empty(), tail) {
        (_, None) => SetExpr::Finite(head),
        (true, Some(t)) => t,
        (false, Some(t)) => SetExpr::Finite(head).union(t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setexpr::members;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn far(src: &str, c: BigRational, r: BigRational) -> SetExpr {
        solve_far(&Expr::parse(src).unwrap(), &c, &r, false).unwrap().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(far("1/n", q(0, 1), q(1, 10)), SetExpr::Finite((1..=10).collect()));
        assert_eq!(far("n", q(0, 1), q(1, 1)), SetExpr::Tail(1));
        assert_eq!(far("(-1)^n", q(1, 1), q(1, 2)), SetExpr::arith(1, 2).unwrap());
        assert_eq!(far("(-1)^n", q(0, 1), q(1, 2)), SetExpr::Tail(1));
        assert_eq!(far("1 + (-1)^n/n", q(1, 1), q(1, 4)), SetExpr::Finite(vec![1, 2, 3, 4]));
    }

    #[test]
    fn matches_direct_evaluation() {
        let cases = [
            ("n/(n+1)", q(1, 1), q(1, 64)),
            ("(n^2 - 10n)/(n^2+1)", q(1, 1), q(1, 3)),
            ("(-1)^(n^2+n+1)*(1/n) + 1/2", q(1, 2), q(1, 8)),
            ("3 - 7/n^3", q(0, 1), q(5, 2)),
            ("1 + 4/(n^2 - n + 1)", q(1, 1), q(1, 256)),
            ("(n^3 - 40n^2 + 7)/(2n^3 + 1)", q(1, 2), q(1, 100)),
        ];
        for (src, c, r) in cases {
            let e = Expr::parse(src).unwrap();
            let s = solve_far(&e, &c, &r, false).unwrap().unwrap();
            let direct: Vec<u64> = (1..=2000u64)
                .filter(|&n| (e.eval(n).unwrap() - &c).abs() >= r)
                .collect();
            assert_eq!(members(&s, 2000).unwrap(), direct, "{src}");
        }
    }

    #[test]
    fn strict_and_non_symbolic() {
        let e = Expr::parse("(-1)^n").unwrap();
        let s = solve_far(&e, &q(1, 1), &q(0, 1), true).unwrap().unwrap();
        assert_eq!(s, SetExpr::arith(1, 2).unwrap());
        assert!(solve_far(&Expr::parse("2^n").unwrap(), &q(0, 1), &q(1, 1), false).is_none());
        let slow = Expr::parse("1/n").unwrap();
        assert!(solve_far(&slow, &q(0, 1), &q(1, 1 << 21), false).is_none());
        assert_eq!(
            solve_far(&Expr::parse("1/(n-3)").unwrap(), &q(0, 1), &q(1, 1), false).unwrap(),
            Err(3)
        );
    }
}
