use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{SeqError, SeqResult};

/// Arithmetic expression in the index `n` and the block coordinates
/// `k`, `r` of `n = 2^k + r`, `1 ≤ r ≤ 2^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(BigRational),
    N,
    K,
    R,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

/// Position-carrying parse failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

const MAX_EXPONENT: i64 = 4096;

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Const(BigRational::from_integer(v.into()))
    }

    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let mut p = Parser { s: src.as_bytes(), i: 0 };
        let e = p.sum()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Whether the expression mentions the block coordinates.
    pub fn uses_blocks(&self) -> bool {
        match self {
            Expr::K | Expr::R => true,
            Expr::Const(_) | Expr::N => false,
            Expr::Neg(a) => a.uses_blocks(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.uses_blocks() || b.uses_blocks()
            }
        }
    }

    /// Exact value at index `n`.
    pub fn eval(&self, n: u64) -> SeqResult<BigRational> {
        let (k, r) = block_coords(n);
        self.eval_with(n, k, r)
    }

    fn eval_with(&self, n: u64, k: u64, r: u64) -> SeqResult<BigRational> {
        let int = |v: u64| BigRational::from_integer(BigInt::from(v));
        Ok(match self {
            Expr::Const(c) => c.clone(),
            Expr::N => int(n),
            Expr::K => int(k),
            Expr::R => int(r),
            Expr::Add(a, b) => a.eval_with(n, k, r)? + b.eval_with(n, k, r)?,
            Expr::Sub(a, b) => a.eval_with(n, k, r)? - b.eval_with(n, k, r)?,
            Expr::Mul(a, b) => a.eval_with(n, k, r)? * b.eval_with(n, k, r)?,
            Expr::Div(a, b) => {
                let d = b.eval_with(n, k, r)?;
                if d.is_zero() {
                    return Err(SeqError::Presentation(format!("division by zero at n = {n}")));
                }
                a.eval_with(n, k, r)? / d
            }
            Expr::Neg(a) => -a.eval_with(n, k, r)?,
            Expr::Pow(a, b) => {
                let base = a.eval_with(n, k, r)?;
                let e = b.eval_with(n, k, r)?;
                if !e.is_integer() {
                    return Err(SeqError::Presentation(format!("non-integer exponent {e} at n = {n}")));
                }
                let e = e.to_integer();
                // unit and zero bases take any exponent
                if base.is_one() || (base.is_zero() && e.is_positive()) {
                    return Ok(base);
                }
                if base == -BigRational::one() {
                    return Ok(if e.is_even() { BigRational::one() } else { base });
                }
                let e = e
                    .to_i64()
                    .filter(|e| e.abs() <= MAX_EXPONENT)
                    .ok_or_else(|| SeqError::Presentation(format!("exponent out of range at n = {n}")))?;
                pow(&base, e).ok_or_else(|| SeqError::Presentation(format!("0 to a negative power at n = {n}")))?
            }
        })
    }
}

pub(crate) fn pow(base: &BigRational, e: i64) -> Option<BigRational> {
    if e < 0 && base.is_zero() {
        return None;
    }
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    Some(if e < 0 { acc.recip() } else { acc })
}

/// `(k, r)` with `n = 2^k + r`, `1 ≤ r ≤ 2^k`; `(0, 0)` for `n = 1`.
pub fn block_coords(n: u64) -> (u64, u64) {
    if n <= 1 {
        return (0, 0);
    }
    let k = 63 - (n - 1).leading_zeros() as u64;
    (k, n - (1 << k))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_negative() => write!(f, "({c})"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::N => f.write_str("n"),
            Expr::K => f.write_str("k"),
            Expr::R => f.write_str("r"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, b) => write!(f, "({a}^{b})"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            pos: self.i,
            msg: msg.into(),
        }
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            let rhs = self.product()?;
            e = if c == b'+' {
                Expr::Add(Box::new(e), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(e), Box::new(rhs))
            };
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            match self.peek() {
                Some(c @ (b'*' | b'/')) => {
                    self.i += 1;
                    let rhs = self.unary()?;
                    e = if c == b'*' {
                        Expr::Mul(Box::new(e), Box::new(rhs))
                    } else {
                        Expr::Div(Box::new(e), Box::new(rhs))
                    };
                }
                // implicit multiplication such as `2n` or `3(n+1)`
                Some(b'n' | b'k' | b'r' | b'(') if matches!(e, Expr::Const(_)) => {
                    let rhs = self.power()?;
                    e = Expr::Mul(Box::new(e), Box::new(rhs));
                }
                _ => return Ok(e),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.i += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(b'n') => {
                self.i += 1;
                Ok(Expr::N)
            }
            Some(b'k') => {
                self.i += 1;
                Ok(Expr::K)
            }
            Some(b'r') => {
                self.i += 1;
                Ok(Expr::R)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(_) => Err(self.err("expected a number, a variable or '('")),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        let int: BigInt = std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse()
            .map_err(|_| ParseError { pos: start, msg: "bad number".into() })?;
        let mut value = BigRational::from_integer(int);
        if self.s.get(self.i) == Some(&b'.') {
            self.i += 1;
            let fstart = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            if fstart == self.i {
                return Err(self.err("expected digits after '.'"));
            }
            let digits = std::str::from_utf8(&self.s[fstart..self.i]).unwrap();
            let frac: BigInt = digits.parse().unwrap();
            let scale = num_traits::pow(BigInt::from(10), digits.len());
            value += BigRational::new(frac, scale);
        }
        Ok(Expr::Const(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn parse_and_eval() {
        let e = Expr::parse("1/n").unwrap();
        assert_eq!(e.eval(4).unwrap(), q(1, 4));
        let e = Expr::parse("(-1)^n").unwrap();
        assert_eq!(e.eval(3).unwrap(), q(-1, 1));
        assert_eq!(e.eval(6).unwrap(), q(1, 1));
        let e = Expr::parse("2^(k+1) - (r-1)").unwrap();
        assert_eq!((5..=8).map(|n| e.eval(n).unwrap()).collect::<Vec<_>>(), vec![q(8, 1), q(7, 1), q(6, 1), q(5, 1)]);
        assert_eq!(Expr::parse("0.25 + 2n").unwrap().eval(1).unwrap(), q(9, 4));
        assert_eq!(Expr::parse("-n^2").unwrap().eval(3).unwrap(), q(-9, 1));
    }

    #[test]
    fn parse_errors_have_positions() {
        assert_eq!(Expr::parse("1/(n").unwrap_err().pos, 4);
        assert_eq!(Expr::parse("n+*").unwrap_err().pos, 2);
        assert_eq!(Expr::parse("n)").unwrap_err().pos, 1);
    }

    #[test]
    fn eval_errors() {
        assert!(Expr::parse("1/(n-2)").unwrap().eval(2).is_err());
        assert!(Expr::parse("2^(1/2)").unwrap().eval(1).is_err());
    }

    #[test]
    fn block_coordinates() {
        assert_eq!(block_coords(3), (1, 1));
        assert_eq!(block_coords(4), (1, 2));
        assert_eq!(block_coords(5), (2, 1));
        assert_eq!(block_coords(8), (2, 4));
        assert_eq!(block_coords(9), (3, 1));
    }
}
