//! Text forms accepted on the command line.
//!
//! ```text
//! set   := finite{n,...} | arith(r,m) | block(i) | tail(s) | naturals | evens | odds | empty
//!        | union(set,set,...) | inter(set,set,...) | diff(set,set) | compl(set)
//!        | counted(squares | pow2 | one-per-block(set) | every-other(set) | square-indexed(set))
//! ideal := fin | i1 | i2 | i3 | id | local-blocks | restrict(ideal,set)
//! seq   := closed(expr) | fibers{point: set; ...} | blockform(expr; init v,...)
//! point := rational | (x, y) | label
//! ```

use std::fmt;

use ideal_conv::ideals::IdealSpec;
use ideal_conv::seq::{Expr, Point, SeqPresentation};
use ideal_conv::setexpr::{EveryOther, OnePerBlock, PowersOfTwo, SetExpr, SquareIndexed, Squares};
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.pos, self.msg)
    }
}

type Res<T> = Result<T, DslError>;

struct Cursor<'a> {
    src: &'a str,
    i: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, i: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Res<T> {
        Err(DslError { pos: self.i, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.i..]
    }

    fn ws(&mut self) {
        let r = self.rest();
        self.i += r.len() - r.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Res<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn ident(&mut self) -> Res<&'a str> {
        self.ws();
        let r = self.rest();
        let len = r.find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '-')).unwrap_or(r.len());
        if len == 0 {
            return self.err("expected a name");
        }
        self.i += len;
        Ok(&r[..len])
    }

    fn uint(&mut self) -> Res<u64> {
        self.ws();
        let r = self.rest();
        let len = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if len == 0 {
            return self.err("expected a non-negative integer");
        }
        let v = r[..len].parse().or_else(|_| self.err("integer too large"))?;
        self.i += len;
        Ok(v)
    }

    /// Text up to the first of `stops` at bracket depth zero.
    fn balanced(&mut self, stops: &[char]) -> Res<&'a str> {
        let r = self.rest();
        let mut depth = 0i32;
        for (k, c) in r.char_indices() {
            match c {
                '(' | '{' => depth += 1,
                ')' | '}' if depth == 0 && stops.contains(&c) => {
                    self.i += k;
                    return Ok(&r[..k]);
                }
                ')' | '}' => depth -= 1,
                _ if depth == 0 && stops.contains(&c) => {
                    self.i += k;
                    return Ok(&r[..k]);
                }
                _ => {}
            }
        }
        self.i += r.len();
        self.err(format!("unterminated input, expected one of {stops:?}"))
    }

    fn finish(&mut self) -> Res<()> {
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }
}

fn whole<T>(src: &str, f: impl FnOnce(&mut Cursor) -> Res<T>) -> Res<T> {
    let mut c = Cursor::new(src);
    let v = f(&mut c)?;
    c.finish()?;
    Ok(v)
}

pub fn parse_set(src: &str) -> Res<SetExpr> {
    whole(src, set)
}

fn set_args(c: &mut Cursor) -> Res<Vec<SetExpr>> {
    c.expect('(')?;
    let mut out = vec![set(c)?];
    while c.eat(',') {
        out.push(set(c)?);
    }
    c.expect(')')?;
    Ok(out)
}

fn uint_args<const N: usize>(c: &mut Cursor) -> Res<[u64; N]> {
    c.expect('(')?;
    let mut out = [0; N];
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            c.expect(',')?;
        }
        *slot = c.uint()?;
    }
    c.expect(')')?;
    Ok(out)
}

fn set(c: &mut Cursor) -> Res<SetExpr> {
    c.ws();
    let start = c.i;
    let name = c.ident()?;
    let at = |e: ideal_conv::setexpr::SetError| DslError { pos: start, msg: e.to_string() };
    let one = |c: &mut Cursor| -> Res<SetExpr> {
        let mut a = set_args(c)?;
        if a.len() != 1 {
            return Err(DslError { pos: start, msg: format!("{name} takes one argument") });
        }
        Ok(a.pop().unwrap())
    };
    Ok(match name {
        "naturals" => SetExpr::naturals(),
        "evens" => SetExpr::evens(),
        "odds" => SetExpr::odds(),
        "empty" => SetExpr::empty(),
        "finite" => {
            c.expect('{')?;
            let mut xs = Vec::new();
            if !c.eat('}') {
                loop {
                    xs.push(c.uint()?);
                    if c.eat('}') {
                        break;
                    }
                    c.expect(',')?;
                }
            }
            SetExpr::finite(xs).map_err(at)?
        }
        "arith" => {
            let [r, m] = uint_args::<2>(c)?;
            SetExpr::arith(r, m).map_err(at)?
        }
        "block" => {
            let [i] = uint_args::<1>(c)?;
            SetExpr::block(u32::try_from(i).unwrap_or(u32::MAX)).map_err(at)?
        }
        "tail" => {
            let [s] = uint_args::<1>(c)?;
            if s == 0 {
                return Err(DslError { pos: start, msg: "tail starts at 1 or later".into() });
            }
            SetExpr::tail(s)
        }
        "union" | "inter" => {
            let args = set_args(c)?;
            let mut it = args.into_iter();
            let first = it.next().unwrap();
            it.fold(first, |acc, e| if name == "union" { acc.union(e) } else { acc.inter(e) })
        }
        "diff" => {
            let args = set_args(c)?;
            let [a, b]: [SetExpr; 2] =
                args.try_into().map_err(|_| DslError { pos: start, msg: "diff takes two arguments".into() })?;
            a.diff(b)
        }
        "compl" => one(c)?.compl(),
        "counted" => {
            c.expect('(')?;
            let kstart = c.i;
            let kind = c.ident()?;
            let e = match kind {
                "squares" => SetExpr::counted(Squares),
                "pow2" => SetExpr::counted(PowersOfTwo),
                "one-per-block" => SetExpr::counted(OnePerBlock(one(c)?)),
                "every-other" => SetExpr::counted(EveryOther(one(c)?)),
                "square-indexed" => SquareIndexed::of(one(c)?),
                _ => return Err(DslError { pos: kstart, msg: format!("unknown enumeration '{kind}'") }),
            };
            c.expect(')')?;
            e
        }
        _ => return Err(DslError { pos: start, msg: format!("unknown set constructor '{name}'") }),
    })
}

pub fn parse_ideal(src: &str) -> Res<IdealSpec> {
    whole(src, ideal)
}

fn ideal(c: &mut Cursor) -> Res<IdealSpec> {
    c.ws();
    let start = c.i;
    Ok(match c.ident()? {
        "fin" => IdealSpec::Fin,
        "i1" => IdealSpec::EvenFin,
        "i2" => IdealSpec::MeetsFinBlocks,
        "i3" => IdealSpec::FinPerBlock,
        "id" => IdealSpec::DensityZero,
        "local-blocks" => IdealSpec::LocalBlocks,
        "restrict" => {
            c.expect('(')?;
            let base = ideal(c)?;
            c.expect(',')?;
            let m = set(c)?;
            c.expect(')')?;
            IdealSpec::Restrict(Box::new(base), m)
        }
        other => return Err(DslError { pos: start, msg: format!("unknown ideal '{other}'") }),
    })
}

fn rational(s: &str, pos: usize) -> Res<BigRational> {
    let bad = || DslError { pos, msg: format!("'{s}' is not a number") };
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let (p, q): (i64, i64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
        if q == 0 {
            return Err(DslError { pos, msg: "zero denominator".into() });
        }
        return Ok(BigRational::new(p.into(), q.into()));
    }
    let neg = s.starts_with('-');
    let body = s.trim_start_matches('-');
    if body.is_empty() || !body.chars().next().unwrap().is_ascii_digit() {
        return Err(bad());
    }
    let e = Expr::parse(body).map_err(|_| bad())?;
    match e {
        Expr::Const(v) => Ok(if neg { -v } else { v }),
        _ => Err(bad()),
    }
}

pub fn parse_point(src: &str) -> Res<Point> {
    point_at(src, 0)
}

fn point_at(src: &str, pos: usize) -> Res<Point> {
    let s = src.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (x, y) = inner.split_once(',').ok_or(DslError { pos, msg: "expected (x, y)".into() })?;
        let num = |t: &str| {
            t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(DslError { pos, msg: format!("'{t}' is not a number") })
        };
        return Ok(Point::Plane(num(x)?, num(y)?));
    }
    match s.chars().next() {
        Some(c) if c.is_ascii_digit() || c == '-' => Ok(Point::Real(rational(s, pos)?)),
        Some(c) if c.is_alphabetic() || c == '_' => {
            if s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '\'') {
                Ok(Point::label(s))
            } else {
                Err(DslError { pos, msg: format!("bad label '{s}'") })
            }
        }
        _ => Err(DslError { pos, msg: "expected a point".into() }),
    }
}

/// Comma-separated points; commas inside parentheses belong to planar points.
pub fn parse_points(src: &str) -> Res<Vec<Point>> {
    let mut c = Cursor::new(src);
    let mut out = Vec::new();
    loop {
        c.ws();
        let start = c.i;
        let piece = match c.balanced(&[',']) {
            Ok(p) => p,
            Err(_) => &src[start..],
        };
        out.push(point_at(piece, start)?);
        c.i = start + piece.len();
        if !c.eat(',') {
            break;
        }
    }
    c.finish()?;
    Ok(out)
}

pub fn parse_rationals(src: &str) -> Res<Vec<BigRational>> {
    let mut pos = 0;
    src.split(',')
        .map(|piece| {
            let r = rational(piece, pos);
            pos += piece.len() + 1;
            r
        })
        .collect()
}

pub fn parse_seq(src: &str) -> Res<SeqPresentation> {
    let mut c = Cursor::new(src);
    c.ws();
    let start = c.i;
    let kind = c.ident()?;
    let seq = match kind {
        "closed" => {
            c.expect('(')?;
            let body_at = c.i;
            let body = c.balanced(&[')'])?;
            c.expect(')')?;
            let e = Expr::parse(body).map_err(|e| DslError { pos: body_at + e.pos, msg: e.msg })?;
            SeqPresentation::closed_form(e)
        }
        "fibers" => {
            c.expect('{')?;
            let mut fibers = Vec::new();
            loop {
                c.ws();
                let pstart = c.i;
                let p = c.balanced(&[':'])?;
                let p = point_at(p, pstart)?;
                c.expect(':')?;
                let f = set(&mut c)?;
                fibers.push((p, f));
                if c.eat('}') {
                    break;
                }
                c.expect(';')?;
            }
            SeqPresentation::fibers(fibers).map_err(|e| DslError { pos: start, msg: e.to_string() })?
        }
        "blockform" => {
            c.expect('(')?;
            let body_at = c.i;
            let body = c.balanced(&[';'])?;
            let e = Expr::parse(body).map_err(|e| DslError { pos: body_at + e.pos, msg: e.msg })?;
            c.expect(';')?;
            c.ws();
            let kw = c.i;
            if c.ident()? != "init" {
                return Err(DslError { pos: kw, msg: "expected 'init'".into() });
            }
            let init_at = c.i;
            let init = c.balanced(&[')'])?;
            let init = parse_rationals(init).map_err(|e| DslError { pos: init_at + e.pos, msg: e.msg })?;
            c.expect(')')?;
            SeqPresentation::block_formula(e, init)
        }
        other => return Err(DslError { pos: start, msg: format!("unknown sequence form '{other}'") }),
    };
    c.finish()?;
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_roundtrip_through_display() {
        for src in [
            "finite{1,2,3}",
            "arith(0,2)",
            "block(3)",
            "union(arith(1,4),compl(tail(9)))",
            "diff(counted(squares),counted(pow2))",
            "counted(one-per-block(arith(1,3)))",
            "counted(every-other(block(2)))",
            "counted(square-indexed(odds))",
        ] {
            let e = parse_set(src).unwrap();
            assert_eq!(parse_set(&e.to_string()).unwrap().to_string(), e.to_string());
        }
        assert_eq!(parse_set("union(odds, evens, tail(3))").unwrap().to_string(), "union(union(arith(1,2),arith(0,2)),tail(3))");
    }

    #[test]
    fn set_errors() {
        assert_eq!(parse_set("arith(3,0)").unwrap_err().pos, 0);
        assert_eq!(parse_set("union(odds,").unwrap_err().pos, 11);
        assert_eq!(parse_set("odds x").unwrap_err().pos, 5);
        assert_eq!(parse_set("counted(cubes)").unwrap_err().pos, 8);
        assert!(parse_set("tail(0)").is_err());
        assert!(parse_set("finite{3,1}").is_ok());
    }

    #[test]
    fn ideals() {
        assert_eq!(parse_ideal("i2").unwrap(), IdealSpec::MeetsFinBlocks);
        let r = parse_ideal("restrict(id, odds)").unwrap();
        assert_eq!(r.to_string(), "restrict(id,arith(1,2))");
        assert_eq!(parse_ideal("i9").unwrap_err().pos, 0);
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("-1/2").unwrap(), Point::real(-1, 2));
        assert_eq!(parse_point("0.25").unwrap(), Point::real(1, 4));
        assert_eq!(parse_point("(0, -1)").unwrap(), Point::Plane(0.0, -1.0));
        assert_eq!(parse_point("a").unwrap(), Point::label("a"));
        assert_eq!(parse_points("-1,0,(1, 2),b").unwrap().len(), 4);
        assert!(parse_point("#").is_err());
    }

    #[test]
    fn sequences() {
        let s = parse_seq("closed(1/n)").unwrap();
        assert_eq!(s.value(4).unwrap(), Point::real(1, 4));
        let s = parse_seq("fibers{0: arith(1,2); 1: arith(0,2)}").unwrap();
        assert_eq!(s.value(3).unwrap(), Point::int(0));
        let s = parse_seq("blockform(2^(k+1)-(r-1); init 2,1)").unwrap();
        assert_eq!(s.nat_value(5).unwrap(), 8);
        assert_eq!(parse_seq("closed(1/(n)").unwrap_err().pos, 12);
        assert_eq!(parse_seq("closed(n+*)").unwrap_err().pos, 9);
        assert!(parse_seq("wave(n)").is_err());
    }
}
