//! Text form of polynomials.
//!
//! ```text
//! expr     := sign? term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := rational | var ('^' uint)? | '(' expr ')' ('^' uint)?
//! var      := 'x' uint | 'x' | 'y' | 'z' | 'w' | 't'
//! rational := uint ('/' uint)?
//! ```
//!
//! The aliases `x, y, z, w, t` stand for `x0 .. x4`. Output always uses the
//! indexed names, graded-lex order (highest first), explicit `*`, and `^`
//! only for exponents of at least 2.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError, Polynomial};

/// Parses `text` into a polynomial in `nvars` variables.
pub fn parse(text: &str, nvars: usize) -> Result<Polynomial, PolyError> {
    if nvars == 0 {
        return Err(PolyError::Syntax { pos: 0, msg: "need at least one variable".into() });
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0, nvars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return Err(self.error("empty expression")),
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut coeff = BigRational::one();
        let mut exps = vec![0u32; self.nvars];
        let mut groups: Vec<Polynomial> = Vec::new();
        self.factor(&mut coeff, &mut exps, &mut groups)?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            self.factor(&mut coeff, &mut exps, &mut groups)?;
        }
        let mono = Polynomial::from_terms(self.nvars, [(coeff, exps)]);
        Ok(groups.iter().fold(mono, |acc, g| &acc * g))
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let v = self.uint()?;
            return u32::try_from(v).map_err(|_| self.error("exponent too large"));
        }
        Ok(1)
    }

    fn factor(&mut self, coeff: &mut BigRational, exps: &mut [u32], groups: &mut Vec<Polynomial>) -> Result<(), PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let mut r = BigRational::from_integer(num);
                if let Some(b'/') = self.peek() {
                    self.pos += 1;
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    r = BigRational::new(r.to_integer(), den);
                }
                *coeff *= r;
                Ok(())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                let e = self.exponent()?;
                groups.push(inner.pow(e));
                Ok(())
            }
            Some(b'x' | b'y' | b'z' | b'w' | b't') => {
                let start = self.pos;
                let index = self.var()?;
                if index >= self.nvars {
                    return Err(PolyError::VariableOutOfRange { index, nvars: self.nvars, pos: start });
                }
                let e = self.exponent()?;
                exps[index] = exps[index]
                    .checked_add(e)
                    .ok_or_else(|| self.error("exponent overflow"))?;
                Ok(())
            }
            Some(_) => Err(self.error("expected a number, a variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn var(&mut self) -> Result<usize, PolyError> {
        let c = self.src[self.pos];
        self.pos += 1;
        match c {
            b'x' => {
                if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    let v = self.uint()?;
                    usize::try_from(v).map_err(|_| self.error("variable index too large"))
                } else {
                    Ok(0)
                }
            }
            b'y' => Ok(1),
            b'z' => Ok(2),
            b'w' => Ok(3),
            b't' => Ok(4),
            _ => unreachable!(),
        }
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit string"))
    }
}

pub(super) fn write_canonical(p: &Polynomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let a = c.abs();
        let constant = m.total_degree() == 0;
        if constant {
            write_rational(&a, f)?;
            continue;
        }
        if !a.is_one() {
            write_rational(&a, f)?;
            f.write_str("*")?;
        }
        write_monomial(m, f)?;
    }
    Ok(())
}

fn write_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_monomial(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "x{i}")?;
        } else {
            write!(f, "x{i}^{e}")?;
        }
    }
    Ok(())
}

/// Parses an exact rational from `"3"`, `"-1/10"`, `"0.001"` or `"1e-3"`.
pub fn parse_rational(text: &str) -> Result<BigRational, PolyError> {
    let bad = || PolyError::BadRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (-1, &mantissa[1..]),
        Some(b'+') => (1, &mantissa[1..]),
        _ => (1, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if sign < 0 { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_letter_variable_aliases() {
        let a = parse("x^2z + y^2 w", 4);
        // implicit multiplication is not part of the grammar
        assert!(matches!(a, Err(PolyError::Syntax { .. })));
        let a = parse("x^2*z + y^2*w", 4).unwrap();
        let b = parse("x0^2*x2 + x1^2*x3", 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.num_terms(), 2);
        assert_eq!(b.degree(), 3);
        assert_eq!(parse("t^3", 5).unwrap(), parse("x4^3", 5).unwrap());
    }

    #[test]
    fn zero_and_constants() {
        let z = parse("0", 3).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
        assert_eq!(parse("3/6", 2).unwrap().to_string(), "1/2");
        assert_eq!(parse("x0 - x0", 2).unwrap().to_string(), "0");
    }

    #[test]
    fn canonical_printing() {
        let f = parse("x3*x1^2 + x2*x0^2", 4).unwrap();
        assert_eq!(f.to_string(), "x0^2*x2 + x1^2*x3");
        let g = parse("-2 + 3/2*x1 - x0*x1 + x0^2", 2).unwrap();
        assert_eq!(g.to_string(), "x0^2 - x0*x1 + 3/2*x1 - 2");
        let h = parse("-x1^3 + 2*x0", 2).unwrap();
        assert_eq!(h.to_string(), "-x1^3 + 2*x0");
    }

    #[test]
    fn errors_carry_positions() {
        match parse("x0 + * x1", 2) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse("x0 + x7", 3) {
            Err(PolyError::VariableOutOfRange { index: 7, nvars: 3, pos: 5 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("", 2).is_err());
        assert!(parse("x0 x1", 2).is_err());
        assert!(parse("1/0", 2).is_err());
        assert!(parse("w", 3).is_err());
    }

    #[test]
    fn parentheses() {
        let f = parse("x1*(x0*x1 - x2*x3)", 4).unwrap();
        assert_eq!(f, parse("x0*x1^2 - x1*x2*x3", 4).unwrap());
        let g = parse("-2*(x0 + x1)^2*x2", 3).unwrap();
        assert_eq!(g, parse("-2*x0^2*x2 - 4*x0*x1*x2 - 2*x1^2*x2", 3).unwrap());
        assert_eq!(parse("((x0))^3", 1).unwrap(), parse("x0^3", 1).unwrap());
        match parse("(x0 + x1", 2) {
            Err(PolyError::Syntax { pos: 8, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("()", 2).is_err());
    }

    #[test]
    fn rational_literals() {
        let r = |s: &str| parse_rational(s).unwrap();
        assert_eq!(r("0.001"), BigRational::new(1.into(), 1000.into()));
        assert_eq!(r("1e-3"), r("1/1000"));
        assert_eq!(r("-2.5"), BigRational::new((-5).into(), 2.into()));
        assert_eq!(r("3"), BigRational::from_integer(3.into()));
        assert_eq!(r("1.5e2"), BigRational::from_integer(150.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
