//! Reader for the text form printed by `Display`.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' ['-'] int]
//! atom   := number | 'w[' int ',' int ']' | 'u[' int ',' int ']' | 'z' | '(' expr ')'
//! ```

use super::monomial::Var;
use super::mpoly::MPoly;
use super::ratfunc::RatFunc;
use super::PolyError;
use crate::scalar::Scalar;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
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

    fn expect(&mut self, c: u8) -> Result<(), PolyError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn digits(&mut self) -> Result<&'a str, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn index(&mut self) -> Result<usize, PolyError> {
        let d = self.digits()?;
        d.parse().map_err(|_| self.err("index out of range"))
    }

    fn expr<S: Scalar>(&mut self) -> Result<RatFunc<S>, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term::<S>()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<S: Scalar>(&mut self) -> Result<RatFunc<S>, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor::<S>()?;
                    acc = acc.div(&d).map_err(|_| PolyError::Parse {
                        pos: at,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor<S: Scalar>(&mut self) -> Result<RatFunc<S>, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let e: i32 = self
            .digits()?
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        let e = if neg { -e } else { e };
        base.pow(e).map_err(|_| PolyError::Parse {
            pos: at,
            msg: "zero to a negative power".into(),
        })
    }

    fn atom<S: Scalar>(&mut self) -> Result<RatFunc<S>, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                let v = S::parse_literal(d).ok_or_else(|| self.err("bad number"))?;
                Ok(RatFunc::constant(v))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(RatFunc::var(Var::Z))
            }
            Some(k @ (b'w' | b'u')) => {
                self.pos += 1;
                self.expect(b'[')?;
                let i = self.index()?;
                self.expect(b',')?;
                let r = self.index()?;
                self.expect(b']')?;
                if r == 0 {
                    return Err(self.err("indices r start at 1"));
                }
                let v = if k == b'w' { Var::w(i, r) } else { Var::u(i, r) };
                Ok(RatFunc::var(v))
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a rational function.
pub fn parse_ratfunc<S: Scalar>(s: &str) -> Result<RatFunc<S>, PolyError> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses a polynomial; a nontrivial denominator is rejected. Negative
/// exponents are accepted for U variables only.
pub fn parse_poly<S: Scalar>(s: &str) -> Result<MPoly<S>, PolyError> {
    let f = parse_ratfunc::<S>(s)?;
    match f.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(PolyError::Parse {
            pos: 0,
            msg: format!("not a polynomial: {f}"),
        }),
    }
}

impl<S: Scalar> std::str::FromStr for MPoly<S> {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        parse_poly(s)
    }
}

impl<S: Scalar> std::str::FromStr for RatFunc<S> {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        parse_ratfunc(s)
    }
}

#[cfg(test)]
mod tests {
    use crate::{Frac, Poly};

    #[test]
    fn roundtrip_canonical_text() {
        for s in [
            "0",
            "1",
            "-3/2*w[0,1]^2*u[1,2]^-1 + z - 7",
            "w[0,1]*w[0,2] - w[0,2]^3",
        ] {
            let p: Poly = s.parse().unwrap();
            let again: Poly = p.to_string().parse().unwrap();
            assert_eq!(p, again);
        }
        let f: Frac = "(u[0,1] - u[0,2])/(w[0,1] - w[0,2])".parse().unwrap();
        assert_eq!(f.to_string(), "(u[0,1] - u[0,2])/(w[0,1] - w[0,2])");
        let g: Frac = f.to_string().parse().unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!("w[0,0]".parse::<Poly>().is_err());
        assert!("w[0,1] +".parse::<Poly>().is_err());
        assert!("1/w[0,1]".parse::<Poly>().is_err());
        assert!("1/0".parse::<Poly>().is_err());
        assert!("x".parse::<Poly>().is_err());
    }
}
