//! Text grammar for integer polynomials in `x`.
//!
//! Accepted forms: a signed sum of terms `c`, `x`, `x^e`, `c*x^e`, `cx^e`
//! (whitespace insensitive), or a bracketed coefficient list in ascending
//! degree such as `[7,-1,0,1]` for `x^3-x+7`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPoly;

const MAX_EXPONENT: usize = 1 << 16;

/// Position is a 0-based character offset into the original input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub token: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot parse polynomial: {} at position {} (found `{}`)",
            self.reason, self.position, self.token
        )
    }
}

impl std::error::Error for ParseError {}

struct Parser {
    // non-whitespace characters with their original offsets
    toks: Vec<(usize, char)>,
    end: usize,
    idx: usize,
}

impl Parser {
    fn new(s: &str) -> Self {
        let toks: Vec<(usize, char)> = s
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Self {
            toks,
            end: s.chars().count(),
            idx: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.toks.get(self.idx).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.idx += 1;
        c
    }

    fn error(&self, reason: &'static str) -> ParseError {
        match self.toks.get(self.idx) {
            Some(&(position, c)) => ParseError {
                position,
                token: c.to_string(),
                reason,
            },
            None => ParseError {
                position: self.end,
                token: "end of input".to_string(),
                reason,
            },
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    /// A run of adjacent decimal digits (whitespace splits a number).
    fn digits(&mut self) -> Option<String> {
        let start = self.idx;
        let mut s = String::new();
        while let Some(&(pos, c)) = self.toks.get(self.idx) {
            if !c.is_ascii_digit() {
                break;
            }
            if self.idx > start && pos != self.toks[self.idx - 1].0 + 1 {
                break;
            }
            s.push(c);
            self.idx += 1;
        }
        (!s.is_empty()).then_some(s)
    }

    fn signed_integer(&mut self) -> Result<BigInt, ParseError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let digits = self.digits().ok_or_else(|| self.error("expected an integer"))?;
        let v: BigInt = digits.parse().expect("digit run");
        Ok(if neg { -v } else { v })
    }

    fn list(&mut self) -> Result<IntPoly, ParseError> {
        let mut coeffs = Vec::new();
        if self.eat(']') {
            return Ok(IntPoly::zero());
        }
        loop {
            coeffs.push(self.signed_integer()?);
            if self.eat(']') {
                break;
            }
            if !self.eat(',') {
                return Err(self.error("expected `,` or `]`"));
            }
        }
        Ok(IntPoly::new(coeffs))
    }

    fn exponent(&mut self) -> Result<usize, ParseError> {
        if !self.eat('^') {
            return Ok(1);
        }
        let at = self.idx;
        let digits = self
            .digits()
            .ok_or_else(|| self.error("expected a nonnegative exponent"))?;
        match digits.parse::<usize>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => {
                self.idx = at;
                Err(self.error("exponent too large"))
            }
        }
    }

    fn term(&mut self) -> Result<(BigInt, usize), ParseError> {
        match self.peek() {
            Some('x') => {
                self.bump();
                Ok((BigInt::one(), self.exponent()?))
            }
            Some(c) if c.is_ascii_digit() => {
                let c: BigInt = self.digits().expect("digit").parse().expect("digit run");
                let star = self.eat('*');
                if self.eat('x') {
                    Ok((c, self.exponent()?))
                } else if star {
                    Err(self.error("expected `x` after `*`"))
                } else {
                    Ok((c, 0))
                }
            }
            _ => Err(self.error("expected a coefficient or `x`")),
        }
    }

    fn sum(&mut self) -> Result<IntPoly, ParseError> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        while self.peek().is_some() {
            let neg = match self.peek() {
                Some('-') => {
                    self.bump();
                    true
                }
                Some('+') => {
                    self.bump();
                    false
                }
                _ if first => false,
                _ => return Err(self.error("expected `+` or `-` between terms")),
            };
            first = false;
            let (c, e) = self.term()?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            if neg {
                coeffs[e] -= c;
            } else {
                coeffs[e] += c;
            }
        }
        if first {
            return Err(self.error("empty polynomial"));
        }
        Ok(IntPoly::new(coeffs))
    }
}

pub fn parse_poly(s: &str) -> Result<IntPoly, ParseError> {
    let mut p = Parser::new(s);
    let poly = if p.eat('[') { p.list()? } else { p.sum()? };
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

impl std::str::FromStr for IntPoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn term_forms() {
        assert_eq!(parse_poly("x^3-x+7").unwrap(), p(&[7, -1, 0, 1]));
        assert_eq!(parse_poly(" 3 * x ^ 2 - 2x + 5 ").unwrap(), p(&[5, -2, 3]));
        assert_eq!(parse_poly("-x").unwrap(), p(&[0, -1]));
        assert_eq!(parse_poly("4").unwrap(), p(&[4]));
        assert_eq!(parse_poly("0").unwrap(), IntPoly::zero());
        assert_eq!(parse_poly("x^2 + x^2").unwrap(), p(&[0, 0, 2]));
        assert_eq!(parse_poly("2x^0").unwrap(), p(&[2]));
        assert_eq!(parse_poly("+x").unwrap(), p(&[0, 1]));
    }

    #[test]
    fn bracket_list() {
        assert_eq!(parse_poly("[7,-1,0,1]").unwrap(), p(&[7, -1, 0, 1]));
        assert_eq!(parse_poly("[ 1 , 2 ]").unwrap(), p(&[1, 2]));
        assert_eq!(parse_poly("[]").unwrap(), IntPoly::zero());
        assert_eq!(parse_poly("[0,0]").unwrap(), IntPoly::zero());
    }

    #[test]
    fn big_coefficients() {
        let f = parse_poly("123456789012345678901234567890x+1").unwrap();
        assert_eq!(f.coeff(1).to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn errors_name_token_and_position() {
        let e = parse_poly("x^2 + y").unwrap_err();
        assert_eq!((e.position, e.token.as_str()), (6, "y"));

        let e = parse_poly("3*").unwrap_err();
        assert_eq!(e.position, 2);
        assert_eq!(e.token, "end of input");

        let e = parse_poly("x^").unwrap_err();
        assert_eq!(e.reason, "expected a nonnegative exponent");

        let e = parse_poly("1 2").unwrap_err();
        assert_eq!((e.position, e.token.as_str()), (2, "2"));

        assert!(parse_poly("").is_err());
        assert!(parse_poly("[1,2").is_err());
        assert!(parse_poly("[1,,2]").is_err());
        assert!(parse_poly("x^99999999").is_err());
        assert!(parse_poly("x x").is_err());
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(v in prop::collection::vec(-1000i64..=1000, 0..12)) {
            let f = IntPoly::from(v);
            prop_assert_eq!(parse_poly(&f.to_string()).unwrap(), f);
        }
    }
}
