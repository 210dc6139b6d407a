//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending order of degree: `coeffs[i]` is the
//! coefficient of `x^i`. The zero polynomial is the empty vector and has no
//! degree (`degree()` returns `None`).

mod expansion;
mod parse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use expansion::{phi_assemble, phi_expand, PhiExpansion};
pub use parse::{parse_poly, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("divisor must be monic")]
    NonMonicDivisor,
    #[error("divisor must have degree at least 1")]
    ConstantDivisor,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("phi-expansion term {index} has degree {degree}, expected < {bound}")]
    TermTooLarge {
        index: usize,
        degree: usize,
        bound: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Build from ascending coefficients; trailing zeros are stripped.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^e`.
    pub fn monomial(c: BigInt, e: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c;
        Self { coeffs }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Positive gcd of the coefficients.
    pub fn content(&self) -> Result<BigInt, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        Ok(g)
    }

    /// `self / content(self)`; the sign stays with the primitive part.
    pub fn primitive_part(&self) -> Result<Self, PolyError> {
        let c = self.content()?;
        Ok(Self {
            coeffs: self.coeffs.iter().map(|a| a / &c).collect(),
        })
    }

    /// Horner evaluation at an integer point.
    pub fn evaluate(&self, x0: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x0 + c)
    }

    /// Division with remainder by a monic divisor of degree at least 1.
    ///
    /// Returns `(q, r)` with `self = q * d + r` and `deg r < deg d`.
    pub fn divrem_monic(&self, d: &IntPoly) -> Result<(IntPoly, IntPoly), PolyError> {
        let dd = match d.degree() {
            None | Some(0) => return Err(PolyError::ConstantDivisor),
            Some(dd) => dd,
        };
        if !d.is_monic() {
            return Err(PolyError::NonMonicDivisor);
        }
        let Some(fd) = self.degree().filter(|&fd| fd >= dd) else {
            return Ok((IntPoly::zero(), self.clone()));
        };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); fd - dd + 1];
        for i in (0..=fd - dd).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs[..dd].iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Exact quotient `self / d` in `Z[x]`, or `None` when `d` does not divide
    /// `self` over the integers. `d` may be non-monic.
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let Some(fd) = self.degree() else {
            return Some(IntPoly::zero());
        };
        if fd < dd {
            return None;
        }
        let lc = d.leading_coeff()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); fd - dd + 1];
        for i in (0..=fd - dd).rev() {
            let (c, r) = rem[i + dd].div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(IntPoly::new(quot))
        } else {
            None
        }
    }

    /// Largest absolute coefficient; zero for the zero polynomial.
    pub fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_default()
    }
}

impl From<Vec<i64>> for IntPoly {
    fn from(v: Vec<i64>) -> Self {
        Self::from_i64s(&v)
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &'a IntPoly) -> IntPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        IntPoly::new(coeffs)
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: IntPoly) -> IntPoly {
        &self + &rhs
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &'a IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: IntPoly) -> IntPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &'a IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::new(coeffs)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

impl fmt::Display for IntPoly {
    /// Compact form accepted by [`parse_poly`], e.g. `x^3-x+7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let a = c.abs();
            if e == 0 || !a.is_one() {
                write!(f, "{a}")?;
            }
            match e {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}
