//! Polynomials over a prime field `F_p` and irreducibility tests modulo `p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::poly::IntPoly;
use crate::primes::{distinct_prime_factors, is_prime, primes_up_to};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModpError {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("expected a monic polynomial of degree at least 1")]
    BadModulusPolynomial,
    #[error("irreducibility is undefined for constant polynomials")]
    ConstantPolynomial,
    #[error("enumeration guard exceeded: p = {p}, degree = {degree} (limits p <= 7, degree <= 8)")]
    GuardExceeded { p: u64, degree: usize },
    #[error("phi must be monic of degree at least 1")]
    BadPhi,
}

/// Polynomial with coefficients in `[0, p)`, ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

impl ModPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self, ModpError> {
        if !is_prime(p) {
            return Err(ModpError::CompositeModulus(p));
        }
        Ok(Self::from_raw(p, coeffs.into_iter().map(|c| c % p).collect()))
    }

    fn from_raw(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    fn one(p: u64) -> Self {
        Self::from_raw(p, vec![1 % p])
    }

    fn x(p: u64) -> Self {
        Self::from_raw(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn check_same(&self, other: &ModPoly) -> Result<(), ModpError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(ModpError::ModulusMismatch(self.p, other.p))
        }
    }

    fn sub(&self, other: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::from_raw(self.p, c)
    }

    fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        Self::from_raw(self.p, c)
    }

    /// Remainder modulo a nonzero `m`.
    fn rem(&self, m: &ModPoly) -> ModPoly {
        let dm = m.degree().expect("nonzero modulus");
        let p = self.p;
        let lc_inv = inv(m.coeffs[dm], p);
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let top = r.len() - 1;
            let c = mulmod(r[top], lc_inv, p);
            if c != 0 {
                let shift = top - dm;
                for (j, &mc) in m.coeffs.iter().enumerate() {
                    r[shift + j] = (r[shift + j] + p - mulmod(c, mc, p)) % p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Self::from_raw(p, r)
    }

    fn monic(&self) -> ModPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let li = inv(lc, self.p);
                Self::from_raw(
                    self.p,
                    self.coeffs.iter().map(|&c| mulmod(c, li, self.p)).collect(),
                )
            }
        }
    }

    /// Monic gcd by the Euclidean algorithm.
    fn gcd(&self, other: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m` by square-and-multiply.
    fn pow_mod(&self, mut e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lifted = IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect());
        write!(f, "{lifted} (mod {})", self.p)
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly({self})")
    }
}

/// Coefficient-wise reduction of an integer polynomial modulo a prime.
pub fn reduce(f: &IntPoly, p: u64) -> Result<ModPoly, ModpError> {
    if !is_prime(p) {
        return Err(ModpError::CompositeModulus(p));
    }
    let pb = BigInt::from(p);
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits in u64"))
        .collect();
    Ok(ModPoly::from_raw(p, coeffs))
}

fn check_modulus(m: &ModPoly) -> Result<usize, ModpError> {
    match m.degree() {
        Some(d) if d >= 1 && m.is_monic() => Ok(d),
        _ => Err(ModpError::BadModulusPolynomial),
    }
}

/// `(a * b) mod m` over `F_p`.
pub fn mod_mul(a: &ModPoly, b: &ModPoly, m: &ModPoly) -> Result<ModPoly, ModpError> {
    a.check_same(b)?;
    a.check_same(m)?;
    check_modulus(m)?;
    Ok(a.mul(b).rem(m))
}

/// Residue of `x^(p^e)` modulo the monic `m`, by `e` rounds of p-th powering.
pub fn frobenius_power(m: &ModPoly, e: u32) -> Result<ModPoly, ModpError> {
    check_modulus(m)?;
    let mut r = ModPoly::x(m.p).rem(m);
    for _ in 0..e {
        r = r.pow_mod(m.p, m);
    }
    Ok(r)
}

/// Rabin's test: `f` of degree `d` is irreducible iff `x^(p^d) = x (mod f)`
/// and `gcd(x^(p^(d/q)) - x, f) = 1` for every prime `q | d`.
pub fn rabin_irreducible(f: &ModPoly) -> Result<bool, ModpError> {
    let d = match f.degree() {
        None | Some(0) => return Err(ModpError::ConstantPolynomial),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    let f = f.monic();
    let x = ModPoly::x(f.p).rem(&f);
    for q in distinct_prime_factors(d as u64) {
        let h = frobenius_power(&f, (d as u64 / q) as u32)?;
        if !h.sub(&x).gcd(&f).is_one() {
            return Ok(false);
        }
    }
    Ok(frobenius_power(&f, d as u32)? == x)
}

fn monic_polys(p: u64, degree: usize) -> impl Iterator<Item = ModPoly> {
    let count = p.pow(degree as u32);
    (0..count).map(move |mut idx| {
        let mut c = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            c.push(idx % p);
            idx /= p;
        }
        c.push(1);
        ModPoly::from_raw(p, c)
    })
}

/// Exhaustive trial division by every monic polynomial of degree
/// `1..=deg f / 2`. Only for `p <= 7` and `deg f <= 8`.
pub fn naive_irreducible(f: &ModPoly) -> Result<bool, ModpError> {
    let d = match f.degree() {
        None | Some(0) => return Err(ModpError::ConstantPolynomial),
        Some(d) => d,
    };
    if f.p > 7 || d > 8 {
        return Err(ModpError::GuardExceeded { p: f.p, degree: d });
    }
    for k in 1..=d / 2 {
        if monic_polys(f.p, k).any(|g| f.rem(&g).is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityReport {
    pub pass: bool,
    pub primes_checked: Vec<u64>,
    pub first_failure: Option<u64>,
}

/// Checks that the monic `phi` stays irreducible modulo every prime `<= bound`.
/// Stops at the first failing prime.
pub fn irreducible_mod_all(phi: &IntPoly, bound: u64) -> Result<IrreducibilityReport, ModpError> {
    if !phi.is_monic() || phi.degree().unwrap_or(0) < 1 {
        return Err(ModpError::BadPhi);
    }
    let mut primes_checked = Vec::new();
    for p in primes_up_to(bound) {
        primes_checked.push(p);
        if !rabin_irreducible(&reduce(phi, p)?)? {
            return Ok(IrreducibilityReport {
                pass: false,
                primes_checked,
                first_failure: Some(p),
            });
        }
    }
    Ok(IrreducibilityReport {
        pass: true,
        primes_checked,
        first_failure: None,
    })
}
