//! p-adic valuations of integers and integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::IntPoly;

/// Exact fraction in lowest terms with positive denominator.
pub type ExactRational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("valuation of zero is not representable")]
    Zero,
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

/// Always `a/b`, including integers (`1/1`).
pub fn fmt_ratio(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn check_prime(p: u64) -> Result<(), ValuationError> {
    if crate::primes::is_prime(p) {
        Ok(())
    } else {
        Err(ValuationError::NotPrime(p))
    }
}

/// Largest `e` with `p^e | b`.
pub fn vp(b: &BigInt, p: u64) -> Result<u64, ValuationError> {
    check_prime(p)?;
    if b.is_zero() {
        return Err(ValuationError::Zero);
    }
    let pb = BigInt::from(p);
    let mut e = 0;
    let mut b = b.clone();
    loop {
        let (q, r) = b.div_rem(&pb);
        if !r.is_zero() {
            return Ok(e);
        }
        b = q;
        e += 1;
    }
}

/// Gauss valuation: minimum of `vp` over the nonzero coefficients.
pub fn vpx(f: &IntPoly, p: u64) -> Result<u64, ValuationError> {
    check_prime(p)?;
    f.coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| vp(c, p))
        .try_fold(None, |acc: Option<u64>, v| {
            let v = v?;
            Ok(Some(acc.map_or(v, |a| a.min(v))))
        })?
        .ok_or(ValuationError::Zero)
}

/// `v_p(m!)` by Legendre's formula `Σ floor(m / p^i)`.
pub fn legendre_vp_factorial(m: u64, p: u64) -> Result<u64, ValuationError> {
    check_prime(p)?;
    let mut total = 0;
    let mut q = m;
    while q > 0 {
        q /= p;
        total += q;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn vp_examples() {
        assert_eq!(vp(&BigInt::from(24), 2), Ok(3));
        assert_eq!(vp(&BigInt::from(7), 2), Ok(0));
        assert_eq!(vp(&BigInt::from(110), 11), Ok(1));
        assert_eq!(vp(&BigInt::from(-54), 3), Ok(3));
        assert_eq!(vp(&BigInt::zero(), 3), Err(ValuationError::Zero));
        assert_eq!(vp(&BigInt::from(8), 4), Err(ValuationError::NotPrime(4)));
    }

    #[test]
    fn vpx_examples() {
        assert_eq!(vpx(&IntPoly::from_i64s(&[10, 4, 6]), 2), Ok(1));
        for p in [2, 3, 5, 7] {
            assert_eq!(vpx(&IntPoly::from_i64s(&[1, 1]), p), Ok(0));
        }
        let f = IntPoly::from_i64s(&[2, 2]);
        let g = IntPoly::from_i64s(&[0, 3]);
        assert_eq!(vpx(&(&f * &g), 2), Ok(1));
        assert_eq!(vpx(&IntPoly::zero(), 2), Err(ValuationError::Zero));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_vp_factorial(4, 2), Ok(3));
        assert_eq!(legendre_vp_factorial(10, 3), Ok(4));
        assert_eq!(legendre_vp_factorial(0, 5), Ok(0));
    }

    #[test]
    fn legendre_matches_direct_factorial() {
        let mut fact = BigInt::one();
        for m in 0u64..=20 {
            if m > 0 {
                fact *= m;
            }
            for p in [2u64, 3, 5, 7, 11, 13, 17, 19] {
                assert_eq!(legendre_vp_factorial(m, p), vp(&fact, p), "m={m} p={p}");
            }
        }
    }

    #[test]
    fn legendre_strict_bound() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for m in 1u64..=200 {
                let v = legendre_vp_factorial(m, p).unwrap();
                assert!(ratio(v, 1) < ratio(m, p - 1), "m={m} p={p}");
            }
        }
    }

    #[test]
    fn fmt_ratio_always_has_denominator() {
        assert_eq!(fmt_ratio(&ratio(2, 4)), "1/2");
        assert_eq!(fmt_ratio(&ratio(3, 3)), "1/1");
        assert_eq!(fmt_ratio(&ratio(-6, 4)), "-3/2");
    }

    proptest! {
        #[test]
        fn vp_is_additive(a in 1i64..100_000, b in 1i64..100_000, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            prop_assert_eq!(vp(&(&a * &b), p).unwrap(), vp(&a, p).unwrap() + vp(&b, p).unwrap());
        }

        #[test]
        fn gauss_valuation_is_additive(
            f in prop::collection::vec(-200i64..200, 1..7),
            g in prop::collection::vec(-200i64..200, 1..7),
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
        ) {
            let (f, g) = (IntPoly::from(f), IntPoly::from(g));
            prop_assume!(!f.is_zero() && !g.is_zero());
            prop_assert_eq!(vpx(&(&f * &g), p).unwrap(), vpx(&f, p).unwrap() + vpx(&g, p).unwrap());
        }
    }
}
