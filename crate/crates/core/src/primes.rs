//! Small-prime utilities: sieve, trial division, divisor enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// All primes `<= bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Smallest-prime-factor table for `0..=bound`; entries 0 and 1 are 0.
pub fn smallest_prime_factors(bound: usize) -> Vec<u32> {
    let mut spf = vec![0u32; bound + 1];
    for i in 2..=bound {
        if spf[i] != 0 {
            continue;
        }
        let mut j = i;
        while j <= bound {
            if spf[j] == 0 {
                spf[j] = i as u32;
            }
            j += i;
        }
    }
    spf
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n` in ascending order, by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Prime factorization of `|n|` as `(prime, exponent)` pairs, by trial division.
/// `n` must be nonzero.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if let Some(small) = n.to_u64() {
        let mut m = small;
        let mut d = 2u64;
        while d.saturating_mul(d) <= m {
            if m % d == 0 {
                let mut e = 0;
                while m % d == 0 {
                    m /= d;
                    e += 1;
                }
                out.push((BigInt::from(d), e));
            }
            d += 1;
        }
        if m > 1 {
            out.push((BigInt::from(m), 1));
        }
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&d);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of a nonzero integer, ascending.
pub fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= &p;
                next.push(pk.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// True iff `n = 2^u` for some `u >= 2`.
pub fn is_power_of_two_at_least_4(n: u64) -> bool {
    n >= 4 && n.is_power_of_two()
}
