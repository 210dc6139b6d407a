//! Prime witnesses for the products `(n+1) n (n-1) ... (n-k+2)`.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::CertifyError;
use crate::primes::{distinct_prime_factors, smallest_prime_factors};

/// Smallest prime `p >= k+2` dividing `(n+1) n ... (n-k+2)` (`k` factors),
/// found by trial division of each factor.
pub fn hanson_witness(n: u64, k: u64) -> Result<u64, CertifyError> {
    if n < 4 || k < 2 || k > n / 2 {
        return Err(CertifyError::HansonRange { n, k });
    }
    product_witness(n, k).ok_or(CertifyError::NoWitness { n, k })
}

/// Smallest prime `p >= k+2` dividing the `k`-term product, for any `k >= 1`.
pub(crate) fn product_witness(n: u64, k: u64) -> Option<u64> {
    (n + 2 - k..=n + 1)
        .flat_map(distinct_prime_factors)
        .filter(|&p| p >= k + 2)
        .min()
}

/// Smallest odd prime dividing `n + 1`.
pub fn odd_prime_divisor(n: u64) -> Option<u64> {
    distinct_prime_factors(n + 1).into_iter().find(|&p| p != 2)
}

fn scan_one(n: u64, spf: &[u32], out: &mut Vec<(u64, u64)>) {
    let mut primes = BTreeSet::new();
    let add = |mut t: usize, primes: &mut BTreeSet<u32>| {
        while t > 1 {
            let p = spf[t];
            primes.insert(p);
            while t % p as usize == 0 {
                t /= p as usize;
            }
        }
    };
    add(n as usize + 1, &mut primes);
    for k in 2..=n / 2 {
        add((n + 2 - k) as usize, &mut primes);
        if primes.range(k as u32 + 2..).next().is_none() {
            out.push((n, k));
        }
    }
}

/// Every `(n, k)` with `4 <= n <= n_max`, `2 <= k <= n/2` that has no prime
/// witness, ordered by `n` then `k`. Factor sets grow incrementally in `k`.
///
/// With `parallel`, the `n` range is split into chunks scanned concurrently;
/// the merged output is identical to the sequential scan.
pub fn hanson_exceptions(n_max: u64, parallel: bool) -> Vec<(u64, u64)> {
    if n_max < 4 {
        return Vec::new();
    }
    let spf = smallest_prime_factors(n_max as usize + 1);
    let ns: Vec<u64> = (4..=n_max).collect();
    if parallel {
        let mut chunks: Vec<(usize, Vec<(u64, u64)>)> = ns
            .par_chunks(256)
            .enumerate()
            .map(|(i, chunk)| {
                let mut out = Vec::new();
                for &n in chunk {
                    scan_one(n, &spf, &mut out);
                }
                (i, out)
            })
            .collect();
        chunks.sort_by_key(|(i, _)| *i);
        chunks.into_iter().flat_map(|(_, v)| v).collect()
    } else {
        let mut out = Vec::new();
        for n in ns {
            scan_one(n, &spf, &mut out);
        }
        out
    }
}
