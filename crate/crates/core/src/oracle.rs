//! Bounded brute-force factor search, independent of the polygon machinery.
//!
//! A degree-`e` factor `g` of `f` satisfies `g(x_i) | f(x_i)` at every integer
//! point, so `g` is determined by its leading coefficient (a divisor of
//! `lc(f)`) and its values at `e` points. Enumerating those divisor tuples
//! visits every integer factor of degree `e` within the coefficient bound,
//! which is the same set a coefficient-box enumeration would find, at a small
//! fraction of the cost. Among the divisors found, the one with the smallest
//! ascending coefficient vector is returned, so results do not depend on
//! enumeration or thread order.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::poly::IntPoly;
use crate::primes::positive_divisors;
use crate::valuation::{ratio, ExactRational};

pub const DEFAULT_CANDIDATE_CAP: u64 = 10_000_000;
pub const CANDIDATE_CAP_ENV: &str = "PHINEWTON_CANDIDATE_CAP";

const POINT_RADIUS: i64 = 40;
const MAX_POINT_VALUE: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("cannot search factors of the zero polynomial")]
    ZeroPolynomial,
    #[error("cannot search factors of a constant")]
    ConstantPolynomial,
    #[error("only {found} usable evaluation points for degree {degree}")]
    NotEnoughPoints { degree: usize, found: usize },
    #[error("invalid {CANDIDATE_CAP_ENV} value `{0}`")]
    BadCap(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSearchBudget {
    pub max_degree: usize,
    /// Coefficient bound; the Mignotte bound is always applied as well.
    pub coeff_bound: Option<BigInt>,
    pub candidate_cap: u64,
}

impl FactorSearchBudget {
    pub fn new(max_degree: usize) -> Self {
        Self {
            max_degree,
            coeff_bound: None,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(IntPoly),
    NoneFound,
    /// The candidate space exceeds the cap; nothing was concluded.
    Refused { candidates: u64, cap: u64 },
}

/// Cap from `PHINEWTON_CANDIDATE_CAP`, falling back to the default.
pub fn candidate_cap_from_env() -> Result<u64, OracleError> {
    match std::env::var(CANDIDATE_CAP_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| OracleError::BadCap(s)),
        Err(_) => Ok(DEFAULT_CANDIDATE_CAP),
    }
}

/// `2^d * ceil(||f||_2)`: bounds `||g||_inf` for any degree-`d` factor `g`.
pub fn mignotte_bound(f: &IntPoly, d: usize) -> BigInt {
    let sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let mut r = sq.sqrt();
    if &r * &r < sq {
        r += 1;
    }
    r << d
}

pub fn verify_factorization(f: &IntPoly, factors: &[IntPoly]) -> bool {
    factors.iter().fold(IntPoly::one(), |acc, g| &acc * g) == *f
}

/// Distinct rational roots, ascending.
pub fn rational_roots(f: &IntPoly) -> Vec<ExactRational> {
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    let low = f.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(ratio(0, 1));
    }
    if deg > low {
        let g = &f.coeffs()[low..];
        let nums = positive_divisors(&g[0]);
        let dens = positive_divisors(g.last().unwrap());
        for q in &dens {
            for p in &nums {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for s in [p.clone(), -p] {
                    if homogeneous_eval(g, &s, q).is_zero() {
                        roots.push(ExactRational::new(s, q.clone()));
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

// Σ c_i p^i q^(m-i)
fn homogeneous_eval(c: &[BigInt], p: &BigInt, q: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for ci in c.iter().rev() {
        acc = acc * p + ci * &qpow;
        qpow *= q;
    }
    acc
}

/// First factor in degree-ascending order with `1 <= deg <= max_degree`
/// (and `deg < deg f`); within a degree, the smallest coefficient vector.
pub fn bounded_factor_search(
    f: &IntPoly,
    budget: &FactorSearchBudget,
) -> Result<SearchOutcome, OracleError> {
    let f = normalize(f)?;
    let n = f.degree().unwrap();
    let degrees: Vec<usize> = (1..=budget.max_degree.min(n - 1)).collect();
    search_degrees(&f, &degrees, budget)
}

/// A factor of `f` whose degree lies in `[lo, hi)`, or a proof of absence.
///
/// A factor of degree `d` exists iff one of degree `deg f - d` does, so each
/// degree is searched on whichever side is smaller and the cofactor returned
/// when needed. `budget.max_degree` is not consulted.
pub fn factor_in_degree_range(
    f: &IntPoly,
    lo: usize,
    hi: usize,
    budget: &FactorSearchBudget,
) -> Result<SearchOutcome, OracleError> {
    let f = normalize(f)?;
    let n = f.degree().unwrap();
    let mut degrees: Vec<usize> = (lo.max(1)..hi.min(n))
        .map(|d| d.min(n - d))
        .collect();
    degrees.sort();
    degrees.dedup();
    match search_degrees(&f, &degrees, budget)? {
        SearchOutcome::Found(g) => {
            let d = g.degree().unwrap();
            if (lo..hi).contains(&d) {
                Ok(SearchOutcome::Found(g))
            } else {
                let cof = f.exact_div(&g).expect("found factor divides f");
                Ok(SearchOutcome::Found(cof))
            }
        }
        other => Ok(other),
    }
}

fn normalize(f: &IntPoly) -> Result<IntPoly, OracleError> {
    match f.degree() {
        None => Err(OracleError::ZeroPolynomial),
        Some(0) => Err(OracleError::ConstantPolynomial),
        Some(_) => {
            let g = f.primitive_part().expect("nonzero");
            Ok(if g.leading_coeff().unwrap().is_negative() { -g } else { g })
        }
    }
}

fn search_degrees(
    f: &IntPoly,
    degrees: &[usize],
    budget: &FactorSearchBudget,
) -> Result<SearchOutcome, OracleError> {
    if degrees.is_empty() {
        return Ok(SearchOutcome::NoneFound);
    }
    let table = PointTable::new(f);
    let mut plans = Vec::with_capacity(degrees.len());
    let mut total: u64 = 0;
    for &e in degrees {
        let plan = Plan::new(f, e, &table, budget)?;
        total = total.saturating_add(plan.count);
        plans.push(plan);
    }
    if total > budget.candidate_cap {
        return Ok(SearchOutcome::Refused {
            candidates: total,
            cap: budget.candidate_cap,
        });
    }
    for plan in &plans {
        if let Some(g) = plan.run(f) {
            return Ok(SearchOutcome::Found(g));
        }
    }
    Ok(SearchOutcome::NoneFound)
}

struct Point {
    x: i64,
    value: u64,
    sign_negative: bool,
    tau: u64,
}

/// Usable evaluation points, best first: few divisors, then small `|x|`.
struct PointTable {
    points: Vec<Point>,
}

fn divisor_count(mut m: u64) -> u64 {
    let mut tau = 1;
    let mut d = 2u64;
    while d * d <= m {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        tau *= e + 1;
        d += 1;
    }
    if m > 1 {
        tau *= 2;
    }
    tau
}

impl PointTable {
    fn new(f: &IntPoly) -> Self {
        let mut points = Vec::new();
        for x in -POINT_RADIUS..=POINT_RADIUS {
            let v = f.evaluate(&BigInt::from(x));
            if v.is_zero() {
                continue;
            }
            let Some(a) = v.abs().to_u64().filter(|&a| a <= MAX_POINT_VALUE) else {
                continue;
            };
            points.push(Point {
                x,
                value: a,
                sign_negative: v.is_negative(),
                tau: divisor_count(a),
            });
        }
        points.sort_by_key(|p| (p.tau, p.x.abs(), p.x));
        Self { points }
    }
}

fn signed_divisors(m: u64) -> Vec<i128> {
    positive_divisors(&BigInt::from(m))
        .into_iter()
        .flat_map(|d| {
            let d = d.to_i128().unwrap();
            [-d, d]
        })
        .collect()
}

// Fast path data; absent when any precomputed quantity leaves i128.
struct Fast {
    w: Vec<i128>,
    m: Vec<Vec<i128>>,
    den: i128,
    lcs: Vec<i128>,
    bound: i128,
}

struct Plan {
    e: usize,
    lcs: Vec<BigInt>,
    values: Vec<Vec<i128>>,
    /// `Π (x - x_i)`, ascending, length `e + 1`.
    w: Vec<BigInt>,
    /// Scaled Lagrange numerators: `Σ y_i m[i] / den` interpolates the values.
    m: Vec<Vec<BigInt>>,
    den: BigInt,
    bound: BigInt,
    extra: Option<(BigInt, BigInt)>,
    fast: Option<Fast>,
    count: u64,
}

fn poly_mul_linear(p: &[BigInt], root: i64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

impl Plan {
    fn new(
        f: &IntPoly,
        e: usize,
        table: &PointTable,
        budget: &FactorSearchBudget,
    ) -> Result<Self, OracleError> {
        if table.points.len() < e {
            return Err(OracleError::NotEnoughPoints {
                degree: e,
                found: table.points.len(),
            });
        }
        let chosen = &table.points[..e];
        let xs: Vec<i64> = chosen.iter().map(|p| p.x).collect();
        let extra = table.points.get(e).map(|p| {
            let v = BigInt::from(p.value);
            (BigInt::from(p.x), if p.sign_negative { -v } else { v })
        });
        let values: Vec<Vec<i128>> = chosen.iter().map(|p| signed_divisors(p.value)).collect();
        let lcs = positive_divisors(f.leading_coeff().unwrap());

        let mut w = vec![BigInt::one()];
        for &x in &xs {
            w = poly_mul_linear(&w, x);
        }
        let mut nums = Vec::with_capacity(e);
        let mut dens = Vec::with_capacity(e);
        for (i, &xi) in xs.iter().enumerate() {
            let mut num = vec![BigInt::one()];
            let mut den = BigInt::one();
            for (j, &xj) in xs.iter().enumerate() {
                if i != j {
                    num = poly_mul_linear(&num, xj);
                    den *= xi - xj;
                }
            }
            nums.push(num);
            dens.push(den);
        }
        let den = dens.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
        let m: Vec<Vec<BigInt>> = nums
            .into_iter()
            .zip(&dens)
            .map(|(num, d)| {
                let s = &den / d;
                num.into_iter().map(|c| c * &s).collect()
            })
            .collect();

        let mut bound = mignotte_bound(f, e);
        if let Some(b) = &budget.coeff_bound {
            bound = bound.min(b.clone());
        }

        let count = values
            .iter()
            .fold(lcs.len() as u64, |acc, v| acc.saturating_mul(v.len() as u64));

        let fast = (|| {
            Some(Fast {
                w: w.iter().map(ToPrimitive::to_i128).collect::<Option<_>>()?,
                m: m.iter()
                    .map(|r| r.iter().map(ToPrimitive::to_i128).collect::<Option<_>>())
                    .collect::<Option<_>>()?,
                den: den.to_i128()?,
                lcs: lcs.iter().map(ToPrimitive::to_i128).collect::<Option<_>>()?,
                bound: bound.to_i128().unwrap_or(i128::MAX),
            })
        })();

        Ok(Self {
            e,
            lcs,
            values,
            w,
            m,
            den,
            bound,
            extra,
            fast,
            count,
        })
    }

    fn decode(&self, mut idx: u64) -> (usize, Vec<i128>) {
        let l = self.lcs.len() as u64;
        let lc = (idx % l) as usize;
        idx /= l;
        let ys = self
            .values
            .iter()
            .map(|v| {
                let k = v.len() as u64;
                let y = v[(idx % k) as usize];
                idx /= k;
                y
            })
            .collect();
        (lc, ys)
    }

    fn candidate_fast(&self, fast: &Fast, lc: usize, ys: &[i128]) -> Option<Option<Vec<BigInt>>> {
        let c = fast.lcs[lc];
        let mut g = Vec::with_capacity(self.e + 1);
        for k in 0..self.e {
            let mut num: i128 = 0;
            for (y, row) in ys.iter().zip(&fast.m) {
                num = num.checked_add(y.checked_mul(row[k])?)?;
            }
            if num % fast.den != 0 {
                return Some(None);
            }
            let gk = (num / fast.den).checked_add(c.checked_mul(fast.w[k])?)?;
            if gk.checked_abs()? > fast.bound {
                return Some(None);
            }
            g.push(gk);
        }
        if c > fast.bound {
            return Some(None);
        }
        g.push(c);
        Some(Some(g.into_iter().map(BigInt::from).collect()))
    }

    fn candidate_big(&self, lc: usize, ys: &[i128]) -> Option<Vec<BigInt>> {
        let c = &self.lcs[lc];
        let mut g = Vec::with_capacity(self.e + 1);
        for k in 0..self.e {
            let num: BigInt = ys.iter().zip(&self.m).map(|(y, row)| &row[k] * *y).sum();
            let (q, r) = num.div_rem(&self.den);
            if !r.is_zero() {
                return None;
            }
            let gk = q + c * &self.w[k];
            if gk.abs() > self.bound {
                return None;
            }
            g.push(gk);
        }
        if c > &self.bound {
            return None;
        }
        g.push(c.clone());
        Some(g)
    }

    fn candidate(&self, idx: u64) -> Option<Vec<BigInt>> {
        let (lc, ys) = self.decode(idx);
        if let Some(fast) = &self.fast {
            if let Some(res) = self.candidate_fast(fast, lc, &ys) {
                return res;
            }
        }
        self.candidate_big(lc, &ys)
    }

    fn run(&self, f: &IntPoly) -> Option<IntPoly> {
        (0..self.count)
            .into_par_iter()
            .filter_map(|idx| {
                let coeffs = self.candidate(idx)?;
                let g = IntPoly::new(coeffs);
                if let Some((x, fx)) = &self.extra {
                    let gx = g.evaluate(x);
                    if gx.is_zero() || !(fx % &gx).is_zero() {
                        return None;
                    }
                }
                f.exact_div(&g)?;
                Some(g)
            })
            .min_by(|a, b| cmp_coeffs(a, b))
    }
}

fn cmp_coeffs(a: &IntPoly, b: &IntPoly) -> Ordering {
    a.coeffs().cmp(b.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn phi() -> IntPoly {
        ip(&[7, -1, 0, 1])
    }

    #[test]
    fn mignotte_examples() {
        assert_eq!(mignotte_bound(&ip(&[2, 2, 1]), 1), BigInt::from(6));
        assert_eq!(mignotte_bound(&ip(&[0, 1]), 1), BigInt::from(2));
        let f = ip(&[3, -5, 0, 2, 9]);
        for d in 1..4 {
            assert!(mignotte_bound(&f, d + 1) >= mignotte_bound(&f, d));
        }
    }

    #[test]
    fn search_examples() {
        let budget = FactorSearchBudget::new(1);
        assert_eq!(bounded_factor_search(&ip(&[1, 0, 1]), &budget), Ok(SearchOutcome::NoneFound));
        assert_eq!(
            bounded_factor_search(&ip(&[-1, 0, 1]), &budget),
            Ok(SearchOutcome::Found(ip(&[-1, 1])))
        );
    }

    #[test]
    fn finds_counterexample_factor() {
        let p = phi();
        let f = &(&p - &ip(&[2])) * &(&(&p.pow(2) + &p.scale(&6.into())) + &ip(&[12]));
        let got = bounded_factor_search(&f, &FactorSearchBudget::new(4)).unwrap();
        assert_eq!(got, SearchOutcome::Found(ip(&[5, -1, 0, 1])));
        // cofactor side of the degree range
        let got = factor_in_degree_range(&f, 6, 7, &FactorSearchBudget::new(0)).unwrap();
        let SearchOutcome::Found(g) = got else { panic!("expected a factor") };
        assert_eq!(g.degree(), Some(6));
        assert!(f.exact_div(&g).is_some());
    }

    #[test]
    fn non_monic_and_content() {
        // 6(2x+3)(x^2+1)
        let f = (&ip(&[3, 2]) * &ip(&[1, 0, 1])).scale(&BigInt::from(6));
        let got = bounded_factor_search(&f, &FactorSearchBudget::new(2)).unwrap();
        assert_eq!(got, SearchOutcome::Found(ip(&[3, 2])));
        let neg = -f;
        assert_eq!(
            bounded_factor_search(&neg, &FactorSearchBudget::new(2)).unwrap(),
            SearchOutcome::Found(ip(&[3, 2]))
        );
    }

    #[test]
    fn refuses_over_cap() {
        let f = ip(&[-720, 1764, -1624, 735, -175, 21, -1]).scale(&BigInt::from(-1));
        let budget = FactorSearchBudget {
            max_degree: 3,
            coeff_bound: None,
            candidate_cap: 10,
        };
        assert!(matches!(
            bounded_factor_search(&f, &budget),
            Ok(SearchOutcome::Refused { cap: 10, .. })
        ));
    }

    #[test]
    fn exhaustive_against_box_enumeration() {
        // every monic degree-2 factor with coefficients in [-3, 3] of products
        // of two small quadratics is found by the divisor search
        let quads: Vec<IntPoly> = (-3..=3)
            .flat_map(|b| (-3..=3).map(move |c| ip(&[c, b, 1])))
            .collect();
        for g in quads.iter().step_by(5) {
            for h in quads.iter().step_by(7) {
                let f = g * h;
                let mut box_first = None;
                'outer: for c in -12..=12 {
                    for b in -12..=12 {
                        let cand = ip(&[c, b, 1]);
                        if f.exact_div(&cand).is_some() {
                            box_first = Some(cand);
                            break 'outer;
                        }
                    }
                }
                let linear = bounded_factor_search(&f, &FactorSearchBudget::new(1)).unwrap();
                let got = factor_in_degree_range(&f, 2, 3, &FactorSearchBudget::new(0)).unwrap();
                match (linear, box_first) {
                    (SearchOutcome::NoneFound, Some(b)) => assert_eq!(got, SearchOutcome::Found(b)),
                    (_, None) => unreachable!("g itself divides f"),
                    _ => assert!(matches!(got, SearchOutcome::Found(_))),
                }
            }
        }
    }

    #[test]
    fn found_factors_are_sound() {
        let f = &(&ip(&[1, 1]) * &ip(&[-2, 0, 3])) * &ip(&[5, 0, 0, 1]);
        for d in 1..=5 {
            if let SearchOutcome::Found(g) = bounded_factor_search(&f, &FactorSearchBudget::new(d)).unwrap() {
                assert!(g.degree().unwrap() >= 1);
                assert!(f.exact_div(&g).is_some());
            }
        }
    }

    #[test]
    fn rational_root_examples() {
        assert!(rational_roots(&ip(&[1, 0, 1])).is_empty());
        assert_eq!(rational_roots(&ip(&[0, -1, 1])), vec![ratio(0, 1), ratio(1, 1)]);
        assert_eq!(rational_roots(&ip(&[-1, 0, 4])), vec![ratio(-1, 2), ratio(1, 2)]);
    }

    #[test]
    fn verify_factorization_examples() {
        let p = phi();
        let f = &(&p - &ip(&[2])) * &(&(&p.pow(2) + &p.scale(&6.into())) + &ip(&[12]));
        assert!(verify_factorization(&f, &[&p - &ip(&[2]), &(&p.pow(2) + &p.scale(&6.into())) + &ip(&[12])]));
        assert!(!verify_factorization(&f, &[f.clone(), ip(&[1, 1])]));
        assert!(verify_factorization(&IntPoly::one(), &[]));
    }
}
