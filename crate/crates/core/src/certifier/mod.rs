//! Irreducibility certificates for Schur-type polynomials
//!
//! `f = a_n φ^n/(n+1)! + Σ_{j<n} a_j(x) φ^j/(j+1)!`.
//!
//! The certifier works on `F = (n+1)! f = Σ b_j a_j(x) φ^j` with
//! `b_j = (n+1)!/(j+1)!`. Factors of degree below `deg φ` are ruled out by
//! reduction modulo a prime divisor of `n+1`; factors with degree in
//! `[k deg φ, (k+1) deg φ)` are ruled out for each `k <= n/2` by a prime
//! witness `p >= k+2` dividing `(n+1) n ... (n-k+2)`, for which every edge of
//! the φ-Newton polygon of `F` has slope below `1/k`.

mod certificate;
mod hanson;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::modp::{irreducible_mod_all, rabin_irreducible, reduce, ModpError};
use crate::oracle::{self, SearchOutcome};
use crate::poly::{phi_expand, IntPoly, PolyError};
use crate::polygon::PolygonError;
use crate::primes::{distinct_prime_factors, is_power_of_two_at_least_4, is_prime, primes_up_to};
use crate::valuation::{ratio, vp, vpx, ExactRational, ValuationError};

pub use certificate::{Certificate, Check, PrimeWitness, Remark, Verdict};
pub use hanson::{hanson_exceptions, hanson_witness, odd_prime_divisor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("preconditions violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Preconditions(Vec<Violation>),
    #[error("hanson_witness requires n >= 4 and 2 <= k <= n/2 (got n = {n}, k = {k})")]
    HansonRange { n: u64, k: u64 },
    #[error("no prime p >= k+2 divides (n+1)n...(n-k+2) for n = {n}, k = {k}")]
    NoWitness { n: u64, k: u64 },
    #[error("no prime divisor p of n+1 = {0} has phi irreducible mod p and p coprime to a_n")]
    NoSmallFactorPrime(u64),
    #[error("internal inconsistency: rightmost slope {slope} is not below 1/{k} for p = {p}")]
    SlopeBound { k: usize, p: u64, slope: String },
    #[error("certificate does not validate: {0}")]
    InvalidCertificate(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Modp(#[from] ModpError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub name: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.name, self.detail)
    }
}

/// `a_n φ^n/(n+1)! + Σ_{j<n} a_j(x) φ^j/(j+1)!` with integer `a_n`.
///
/// `a[j]` is `a_j(x)`; the list starts with `a_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurInput {
    pub phi: IntPoly,
    pub n: usize,
    pub a_n: BigInt,
    pub a: Vec<IntPoly>,
}

/// `Σ_{j=0}^{n} a_j(x) φ^j/(j+1)!` with a polynomial top coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurPolynomial {
    pub phi: IntPoly,
    pub coeffs: Vec<IntPoly>,
}

/// `b_j = (n+1)!/(j+1)!` and the products `b_j a_j(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledExpansion {
    pub phi: IntPoly,
    pub b: Vec<BigInt>,
    pub terms: Vec<IntPoly>,
}

impl ScaledExpansion {
    /// `F = Σ b_j a_j(x) φ^j`.
    pub fn assemble(&self) -> IntPoly {
        self.terms
            .iter()
            .rev()
            .fold(IntPoly::zero(), |acc, t| &(&acc * &self.phi) + t)
    }
}

/// `[b_0, ..., b_n]`, built from `b_n = 1` by `b_j = (j+2) b_{j+1}`.
pub fn scale_factors(n: usize) -> Vec<BigInt> {
    let mut b = vec![BigInt::one(); n + 1];
    for j in (0..n).rev() {
        b[j] = &b[j + 1] * (j + 2);
    }
    b
}

impl SchurInput {
    pub fn new(phi: IntPoly, n: usize, a_n: BigInt, a: Vec<IntPoly>) -> Result<Self, CertifyError> {
        let input = Self { phi, n, a_n, a };
        input.validate()?;
        Ok(input)
    }

    fn validate(&self) -> Result<(), CertifyError> {
        let bad = |s: String| Err(CertifyError::Malformed(s));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.a.len() != self.n {
            return bad(format!(
                "expected {} coefficients a_0..a_{}, got {}",
                self.n,
                self.n - 1,
                self.a.len()
            ));
        }
        if self.phi.degree().unwrap_or(0) < 1 {
            return bad("phi must have degree at least 1".into());
        }
        if self.a_n.is_zero() {
            return bad("a_n must be nonzero".into());
        }
        if self.a[0].is_zero() {
            return bad("a_0 must be nonzero".into());
        }
        Ok(())
    }

    pub fn phi_degree(&self) -> usize {
        self.phi.degree().expect("validated")
    }

    pub fn general(&self) -> SchurPolynomial {
        let mut coeffs = self.a.clone();
        coeffs.push(IntPoly::constant(self.a_n.clone()));
        SchurPolynomial {
            phi: self.phi.clone(),
            coeffs,
        }
    }

    /// `F = (n+1)! f`.
    pub fn scaled_polynomial(&self) -> IntPoly {
        scaled_expansion(&self.general()).assemble()
    }

    /// Recovers the structured form from `F = (n+1)! f` and `φ`.
    ///
    /// The φ-expansion of `F` must have an integer top term and each lower
    /// term divisible by `(n+1)!/(j+1)!`.
    pub fn from_scaled(big_f: &IntPoly, phi: &IntPoly) -> Result<Self, CertifyError> {
        let e = phi_expand(big_f, phi)?;
        let n = match e.top_index() {
            Some(n) if n >= 1 => n,
            _ => {
                return Err(CertifyError::Malformed(
                    "polynomial has phi-degree 0; nothing to certify".into(),
                ))
            }
        };
        let top = &e.terms()[n];
        if top.degree() != Some(0) {
            return Err(CertifyError::Malformed(format!(
                "top phi-coefficient {top} is not an integer"
            )));
        }
        let b = scale_factors(n);
        let mut a = Vec::with_capacity(n);
        for j in 0..n {
            let t = e.term(j);
            let mut coeffs = Vec::with_capacity(t.coeffs().len());
            for c in t.coeffs() {
                let (q, r) = c.div_rem(&b[j]);
                if !r.is_zero() {
                    return Err(CertifyError::Malformed(format!(
                        "phi-coefficient {j} ({t}) is not divisible by (n+1)!/(j+1)! = {}",
                        b[j]
                    )));
                }
                coeffs.push(q);
            }
            a.push(IntPoly::new(coeffs));
        }
        Self::new(phi.clone(), n, top.coeff(0), a)
    }
}

impl SchurPolynomial {
    pub fn n(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

pub fn scaled_expansion(sp: &SchurPolynomial) -> ScaledExpansion {
    let b = scale_factors(sp.n());
    let terms = sp
        .coeffs
        .iter()
        .zip(&b)
        .map(|(a, bj)| a.scale(bj))
        .collect();
    ScaledExpansion {
        phi: sp.phi.clone(),
        b,
        terms,
    }
}

/// Slope of the last edge of the φ-Newton polygon of `F`:
/// `max_j (v(b_0 a_0) - v(b_j a_j)) / j` over `1 <= j <= n` with `a_j != 0`.
pub fn rightmost_slope(sp: &SchurPolynomial, p: u64) -> Result<ExactRational, CertifyError> {
    let scaled = scaled_expansion(sp);
    let v0 = vpx(&scaled.terms[0], p)? as i128;
    let mut best: Option<ExactRational> = None;
    for (j, t) in scaled.terms.iter().enumerate().skip(1) {
        if t.is_zero() {
            continue;
        }
        let s = ratio(v0 - vpx(t, p)? as i128, j as i128);
        if best.as_ref().is_none_or(|b| &s > b) {
            best = Some(s);
        }
    }
    best.ok_or_else(|| CertifyError::Malformed("all of a_1..a_n vanish".into()))
}

fn divides_falling_product(p: u64, n: u64, k: u64) -> bool {
    (n + 2 - k..=n + 1).any(|t| t % p == 0)
}

/// Validates the hypotheses for excluding factors of `F` with degree in
/// `[k deg φ, (k+1) deg φ)` via the prime `p`, and returns the witness.
///
/// The exclusion itself rests on the rightmost slope being below `1/k`;
/// that bound is recomputed here and an inconsistency is an error.
pub fn exclude_degree_band(sp: &SchurPolynomial, k: usize, p: u64) -> Result<PrimeWitness, CertifyError> {
    let n = sp.n();
    let mut v = Vec::new();
    let mut violate = |name: &'static str, detail: String| v.push(Violation { name, detail });

    let phi_deg = sp.phi.degree().unwrap_or(0);
    if phi_deg < 1 || !sp.phi.is_monic() {
        violate("phi_monic", format!("phi = {} must be monic of degree >= 1", sp.phi));
    }
    if k < 1 || k > n / 2 {
        violate("k_range", format!("k = {k} outside [1, {}]", n / 2));
    }
    let prime = is_prime(p);
    if !prime {
        violate("p_prime", format!("{p} is not prime"));
    }
    if p < k as u64 + 2 {
        violate("p_at_least_k_plus_2", format!("p = {p} < k + 2 = {}", k + 2));
    }
    if k >= 1 && k <= n + 1 && !divides_falling_product(p, n as u64, k as u64) {
        violate(
            "p_divides_product",
            format!("p = {p} does not divide (n+1)n...(n-k+2) for n = {n}, k = {k}"),
        );
    }
    if let Some(bad) = sp.coeffs.iter().position(|a| a.degree().is_some_and(|d| d >= phi_deg)) {
        violate(
            "coefficient_degrees",
            format!("deg a_{bad} = {} is not below deg phi = {phi_deg}", sp.coeffs[bad].degree().unwrap()),
        );
    }
    match sp.coeffs.last().and_then(IntPoly::leading_coeff) {
        None => violate("p_coprime_to_leading_coefficient", "a_n is zero".into()),
        Some(lc) if prime && vp(lc, p)? > 0 => violate(
            "p_coprime_to_leading_coefficient",
            format!("p = {p} divides the leading coefficient {lc} of a_n"),
        ),
        _ => {}
    }
    match sp.coeffs.first().map(IntPoly::content) {
        None | Some(Err(_)) => violate("a0_content", "a_0 is zero".into()),
        Some(Ok(c)) => {
            let bad: Vec<u64> = primes_up_to(n as u64 + 1)
                .into_iter()
                .filter(|&q| (&c % q).is_zero())
                .collect();
            if !bad.is_empty() {
                violate("a0_content", format!("content {c} of a_0 is divisible by {bad:?}"));
            }
        }
    }
    if prime && phi_deg >= 1 && sp.phi.is_monic() && !rabin_irreducible(&reduce(&sp.phi, p)?)? {
        violate("phi_irreducible_mod_p", format!("phi = {} is reducible mod {p}", sp.phi));
    }
    if !v.is_empty() {
        return Err(CertifyError::Preconditions(v));
    }

    let slope = rightmost_slope(sp, p)?;
    if slope >= ratio(1, k as u64) {
        return Err(CertifyError::SlopeBound {
            k,
            p,
            slope: crate::valuation::fmt_ratio(&slope),
        });
    }
    Ok(PrimeWitness { k, p })
}

/// Smallest prime `p | n+1` with `φ` irreducible mod `p` and `p ∤ a_n`;
/// certifies that `f` has no non-constant factor of degree below `deg φ`.
pub fn small_factor_exclusion(input: &SchurInput) -> Result<u64, CertifyError> {
    input.validate()?;
    if !input.phi.is_monic() {
        return Err(CertifyError::Malformed("phi must be monic".into()));
    }
    let m = input.n as u64 + 1;
    for p in distinct_prime_factors(m) {
        if (&input.a_n % p).is_zero() {
            continue;
        }
        if rabin_irreducible(&reduce(&input.phi, p)?)? {
            return Ok(p);
        }
    }
    Err(CertifyError::NoSmallFactorPrime(m))
}

pub const H1: &str = "H1:n_not_8";
pub const H2: &str = "H2:n_plus_1_not_power_of_two";
pub const H3: &str = "H3:phi_monic";
pub const H4: &str = "H4:phi_irreducible_mod_primes_up_to_n_plus_1";
pub const H5: &str = "H5:deg_a_j_below_deg_phi";
pub const H6: &str = "H6:content_a_n_a_0_coprime_to_primes_up_to_n_plus_1";
pub const ORACLE_CHECK: &str = "oracle:residual_interval";

/// Hypothesis checks H1..H6; failures are data, not errors.
pub fn check_hypotheses(input: &SchurInput) -> Vec<Check> {
    let n = input.n as u64;
    let mut checks = Vec::with_capacity(6);

    checks.push(Check::new(H1, n != 8, format!("n = {n}")));

    let pow2 = is_power_of_two_at_least_4(n + 1);
    checks.push(Check::new(
        H2,
        !pow2,
        if pow2 {
            format!("n+1 = {} = 2^{}", n + 1, (n + 1).trailing_zeros())
        } else {
            format!("n+1 = {}", n + 1)
        },
    ));

    let monic = input.phi.is_monic() && input.phi.degree().unwrap_or(0) >= 1;
    checks.push(Check::new(H3, monic, format!("phi = {}", input.phi)));

    let h4 = if !monic {
        Check::new(H4, false, "not checked: phi is not monic".into())
    } else {
        match irreducible_mod_all(&input.phi, n + 1) {
            Ok(r) if r.pass => Check::new(
                H4,
                true,
                format!("irreducible modulo {:?}", r.primes_checked),
            ),
            Ok(r) => Check::new(
                H4,
                false,
                format!("reducible modulo {}", r.first_failure.unwrap_or_default()),
            ),
            Err(e) => Check::new(H4, false, e.to_string()),
        }
    };
    checks.push(h4);

    let d = input.phi.degree().unwrap_or(0);
    let too_big: Vec<usize> = input
        .a
        .iter()
        .enumerate()
        .filter(|(_, a)| a.degree().is_some_and(|ad| ad >= d))
        .map(|(j, _)| j)
        .collect();
    checks.push(Check::new(
        H5,
        too_big.is_empty(),
        if too_big.is_empty() {
            format!("all deg a_j < {d}")
        } else {
            format!("deg a_j >= {d} for j in {too_big:?}")
        },
    ));

    let content = input.a[0]
        .content()
        .map(|c| c * input.a_n.abs_ref())
        .unwrap_or_default();
    let dividing: Vec<u64> = primes_up_to(n + 1)
        .into_iter()
        .filter(|&q| (&content % q).is_zero())
        .collect();
    checks.push(Check::new(
        H6,
        dividing.is_empty() && !content.is_zero(),
        if dividing.is_empty() {
            format!("content(a_n a_0) = {content}")
        } else {
            format!("content(a_n a_0) = {content} is divisible by {dividing:?}")
        },
    ));
    checks
}

trait AbsRef {
    fn abs_ref(&self) -> BigInt;
}

impl AbsRef for BigInt {
    fn abs_ref(&self) -> BigInt {
        num_traits::Signed::abs(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Try to close a residual interval by bounded factor search.
    pub oracle: bool,
    pub candidate_cap: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            oracle: false,
            candidate_cap: oracle::DEFAULT_CANDIDATE_CAP,
        }
    }
}

/// Runs the full pipeline without the oracle.
pub fn certify(input: &SchurInput) -> Result<Certificate, CertifyError> {
    certify_with(input, &CertifyOptions::default())
}

pub fn certify_with(input: &SchurInput, opts: &CertifyOptions) -> Result<Certificate, CertifyError> {
    input.validate()?;
    let mut checks = check_hypotheses(input);
    let passed = |name: &str, checks: &[Check]| checks.iter().any(|c| c.name == name && c.pass);
    let n = input.n;
    let d = input.phi_degree();

    let mut cert = Certificate {
        verdict: Verdict::HypothesesNotMet,
        n,
        phi: input.phi.clone(),
        checks: Vec::new(),
        small_factor_prime: None,
        witnesses: Vec::new(),
        excluded_intervals: Vec::new(),
        remark: None,
        residual_interval: None,
    };

    let core_ok = [H3, H4, H5, H6].iter().all(|h| passed(h, &checks));
    if !core_ok {
        cert.checks = checks;
        return Ok(cert);
    }

    let sp = input.general();
    let p0 = small_factor_exclusion(input)?;
    cert.small_factor_prime = Some(p0);
    if d > 1 {
        cert.excluded_intervals.push((1, d));
    }

    let mut residual_k = None;
    for k in 1..=n / 2 {
        let prime = if k == 1 {
            odd_prime_divisor(n as u64)
        } else {
            match hanson_witness(n as u64, k as u64) {
                Ok(p) => Some(p),
                Err(CertifyError::NoWitness { .. }) => None,
                Err(e) => return Err(e),
            }
        };
        match prime {
            Some(p) => {
                cert.witnesses.push(exclude_degree_band(&sp, k, p)?);
                cert.excluded_intervals.push((k * d, (k + 1) * d));
            }
            None => residual_k = Some(k),
        }
    }

    let hyp_ok = passed(H1, &checks) && passed(H2, &checks);
    match residual_k {
        None if hyp_ok => cert.verdict = Verdict::Irreducible,
        None => {
            // the failing hypothesis did not block any exclusion
            return Err(CertifyError::Malformed(format!(
                "unexpected complete exclusion with failing hypothesis at n = {n}"
            )));
        }
        Some(k) => {
            cert.remark = Some(if n == 8 {
                Remark::NEquals8
            } else {
                Remark::NPlus1PowerOfTwo
            });
            let residual = (k * d, (k + 1) * d);
            cert.residual_interval = Some(residual);
            cert.verdict = Verdict::RemarkCaseOpen;
            if opts.oracle {
                close_residual(input, residual, opts, &mut cert, &mut checks);
            }
        }
    }
    cert.checks = checks;
    Ok(cert)
}

fn close_residual(
    input: &SchurInput,
    residual: (usize, usize),
    opts: &CertifyOptions,
    cert: &mut Certificate,
    checks: &mut Vec<Check>,
) {
    let big_f = input.scaled_polynomial();
    let budget = oracle::FactorSearchBudget {
        max_degree: residual.1.saturating_sub(1),
        coeff_bound: None,
        candidate_cap: opts.candidate_cap,
    };
    match oracle::factor_in_degree_range(&big_f, residual.0, residual.1, &budget) {
        Ok(SearchOutcome::NoneFound) => {
            checks.push(Check::new(
                ORACLE_CHECK,
                true,
                format!("no factor with degree in [{}, {})", residual.0, residual.1),
            ));
            cert.excluded_intervals.push(residual);
            cert.excluded_intervals.sort();
            cert.verdict = Verdict::Irreducible;
        }
        Ok(SearchOutcome::Found(g)) => {
            checks.push(Check::new(
                ORACLE_CHECK,
                false,
                format!("factor {g} of degree {}", g.degree().unwrap_or(0)),
            ));
            cert.verdict = Verdict::HypothesesNotMet;
        }
        Ok(SearchOutcome::Refused { candidates, cap }) => checks.push(Check::new(
            ORACLE_CHECK,
            false,
            format!("search refused: {candidates} candidates exceed cap {cap}"),
        )),
        Err(e) => checks.push(Check::new(ORACLE_CHECK, false, format!("search failed: {e}"))),
    }
}
