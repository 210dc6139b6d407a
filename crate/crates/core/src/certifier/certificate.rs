use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{CertifyError, ORACLE_CHECK};
use crate::poly::IntPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Irreducible,
    HypothesesNotMet,
    RemarkCaseOpen,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Irreducible => "IRREDUCIBLE",
            Self::HypothesesNotMet => "HYPOTHESES_NOT_MET",
            Self::RemarkCaseOpen => "REMARK_CASE_OPEN",
        }
    }

    /// CLI exit status.
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Irreducible => 0,
            Self::HypothesesNotMet => 2,
            Self::RemarkCaseOpen => 3,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::Irreducible, Self::HypothesesNotMet, Self::RemarkCaseOpen]
            .into_iter()
            .find(|v| v.as_str() == s)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which exceptional case left a degree interval open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Remark {
    NPlus1PowerOfTwo,
    NEquals8,
}

impl Remark {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NPlus1PowerOfTwo => "n_plus_1_power_of_two",
            Self::NEquals8 => "n_equals_8",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::NPlus1PowerOfTwo, Self::NEquals8]
            .into_iter()
            .find(|r| r.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            pass,
            detail,
        }
    }
}

/// Prime `p` used to exclude factor degrees in `[k deg φ, (k+1) deg φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeWitness {
    pub k: usize,
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub n: usize,
    pub phi: IntPoly,
    pub checks: Vec<Check>,
    pub small_factor_prime: Option<u64>,
    pub witnesses: Vec<PrimeWitness>,
    /// Half-open degree intervals `[lo, hi)` ruled out for factors.
    pub excluded_intervals: Vec<(usize, usize)>,
    pub remark: Option<Remark>,
    pub residual_interval: Option<(usize, usize)>,
}

// Wire format: field order is the key order, every integer is a string.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    verdict: String,
    n: String,
    phi: Vec<String>,
    checks: Vec<CheckJson>,
    small_factor_prime: Option<String>,
    witnesses: Vec<WitnessJson>,
    excluded_intervals: Vec<[String; 2]>,
    remark: Option<String>,
    residual_interval: Option<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckJson {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessJson {
    k: String,
    prime: String,
}

fn interval_json(&(lo, hi): &(usize, usize)) -> [String; 2] {
    [lo.to_string(), hi.to_string()]
}

fn bad(msg: impl Into<String>) -> CertifyError {
    CertifyError::InvalidCertificate(msg.into())
}

fn num<T: std::str::FromStr>(s: &str, field: &str) -> Result<T, CertifyError> {
    s.parse()
        .map_err(|_| bad(format!("field `{field}`: `{s}` is not a decimal integer")))
}

fn interval_from(v: &[String; 2], field: &str) -> Result<(usize, usize), CertifyError> {
    Ok((num(&v[0], field)?, num(&v[1], field)?))
}

impl Certificate {
    fn to_dto(&self) -> CertificateJson {
        CertificateJson {
            verdict: self.verdict.as_str().to_string(),
            n: self.n.to_string(),
            phi: self.phi.coeffs().iter().map(BigInt::to_string).collect(),
            checks: self
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.clone(),
                    pass: c.pass,
                    detail: c.detail.clone(),
                })
                .collect(),
            small_factor_prime: self.small_factor_prime.map(|p| p.to_string()),
            witnesses: self
                .witnesses
                .iter()
                .map(|w| WitnessJson {
                    k: w.k.to_string(),
                    prime: w.p.to_string(),
                })
                .collect(),
            excluded_intervals: self.excluded_intervals.iter().map(interval_json).collect(),
            remark: self.remark.map(|r| r.as_str().to_string()),
            residual_interval: self.residual_interval.as_ref().map(interval_json),
        }
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let dto = self.to_dto();
        if pretty {
            serde_json::to_string_pretty(&dto)
        } else {
            serde_json::to_string(&dto)
        }
        .expect("certificate serialization cannot fail")
    }

    /// Parses the wire format; does not validate the contents.
    pub fn from_json(s: &str) -> Result<Self, CertifyError> {
        let dto: CertificateJson =
            serde_json::from_str(s).map_err(|e| bad(format!("bad JSON: {e}")))?;
        let phi = dto
            .phi
            .iter()
            .map(|c| num::<BigInt>(c, "phi"))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            verdict: Verdict::parse(&dto.verdict)
                .ok_or_else(|| bad(format!("unknown verdict `{}`", dto.verdict)))?,
            n: num(&dto.n, "n")?,
            phi: IntPoly::new(phi),
            checks: dto
                .checks
                .into_iter()
                .map(|c| Check {
                    name: c.name,
                    pass: c.pass,
                    detail: c.detail,
                })
                .collect(),
            small_factor_prime: dto
                .small_factor_prime
                .as_deref()
                .map(|s| num(s, "small_factor_prime"))
                .transpose()?,
            witnesses: dto
                .witnesses
                .iter()
                .map(|w| {
                    Ok(PrimeWitness {
                        k: num(&w.k, "witnesses.k")?,
                        p: num(&w.prime, "witnesses.prime")?,
                    })
                })
                .collect::<Result<_, CertifyError>>()?,
            excluded_intervals: dto
                .excluded_intervals
                .iter()
                .map(|v| interval_from(v, "excluded_intervals"))
                .collect::<Result<_, _>>()?,
            remark: dto
                .remark
                .as_deref()
                .map(|r| Remark::parse(r).ok_or_else(|| bad(format!("unknown remark `{r}`"))))
                .transpose()?,
            residual_interval: dto
                .residual_interval
                .as_ref()
                .map(|v| interval_from(v, "residual_interval"))
                .transpose()?,
        })
    }

    fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Structural consistency of the verdict with the recorded evidence.
    pub fn validate(&self) -> Result<(), CertifyError> {
        let d = self
            .phi
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| bad("phi must have degree at least 1"))?;
        if self.n == 0 {
            return Err(bad("n must be positive"));
        }
        for &(lo, hi) in &self.excluded_intervals {
            if lo >= hi || lo == 0 {
                return Err(bad(format!("degenerate interval [{lo}, {hi})")));
            }
        }
        for w in &self.witnesses {
            if w.k == 0 || w.k > self.n / 2 || !crate::primes::is_prime(w.p) || w.p < w.k as u64 + 2 {
                return Err(bad(format!("invalid witness k = {}, p = {}", w.k, w.p)));
            }
            if !self.excluded_intervals.contains(&(w.k * d, (w.k + 1) * d)) {
                return Err(bad(format!("witness for k = {} has no excluded interval", w.k)));
            }
        }
        let oracle_pass = self.check(ORACLE_CHECK).is_some_and(|c| c.pass);
        match self.verdict {
            Verdict::Irreducible => {
                if self.small_factor_prime.is_none() {
                    return Err(bad("IRREDUCIBLE without a small-factor prime"));
                }
                let failing: Vec<&str> = self
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.name.as_str())
                    .collect();
                if oracle_pass {
                    if self.remark.is_none() || self.residual_interval.is_none() {
                        return Err(bad("oracle closure without a remark case"));
                    }
                } else {
                    if !failing.is_empty() {
                        return Err(bad(format!("IRREDUCIBLE with failing checks {failing:?}")));
                    }
                    let ks: Vec<usize> = self.witnesses.iter().map(|w| w.k).collect();
                    if ks != (1..=self.n / 2).collect::<Vec<_>>() {
                        return Err(bad(format!("witnesses cover k = {ks:?}, need 1..={}", self.n / 2)));
                    }
                }
                let target = (self.n / 2 + 1) * d;
                let mut iv = self.excluded_intervals.clone();
                iv.sort();
                let mut reach = 1;
                for (lo, hi) in iv {
                    if lo > reach {
                        break;
                    }
                    reach = reach.max(hi);
                }
                if reach < target {
                    return Err(bad(format!(
                        "excluded intervals reach only {reach}, need [1, {target})"
                    )));
                }
            }
            Verdict::HypothesesNotMet => {
                if self.checks.iter().all(|c| c.pass) {
                    return Err(bad("HYPOTHESES_NOT_MET with every check passing"));
                }
            }
            Verdict::RemarkCaseOpen => {
                let (Some(_), Some((lo, hi))) = (self.remark, self.residual_interval) else {
                    return Err(bad("REMARK_CASE_OPEN without remark and residual interval"));
                };
                if lo >= hi || self.excluded_intervals.contains(&(lo, hi)) {
                    return Err(bad("residual interval is empty or already excluded"));
                }
            }
        }
        Ok(())
    }
}
