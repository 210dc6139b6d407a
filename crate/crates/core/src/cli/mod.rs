//! Command-line front end. `run` is the whole program minus process exit,
//! so it can be driven from tests.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::certifier::{certify_with, hanson_exceptions, hanson_witness, CertifyOptions, SchurInput};
use crate::modp::{rabin_irreducible, reduce};
use crate::oracle::{self, FactorSearchBudget, SearchOutcome};
use crate::poly::{parse_poly, phi_expand, IntPoly};
use crate::polygon::{build_polygon, render, RenderFormat};
use crate::valuation::fmt_ratio;

#[derive(Debug, Parser)]
#[command(name = "phinewton", version, about = "Irreducibility certificates via phi-Newton polygons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a Schur-type polynomial (exit 0 irreducible, 2 hypotheses not met, 3 open case)
    Certify(CertifyArgs),
    /// phi-Newton polygon of a polynomial at a prime
    Polygon(PolygonArgs),
    /// phi-adic expansion
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Irreducibility over F_p
    ModpIrred {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Prime witnesses p >= k+2 dividing (n+1)n...(n-k+2)
    Hanson {
        #[arg(long, required_unless_present = "scan_to", conflicts_with = "scan_to")]
        n: Option<u64>,
        #[arg(long, requires = "n")]
        k: Option<u64>,
        /// List every (n, k) without a witness for 4 <= n <= N
        #[arg(long)]
        scan_to: Option<u64>,
    },
    /// Bounded brute-force factor search
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    an: Option<String>,
    /// a_0 first, separated by `;`
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Problem file with keys phi, n, an, a
    #[arg(long, conflicts_with_all = ["n", "an", "a", "poly"])]
    input: Option<PathBuf>,
    /// Scaled polynomial F = (n+1)! f, split into phi-adic coefficients
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["n", "an", "a"])]
    poly: Option<String>,
    /// Search the residual degree interval of an open case for factors
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Debug, Args)]
pub struct PolygonArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    phi: String,
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[arg(long, conflicts_with = "json")]
    render: Option<RenderFormat>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        max_degree: usize,
    },
    Roots {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let text = e.render().to_string();
            return match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand => {
                    Outcome::ok(0, text)
                }
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}

fn poly_arg(flag: &str, s: &str) -> Result<IntPoly> {
    parse_poly(s).with_context(|| format!("--{flag} `{s}`"))
}

fn to_line(v: &Value, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("JSON values serialize");
    s.push('\n');
    s
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Certify(a) => cmd_certify(a),
        Command::Polygon(a) => cmd_polygon(a),
        Command::Expand { phi, poly } => {
            let phi = poly_arg("phi", &phi)?;
            let f = poly_arg("poly", &poly)?;
            let e = phi_expand(&f, &phi)?;
            let terms: Vec<String> = e.terms().iter().map(ToString::to_string).collect();
            Ok(Outcome::ok(0, to_line(&json!({ "phi": phi.to_string(), "terms": terms }), false)))
        }
        Command::ModpIrred { p, poly } => {
            let f = poly_arg("poly", &poly)?;
            let irreducible = rabin_irreducible(&reduce(&f, p)?)?;
            Ok(Outcome::ok(
                0,
                to_line(
                    &json!({ "p": p.to_string(), "poly": f.to_string(), "irreducible": irreducible }),
                    false,
                ),
            ))
        }
        Command::Hanson { n, k, scan_to } => cmd_hanson(n, k, scan_to),
        Command::Oracle(o) => cmd_oracle(o),
    }
}

fn parse_int(flag: &str, s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| anyhow!("--{flag}: `{s}` is not an integer"))
}

fn parse_a_list(s: &str) -> Result<Vec<IntPoly>> {
    s.split(';')
        .enumerate()
        .map(|(j, part)| parse_poly(part).with_context(|| format!("--a entry {j} (a_{j}) `{part}`")))
        .collect()
}

fn json_poly(v: &Value, key: &str) -> Result<IntPoly> {
    match v {
        Value::String(s) => parse_poly(s).with_context(|| format!("`{key}`")),
        Value::Number(x) => parse_poly(&x.to_string()).with_context(|| format!("`{key}`")),
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| match c {
                    Value::String(s) => parse_int(key, s),
                    Value::Number(x) => parse_int(key, &x.to_string()),
                    _ => bail!("`{key}`: coefficients must be integers"),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(IntPoly::new(coeffs))
        }
        _ => bail!("`{key}` must be a polynomial string or coefficient list"),
    }
}

fn json_int(v: &Value, key: &str) -> Result<BigInt> {
    match v {
        Value::String(s) => parse_int(key, s),
        Value::Number(x) => parse_int(key, &x.to_string()),
        _ => bail!("`{key}` must be an integer"),
    }
}

/// Problem file: `{"phi": .., "n": .., "an": .., "a": [a_0, ..]}`; polynomials
/// as strings or ascending coefficient lists, integers as numbers or strings.
pub fn input_from_json(text: &str) -> Result<SchurInput> {
    let v: Value = serde_json::from_str(text).context("problem file is not valid JSON")?;
    let obj = v.as_object().ok_or_else(|| anyhow!("problem file must be a JSON object"))?;
    for key in obj.keys() {
        if !["phi", "n", "an", "a_n", "a"].contains(&key.as_str()) {
            bail!("unknown key `{key}` in problem file");
        }
    }
    let get = |k: &str| obj.get(k).ok_or_else(|| anyhow!("problem file is missing `{k}`"));
    let phi = json_poly(get("phi")?, "phi")?;
    let n: usize = json_int(get("n")?, "n")?
        .try_into()
        .map_err(|_| anyhow!("`n` out of range"))?;
    let an = json_int(obj.get("an").or(obj.get("a_n")).ok_or_else(|| anyhow!("problem file is missing `an`"))?, "an")?;
    let a = get("a")?
        .as_array()
        .ok_or_else(|| anyhow!("`a` must be a list"))?
        .iter()
        .enumerate()
        .map(|(j, p)| json_poly(p, &format!("a[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(SchurInput::new(phi, n, an, a)?)
}

fn cmd_certify(args: CertifyArgs) -> Result<Outcome> {
    let input = if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let input = input_from_json(&text)?;
        if let Some(phi) = &args.phi {
            if poly_arg("phi", phi)? != input.phi {
                bail!("--phi disagrees with the problem file");
            }
        }
        input
    } else {
        let phi = poly_arg("phi", args.phi.as_deref().ok_or_else(|| anyhow!("missing --phi"))?)?;
        if let Some(raw) = &args.poly {
            SchurInput::from_scaled(&poly_arg("poly", raw)?, &phi)?
        } else {
            let n = args.n.ok_or_else(|| anyhow!("missing --n"))?;
            let an = parse_int("an", args.an.as_deref().ok_or_else(|| anyhow!("missing --an"))?)?;
            let a = parse_a_list(args.a.as_deref().ok_or_else(|| anyhow!("missing --a"))?)?;
            SchurInput::new(phi, n, an, a)?
        }
    };
    let opts = CertifyOptions {
        oracle: args.oracle,
        candidate_cap: oracle::candidate_cap_from_env()?,
    };
    let cert = certify_with(&input, &opts)?;
    cert.validate()?;
    let mut out = cert.to_json(args.pretty);
    out.push('\n');
    Ok(Outcome::ok(cert.verdict.exit_code(), out))
}

fn cmd_polygon(args: PolygonArgs) -> Result<Outcome> {
    let phi = poly_arg("phi", &args.phi)?;
    let f = poly_arg("poly", &args.poly)?;
    let np = build_polygon(&f, &phi, args.p)?;
    let out = match args.render {
        Some(fmt) => render(&np, fmt),
        None => to_line(&np.to_json(), false),
    };
    Ok(Outcome::ok(0, out))
}

fn cmd_hanson(n: Option<u64>, k: Option<u64>, scan_to: Option<u64>) -> Result<Outcome> {
    if let Some(limit) = scan_to {
        let ex: Vec<[String; 2]> = hanson_exceptions(limit, true)
            .into_iter()
            .map(|(n, k)| [n.to_string(), k.to_string()])
            .collect();
        return Ok(Outcome::ok(
            0,
            to_line(&json!({ "scan_to": limit.to_string(), "exceptions": ex }), false),
        ));
    }
    let n = n.expect("clap enforces --n");
    let v = match k {
        Some(k) => json!({ "prime": hanson_witness(n, k)?.to_string() }),
        None => {
            if n < 4 {
                bail!("hanson requires n >= 4");
            }
            let ws: Vec<Value> = (2..=n / 2)
                .map(|k| {
                    let p = hanson_witness(n, k).ok().map(|p| p.to_string());
                    json!({ "k": k.to_string(), "prime": p })
                })
                .collect();
            json!({ "n": n.to_string(), "witnesses": ws })
        }
    };
    Ok(Outcome::ok(0, to_line(&v, false)))
}

fn cmd_oracle(cmd: OracleCommand) -> Result<Outcome> {
    match cmd {
        OracleCommand::Factor { poly, max_degree } => {
            let f = poly_arg("poly", &poly)?;
            let budget = FactorSearchBudget {
                max_degree,
                coeff_bound: None,
                candidate_cap: oracle::candidate_cap_from_env()?,
            };
            let v = match oracle::bounded_factor_search(&f, &budget)? {
                SearchOutcome::Found(g) => json!({
                    "outcome": "found",
                    "factor": g.to_string(),
                    "degree": g.degree().unwrap_or(0).to_string(),
                }),
                SearchOutcome::NoneFound => json!({ "outcome": "none" }),
                SearchOutcome::Refused { candidates, cap } => json!({
                    "outcome": "refused",
                    "candidates": candidates.to_string(),
                    "cap": cap.to_string(),
                }),
            };
            let code = if v["outcome"] == "refused" { 1 } else { 0 };
            Ok(Outcome::ok(code, to_line(&v, false)))
        }
        OracleCommand::Roots { poly } => {
            let f = poly_arg("poly", &poly)?;
            let roots: Vec<String> = oracle::rational_roots(&f).iter().map(fmt_ratio).collect();
            Ok(Outcome::ok(0, to_line(&json!({ "roots": roots }), false)))
        }
    }
}
