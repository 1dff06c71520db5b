//! Command-line front end. Every subcommand writes one JSON document with
//! sorted keys and a top-level `"schema"` field.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebraic::{mahler_enclosure, weil_height_enclosure, AlgebraicNumber};
use crate::certified_eval::{decide_sign_with_budget, verify_lower_bound, LinearForm, DEFAULT_MAX_BITS};
use crate::error::{Error, Result};
use crate::exact_poly::IntPolynomial;
use crate::explicit_bounds::{
    main_result_a, main_result_b, sert_bound, worstcase_sert_params, HeightInput, SertParams, TowerReal,
};
use crate::json::{parse_bigint, parse_rational, SCHEMA};
use crate::number_field::tower_combine;
use crate::pigeonhole::{enumerate_algnums, run_search, verify_upper_bound, SearchConfig};

/// Overrides the precision cap of `sign` and `min-search`.
pub const MAX_BITS_ENV: &str = "EXPGAP_MAX_BITS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "expgap", version, about = "Bounds and certified signs for linear forms in exponentials")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Global precision cap in bits (the environment variable takes precedence).
    #[arg(long, global = true)]
    pub max_bits: Option<u32>,
    /// Cap on the number of polynomials or forms enumerated.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub max_enum: u64,
    /// Largest generator degree accepted by `primitive`.
    #[arg(long, global = true, default_value_t = 16)]
    pub max_degree: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lower bound magnitude B with ln|lambda| >= -B.
    BoundA(Mdh),
    /// Upper bound for the smallest nonzero form.
    BoundB(Mdh),
    /// Polynomial lower bound, worst case for (m, d, h) or explicit parameters.
    Sert(SertArgs),
    /// Certified sign of a linear form read from JSON.
    Sign {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Primitive element certificate for a list of generators.
    Primitive {
        /// JSON file: an array of algebraic numbers or {"generators": [...]}.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Adds sqrt(q) as a generator; repeatable.
        #[arg(long)]
        sqrt: Vec<String>,
    },
    /// Pigeonhole search for a small nonzero form.
    MinSearch {
        #[command(flatten)]
        mdh: Mdh,
        #[arg(long)]
        cap_t: Option<u64>,
        #[arg(long, default_value_t = 64)]
        precision_bits: u32,
    },
    /// Runs the built-in golden checks.
    Selftest {
        /// Replaces the leading Sert coefficient before the consistency check.
        #[arg(long, hide = true)]
        mutate_r: Option<String>,
    },
}

#[derive(clap::Args, Debug)]
pub struct Mdh {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub d: u64,
    /// Weil height bound: a rational or "ln N".
    #[arg(long, allow_hyphen_values = true)]
    pub h: String,
}

#[derive(clap::Args, Debug)]
pub struct SertArgs {
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long = "field-degree")]
    pub field_degree: Option<String>,
    #[arg(long)]
    pub vars: Option<String>,
    #[arg(long = "d-p")]
    pub d_p: Option<String>,
    #[arg(long = "h-alpha")]
    pub h_alpha: Option<String>,
    #[arg(long = "h-beta")]
    pub h_beta: Option<String>,
    #[arg(long = "ln-disc-beta")]
    pub ln_disc_beta: Option<String>,
    #[arg(long = "alpha-hat")]
    pub alpha_hat: Option<String>,
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cfg) {
        Ok((doc, code)) => match emit(&cfg, &doc) {
            Ok(()) => code,
            Err(e) => report_error(&e),
        },
        Err(e) => report_error(&e),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Undecided { .. } | Error::InsufficientPrecision(_) => EXIT_UNDECIDED,
        Error::InvalidInput(_) | Error::Domain(_) => EXIT_INVALID,
        Error::ResourceCap(_) => EXIT_RESOURCE,
        Error::Certificate(_) => EXIT_FAILED,
    }
}

fn report_error(e: &Error) -> i32 {
    let doc = with_schema(json!({"error": e.to_string(), "exit_code": exit_code(e)}));
    eprintln!("{}", serde_json::to_string_pretty(&doc).unwrap_or_default());
    exit_code(e)
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), Value::String(SCHEMA.into()));
    }
    v
}

fn emit(cfg: &RunConfig, doc: &Value) -> Result<()> {
    // serde_json maps are ordered by key, so output is canonical
    let text = serde_json::to_string_pretty(doc).map_err(|e| Error::InvalidInput(e.to_string()))? + "\n";
    match &cfg.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn max_bits(cfg: &RunConfig) -> Result<u32> {
    if let Ok(s) = std::env::var(MAX_BITS_ENV) {
        return s
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&b| b >= 32)
            .ok_or_else(|| Error::InvalidInput(format!("{MAX_BITS_ENV}={s:?} is not a bit count >= 32")));
    }
    match cfg.max_bits {
        Some(b) if b < 32 => Err(Error::InvalidInput("--max-bits must be at least 32".into())),
        Some(b) => Ok(b),
        None => Ok(DEFAULT_MAX_BITS),
    }
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::InvalidInput(format!(
            "{}: malformed JSON at line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn execute(cfg: &RunConfig) -> Result<(Value, i32)> {
    let doc = match &cfg.command {
        Command::BoundA(a) => {
            let h = HeightInput::parse(&a.h)?;
            main_result_a(a.m, a.d, &h)?.to_json()
        }
        Command::BoundB(a) => {
            let h = HeightInput::parse(&a.h)?;
            main_result_b(a.m, a.d, &h)?.to_json()
        }
        Command::Sert(s) => sert_command(s)?,
        Command::Sign { input } => {
            let form = LinearForm::from_json(&read_json(input)?)?;
            let cert = decide_sign_with_budget(&form, max_bits(cfg)?)?;
            json!({"form": form.to_json(), "certificate": cert.to_json()})
        }
        Command::Primitive { input, sqrt } => {
            let mut gens = Vec::new();
            if let Some(p) = input {
                let v = read_json(p)?;
                let list = v.get("generators").unwrap_or(&v);
                let arr = list
                    .as_array()
                    .ok_or_else(|| Error::InvalidInput("expected an array of algebraic numbers".into()))?;
                for a in arr {
                    gens.push(AlgebraicNumber::from_json(a)?);
                }
            }
            for s in sqrt {
                gens.push(AlgebraicNumber::sqrt_of(&parse_rational(s)?)?);
            }
            if gens.is_empty() {
                return Err(Error::InvalidInput("no generators given".into()));
            }
            if let Some(g) = gens.iter().find(|g| g.degree() > cfg.max_degree) {
                return Err(Error::ResourceCap(format!(
                    "generator of degree {} exceeds --max-degree {}",
                    g.degree(),
                    cfg.max_degree
                )));
            }
            let cert = tower_combine(&gens)?;
            let ok = cert.checks.all_ok();
            let doc = cert.to_json();
            if !ok {
                return Ok((with_schema(doc), EXIT_FAILED));
            }
            doc
        }
        Command::MinSearch {
            mdh,
            cap_t,
            precision_bits,
        } => {
            let h = HeightInput::parse(&mdh.h)?;
            let mut sc = SearchConfig::new(mdh.m, mdh.d, &h)?;
            sc.grid_t_cap = *cap_t;
            sc.eval_precision_bits = *precision_bits;
            sc.max_bits = max_bits(cfg)?;
            sc.max_polys = cfg.max_enum;
            sc.max_forms = cfg.max_enum;
            let res = run_search(&sc)?;
            let rep = verify_upper_bound(&res, &sc)?;
            json!({"config": sc.to_json(), "collision": res.to_json(), "bounds": rep.to_json()})
        }
        Command::Selftest { mutate_r } => {
            let r = match mutate_r {
                Some(s) => Some(parse_rational(s)?),
                None => None,
            };
            let rows = selftest(r.as_ref());
            let all = rows.iter().all(|r| r.passed);
            for r in &rows {
                eprintln!("{:<6} {}", if r.passed { "PASS" } else { "FAIL" }, r.name);
            }
            let doc = json!({
                "passed": all,
                "checks": rows.iter().map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail})).collect::<Vec<_>>(),
            });
            return Ok((with_schema(doc), if all { EXIT_OK } else { EXIT_FAILED }));
        }
    };
    Ok((with_schema(doc), EXIT_OK))
}

fn req<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::InvalidInput(format!("sert: --{name} is required without --m/--d/--h")))
}

fn tower_arg(s: &str) -> Result<TowerReal> {
    TowerReal::from_rational(&parse_rational(s)?)
}

fn sert_command(s: &SertArgs) -> Result<Value> {
    let params = match (s.m, s.d, &s.h) {
        (Some(m), Some(d), Some(h)) => worstcase_sert_params(m, d, &HeightInput::parse(h)?)?,
        (None, None, None) => SertParams {
            field_degree: parse_bigint(req(&s.field_degree, "field-degree")?)?,
            vars: parse_bigint(req(&s.vars, "vars")?)?,
            d_p: tower_arg(req(&s.d_p, "d-p")?)?,
            h_alpha: parse_rational(req(&s.h_alpha, "h-alpha")?)?,
            h_beta: parse_rational(req(&s.h_beta, "h-beta")?)?,
            ln_disc_beta: parse_rational(req(&s.ln_disc_beta, "ln-disc-beta")?)?,
            alpha_hat: tower_arg(req(&s.alpha_hat, "alpha-hat")?)?,
        },
        _ => return Err(Error::InvalidInput("sert: give all of --m, --d, --h or none".into())),
    };
    let b = sert_bound(&params)?;
    Ok(json!({
        "kind": "sert",
        "params": params.to_json(),
        "magnitude": b.to_json(),
        "validity": true,
    }))
}

/// One line of the self-test table.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn row(name: &'static str, r: Result<(bool, String)>) -> CheckRow {
    match r {
        Ok((passed, detail)) => CheckRow { name, passed, detail },
        Err(e) => CheckRow {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Golden checks. `mutate_r` replaces the computed leading Sert coefficient
/// for `(1, 1, 0)` before it is compared with an independent assembly.
pub fn selftest(mutate_r: Option<&BigRational>) -> Vec<CheckRow> {
    vec![
        row("primitive element of sqrt2, sqrt3", check_primitive()),
        row("height inequalities", check_heights()),
        row("degree-one count vs halved lower bound", check_counts()),
        row("bound A coefficient assembly", check_bound_a(mutate_r)),
        row("bound B golden value", check_bound_b()),
        row("sign of e - 2", check_sign()),
    ]
}

fn check_primitive() -> Result<(bool, String)> {
    let two = AlgebraicNumber::sqrt_of(&BigRational::from_integer(2.into()))?;
    let three = AlgebraicNumber::sqrt_of(&BigRational::from_integer(3.into()))?;
    let cert = tower_combine(&[two, three])?;
    let want = IntPolynomial::from_i64s(&[1, 0, -10, 0, 1]);
    let ok = cert.vartheta.minpoly() == &want
        && cert.denominator == BigInt::from(2)
        && cert.reps[0] == IntPolynomial::from_i64s(&[0, -9, 0, 1])
        && cert.reps[1] == IntPolynomial::from_i64s(&[0, 11, 0, -1])
        && cert.checks.all_ok();
    Ok((ok, format!("minpoly {}, T = {}", cert.vartheta.minpoly(), cert.denominator)))
}

fn check_heights() -> Result<(bool, String)> {
    let polys: [&[i64]; 5] = [&[-2, 0, 1], &[1, 0, -10, 0, 1], &[-1, -1, 1], &[3, 0, 0, 2], &[1, 1, 1]];
    let ln2 = crate::ball::ln2(128).upper();
    for c in polys {
        let f = IntPolynomial::from_i64s(c);
        let d = BigRational::from_integer(f.deg().into());
        let norms = f.norms()?;
        let m = mahler_enclosure(&f, 64)?;
        // H(f) <= 2^d M(f) and M(f) <= L(f)
        let naive = BigRational::from_integer(norms.height.clone());
        if naive > m.hi.clone() * num_traits::pow(BigRational::from_integer(2.into()), f.deg()) {
            return Ok((false, format!("H(f) > 2^d M(f) for {f}")));
        }
        if m.lo > BigRational::from_integer(norms.length.clone()) {
            return Ok((false, format!("M(f) > L(f) for {f}")));
        }
        let a = AlgebraicNumber::roots_of(&f)?.remove(0);
        let h = weil_height_enclosure(&a, 64)?;
        let ln_h = crate::ball::RealBall::from_rational(&naive, 128).ln()?.lower();
        if ln_h / &d - &ln2 > h.hi {
            return Ok((false, format!("ln H / d - ln 2 > h for {f}")));
        }
    }
    Ok((true, format!("{} polynomials", polys.len())))
}

fn check_counts() -> Result<(bool, String)> {
    let mut detail = Vec::new();
    for h in [2u64, 3, 4] {
        let hq = BigRational::from_integer(h.into());
        let n = enumerate_algnums(1, &hq, true)?.count();
        let lower = num_traits::pow(hq, 2) / BigRational::from_integer(72.into());
        if BigRational::from_integer(n.into()) <= lower {
            return Ok((false, format!("H = {h}: count {n}")));
        }
        detail.push(format!("H={h}:{n}"));
    }
    let n2 = enumerate_algnums(1, &BigRational::from_integer(2.into()), false)?.count();
    Ok((n2 == 7, format!("{} all(H=2):{n2}", detail.join(" "))))
}

fn check_bound_a(mutate_r: Option<&BigRational>) -> Result<(bool, String)> {
    let p = main_result_a(1, 1, &HeightInput::Rational(BigRational::zero()))?;
    let r = match mutate_r {
        Some(q) => q.clone(),
        None => p
            .r
            .to_rational()
            .ok_or_else(|| Error::Certificate("r is not rational".into()))?,
    };
    // r = 82 (9/2)^M M^M D^(M+1) with D = M = delta^2 = 1
    let delta = p.delta.to_i64().unwrap_or(0);
    let f = |k: u32| {
        BigRational::new(9.into(), 2.into()) * BigRational::from_integer(BigInt::from(delta).pow(2 * k))
    };
    let want_r = BigRational::from_integer(82.into()) * f(2);
    let want_rdd = BigRational::from_integer(16.into()) * BigRational::from_integer(7.into()) * f(1);
    let rdd = p.r_dprime.to_rational();
    let ok = delta == 1 && r == want_r && rdd.as_ref() == Some(&want_rdd) && p.zeta == BigRational::from_integer(3.into());
    Ok((ok, format!("r = {r}, expected {want_r}")))
}

fn check_bound_b() -> Result<(bool, String)> {
    let b = main_result_b(2, 4, &HeightInput::LnOf(BigRational::from_integer(288.into())))?;
    let want = -10.0 * 48f64.ln() + 1.5 * 2f64.ln() + 2.0;
    let got = b.ln_bound.to_f64();
    let ok = b.ell == 1 && b.n2_exact == Some(BigRational::from_integer(2.into())) && (got - want).abs() < 1e-10;
    Ok((ok && b.valid, format!("ln bound {got}")))
}

fn check_sign() -> Result<(bool, String)> {
    let form = LinearForm::new(vec![
        (AlgebraicNumber::from_int(1), AlgebraicNumber::from_int(1)),
        (AlgebraicNumber::from_int(0), AlgebraicNumber::from_int(-2)),
    ])?;
    let cert = decide_sign_with_budget(&form, DEFAULT_MAX_BITS)?;
    let lb = verify_lower_bound(&form)?;
    Ok((
        cert.verdict.as_str() == "positive-real" && lb.passed,
        cert.verdict.as_str().to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let rows = selftest(None);
        for r in &rows {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn mutation_detected() {
        let bad = BigRational::from_integer(370.into());
        let rows = selftest(Some(&bad));
        let a = rows.iter().find(|r| r.name.starts_with("bound A")).unwrap();
        assert!(!a.passed);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["expgap", "bound-a", "--m", "1", "--d", "1", "--h", "x"]), EXIT_INVALID);
        assert_eq!(run(["expgap", "no-such-command"]), EXIT_INVALID);
        assert_eq!(exit_code(&Error::Undecided { bits: 64, detail: String::new() }), EXIT_UNDECIDED);
        assert_eq!(exit_code(&Error::ResourceCap(String::new())), EXIT_RESOURCE);
    }
}
