//! Certified evaluation and sign decision for
//! `lambda = beta_1 e^alpha_1 + ... + beta_m e^alpha_m`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebraic::{alg_equal, weil_height_enclosure, AlgebraicNumber, RealEnclosure};
use crate::ball::{rational_to_decimal, ComplexBall, RealBall};
use crate::error::{domain, Error, Result};
use crate::explicit_bounds::{main_result_a, HeightInput, TowerReal};

/// Default precision cap for [`decide_sign`].
pub const DEFAULT_MAX_BITS: u32 = 1 << 16;
const START_BITS: u32 = 64;

/// Certified enclosure of `e^z` at `prec` bits.
pub fn ball_exp(z: &ComplexBall, prec: u32) -> Result<ComplexBall> {
    z.with_prec(prec).exp()
}

/// Validated linear form: distinct exponents, nonzero coefficients.
#[derive(Clone, Debug)]
pub struct LinearForm {
    terms: Vec<(AlgebraicNumber, AlgebraicNumber)>,
    d: usize,
    h_ub: RealEnclosure,
}

impl LinearForm {
    pub fn new(terms: Vec<(AlgebraicNumber, AlgebraicNumber)>) -> Result<Self> {
        if terms.is_empty() {
            return domain("a linear form needs at least one term");
        }
        for (i, (_, b)) in terms.iter().enumerate() {
            if b.is_zero() {
                return domain(format!("coefficient {i} is zero"));
            }
        }
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if alg_equal(&terms[i].0, &terms[j].0)? {
                    return domain(format!("exponents {i} and {j} are equal"));
                }
            }
        }
        let d = terms.iter().map(|(a, b)| a.degree().max(b.degree())).max().unwrap_or(1);
        let mut hi = BigRational::zero();
        let mut lo = BigRational::zero();
        for (a, b) in &terms {
            for x in [a, b] {
                let e = weil_height_enclosure(x, 32)?;
                hi = hi.max(e.hi);
                lo = lo.max(e.lo);
            }
        }
        Ok(LinearForm {
            terms,
            d,
            h_ub: RealEnclosure::new(lo, hi),
        })
    }

    pub fn terms(&self) -> &[(AlgebraicNumber, AlgebraicNumber)] {
        &self.terms
    }

    pub fn m(&self) -> usize {
        self.terms.len()
    }

    /// Largest degree among all exponents and coefficients.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Enclosure of the largest Weil height; `hi` is the value used in bounds.
    pub fn h_ub(&self) -> &RealEnclosure {
        &self.h_ub
    }

    /// True when the term multiset is closed under complex conjugation, so
    /// that `lambda` is real.
    pub fn is_real_valued(&self) -> Result<bool> {
        for (a, b) in &self.terms {
            let (ca, cb) = (a.conj(), b.conj());
            let mut found = false;
            for (x, y) in &self.terms {
                if alg_equal(x, &ca)? && alg_equal(y, &cb)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.terms.iter().map(|(a, b)| json!({"alpha": a.to_json(), "beta": b.to_json()})).collect::<Vec<_>>(),
        })
    }

    /// Parses `{"terms": [{"alpha": ..., "beta": ...}, ...]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |s: &str| Error::InvalidInput(format!("linear form: {s}"));
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let a = t.get("alpha").ok_or_else(|| bad("term without alpha"))?;
            let b = t.get("beta").ok_or_else(|| bad("term without beta"))?;
            out.push((AlgebraicNumber::from_json(a)?, AlgebraicNumber::from_json(b)?));
        }
        Self::new(out)
    }

    fn refined(&self, prec: u32) -> Result<Vec<(AlgebraicNumber, AlgebraicNumber)>> {
        let w = pow2_inv(prec);
        self.terms
            .par_iter()
            .map(|(a, b)| Ok((a.refine(&w)?, b.refine(&w)?)))
            .collect()
    }
}

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

fn eval_terms(terms: &[(AlgebraicNumber, AlgebraicNumber)], prec: u32) -> Result<ComplexBall> {
    let w = prec + 32;
    let parts: Vec<ComplexBall> = terms
        .par_iter()
        .map(|(a, b)| {
            let za = a.rect().to_ball(w);
            let zb = b.rect().to_ball(w);
            Ok(zb.mul(&ball_exp(&za, w)?))
        })
        .collect::<Result<_>>()?;
    // fixed summation order
    let mut acc = ComplexBall::real(RealBall::zero(w));
    for p in &parts {
        acc = acc.add(p);
    }
    Ok(acc)
}

/// Certified enclosure of `lambda` with exponents and coefficients refined
/// to boxes of side `2^-prec`.
pub fn eval_linear_form(form: &LinearForm, prec: u32) -> Result<ComplexBall> {
    eval_terms(&form.refined(prec)?, prec)
}

fn ln_abs_of_ball(z: &ComplexBall) -> Result<RealEnclosure> {
    let (lo2, hi2) = z.abs_sq_bounds();
    let (cr, ci) = (z.re.mid_rational(), z.im.mid_rational());
    let r = z.radius();
    // radius < |center| / 2
    if z.contains_zero() || BigRational::from_integer(4.into()) * &r * &r >= &cr * &cr + &ci * &ci {
        return Err(Error::InsufficientPrecision("enclosure of lambda too close to zero".into()));
    }
    let p = z.prec() + 16;
    let l = RealBall::from_interval(&lo2, &hi2, p).ln()?.div_int(&BigInt::from(2));
    Ok(l.to_enclosure())
}

/// Enclosure of `ln|lambda|`.
pub fn ln_abs_enclosure(form: &LinearForm, prec: u32) -> Result<RealEnclosure> {
    ln_abs_of_ball(&eval_linear_form(form, prec)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    PositiveReal,
    NegativeReal,
    /// Nonzero with signs of the real and imaginary parts (`0` = undetermined).
    NonzeroComplex { re_sign: i8, im_sign: i8 },
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::PositiveReal => "positive-real",
            Verdict::NegativeReal => "negative-real",
            Verdict::NonzeroComplex { .. } => "nonzero-complex",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SignCertificate {
    pub verdict: Verdict,
    pub lambda: ComplexBall,
    pub ln_abs: RealEnclosure,
    pub precision_used: u32,
    pub real_valued: bool,
    /// `B` of the linear-form lower bound: `ln|lambda| >= -B`.
    pub bound_budget: Option<TowerReal>,
}

fn sign_of(b: &RealBall) -> i8 {
    if b.is_positive() {
        1
    } else if b.is_negative() {
        -1
    } else {
        0
    }
}

fn ball_json(b: &RealBall) -> Value {
    json!([rational_to_decimal(&b.lower(), 40), rational_to_decimal(&b.upper(), 40)])
}

impl SignCertificate {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "verdict": self.verdict.as_str(),
            "lambda": {"re": ball_json(&self.lambda.re), "im": ball_json(&self.lambda.im)},
            "ln_abs": [rational_to_decimal(&self.ln_abs.lo, 40), rational_to_decimal(&self.ln_abs.hi, 40)],
            "precision_used": self.precision_used,
            "real_valued": self.real_valued,
            "bound_budget": self.bound_budget.as_ref().map(TowerReal::to_json),
        });
        if let Verdict::NonzeroComplex { re_sign, im_sign } = self.verdict {
            v["quadrant"] = json!({"re": re_sign, "im": im_sign});
        }
        v
    }
}

fn verdict_for(z: &ComplexBall, real: bool) -> Option<Verdict> {
    if z.contains_zero() {
        return None;
    }
    let (rs, is) = (sign_of(&z.re), sign_of(&z.im));
    if real {
        return match rs {
            1 => Some(Verdict::PositiveReal),
            -1 => Some(Verdict::NegativeReal),
            _ => None,
        };
    }
    Some(Verdict::NonzeroComplex {
        re_sign: rs,
        im_sign: is,
    })
}

/// Doubles the working precision from 64 bits until the enclosure of
/// `lambda` excludes zero. Never returns a wrong verdict; gives up with
/// [`Error::Undecided`] past `max_bits`.
pub fn decide_sign(form: &LinearForm, max_bits: u32) -> Result<SignCertificate> {
    let real = form.is_real_valued()?;
    let mut prec = START_BITS.min(max_bits.max(1));
    let mut terms = form.terms.clone();
    loop {
        let w = pow2_inv(prec);
        terms = terms
            .par_iter()
            .map(|(a, b)| Ok((a.refine(&w)?, b.refine(&w)?)))
            .collect::<Result<_>>()?;
        let z = eval_terms(&terms, prec)?;
        if let Some(verdict) = verdict_for(&z, real) {
            if let Ok(ln_abs) = ln_abs_of_ball(&z) {
                return Ok(SignCertificate {
                    verdict,
                    lambda: z,
                    ln_abs,
                    precision_used: prec,
                    real_valued: real,
                    bound_budget: None,
                });
            }
        }
        if prec >= max_bits {
            return Err(Error::Undecided {
                bits: prec,
                detail: format!("last enclosure {z:?}"),
            });
        }
        prec = (prec * 2).min(max_bits);
    }
}

/// [`decide_sign`] followed by the lower-bound budget
/// `main_result_a(m, d, h_ub)`.
pub fn decide_sign_with_budget(form: &LinearForm, max_bits: u32) -> Result<SignCertificate> {
    let mut cert = decide_sign(form, max_bits)?;
    cert.bound_budget = Some(lower_bound_magnitude(form)?);
    Ok(cert)
}

fn lower_bound_magnitude(form: &LinearForm) -> Result<TowerReal> {
    let h = HeightInput::Rational(form.h_ub.hi.clone());
    Ok(main_result_a(form.m() as u64, form.d() as u64, &h)?.b)
}

#[derive(Clone, Debug)]
pub struct LowerBoundReport {
    pub ln_abs: RealEnclosure,
    /// `B` with `ln|lambda| >= -B` claimed.
    pub bound: TowerReal,
    pub passed: bool,
    /// Upper bound of `-ln|lambda|` (zero when `|lambda| >= 1`).
    pub needed: TowerReal,
}

impl LowerBoundReport {
    pub fn to_json(&self) -> Value {
        json!({
            "ln_abs": [rational_to_decimal(&self.ln_abs.lo, 40), rational_to_decimal(&self.ln_abs.hi, 40)],
            "bound": self.bound.to_json(),
            "needed": self.needed.to_json(),
            "passed": self.passed,
        })
    }
}

/// Checks `ln|lambda| >= -B` on the certified enclosure.
pub fn verify_lower_bound(form: &LinearForm) -> Result<LowerBoundReport> {
    let cert = decide_sign(form, DEFAULT_MAX_BITS)?;
    let bound = lower_bound_magnitude(form)?;
    let needed = if cert.ln_abs.lo.is_negative() {
        TowerReal::from_rational(&-cert.ln_abs.lo.clone())?
    } else {
        TowerReal::zero()
    };
    Ok(LowerBoundReport {
        ln_abs: cert.ln_abs,
        passed: needed <= bound,
        bound,
        needed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::IntPolynomial;

    fn int(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_int(n)
    }

    fn sqrt2() -> AlgebraicNumber {
        AlgebraicNumber::sqrt_of(&BigRational::from_integer(2.into())).unwrap()
    }

    fn form(t: Vec<(AlgebraicNumber, AlgebraicNumber)>) -> LinearForm {
        LinearForm::new(t).unwrap()
    }

    #[test]
    fn exp_examples() {
        let one = ball_exp(&ComplexBall::real(RealBall::zero(64)), 64).unwrap();
        assert!(one.re.contains(&BigRational::one()));
        let e = ball_exp(&ComplexBall::real(RealBall::from_int(1, 64)), 64).unwrap();
        assert!(e.radius() < pow2_inv(60));
        assert!((e.re.to_f64() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn eval_examples() {
        let z = eval_linear_form(&form(vec![(int(0), int(1))]), 64).unwrap();
        assert!(z.re.contains(&BigRational::one()));
        let z = eval_linear_form(&form(vec![(int(1), int(1)), (int(0), int(-2))]), 64).unwrap();
        assert!((z.re.to_f64() - (std::f64::consts::E - 2.0)).abs() < 1e-15);
        let z = eval_linear_form(&form(vec![(sqrt2(), int(1))]), 64).unwrap();
        assert!((z.re.to_f64() - 2f64.sqrt().exp()).abs() < 1e-14);
    }

    #[test]
    fn ln_abs_examples() {
        let l = ln_abs_enclosure(&form(vec![(int(1), int(1)), (int(0), int(-2))]), 64).unwrap();
        assert!((l.mid_f64() - (std::f64::consts::E - 2.0).ln()).abs() < 1e-15);
        let l = ln_abs_enclosure(&form(vec![(int(0), int(1))]), 64).unwrap();
        assert!(l.contains(&BigRational::zero()));
        let l = ln_abs_enclosure(&form(vec![(int(1), int(1))]), 64).unwrap();
        assert!(l.contains(&BigRational::one()) || (l.mid_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sign_examples() {
        let c = decide_sign(&form(vec![(int(1), int(1)), (int(0), int(-2))]), 256).unwrap();
        assert_eq!(c.verdict, Verdict::PositiveReal);
        assert_eq!(c.precision_used, 64);
        let c = decide_sign(&form(vec![(int(0), int(3)), (int(1), int(-1))]), 256).unwrap();
        assert_eq!(c.verdict, Verdict::PositiveReal);
        let c = decide_sign(&form(vec![(sqrt2(), int(1)), (sqrt2().neg(), int(-1))]), 256).unwrap();
        assert_eq!(c.verdict, Verdict::PositiveReal);
        let c = decide_sign(&form(vec![(int(0), int(-1))]), 256).unwrap();
        assert_eq!(c.verdict, Verdict::NegativeReal);
    }

    #[test]
    fn complex_forms() {
        let i = AlgebraicNumber::root_near(&IntPolynomial::from_i64s(&[1, 0, 1]), 0.0, 1.0).unwrap();
        // e^i + e^-i = 2 cos 1 > 0
        let f = form(vec![(i.clone(), int(1)), (i.conj(), int(1))]);
        assert!(f.is_real_valued().unwrap());
        let c = decide_sign(&f, 256).unwrap();
        assert_eq!(c.verdict, Verdict::PositiveReal);
        assert!(c.lambda.im.contains_zero());
        let f = form(vec![(i, int(1))]);
        assert!(!f.is_real_valued().unwrap());
        let c = decide_sign(&f, 256).unwrap();
        assert_eq!(c.verdict, Verdict::NonzeroComplex { re_sign: 1, im_sign: 1 });
    }

    #[test]
    fn invalid_forms() {
        assert!(LinearForm::new(vec![]).is_err());
        assert!(LinearForm::new(vec![(int(1), int(0))]).is_err());
        assert!(LinearForm::new(vec![(int(1), int(2)), (int(1), int(3))]).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let r = verify_lower_bound(&form(vec![(int(1), int(1)), (int(0), int(-2))])).unwrap();
        assert!(r.passed);
        let r = verify_lower_bound(&form(vec![(int(0), int(1))])).unwrap();
        assert!(r.passed);
        assert!(r.needed < TowerReal::one());
    }

    #[test]
    fn undecided_at_tiny_budget() {
        // e^0 - e^(1/2^40) is about -2^-40
        let tiny = AlgebraicNumber::from_rational(&pow2_inv(40));
        let f = form(vec![(int(0), int(1)), (tiny, int(-1))]);
        match decide_sign(&f, 16) {
            Err(Error::Undecided { bits, .. }) => assert_eq!(bits, 16),
            other => panic!("{other:?}"),
        }
        assert_eq!(decide_sign(&f, 128).unwrap().verdict, Verdict::NegativeReal);
    }
}
