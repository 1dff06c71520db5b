//! Upper bound for the smallest nonzero linear form with bounded degrees and
//! heights, from counting and the pigeonhole principle.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::HeightInput;
use crate::ball::{sqrt_bounds, RealBall};
use crate::error::{domain, Result};
use crate::json::rational_value;

const PREC: u32 = 256;

/// `ln|lambda| <= ln_bound` is attained by some nonzero form when `valid`.
#[derive(Clone, Debug)]
pub struct MainResultB {
    pub m: u64,
    pub d: u64,
    pub h: HeightInput,
    /// `floor(m / 2)`.
    pub ell: u64,
    /// `n1 = (e^h / 6)^(d^2 + d) / 2`, when it is rational.
    pub n1_exact: Option<BigRational>,
    /// `n2 = (e^(h/2 - ln 2 / 2) / 6)^(d - sqrt d) / 2`, when it is rational.
    pub n2_exact: Option<BigRational>,
    pub ln_n1: RealBall,
    pub ln_n2: RealBall,
    /// `-(ell/2) ln(n1 n2 / ell) + ln m + ln sqrt 2 + 2`.
    pub ln_bound: RealBall,
    /// `n1 >= ell` and `n2 >= 1`, certified.
    pub valid: bool,
}

impl MainResultB {
    pub fn to_json(&self) -> Value {
        let opt = |q: &Option<BigRational>| q.as_ref().map(rational_value).unwrap_or(Value::Null);
        json!({
            "kind": "main_b",
            "params": {"m": self.m, "d": self.d, "h": self.h.to_string()},
            "ell": self.ell,
            "n1": opt(&self.n1_exact),
            "n2": opt(&self.n2_exact),
            "ln_n1": self.ln_n1.to_decimal(30),
            "ln_n2": self.ln_n2.to_decimal(30),
            "ln_bound": self.ln_bound.to_decimal(30),
            "ln_bound_interval": [
                crate::ball::rational_to_decimal(&self.ln_bound.lower(), 30),
                crate::ball::rational_to_decimal(&self.ln_bound.upper(), 30),
            ],
            "validity": self.valid,
        })
    }
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn ln_of(q: &BigRational) -> Result<RealBall> {
    RealBall::from_rational(q, PREC + 16).ln()
}

// Certified `x >= 0`: true only when the ball is decided or the exact value is known.
fn nonneg(ball: &RealBall, exact: Option<bool>) -> bool {
    exact.unwrap_or_else(|| !ball.lower().is_negative())
}

pub fn main_result_b(m: u64, d: u64, h: &HeightInput) -> Result<MainResultB> {
    if m == 0 || d == 0 {
        return domain("m and d must be at least 1");
    }
    let hb = h.ball(PREC + 16)?;
    match h {
        HeightInput::Rational(q) if q.is_zero() => return domain("h must be positive"),
        HeightInput::LnOf(n) if n.is_one() => return domain("h must be positive"),
        _ => {}
    }
    let ell = m / 2;
    let two = rat(2);
    let six = rat(6);
    let ln2 = ln_of(&two)?;
    let ln6 = ln_of(&six)?;
    let k1 = d * d + d;

    // d - sqrt d
    let s = d.sqrt();
    let square = s * s == d;
    let (sq_lo, sq_hi) = sqrt_bounds(&rat(d), PREC + 16);
    let k2 = RealBall::from_int(d, PREC + 16).sub(&RealBall::from_interval(&sq_lo, &sq_hi, PREC + 16));

    let ln_n1 = hb.sub(&ln6).mul_int(&BigInt::from(k1)).sub(&ln2);
    let half_h = hb.sub(&ln2).div_int(&BigInt::from(2));
    let ln_n2 = k2.mul(&half_h.sub(&ln6)).sub(&ln2);

    let (n1_exact, n2_exact) = match h {
        HeightInput::LnOf(n) => {
            let n1 = num_traits::pow(n / &six, k1 as usize) / &two;
            let n2 = if square {
                // ((n/2)^(1/2) / 6)^(s(s-1)) with s(s-1) even
                let k = (s * (s - 1)) as usize;
                Some(num_traits::pow(n / &two, k / 2) / num_traits::pow(six.clone(), k) / &two)
            } else {
                None
            };
            (Some(n1), n2)
        }
        HeightInput::Rational(_) => (None, None),
    };

    let ln_m = ln_of(&rat(m))?;
    let mut ln_bound = ln_m.add(&ln2.div_int(&BigInt::from(2))).add(&RealBall::from_int(2, PREC + 16));
    if ell > 0 {
        let ln_ell = ln_of(&rat(ell))?;
        let t = ln_n1.add(&ln_n2).sub(&ln_ell).mul_rational(&BigRational::new(ell.into(), 2.into()));
        ln_bound = ln_bound.sub(&t);
    }

    let n1_ok = if ell == 0 {
        true
    } else {
        let exact = n1_exact.as_ref().map(|n| *n >= rat(ell));
        nonneg(&ln_n1.sub(&ln_of(&rat(ell))?), exact)
    };
    let n2_ok = nonneg(&ln_n2, n2_exact.as_ref().map(|n| *n >= BigRational::one()));
    Ok(MainResultB {
        m,
        d,
        h: h.clone(),
        ell,
        n1_exact,
        n2_exact,
        ln_n1: ln_n1.with_prec(PREC),
        ln_n2: ln_n2.with_prec(PREC),
        ln_bound: ln_bound.with_prec(PREC),
        valid: n1_ok && n2_ok,
    })
}
