//! The lower bound `ln|lambda| >= -B` for linear forms in exponentials, and
//! the underlying bound for exponential polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::tower::{ln_upper, TowerReal};
use super::HeightInput;
use crate::error::{domain, Result};
use crate::json::{int_value, rational_value};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn tower(q: &BigRational) -> Result<TowerReal> {
    TowerReal::from_rational(q)
}

/// `delta = d^(2m)` and `zeta = m d^(6m) (2h/d + 3)` at the rational `h`.
fn delta_zeta(m: u64, d: u64, h: &BigRational) -> (BigInt, BigRational) {
    let delta = num_traits::pow(BigInt::from(d), 2 * m as usize);
    let d6m = num_traits::pow(BigInt::from(d), 6 * m as usize);
    let zeta = rat(m as i64) * int_rat(&d6m) * (rat(2) * h / rat(d as i64) + rat(3));
    (delta, zeta)
}

fn check_md(m: u64, d: u64) -> Result<()> {
    if m == 0 || d == 0 {
        return domain("m and d must be at least 1");
    }
    Ok(())
}

/// Magnitude `e^(8 m d^(8m) (2h/d + 3))`.
pub fn chi_prime_lower(m: u64, d: u64, h: &HeightInput) -> Result<TowerReal> {
    check_md(m, d)?;
    let h = h.upper()?;
    let d8m = num_traits::pow(BigInt::from(d), 8 * m as usize);
    let e = rat(8) * rat(m as i64) * int_rat(&d8m) * (rat(2) * &h / rat(d as i64) + rat(3));
    TowerReal::exp_of(&e)
}

/// Parameters of the bound for `ln|P(e^alpha_1, ..., e^alpha_M)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SertParams {
    /// Degree of the field containing all data.
    pub field_degree: BigInt,
    /// Number of variables.
    pub vars: BigInt,
    pub d_p: TowerReal,
    pub h_alpha: BigRational,
    pub h_beta: BigRational,
    pub ln_disc_beta: BigRational,
    pub alpha_hat: TowerReal,
}

impl SertParams {
    pub fn to_json(&self) -> Value {
        json!({
            "D": int_value(&self.field_degree),
            "M": int_value(&self.vars),
            "d_P": self.d_p.to_json(),
            "h_alpha": rational_value(&self.h_alpha),
            "h_beta": rational_value(&self.h_beta),
            "ln_disc_beta": rational_value(&self.ln_disc_beta),
            "alpha_hat": self.alpha_hat.to_json(),
        })
    }
}

/// Worst-case parameters for `m` terms of degree `d` and height `h`:
/// `D = delta^2`, `M = delta`, `d_P = m e^(6 delta zeta)`,
/// `alpha_hat = e^(2 delta zeta)`, `h(alpha) = 5 delta^2 zeta`,
/// `h(beta) = m h`, `ln|Delta_beta| = 2 zeta`.
pub fn worstcase_sert_params(m: u64, d: u64, h: &HeightInput) -> Result<SertParams> {
    check_md(m, d)?;
    let hu = h.upper()?;
    let (delta, zeta) = delta_zeta(m, d, &hu);
    let dz = int_rat(&delta) * &zeta;
    let d_p = TowerReal::exp_of(&(rat(6) * &dz))?.mul_rational_ub(&rat(m as i64))?;
    Ok(SertParams {
        field_degree: &delta * &delta,
        vars: delta.clone(),
        d_p,
        h_alpha: rat(5) * int_rat(&(&delta * &delta)) * &zeta,
        h_beta: rat(m as i64) * &hu,
        ln_disc_beta: rat(2) * &zeta,
        alpha_hat: TowerReal::exp_of(&(rat(2) * &dz))?,
    })
}

// (9/2)^M M^M D^k
fn common_factor(vars: &BigInt, deg: &BigInt, k: &BigInt) -> Result<TowerReal> {
    let a = tower(&BigRational::new(9.into(), 2.into()))?.pow_ub(vars)?;
    let b = tower(&int_rat(vars))?.pow_ub(vars)?;
    let c = tower(&int_rat(deg))?.pow_ub(k)?;
    a.mul_ub(&b)?.mul_ub(&c)
}

/// `r`, `r'`, `r''` of the exponential-polynomial bound.
fn sert_coefficients(p: &SertParams) -> Result<(TowerReal, TowerReal, TowerReal)> {
    let (mm, dd) = (&p.vars, &p.field_degree);
    let f_m1 = common_factor(mm, dd, &(mm + 1))?;
    let f_m = common_factor(mm, dd, mm)?;
    let one6d = rat(1) + rat(6) * int_rat(dd);
    let r = f_m1.mul_rational_ub(&rat(82))?;
    let ln9md = ln_upper(&(rat(9) * int_rat(mm) * int_rat(dd)))?;
    let t1 = f_m1.mul_rational_ub(&rat(12))?;
    let t2 = f_m.mul_rational_ub(&(rat(16) * &one6d * ln9md))?;
    let t3 = f_m1.mul_rational_ub(&(rat(16) * (rat(1) + rat(6) * int_rat(mm)) * &p.h_alpha))?;
    let r1 = t1.add_ub(&t2)?.add_ub(&t3)?;
    let r2 = f_m.mul_rational_ub(&(rat(16) * one6d))?;
    Ok((r, r1, r2))
}

/// Magnitude `B` with `ln|P(e^alpha)| >= -B`:
/// `B = r d_P^M (h(beta) + 39/(328 D) ln|Delta_beta| + e^(r' d_P^M + r'' d_P^M ln d_P + 72 alpha_hat))`.
pub fn sert_bound(p: &SertParams) -> Result<TowerReal> {
    if p.d_p.is_zero() || p.d_p < TowerReal::one() {
        return domain("d_P must be at least 1");
    }
    if p.vars < BigInt::one() || p.field_degree < BigInt::one() {
        return domain("D and M must be at least 1");
    }
    let (r, r1, r2) = sert_coefficients(p)?;
    let x = p.d_p.pow_ub(&p.vars)?;
    let ln_dp = p.d_p.ln()?;
    let expo = r1
        .mul_ub(&x)?
        .add_ub(&r2.mul_ub(&x)?.mul_ub(&ln_dp)?)?
        .add_ub(&p.alpha_hat.mul_rational_ub(&rat(72))?)?;
    let small = &p.h_beta + BigRational::new(39.into(), rat(328).numer() * &p.field_degree) * &p.ln_disc_beta;
    let inner = tower(&small.max(BigRational::zero()))?.add_ub(&expo.exp()?)?;
    r.mul_ub(&x)?.mul_ub(&inner)
}

/// Intermediates and final magnitude of the linear-form lower bound.
#[derive(Clone, Debug)]
pub struct BoundParamsA {
    pub m: u64,
    pub d: u64,
    pub h: HeightInput,
    /// Rational upper bound of `h` used in every formula.
    pub h_upper: BigRational,
    pub delta: BigInt,
    pub zeta: BigRational,
    pub r: TowerReal,
    pub r_prime: TowerReal,
    pub r_dprime: TowerReal,
    pub big_r: TowerReal,
    /// `e^(8 delta zeta)`.
    pub chi_prime: TowerReal,
    /// `B` with `ln|lambda| >= -B`.
    pub b: TowerReal,
}

impl BoundParamsA {
    /// Upper bound for `ln ln B`, if it is below `2^32`.
    pub fn ln_ln_b(&self) -> Result<Option<BigRational>> {
        Ok(self.b.ln()?.ln()?.to_rational())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "main_a",
            "params": {"m": self.m, "d": self.d, "h": self.h.to_string()},
            "intermediates": {
                "delta": int_value(&self.delta),
                "zeta": rational_value(&self.zeta),
                "r": self.r.to_json(),
                "r_prime": self.r_prime.to_json(),
                "r_dprime": self.r_dprime.to_json(),
                "R": self.big_r.to_json(),
                "chi_prime": self.chi_prime.to_json(),
            },
            "magnitude": self.b.to_json(),
            "validity": true,
        })
    }
}

/// `B = e^(8 delta zeta) + r m^delta e^(6 delta^2 zeta) (m h + 39 zeta / 164 + e^R)`.
pub fn main_result_a(m: u64, d: u64, h: &HeightInput) -> Result<BoundParamsA> {
    check_md(m, d)?;
    let hu = h.upper()?;
    let (delta, zeta) = delta_zeta(m, d, &hu);
    let dq = int_rat(&delta);
    let params = SertParams {
        field_degree: &delta * &delta,
        vars: delta.clone(),
        d_p: TowerReal::one(),
        h_alpha: rat(5) * &dq * &dq * &zeta,
        h_beta: BigRational::zero(),
        ln_disc_beta: BigRational::zero(),
        alpha_hat: TowerReal::one(),
    };
    // With D = delta^2 and M = delta these are the closed forms in delta.
    let (r, r_prime, r_dprime) = sert_coefficients(&params)?;

    let mq = rat(m as i64);
    let x = tower(&mq)?
        .pow_ub(&delta)?
        .mul_ub(&TowerReal::exp_of(&(rat(6) * &dq * &dq * &zeta))?)?;
    let ln_m = if m == 1 { BigRational::zero() } else { ln_upper(&mq)? };
    let big_r = r_prime
        .mul_ub(&x)?
        .add_ub(&r_dprime.mul_ub(&x)?.mul_rational_ub(&(ln_m + rat(6) * &dq * &zeta))?)?
        .add_ub(&TowerReal::exp_of(&(rat(2) * &dq * &zeta))?.mul_rational_ub(&rat(72))?)?;
    let small = &mq * &hu + BigRational::new(39.into(), 164.into()) * &zeta;
    let chi_prime = TowerReal::exp_of(&(rat(8) * &dq * &zeta))?;
    let b = chi_prime.add_ub(&r.mul_ub(&x)?.mul_ub(&tower(&small)?.add_ub(&big_r.exp()?)?)?)?;
    Ok(BoundParamsA {
        m,
        d,
        h: h.clone(),
        h_upper: hu,
        delta,
        zeta,
        r,
        r_prime,
        r_dprime,
        big_r,
        chi_prime,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(n: i64) -> HeightInput {
        HeightInput::Rational(rat(n))
    }

    #[test]
    fn chi_prime_examples() {
        assert_eq!(chi_prime_lower(1, 1, &q(0)).unwrap(), TowerReal::exp_of(&rat(24)).unwrap());
        let h = HeightInput::Rational(BigRational::new(3.into(), 2.into()));
        assert_eq!(chi_prime_lower(1, 1, &h).unwrap(), TowerReal::exp_of(&rat(48)).unwrap());
        assert_eq!(chi_prime_lower(2, 1, &q(0)).unwrap(), TowerReal::exp_of(&rat(48)).unwrap());
    }

    #[test]
    fn worstcase_examples() {
        let p = worstcase_sert_params(1, 1, &q(0)).unwrap();
        assert_eq!(p.field_degree, BigInt::from(1));
        assert_eq!(p.vars, BigInt::from(1));
        assert_eq!(p.h_alpha, rat(15));
        assert_eq!(p.ln_disc_beta, rat(6));
        let p = worstcase_sert_params(1, 2, &q(0)).unwrap();
        assert_eq!(p.field_degree, BigInt::from(16));
        assert_eq!(p.h_alpha, rat(5 * 16 * 192));
        let p = worstcase_sert_params(2, 1, &q(0)).unwrap();
        // d_P = 2 e^36
        let want = 36.0 + 2f64.ln();
        assert_eq!(p.d_p.level(), 1);
        assert!((p.d_p.mantissa().to_f64().unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn main_a_unit_case() {
        let a = main_result_a(1, 1, &q(0)).unwrap();
        assert_eq!(a.delta, BigInt::from(1));
        assert_eq!(a.zeta, rat(3));
        assert_eq!(a.r.to_rational(), Some(rat(369)));
        assert_eq!(a.r_dprime.to_rational(), Some(rat(504)));
        let rp = a.r_prime.to_rational().unwrap().to_f64().unwrap();
        assert!((rp - (7614.0 + 504.0 * 9f64.ln())).abs() < 1e-9);
        let lnln = a.ln_ln_b().unwrap().unwrap().to_f64().unwrap();
        assert!((lnln - 27.786).abs() < 0.01, "{lnln}");
    }

    #[test]
    fn main_a_delta_zeta() {
        let (delta, zeta) = delta_zeta(2, 2, &rat(1));
        assert_eq!(delta, BigInt::from(16));
        assert_eq!(zeta, rat(32768));
    }

    #[test]
    fn main_a_monotone_in_h() {
        let b0 = main_result_a(1, 1, &q(0)).unwrap().b;
        let b1 = main_result_a(1, 1, &q(1)).unwrap().b;
        assert!(b1 > b0);
    }

    #[test]
    fn sert_examples() {
        let p = SertParams {
            field_degree: 1.into(),
            vars: 1.into(),
            d_p: TowerReal::one(),
            h_alpha: rat(0),
            h_beta: rat(0),
            ln_disc_beta: rat(0),
            alpha_hat: TowerReal::one(),
        };
        let b = sert_bound(&p).unwrap();
        // 369 e^(54 + 504 ln 9 + 72)
        assert_eq!(b.level(), 1);
        let want = 369f64.ln() + 126.0 + 504.0 * 9f64.ln();
        assert!((b.mantissa().to_f64().unwrap() - want).abs() < 1e-9);
        let mut p2 = p.clone();
        p2.h_beta = rat(1);
        let mut p3 = p.clone();
        p3.h_beta = rat(2);
        assert!(sert_bound(&p3).unwrap() >= sert_bound(&p2).unwrap());
        let mut bad = p;
        bad.d_p = TowerReal::zero();
        assert!(sert_bound(&bad).is_err());
    }

    #[test]
    fn sert_matches_main_a() {
        let a = main_result_a(1, 1, &q(0)).unwrap();
        let s = sert_bound(&worstcase_sert_params(1, 1, &q(0)).unwrap()).unwrap();
        let total = s.add_ub(&a.chi_prime).unwrap();
        assert_eq!(total.level(), a.b.level());
        let diff = (total.mantissa() - a.b.mantissa()).to_f64().unwrap().abs();
        assert!(diff < 1e-25, "{diff}");
    }
}
