//! Nonnegative magnitudes `exp^(k)(x)`, large enough for bounds such as
//! `e^(e^(10^12))`. All operations return upper bounds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::ball::{ln2, rational_to_decimal, RealBall};
use crate::error::{domain, Error, Result};

/// Fractional bits kept in mantissas.
pub const MANTISSA_BITS: u32 = 128;
/// Highest level a value may reach.
pub const MAX_LEVEL: u32 = 4;

const WORK: u32 = MANTISSA_BITS + 64;

fn thresh() -> BigRational {
    BigRational::from_integer(BigInt::one() << 32)
}

// x > ln 2^32 = 32 ln 2. The right side is irrational, so there are no ties.
fn above_ln_thresh(x: &BigRational) -> bool {
    let mut prec = WORK;
    loop {
        let l = ln2(prec).mul_int(&BigInt::from(32));
        if *x > l.upper() {
            return true;
        }
        if *x < l.lower() {
            return false;
        }
        prec *= 2;
    }
}

fn grid() -> BigInt {
    BigInt::one() << MANTISSA_BITS
}

/// Rounds up to the `2^-128` grid unless the denominator is already small.
fn round_up(q: BigRational) -> BigRational {
    if q.denom().bits() <= MANTISSA_BITS as u64 + 2 {
        return q;
    }
    let g = grid();
    let scaled = q * BigRational::from_integer(g.clone());
    BigRational::new(scaled.ceil().to_integer(), g)
}

pub(crate) fn exp_upper(x: &BigRational) -> Result<BigRational> {
    Ok(round_up(RealBall::from_rational(x, WORK).exp()?.upper()))
}

pub(crate) fn ln_upper(x: &BigRational) -> Result<BigRational> {
    Ok(round_up(RealBall::from_rational(x, WORK).ln()?.upper()))
}

/// `value = exp^(level)(mantissa)` in canonical form: level 0 exactly when
/// the value is at most `2^32`, otherwise the mantissa lies in
/// `(ln 2^32, 2^32]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TowerReal {
    level: u32,
    mantissa: BigRational,
}

impl TowerReal {
    pub fn zero() -> Self {
        TowerReal {
            level: 0,
            mantissa: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: u64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into())).expect("small integer")
    }

    /// Upper bound of a nonnegative rational.
    pub fn from_rational(q: &BigRational) -> Result<Self> {
        if q.is_negative() {
            return domain("tower values are nonnegative magnitudes");
        }
        Self::normalize(0, round_up(q.clone()))
    }

    /// `e^q`, for a nonnegative rational `q`.
    pub fn exp_of(q: &BigRational) -> Result<Self> {
        Self::from_rational(q)?.exp()
    }

    /// Raw constructor; the result is normalized.
    pub fn from_parts(level: u32, mantissa: BigRational) -> Result<Self> {
        if mantissa.is_negative() {
            return domain("tower mantissa must be nonnegative");
        }
        Self::normalize(level, round_up(mantissa))
    }

    fn normalize(mut level: u32, mut x: BigRational) -> Result<Self> {
        let t = thresh();
        while level >= 1 && !above_ln_thresh(&x) {
            x = exp_upper(&x)?;
            level -= 1;
        }
        while x > t {
            x = ln_upper(&x)?;
            level += 1;
        }
        if level > MAX_LEVEL {
            return Err(Error::ResourceCap(format!("tower level exceeds {MAX_LEVEL}")));
        }
        Ok(TowerReal { level, mantissa: x })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn mantissa(&self) -> &BigRational {
        &self.mantissa
    }

    pub fn is_zero(&self) -> bool {
        self.level == 0 && self.mantissa.is_zero()
    }

    /// The value itself when it is a level-0 rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        (self.level == 0).then(|| self.mantissa.clone())
    }

    pub fn exp(&self) -> Result<Self> {
        if self.level == 0 {
            if !above_ln_thresh(&self.mantissa) {
                return Self::normalize(0, exp_upper(&self.mantissa)?);
            }
            return Self::normalize(1, self.mantissa.clone());
        }
        if self.level >= MAX_LEVEL {
            return Err(Error::ResourceCap(format!("tower level exceeds {MAX_LEVEL}")));
        }
        Ok(TowerReal {
            level: self.level + 1,
            mantissa: self.mantissa.clone(),
        })
    }

    /// Upper bound for `ln` of a value `>= 1`.
    pub fn ln(&self) -> Result<Self> {
        match self.level {
            0 => {
                if self.mantissa < BigRational::one() {
                    return domain("ln of a tower value below 1");
                }
                Self::normalize(0, ln_upper(&self.mantissa)?)
            }
            k => Self::normalize(k - 1, self.mantissa.clone()),
        }
    }

    /// Upper bound for `self + o`.
    pub fn add_ub(&self, o: &Self) -> Result<Self> {
        let (a, b) = if self >= o { (self, o) } else { (o, self) };
        match a.level {
            0 => Self::normalize(0, &a.mantissa + &b.mantissa),
            1 => {
                // ln(a + b) = A + ln(1 + e^(B - A))
                let big_a = &a.mantissa;
                let big_b = match b.level {
                    0 if b.mantissa <= BigRational::one() => BigRational::zero(),
                    0 => ln_upper(&b.mantissa)?,
                    _ => b.mantissa.clone(),
                };
                let gap = big_a - &big_b;
                let extra = if gap >= BigRational::from_integer(200.into()) {
                    BigRational::new(BigInt::one(), grid())
                } else {
                    let e = RealBall::from_rational(&-gap, WORK).exp()?;
                    let one = RealBall::from_int(1, WORK);
                    round_up(one.add(&e).ln()?.upper())
                };
                Self::normalize(1, big_a + extra)
            }
            _ => {
                // a + b <= 2a
                let ln2 = Self::from_rational(&ln_upper(&BigRational::from_integer(2.into()))?)?;
                a.ln()?.add_ub(&ln2)?.exp()
            }
        }
    }

    /// Upper bound for `self * o`.
    pub fn mul_ub(&self, o: &Self) -> Result<Self> {
        if self.level == 0 && o.level == 0 {
            return Self::normalize(0, &self.mantissa * &o.mantissa);
        }
        let one = Self::one();
        let (a, b) = if self >= o { (self, o) } else { (o, self) };
        if *b <= one {
            // a b <= a
            return Ok(a.clone());
        }
        a.ln()?.add_ub(&b.ln()?)?.exp()
    }

    pub fn mul_rational_ub(&self, q: &BigRational) -> Result<Self> {
        self.mul_ub(&Self::from_rational(q)?)
    }

    /// Upper bound for `self^n`.
    pub fn pow_ub(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Ok(Self::one());
        }
        if self.level == 0 {
            let size = self.mantissa.numer().bits().max(self.mantissa.denom().bits());
            if let Some(e) = n.to_u64().filter(|e| size.saturating_mul(*e) <= 1 << 14) {
                return Self::from_rational(&num_traits::pow(self.mantissa.clone(), e as usize));
            }
        }
        if *self <= Self::one() {
            return Ok(self.clone());
        }
        self.ln()?.mul_rational_ub(&BigRational::from_integer(n.clone()))?.exp()
    }

    /// Decimal of `ln(mantissa)`, i.e. of the `(level + 1)`-fold logarithm.
    pub fn ln_mantissa_decimal(&self, digits: usize) -> String {
        if self.mantissa.is_zero() {
            return "-inf".into();
        }
        match RealBall::from_rational(&self.mantissa, WORK).ln() {
            Ok(b) => rational_to_decimal(&b.upper(), digits),
            Err(_) => "nan".into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "mantissa": rational_to_decimal(&self.mantissa, 30),
            "ln_mantissa": self.ln_mantissa_decimal(30),
        })
    }
}

impl PartialOrd for TowerReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| self.mantissa.cmp(&other.mantissa))
    }
}

impl fmt::Debug for TowerReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp^{}({})", self.level, rational_to_decimal(&self.mantissa, 12))
    }
}

impl fmt::Display for TowerReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
        match self.level {
            0 => write!(f, "{m}"),
            1 => write!(f, "e^{m}"),
            k => write!(f, "exp^{k}({m})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_levels() {
        let three = TowerReal::from_rational(&q(3, 1)).unwrap();
        let e3 = three.exp().unwrap();
        assert_eq!(e3.level(), 0);
        assert!((e3.mantissa().to_f64().unwrap() - 3f64.exp()).abs() < 1e-12);
        let e100 = TowerReal::exp_of(&q(100, 1)).unwrap();
        assert_eq!(e100.level(), 1);
        assert_eq!(e100.mantissa(), &q(100, 1));
        assert_eq!(e100.ln().unwrap(), TowerReal::from_rational(&q(100, 1)).unwrap());
        let big = TowerReal::from_rational(&BigRational::from_integer(BigInt::one() << 40)).unwrap();
        assert_eq!(big.level(), 1);
    }

    #[test]
    fn add_doubling() {
        let e100 = TowerReal::exp_of(&q(100, 1)).unwrap();
        let s = e100.add_ub(&e100).unwrap();
        assert_eq!(s.level(), 1);
        let want = 100.0 + std::f64::consts::LN_2;
        let got = s.mantissa().to_f64().unwrap();
        assert!(got >= want - 1e-12 && got - want < 1e-12);
    }

    #[test]
    fn compare_towers() {
        let a = TowerReal::exp_of(&q(2, 1)).unwrap().exp().unwrap();
        let b = TowerReal::exp_of(&q(19, 10)).unwrap().exp().unwrap();
        assert!(a > b);
        let c = TowerReal::exp_of(&q(1000, 1)).unwrap().exp().unwrap();
        assert_eq!(c.level(), 2);
        assert!(c > a);
    }

    #[test]
    fn level0_exact() {
        let a = TowerReal::from_rational(&q(7, 3)).unwrap();
        let b = TowerReal::from_rational(&q(5, 2)).unwrap();
        assert_eq!(a.add_ub(&b).unwrap().to_rational(), Some(q(29, 6)));
        assert_eq!(a.mul_ub(&b).unwrap().to_rational(), Some(q(35, 6)));
    }

    #[test]
    fn high_level_ops() {
        let x = TowerReal::exp_of(&q(30, 1)).unwrap().exp().unwrap().exp().unwrap();
        assert_eq!(x.level(), 3);
        let y = x.add_ub(&x).unwrap();
        assert!(y >= x);
        let z = x.mul_ub(&x).unwrap();
        assert!(z >= y);
        assert!(TowerReal::exp_of(&q(30, 1)).unwrap().exp().unwrap().exp().unwrap().exp().unwrap().exp().is_err());
    }
}
