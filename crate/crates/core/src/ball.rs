//! Midpoint-radius interval arithmetic over dyadic rationals.
//!
//! A [`RealBall`] with fields `(mid, rad, prec)` encloses the interval
//! `[(mid - rad) / 2^prec, (mid + rad) / 2^prec]`. Every operation rounds
//! outward, so the true value of any expression built from balls lies in the
//! returned ball.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealEnclosure {
    #[serde(with = "crate::json::rational")]
    pub lo: BigRational,
    #[serde(with = "crate::json::rational")]
    pub hi: BigRational,
}

impl RealEnclosure {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi");
        RealEnclosure { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RealEnclosure {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn mid_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.12e}, {:.12e}]",
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN)
        )
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct RealBall {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// `ceil(a / 2^s)` for `a >= 0`.
fn shr_ceil(a: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return a.clone();
    }
    let q: BigInt = a >> s;
    if (&q << s) == *a {
        q
    } else {
        q + 1
    }
}

impl RealBall {
    pub fn new(mid: BigInt, rad: BigInt, prec: u32) -> Self {
        RealBall {
            mid,
            rad: rad.abs(),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Self::new(n.into() << prec, BigInt::zero(), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let num = q.numer() << prec;
        let (mid, rem) = num.div_mod_floor(q.denom());
        let rad = if rem.is_zero() { BigInt::zero() } else { BigInt::one() };
        Self::new(mid, rad, prec)
    }

    /// Smallest ball at `prec` containing `[lo, hi]`.
    pub fn from_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        let scale = BigRational::from_integer(pow2(prec));
        let a = (lo * &scale).floor().to_integer();
        let b = (hi * &scale).ceil().to_integer();
        let mid: BigInt = (&a + &b).div_floor(&BigInt::from(2));
        let rad = (&b - &mid).max(&mid - &a);
        Self::new(mid, rad, prec)
    }

    pub fn mid(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad(&self) -> &BigInt {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn scale(&self) -> BigRational {
        BigRational::from_integer(pow2(self.prec))
    }

    pub fn mid_rational(&self) -> BigRational {
        BigRational::new(self.mid.clone(), pow2(self.prec))
    }

    pub fn rad_rational(&self) -> BigRational {
        BigRational::new(self.rad.clone(), pow2(self.prec))
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, pow2(self.prec))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, pow2(self.prec))
    }

    pub fn to_enclosure(&self) -> RealEnclosure {
        RealEnclosure::new(self.lower(), self.upper())
    }

    pub fn abs_upper(&self) -> BigRational {
        BigRational::new(self.mid.abs() + &self.rad, pow2(self.prec))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        -&self.mid > self.rad
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    /// Re-express at another precision, rounding outward.
    pub fn with_prec(&self, p: u32) -> Self {
        use std::cmp::Ordering;
        match p.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = p - self.prec;
                Self::new(&self.mid << s, &self.rad << s, p)
            }
            Ordering::Less => {
                let s = self.prec - p;
                let mid: BigInt = &self.mid >> s;
                let exact = (&mid << s) == self.mid;
                let rad = shr_ceil(&self.rad, s) + if exact { 0 } else { 1 };
                Self::new(mid, rad, p)
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self::new(&a.mid + &b.mid, &a.rad + &b.rad, a.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self::new(&a.mid - &b.mid, &a.rad + &b.rad, a.prec)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.mid, self.rad.clone(), self.prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let prod = &a.mid * &b.mid;
        let err = a.mid.abs() * &b.rad + b.mid.abs() * &a.rad + &a.rad * &b.rad;
        let mid: BigInt = &prod >> p;
        let exact = (&mid << p) == prod;
        let rad = shr_ceil(&err, p) + if exact { 0 } else { 1 };
        Self::new(mid, rad, p)
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.mid * k, &self.rad * k.abs(), self.prec)
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero(), "division by zero");
        let (mut mid, rem) = self.mid.div_mod_floor(&k.abs());
        let mut rad = self.rad.div_ceil(&k.abs());
        if !rem.is_zero() {
            rad += 1;
        }
        if k.is_negative() {
            mid = -mid;
        }
        Self::new(mid, rad, self.prec)
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        self.mul_int(q.numer()).div_int(q.denom())
    }

    /// Exact multiplication by `2^e`.
    pub fn mul_2exp(&self, e: i64) -> Self {
        if e >= 0 {
            Self::new(&self.mid << e as u64, &self.rad << e as u64, self.prec)
        } else {
            Self::new(self.mid.clone(), self.rad.clone(), self.prec + (-e) as u32)
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::InsufficientPrecision(
                "inverse of a ball containing zero".into(),
            ));
        }
        let p = self.prec;
        let m = self.mid.abs();
        let num = pow2(2 * p);
        let mid = num.div_floor(&self.mid);
        let den = &m * (&m - &self.rad);
        let rad = (&self.rad * &num).div_ceil(&den) + 1;
        Ok(Self::new(mid, rad, p))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Enlarge the radius by `r >= 0` (in absolute terms).
    pub fn add_error(&self, r: &BigRational) -> Self {
        let extra = (r * self.scale()).ceil().to_integer();
        Self::new(self.mid.clone(), &self.rad + extra, self.prec)
    }

    /// Convex hull of two balls.
    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let lo = (&a.mid - &a.rad).min(&b.mid - &b.rad);
        let hi = (&a.mid + &a.rad).max(&b.mid + &b.rad);
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let rad = (&hi - &mid).max(&mid - &lo);
        Self::new(mid, rad, a.prec)
    }

    /// Enclosure of `e^x`.
    pub fn exp(&self) -> Result<Self> {
        let p = self.prec.max(16);
        let x = self.mid_rational();
        let approx = x.to_f64().unwrap_or(f64::INFINITY);
        if !approx.is_finite() || approx.abs() > 1e15 {
            return Err(Error::ResourceCap(format!("exp argument too large: {approx:e}")));
        }
        let k = BigInt::from((approx / std::f64::consts::LN_2).round() as i64);
        let kbits = k.bits() as u32;
        let s = (p as f64).sqrt() as u32 / 2 + 2;
        let w = p + s + kbits + 48;
        let ln2 = ln2(w + kbits + 4);
        let y = self.with_prec(w).sub(&ln2.mul_int(&k)).with_prec(w);
        let z = y.mul_2exp(-(s as i64)).with_prec(w);
        let mut sum = RealBall::from_int(1, w);
        let mut term = RealBall::from_int(1, w);
        let zabs = z.abs_upper();
        let mut n = 1u64;
        // |z| <= 2^-(s-1) for |y| <= 1; stop when the next term is below 2^-w.
        // The tail is bounded separately, so this only controls accuracy.
        let eps = BigRational::new(BigInt::one(), pow2(w - 16));
        loop {
            term = term.mul(&z).div_int(&BigInt::from(n));
            sum = sum.add(&term);
            n += 1;
            if term.abs_upper() < eps && n > 2 {
                break;
            }
            if n > 100_000 {
                return Err(Error::ResourceCap("exp series did not converge".into()));
            }
        }
        // Tail bound: sum_{j>=n} |z|^j/j! <= 2 |z|^n / n! when |z| <= 1/2.
        let mut tail = BigRational::from_integer(2.into());
        let mut fact = BigInt::one();
        for j in 1..=n {
            tail *= &zabs;
            fact *= BigInt::from(j);
        }
        let tail = tail / BigRational::from_integer(fact);
        sum = sum.add_error(&tail);
        for _ in 0..s {
            sum = sum.sqr();
        }
        let k_i64 = k.to_i64().unwrap();
        Ok(sum.mul_2exp(k_i64).with_prec(p))
    }

    /// Enclosure of `ln x`; the ball must be strictly positive.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::InsufficientPrecision(
                "logarithm of a ball not bounded away from zero".into(),
            ));
        }
        let p = self.prec.max(16);
        let lo = ln_point(&(&self.mid - &self.rad), self.prec, p)?;
        if self.rad.is_zero() {
            return Ok(lo);
        }
        let hi = ln_point(&(&self.mid + &self.rad), self.prec, p)?;
        Ok(lo.hull(&hi))
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        rational_to_decimal(&self.mid_rational(), digits)
    }
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} +/- {:.3e}]",
            self.to_decimal(20),
            self.rad_rational().to_f64().unwrap_or(f64::NAN)
        )
    }
}

/// Decimal string of `q` rounded toward zero to `digits` fractional digits.
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let n = (a.numer() * &scale) / a.denom();
    let s = n.to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (ip, fp) = s.split_at(s.len() - digits);
    let body = if digits == 0 {
        ip.to_string()
    } else {
        format!("{ip}.{fp}")
    };
    if neg && n > BigInt::zero() {
        format!("-{body}")
    } else {
        body
    }
}

// ln of the exact dyadic v / 2^vprec (v > 0), returned at precision p.
fn ln_point(v: &BigInt, vprec: u32, p: u32) -> Result<RealBall> {
    let w = p + 32;
    // v / 2^vprec = u * 2^k with u in [1, 2)
    let k = v.bits() as i64 - 1 - vprec as i64;
    let u = RealBall::new(v.clone(), BigInt::zero(), vprec)
        .mul_2exp(-k)
        .with_prec(w + 4);
    let one = RealBall::from_int(1, w + 4);
    let z = u.sub(&one).div(&u.add(&one))?.with_prec(w);
    let series = atanh_series(&z, w);
    let lnu = series.mul_int(&BigInt::from(2));
    let kln2 = ln2(w + 64).mul_int(&BigInt::from(k)).with_prec(w);
    Ok(lnu.add(&kln2).with_prec(p))
}

// sum_{j>=0} z^(2j+1)/(2j+1) for |z| <= 1/3 (the tail bound assumes this).
fn atanh_series(z: &RealBall, w: u32) -> RealBall {
    let z2 = z.sqr();
    let mut pow = z.clone();
    let mut sum = z.clone();
    let n_terms = (w as u64) * 10 / 31 + 4; // 3^(2n) > 2^(w+4)
    for j in 1..n_terms {
        pow = pow.mul(&z2);
        sum = sum.add(&pow.div_int(&BigInt::from(2 * j + 1)));
    }
    // tail <= |z|^(2n+1) / (1 - z^2) <= 2 * 3^-(2n+1)
    let tail = BigRational::new(
        BigInt::from(2),
        num_traits::pow(BigInt::from(3), (2 * n_terms + 1) as usize),
    );
    sum.add_error(&tail)
}

// sum (-1)^j z^(2j+1)/(2j+1) for |z| <= 1/5.
fn atan_series(z: &RealBall, w: u32) -> RealBall {
    let z2 = z.sqr();
    let mut pow = z.clone();
    let mut sum = z.clone();
    let n_terms = (w as u64) * 10 / 46 + 4; // 5^(2n) > 2^(w+4)
    for j in 1..n_terms {
        pow = pow.mul(&z2);
        let t = pow.div_int(&BigInt::from(2 * j + 1));
        sum = if j % 2 == 1 { sum.sub(&t) } else { sum.add(&t) };
    }
    let tail = BigRational::new(
        BigInt::one(),
        num_traits::pow(BigInt::from(5), (2 * n_terms + 1) as usize),
    );
    sum.add_error(&tail)
}

type ConstCache = Mutex<HashMap<&'static str, RealBall>>;

fn cached(name: &'static str, prec: u32, compute: fn(u32) -> RealBall) -> RealBall {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(name) {
        if b.prec >= prec {
            return b.with_prec(prec);
        }
    }
    // Compute with headroom so nearby requests hit the cache.
    let target = (prec + 64).next_power_of_two().max(256);
    let b = compute(target);
    let out = b.with_prec(prec);
    cache.lock().unwrap().insert(name, b);
    out
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2(prec: u32) -> RealBall {
    cached("ln2", prec, |p| {
        let w = p + 32;
        let third = RealBall::from_rational(&BigRational::new(1.into(), 3.into()), w);
        atanh_series(&third, w).mul_int(&BigInt::from(2)).with_prec(p)
    })
}

/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(prec: u32) -> RealBall {
    cached("pi", prec, |p| {
        let w = p + 32;
        let a = atan_series(&RealBall::from_rational(&BigRational::new(1.into(), 5.into()), w), w);
        let b = atan_series(&RealBall::from_rational(&BigRational::new(1.into(), 239.into()), w), w);
        a.mul_int(&BigInt::from(16))
            .sub(&b.mul_int(&BigInt::from(4)))
            .with_prec(p)
    })
}

/// Rational bounds `lo <= sqrt(q) <= hi` with `hi - lo <= 2^-bits` (roughly).
pub fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!q.is_negative(), "square root of a negative number");
    let scale = pow2(2 * bits);
    let v = (q * BigRational::from_integer(scale)).floor().to_integer();
    let s = v.sqrt();
    let lo = BigRational::new(s.clone(), pow2(bits));
    let vc = (q * BigRational::from_integer(pow2(2 * bits))).ceil().to_integer();
    let mut t = vc.sqrt();
    if &t * &t < vc {
        t += 1;
    }
    (lo, BigRational::new(t, pow2(bits)))
}

/// Complex ball as a rectangle: real and imaginary parts are independent
/// real balls.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> Self {
        ComplexBall { re, im }
    }

    pub fn real(re: RealBall) -> Self {
        let p = re.prec();
        ComplexBall {
            re,
            im: RealBall::zero(p),
        }
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        ComplexBall {
            re: RealBall::from_rational(re, prec),
            im: RealBall::from_rational(im, prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, p: u32) -> Self {
        ComplexBall::new(self.re.with_prec(p), self.im.with_prec(p))
    }

    /// Upper bound on the distance from the center to any enclosed point
    /// (sum of the component radii).
    pub fn radius(&self) -> BigRational {
        self.re.rad_rational() + self.im.rad_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexBall::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexBall::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        ComplexBall::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        ComplexBall::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        ComplexBall::new(re, im)
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn scale(&self, r: &RealBall) -> Self {
        ComplexBall::new(self.re.mul(r), self.im.mul(r))
    }

    /// Lower and upper bounds on `|z|^2` over the rectangle.
    pub fn abs_sq_bounds(&self) -> (BigRational, BigRational) {
        fn range_sq(b: &RealBall) -> (BigRational, BigRational) {
            let (lo, hi) = (b.lower(), b.upper());
            let lo2 = &lo * &lo;
            let hi2 = &hi * &hi;
            let max = if lo2 > hi2 { lo2.clone() } else { hi2.clone() };
            let min = if b.contains_zero() {
                BigRational::zero()
            } else if lo2 < hi2 {
                lo2
            } else {
                hi2
            };
            (min, max)
        }
        let (a0, a1) = range_sq(&self.re);
        let (b0, b1) = range_sq(&self.im);
        (a0 + b0, a1 + b1)
    }

    /// Enclosure of `e^z`.
    pub fn exp(&self) -> Result<Self> {
        let p = self.prec().max(16);
        let mag = self.re.exp()?.with_prec(p);
        if self.im.is_exact() && self.im.mid().is_zero() {
            return Ok(ComplexBall::real(mag));
        }
        let (c, s) = cos_sin(&self.im.with_prec(p))?;
        Ok(ComplexBall::new(mag.mul(&c), mag.mul(&s)).with_prec(p))
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?})i", self.re, self.im)
    }
}

// (cos b, sin b) by reduction modulo 2 pi, halving, Taylor series and
// repeated doubling.
fn cos_sin(b: &RealBall) -> Result<(RealBall, RealBall)> {
    let p = b.prec();
    let approx = b.to_f64();
    if !approx.is_finite() || approx.abs() > 1e15 {
        return Err(Error::ResourceCap(format!("trigonometric argument too large: {approx:e}")));
    }
    let two_pi = std::f64::consts::TAU;
    let k = BigInt::from((approx / two_pi).round() as i64);
    let s = (p as f64).sqrt() as u32 / 2 + 3;
    let w = p + 2 * s + 48;
    let tp = pi(w + k.bits() as u32 + 4).mul_int(&BigInt::from(2));
    let y = b.with_prec(w).sub(&tp.mul_int(&k)).with_prec(w);
    let z = y.mul_2exp(-(s as i64)).with_prec(w);
    let zabs = z.abs_upper();
    let z2 = z.sqr();
    let mut c = RealBall::from_int(1, w);
    let mut sn = z.clone();
    let mut tc = RealBall::from_int(1, w);
    let mut ts = z.clone();
    let eps = BigRational::new(BigInt::one(), pow2(w - 16));
    let mut j = 1u64;
    loop {
        tc = tc.mul(&z2).div_int(&BigInt::from((2 * j - 1) * (2 * j))).neg();
        ts = ts.mul(&z2).div_int(&BigInt::from((2 * j) * (2 * j + 1))).neg();
        c = c.add(&tc);
        sn = sn.add(&ts);
        j += 1;
        if tc.abs_upper() < eps && ts.abs_upper() < eps {
            break;
        }
        if j > 100_000 {
            return Err(Error::ResourceCap("trigonometric series did not converge".into()));
        }
    }
    // Alternating series with decreasing terms once |z| < 1: the error is at
    // most the first omitted term, itself below |z|^(2j) / (2j)!.
    let mut tail = BigRational::one();
    let mut fact = BigInt::one();
    for i in 1..=(2 * j) {
        tail *= &zabs;
        fact *= BigInt::from(i);
    }
    let tail = tail / BigRational::from_integer(fact);
    c = c.add_error(&tail);
    sn = sn.add_error(&tail);
    let mut e = ComplexBall::new(c, sn);
    for _ in 0..s {
        e = e.sqr();
    }
    Ok((e.re.with_prec(p), e.im.with_prec(p)))
}
