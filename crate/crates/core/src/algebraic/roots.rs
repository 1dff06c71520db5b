//! Certified isolation of all complex roots of a squarefree integer
//! polynomial.
//!
//! Approximations come from Aberth iterations (first in `f64`, then in
//! fixed point at the working precision). They are certified with Smith's
//! Gerschgorin-type theorem: with `W_i = f(z_i) / (a_n prod_{j != i} (z_i - z_j))`
//! every root lies in the union of the disks `|z - z_i| <= n |W_i|`, and each
//! connected component of `k` disks holds exactly `k` roots. All quantities in
//! the certificate are computed exactly over the Gaussian dyadics.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::{sqrt_bounds, ComplexBall, RealBall};
use crate::error::{domain, Error, Result};
use crate::exact_poly::{is_squarefree, IntPolynomial};

/// Axis-parallel closed rectangle with rational corners. Degenerate sides are
/// allowed (a real root has `im_lo = im_hi = 0`; a rational root is a point).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rectangle {
    pub re_lo: BigRational,
    pub re_hi: BigRational,
    pub im_lo: BigRational,
    pub im_hi: BigRational,
}

impl Rectangle {
    pub fn new(re_lo: BigRational, re_hi: BigRational, im_lo: BigRational, im_hi: BigRational) -> Self {
        assert!(re_lo <= re_hi && im_lo <= im_hi, "malformed rectangle");
        Rectangle {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        }
    }

    pub fn point(re: BigRational, im: BigRational) -> Self {
        Rectangle::new(re.clone(), re, im.clone(), im)
    }

    pub fn width(&self) -> BigRational {
        &self.re_hi - &self.re_lo
    }

    pub fn height(&self) -> BigRational {
        &self.im_hi - &self.im_lo
    }

    pub fn max_side(&self) -> BigRational {
        self.width().max(self.height())
    }

    pub fn center(&self) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(2.into());
        (
            (&self.re_lo + &self.re_hi) / &two,
            (&self.im_lo + &self.im_hi) / two,
        )
    }

    pub fn is_on_real_axis(&self) -> bool {
        self.im_lo.is_zero() && self.im_hi.is_zero()
    }

    pub fn intersects(&self, o: &Rectangle) -> bool {
        self.re_lo <= o.re_hi && o.re_lo <= self.re_hi && self.im_lo <= o.im_hi && o.im_lo <= self.im_hi
    }

    pub fn contains_rect(&self, o: &Rectangle) -> bool {
        self.re_lo <= o.re_lo && o.re_hi <= self.re_hi && self.im_lo <= o.im_lo && o.im_hi <= self.im_hi
    }

    pub fn contains_point(&self, re: &BigRational, im: &BigRational) -> bool {
        &self.re_lo <= re && re <= &self.re_hi && &self.im_lo <= im && im <= &self.im_hi
    }

    pub fn intersection(&self, o: &Rectangle) -> Option<Rectangle> {
        if !self.intersects(o) {
            return None;
        }
        Some(Rectangle::new(
            self.re_lo.clone().max(o.re_lo.clone()),
            self.re_hi.clone().min(o.re_hi.clone()),
            self.im_lo.clone().max(o.im_lo.clone()),
            self.im_hi.clone().min(o.im_hi.clone()),
        ))
    }

    pub fn conj(&self) -> Rectangle {
        Rectangle::new(
            self.re_lo.clone(),
            self.re_hi.clone(),
            -self.im_hi.clone(),
            -self.im_lo.clone(),
        )
    }

    /// Image under `z -> k z` for a positive rational `k`.
    pub fn scale(&self, k: &BigRational) -> Rectangle {
        debug_assert!(k.is_positive());
        Rectangle::new(&self.re_lo * k, &self.re_hi * k, &self.im_lo * k, &self.im_hi * k)
    }

    /// Rectangle covered by a complex ball.
    pub fn from_ball(b: &ComplexBall) -> Rectangle {
        Rectangle::new(b.re.lower(), b.re.upper(), b.im.lower(), b.im.upper())
    }

    /// Smallest complex ball at `prec` covering the rectangle.
    pub fn to_ball(&self, prec: u32) -> ComplexBall {
        ComplexBall::new(
            RealBall::from_interval(&self.re_lo, &self.re_hi, prec),
            RealBall::from_interval(&self.im_lo, &self.im_hi, prec),
        )
    }

    /// Exact bounds on `|z|^2` over the rectangle.
    pub fn abs_sq_bounds(&self) -> (BigRational, BigRational) {
        fn range(lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
            let a = lo * lo;
            let b = hi * hi;
            let max = a.clone().max(b.clone());
            let min = if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
                BigRational::zero()
            } else {
                a.min(b)
            };
            (min, max)
        }
        let (a0, a1) = range(&self.re_lo, &self.re_hi);
        let (b0, b1) = range(&self.im_lo, &self.im_hi);
        (a0 + b0, a1 + b1)
    }
}

impl fmt::Debug for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        write!(
            f,
            "[{:.10}, {:.10}] x [{:.10}, {:.10}]i",
            g(&self.re_lo),
            g(&self.re_hi),
            g(&self.im_lo),
            g(&self.im_hi)
        )
    }
}

/// Isolating rectangles for all roots of a squarefree `f`, ordered with real
/// roots first (ascending), then non-real roots by real then imaginary part.
pub fn isolate_all_roots(f: &IntPolynomial) -> Result<Vec<Rectangle>> {
    isolate_roots_to(f, None)
}

/// As [`isolate_all_roots`], with every rectangle side at most `max_side`.
pub fn isolate_roots_to(f: &IntPolynomial, max_side: Option<&BigRational>) -> Result<Vec<Rectangle>> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return domain("root isolation requires degree >= 1"),
    };
    if !is_squarefree(f) {
        return domain("root isolation requires a squarefree polynomial");
    }
    let f = f.primitive_part();
    if n == 1 {
        let r = BigRational::new(-f.coeff(0), f.coeff(1));
        return Ok(vec![Rectangle::point(r, BigRational::zero())]);
    }
    let mut prec: u32 = 64;
    if let Some(w) = max_side {
        if !w.is_positive() {
            return domain("requested rectangle size must be positive");
        }
        let bits = (w.denom().bits() as i64 - w.numer().bits() as i64 + 8).max(0) as u32;
        prec = prec.max(bits + 8);
    }
    let mut approx = initial_approximations(&f);
    loop {
        approx = aberth_fixed(&f, &approx, prec);
        if let Some(boxes) = certify(&f, &approx, prec) {
            let ok = match max_side {
                None => true,
                Some(w) => boxes.iter().all(|b| &b.max_side() <= w),
            };
            if ok {
                return Ok(boxes);
            }
        }
        if prec >= MAX_ISOLATION_BITS {
            return Err(Error::ResourceCap(format!(
                "root isolation did not succeed below {MAX_ISOLATION_BITS} bits"
            )));
        }
        prec *= 2;
    }
}

const MAX_ISOLATION_BITS: u32 = 1 << 20;

/// Gaussian dyadic `(re + i im) / 2^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Fix {
    re: BigInt,
    im: BigInt,
}

impl Fix {
    fn zero() -> Self {
        Fix {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn add(&self, o: &Fix) -> Fix {
        Fix {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Fix) -> Fix {
        Fix {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Fix, p: u32) -> Fix {
        Fix {
            re: (&self.re * &o.re - &self.im * &o.im) >> p,
            im: (&self.re * &o.im + &self.im * &o.re) >> p,
        }
    }

    fn div(&self, o: &Fix, p: u32) -> Option<Fix> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re = ((&self.re * &o.re + &self.im * &o.im) << p).div_floor(&den);
        let im = ((&self.im * &o.re - &self.re * &o.im) << p).div_floor(&den);
        Some(Fix { re, im })
    }

    fn rescale(&self, from: u32, to: u32) -> Fix {
        if to >= from {
            Fix {
                re: &self.re << (to - from),
                im: &self.im << (to - from),
            }
        } else {
            Fix {
                re: &self.re >> (from - to),
                im: &self.im >> (from - to),
            }
        }
    }

    fn abs_bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }
}

/// Approximations carried between precision levels, with their precision.
#[derive(Clone, Debug)]
struct Approx {
    prec: u32,
    z: Vec<Fix>,
}

fn initial_approximations(f: &IntPolynomial) -> Approx {
    let n = f.deg();
    let p = 52;
    let scale = (1u64 << p) as f64;
    let to_fix = |re: f64, im: f64| Fix {
        re: BigInt::from((re * scale) as i128),
        im: BigInt::from((im * scale) as i128),
    };
    let roots = aberth_f64(f).unwrap_or_else(|| circle_start(f));
    let z = roots
        .iter()
        .take(n)
        .map(|&(re, im)| {
            if re.abs() < 1e15 && im.abs() < 1e15 {
                to_fix(re, im)
            } else {
                to_fix(re.clamp(-1e15, 1e15), im.clamp(-1e15, 1e15))
            }
        })
        .collect();
    Approx { prec: p, z }
}

// Cauchy-style radius and points spread on a circle, slightly rotated so no
// start lies on the real axis.
fn circle_start(f: &IntPolynomial) -> Vec<(f64, f64)> {
    let n = f.deg();
    let lc = f.leading().to_f64().unwrap_or(1.0).abs().max(1e-300);
    let mut radius: f64 = 1.0;
    for k in 0..n {
        let c = f.coeff(k).to_f64().unwrap_or(f64::MAX).abs() / lc;
        radius = radius.max(2.0 * c.powf(1.0 / (n - k) as f64));
    }
    let radius = radius.min(1e12);
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            (radius * t.cos(), radius * t.sin())
        })
        .collect()
}

fn aberth_f64(f: &IntPolynomial) -> Option<Vec<(f64, f64)>> {
    let n = f.deg();
    let c: Vec<f64> = f.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let mut z = circle_start(f);
    let eval = |x: (f64, f64)| -> ((f64, f64), (f64, f64)) {
        let (mut p, mut dp) = ((0.0, 0.0), (0.0, 0.0));
        for &a in c.iter().rev() {
            dp = cadd(cmul(dp, x), p);
            p = cadd(cmul(p, x), (a, 0.0));
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p == (0.0, 0.0) {
                continue;
            }
            let w = cdiv(p, dp);
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s = cadd(s, cdiv((1.0, 0.0), csub(z[i], z[j])));
                }
            }
            let step = cdiv(w, csub((1.0, 0.0), cmul(w, s)));
            if !(step.0.is_finite() && step.1.is_finite()) {
                continue;
            }
            z[i] = csub(z[i], step);
            let mag = (z[i].0.hypot(z[i].1)).max(1.0);
            max_step = max_step.max(step.0.hypot(step.1) / mag);
        }
        if max_step < 1e-15 {
            break;
        }
    }
    if z.iter().all(|w| w.0.is_finite() && w.1.is_finite()) {
        Some(z)
    } else {
        None
    }
}

fn cadd(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 + b.0, a.1 + b.1)
}
fn csub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}
fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}
fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

// Aberth iterations in fixed point, starting from `start` and returning
// approximations at precision `p`.
fn aberth_fixed(f: &IntPolynomial, start: &Approx, p: u32) -> Approx {
    let n = f.deg();
    let coeffs: Vec<BigInt> = f.coeffs().iter().map(|c| c << p).collect();
    let deriv: Vec<BigInt> = f.derivative().coeffs().iter().map(|c| c << p).collect();
    let one = Fix {
        re: BigInt::one() << p,
        im: BigInt::zero(),
    };
    let horner = |cs: &[BigInt], x: &Fix| -> Fix {
        let mut acc = Fix::zero();
        for c in cs.iter().rev() {
            acc = acc.mul(x, p);
            acc.re += c;
        }
        acc
    };
    let mut z: Vec<Fix> = start.z.iter().map(|w| w.rescale(start.prec, p)).collect();
    let tol_bits = 12u64;
    // Cubic convergence: log2(p) sweeps suffice from a decent start; the cap
    // guards against stagnation.
    let max_iter = 40 + 4 * (32 - p.leading_zeros()) as usize;
    for _ in 0..max_iter {
        let mut done = true;
        for i in 0..n {
            let fz = horner(&coeffs, &z[i]);
            if fz.re.is_zero() && fz.im.is_zero() {
                continue;
            }
            let dz = horner(&deriv, &z[i]);
            let w = match fz.div(&dz, p) {
                Some(w) => w,
                None => continue,
            };
            let mut s = Fix::zero();
            for j in 0..n {
                if j != i {
                    if let Some(t) = one.div(&z[i].sub(&z[j]), p) {
                        s = s.add(&t);
                    }
                }
            }
            let den = one.sub(&w.mul(&s, p));
            let step = match w.div(&den, p) {
                Some(st) => st,
                None => continue,
            };
            if step.abs_bits() > tol_bits {
                done = false;
            }
            z[i] = z[i].sub(&step);
        }
        if done {
            break;
        }
    }
    Approx { prec: p, z }
}

// Snap near-real approximations onto the axis and force exact conjugate
// pairs, then run the Smith certificate. Returns `None` when the
// approximations are not good enough at this precision.
fn certify(f: &IntPolynomial, approx: &Approx, p: u32) -> Option<Vec<Rectangle>> {
    let n = f.deg();
    let snap_bits = (p / 2) as u64;
    let mut reals: Vec<Fix> = Vec::new();
    let mut upper: Vec<Fix> = Vec::new();
    let mut lower: Vec<Fix> = Vec::new();
    for z in &approx.z {
        // |im| < 2^(p/2) / 2^p, i.e. tiny compared to the working precision
        if z.im.bits() <= snap_bits {
            reals.push(Fix {
                re: z.re.clone(),
                im: BigInt::zero(),
            });
        } else if z.im.is_positive() {
            upper.push(z.clone());
        } else {
            lower.push(z.clone());
        }
    }
    if upper.len() != lower.len() || reals.len() + 2 * upper.len() != n {
        return None;
    }
    let mut pts = reals;
    for u in &upper {
        pts.push(u.clone());
        pts.push(Fix {
            re: u.re.clone(),
            im: -u.im.clone(),
        });
    }

    // Exact Smith radii. acc_i = 2^(p n) f(z_i).
    let lc = f.leading();
    let y = BigInt::one() << p;
    let mut rho: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = Fix {
            re: lc.clone(),
            im: BigInt::zero(),
        };
        let mut ypow = BigInt::one();
        for k in (0..n).rev() {
            ypow *= &y;
            acc = Fix {
                re: &acc.re * &pts[i].re - &acc.im * &pts[i].im + f.coeff(k) * &ypow,
                im: &acc.re * &pts[i].im + &acc.im * &pts[i].re,
            };
        }
        let num = &acc.re * &acc.re + &acc.im * &acc.im;
        if num.is_zero() {
            rho.push(BigRational::zero());
            continue;
        }
        let mut den = &lc * &lc * &y * &y;
        for j in 0..n {
            if j == i {
                continue;
            }
            let dre = &pts[i].re - &pts[j].re;
            let dim = &pts[i].im - &pts[j].im;
            let d2 = &dre * &dre + &dim * &dim;
            if d2.is_zero() {
                return None;
            }
            den *= d2;
        }
        let w2 = BigRational::new(num * BigInt::from(n * n), den);
        let (_, hi) = sqrt_bounds(&w2, p + 16);
        rho.push(hi);
    }

    let scale = BigRational::from_integer(y);
    let centers: Vec<(BigRational, BigRational)> = pts
        .iter()
        .map(|z| {
            (
                BigRational::from_integer(z.re.clone()) / &scale,
                BigRational::from_integer(z.im.clone()) / &scale,
            )
        })
        .collect();
    for i in 0..n {
        if !centers[i].1.is_zero() && rho[i] >= centers[i].1.abs() {
            return None;
        }
        for j in i + 1..n {
            let gap = &rho[i] + &rho[j];
            let dre = (&centers[i].0 - &centers[j].0).abs();
            let dim = (&centers[i].1 - &centers[j].1).abs();
            if dre <= gap && dim <= gap {
                return None;
            }
        }
    }
    let mut boxes: Vec<Rectangle> = (0..n)
        .map(|i| {
            let (re, im) = &centers[i];
            if im.is_zero() {
                Rectangle::new(re - &rho[i], re + &rho[i], BigRational::zero(), BigRational::zero())
            } else {
                Rectangle::new(re - &rho[i], re + &rho[i], im - &rho[i], im + &rho[i])
            }
        })
        .collect();
    boxes.sort_by(|a, b| {
        let (ar, ai) = a.center();
        let (br, bi) = b.center();
        (!a.is_on_real_axis())
            .cmp(&!b.is_on_real_axis())
            .then(ar.cmp(&br))
            .then(ai.cmp(&bi))
    });
    Some(boxes)
}
