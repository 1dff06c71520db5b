//! Reference implementations used as oracles: binary fixed-point real
//! arithmetic on `BigInt` and Durand-Kerner root finding in `f64`.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use expgap::algebraic::AlgebraicNumber;
use expgap::exact_poly::IntPolynomial;

/// `v / 2^bits`.
#[derive(Clone, Debug)]
pub struct Fixed {
    pub v: BigInt,
    pub bits: u32,
}

impl Fixed {
    pub fn int(n: i64, bits: u32) -> Self {
        Fixed {
            v: BigInt::from(n) << bits,
            bits,
        }
    }

    pub fn ratio(q: &BigRational, bits: u32) -> Self {
        Fixed {
            v: (q.numer() << bits) / q.denom(),
            bits,
        }
    }

    fn one(bits: u32) -> BigInt {
        BigInt::one() << bits
    }

    pub fn add(&self, o: &Self) -> Self {
        Fixed {
            v: &self.v + &o.v,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Fixed {
            v: &self.v - &o.v,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Fixed {
            v: (&self.v * &o.v) >> self.bits,
            bits: self.bits,
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        Fixed {
            v: (&self.v << self.bits) / &o.v,
            bits: self.bits,
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Fixed {
            v: &self.v * k,
            bits: self.bits,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        BigRational::new(self.v.clone(), Self::one(self.bits)).to_f64().unwrap()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.v.clone(), Self::one(self.bits))
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.v.is_negative());
        Fixed {
            v: (&self.v << self.bits).sqrt(),
            bits: self.bits,
        }
    }

    fn widen(&self, extra: u32) -> Self {
        Fixed {
            v: &self.v << extra,
            bits: self.bits + extra,
        }
    }

    fn narrow(&self, extra: u32) -> Self {
        Fixed {
            v: &self.v >> extra,
            bits: self.bits - extra,
        }
    }

    fn magnitude_bits(&self) -> u32 {
        let int_part: BigInt = self.v.abs() >> self.bits;
        int_part.bits() as u32
    }

    pub fn exp(&self) -> Self {
        let k = self.magnitude_bits() + 8;
        let extra = 2 * k + 32;
        let x = self.widen(extra);
        let p = x.bits;
        let y = Fixed { v: &x.v >> k, bits: p };
        let mut sum = Fixed::one(p);
        let mut term = Fixed::one(p);
        let mut n = 1i64;
        loop {
            term = (&term * &y.v >> p) / n;
            if term.is_zero() {
                break;
            }
            sum += &term;
            n += 1;
        }
        let mut r = Fixed { v: sum, bits: p };
        for _ in 0..k {
            r = r.mul(&r);
        }
        r.narrow(extra)
    }

    fn atanh_series(z: &Fixed) -> Fixed {
        let p = z.bits;
        let z2 = z.mul(z);
        let mut pw = z.v.clone();
        let mut sum = BigInt::zero();
        let mut n = 1i64;
        while !pw.is_zero() {
            sum += &pw / n;
            pw = (&pw * &z2.v) >> p;
            n += 2;
        }
        Fixed { v: sum, bits: p }
    }

    pub fn ln2(bits: u32) -> Self {
        let p = bits + 16;
        let third = Fixed::ratio(&BigRational::new(1.into(), 3.into()), p);
        Self::atanh_series(&third).scale(2).narrow(16)
    }

    pub fn ln(&self) -> Self {
        assert!(self.v.is_positive());
        let extra = 32;
        let x = self.widen(extra);
        let p = x.bits;
        // x = y 2^n with y in [1, 2)
        let n = x.v.bits() as i64 - 1 - p as i64;
        let y = if n >= 0 {
            Fixed { v: &x.v >> n as u32, bits: p }
        } else {
            Fixed { v: &x.v << (-n) as u32, bits: p }
        };
        let one = Fixed::int(1, p);
        let z = y.sub(&one).div(&y.add(&one));
        let ly = Self::atanh_series(&z).scale(2);
        ly.add(&Self::ln2(p).scale(n)).narrow(extra)
    }

    /// `(cos x, sin x)`.
    pub fn cos_sin(&self) -> (Self, Self) {
        let k = self.magnitude_bits() + 8;
        let extra = 2 * k + 32;
        let x = self.widen(extra);
        let p = x.bits;
        let y = Fixed { v: &x.v >> k, bits: p };
        let y2 = y.mul(&y);
        let mut c = Fixed::one(p);
        let mut s = y.v.clone();
        let mut tc = Fixed::one(p);
        let mut ts = y.v.clone();
        let mut n = 1i64;
        loop {
            tc = -((&tc * &y2.v) >> p) / ((2 * n - 1) * (2 * n));
            ts = -((&ts * &y2.v) >> p) / ((2 * n) * (2 * n + 1));
            if tc.is_zero() && ts.is_zero() {
                break;
            }
            c += &tc;
            s += &ts;
            n += 1;
        }
        let mut c = Fixed { v: c, bits: p };
        let mut s = Fixed { v: s, bits: p };
        for _ in 0..k {
            let c2 = c.mul(&c).sub(&s.mul(&s));
            s = c.mul(&s).scale(2);
            c = c2;
        }
        (c.narrow(extra), s.narrow(extra))
    }
}

/// Complex number in fixed point.
#[derive(Clone, Debug)]
pub struct CFixed {
    pub re: Fixed,
    pub im: Fixed,
}

impl CFixed {
    pub fn zero(bits: u32) -> Self {
        CFixed {
            re: Fixed::int(0, bits),
            im: Fixed::int(0, bits),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        CFixed {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CFixed {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        CFixed {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        let (c, s) = self.im.cos_sin();
        CFixed {
            re: r.mul(&c),
            im: r.mul(&s),
        }
    }

    pub fn abs_sq(&self) -> Fixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}

/// Value of an algebraic number of degree at most 2, computed from the
/// closed-form roots and matched to the library's isolating box.
pub fn alg_value(a: &AlgebraicNumber, bits: u32) -> CFixed {
    let f = a.minpoly();
    let (cx, cy) = a.rect().center();
    let (cx, cy) = (cx.to_f64().unwrap(), cy.to_f64().unwrap());
    match f.deg() {
        1 => CFixed {
            re: Fixed::ratio(&BigRational::new(-f.coeff(0), f.coeff(1)), bits),
            im: Fixed::int(0, bits),
        },
        2 => {
            let (c, b, a2) = (f.coeff(0), f.coeff(1), f.coeff(2));
            let disc = &b * &b - BigInt::from(4) * &a2 * &c;
            let den = Fixed::ratio(&BigRational::from_integer(BigInt::from(2) * &a2), bits);
            let mb = Fixed::ratio(&BigRational::from_integer(-b), bits);
            let root = Fixed::ratio(&BigRational::from_integer(disc.abs()), bits).sqrt();
            let cands = if disc.is_negative() {
                let re = mb.div(&den);
                let im = root.div(&den);
                [
                    CFixed { re: re.clone(), im: im.clone() },
                    CFixed { re, im: Fixed::int(0, bits).sub(&im) },
                ]
            } else {
                let z = Fixed::int(0, bits);
                [
                    CFixed { re: mb.add(&root).div(&den), im: z.clone() },
                    CFixed { re: mb.sub(&root).div(&den), im: z },
                ]
            };
            let inside = |z: &CFixed| a.rect().contains_point(&z.re.to_rational(), &z.im.to_rational());
            let dist = |z: &CFixed| (z.re.to_f64() - cx).powi(2) + (z.im.to_f64() - cy).powi(2);
            if inside(&cands[0]) != inside(&cands[1]) {
                if inside(&cands[0]) {
                    cands[0].clone()
                } else {
                    cands[1].clone()
                }
            } else if dist(&cands[0]) <= dist(&cands[1]) {
                cands[0].clone()
            } else {
                cands[1].clone()
            }
        }
        d => panic!("oracle handles degree <= 2, got {d}"),
    }
}

/// All complex roots of `f` by Durand-Kerner iteration in `f64`.
pub fn dk_roots(f: &IntPolynomial) -> Vec<(f64, f64)> {
    let d = f.deg();
    let lc = f.leading().to_f64().unwrap();
    let c: Vec<f64> = f.coeffs().iter().map(|x| x.to_f64().unwrap() / lc).collect();
    let bound = 1.0 + c[..d].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<(f64, f64)> = (0..d)
        .map(|k| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64;
            (0.9 * bound * t.cos(), 0.9 * bound * t.sin())
        })
        .collect();
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: (f64, f64), b: (f64, f64)| {
        let n = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
    };
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut p = (1.0, 0.0);
            for k in (0..d).rev() {
                p = mul(p, z[i]);
                p.0 += c[k];
            }
            let mut den = (1.0, 0.0);
            for j in 0..d {
                if j != i {
                    den = mul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = div(p, den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// `M(f)` from floating-point roots.
pub fn mahler_f64(f: &IntPolynomial) -> f64 {
    let lc = f.leading().abs().to_f64().unwrap();
    dk_roots(f)
        .iter()
        .fold(lc, |m, (re, im)| m * (re * re + im * im).sqrt().max(1.0))
}

/// Random irreducible polynomial of degree `d` with coefficients in `[-h, h]`
/// and its roots.
pub fn random_algebraic(rng: &mut ChaCha8Rng, d: usize, h: i64) -> AlgebraicNumber {
    loop {
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-h..=h)).collect();
        c[d] = rng.gen_range(1..=h);
        let f = IntPolynomial::from_i64s(&c);
        if f.deg() != d {
            continue;
        }
        if let Ok(roots) = AlgebraicNumber::roots_of(&f) {
            let i = rng.gen_range(0..roots.len());
            return roots[i].clone();
        }
    }
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    &a[n - 1][n - 1] * sign
}

/// Sylvester matrix of `f`, `g` given with formal degrees (lowest power first).
pub fn sylvester(f: &[BigInt], g: &[BigInt]) -> Vec<Vec<BigInt>> {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![BigInt::zero(); size];
        for (j, c) in f.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigInt::zero(); size];
        for (j, c) in g.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    rows
}
