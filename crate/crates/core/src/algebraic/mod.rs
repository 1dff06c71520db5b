//! Algebraic numbers as a minimal polynomial plus an isolating rectangle,
//! with Mahler measure and Weil height enclosures.

mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

pub use crate::ball::RealEnclosure;
pub use roots::{isolate_all_roots, isolate_roots_to, Rectangle};

use crate::ball::{sqrt_bounds, ComplexBall, RealBall};
use crate::error::{domain, Error, Result};
use crate::exact_poly::{
    bivariate_resultant_y, factor_over_integers, is_irreducible, root_separation_sq_lower, BivariatePolynomial,
    IntPolynomial,
};
use crate::json::{parse_rational, rational_value};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    rect: Rectangle,
}

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

impl AlgebraicNumber {
    pub fn from_rational(q: &BigRational) -> Self {
        AlgebraicNumber {
            minpoly: IntPolynomial::linear(q.denom().clone(), q.numer().clone()),
            rect: Rectangle::point(q.clone(), BigRational::zero()),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    /// Validating constructor: `minpoly` must be irreducible and `rect` must
    /// contain exactly one of its roots. The polynomial is normalized to be
    /// primitive with positive leading coefficient.
    pub fn new(minpoly: IntPolynomial, rect: Rectangle) -> Result<Self> {
        if minpoly.deg() < 1 {
            return domain("minimal polynomial must have degree >= 1");
        }
        let mut f = minpoly.primitive_part();
        if f.leading().is_negative() {
            f = -&f;
        }
        if !is_irreducible(&f) {
            return domain(format!("{f} is not irreducible over Q"));
        }
        if f.deg() == 1 {
            let r = BigRational::new(-f.coeff(0), f.coeff(1));
            if !rect.contains_point(&r, &BigRational::zero()) {
                return domain("rectangle does not contain the root");
            }
            return Ok(Self::from_rational(&r));
        }
        let mut bits = 32;
        loop {
            let boxes = isolate_roots_to(&f, Some(&pow2_inv(bits)))?;
            let touching: Vec<&Rectangle> = boxes.iter().filter(|b| b.intersects(&rect)).collect();
            let inside = touching.iter().filter(|b| rect.contains_rect(b)).count();
            if touching.len() == inside {
                if inside != 1 {
                    return domain(format!("rectangle holds {inside} roots of {f}, expected 1"));
                }
                let found = touching[0].clone();
                return Ok(AlgebraicNumber { minpoly: f, rect: found });
            }
            if bits > 4096 {
                return domain("a root lies on the rectangle boundary");
            }
            bits *= 2;
        }
    }

    // Caller guarantees: `minpoly` normalized and irreducible, `rect` isolating.
    pub(crate) fn from_parts_unchecked(minpoly: IntPolynomial, rect: Rectangle) -> Self {
        AlgebraicNumber { minpoly, rect }
    }

    /// All roots of an irreducible polynomial, in isolation order.
    pub fn roots_of(f: &IntPolynomial) -> Result<Vec<Self>> {
        let mut f = f.primitive_part();
        if f.deg() < 1 {
            return domain("polynomial must have degree >= 1");
        }
        if f.leading().is_negative() {
            f = -&f;
        }
        if !is_irreducible(&f) {
            return domain(format!("{f} is not irreducible over Q"));
        }
        Ok(Self::roots_unchecked(&f)?)
    }

    // `f` primitive, positive leading coefficient, irreducible.
    pub(crate) fn roots_unchecked(f: &IntPolynomial) -> Result<Vec<Self>> {
        if f.deg() == 1 {
            let r = BigRational::new(-f.coeff(0), f.coeff(1));
            return Ok(vec![Self::from_rational(&r)]);
        }
        Ok(isolate_all_roots(f)?
            .into_iter()
            .map(|rect| AlgebraicNumber {
                minpoly: f.clone(),
                rect,
            })
            .collect())
    }

    /// The root of an irreducible `f` closest to `re + i im`.
    pub fn root_near(f: &IntPolynomial, re: f64, im: f64) -> Result<Self> {
        let roots = Self::roots_of(f)?;
        let dist = |a: &AlgebraicNumber| {
            let (cr, ci) = a.rect.center();
            let dr = cr.to_f64().unwrap() - re;
            let di = ci.to_f64().unwrap() - im;
            dr * dr + di * di
        };
        Ok(roots
            .into_iter()
            .min_by(|a, b| dist(a).partial_cmp(&dist(b)).unwrap())
            .unwrap())
    }

    /// Positive square root of a positive non-square rational, or the
    /// rational root when `q` is a square.
    pub fn sqrt_of(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return domain("sqrt_of expects a positive rational");
        }
        let f = IntPolynomial::new(vec![-q.numer().clone(), BigInt::zero(), q.denom().clone()]);
        let fa = factor_over_integers(&f)?;
        let g = &fa.factors.last().unwrap().0;
        let approx = q.to_f64().unwrap().sqrt();
        if g.deg() == 1 {
            return Ok(Self::from_rational(&BigRational::new(-g.coeff(0), g.coeff(1))));
        }
        Self::root_near(g, approx, 0.0)
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn rect(&self) -> &Rectangle {
        &self.rect
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.degree() == 1 {
            Some(BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 1 && self.minpoly.coeff(0).is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.rect.is_on_real_axis()
    }

    pub fn conj(&self) -> Self {
        if self.is_real() {
            return self.clone();
        }
        AlgebraicNumber {
            minpoly: self.minpoly.clone(),
            rect: self.rect.conj(),
        }
    }

    pub fn neg(&self) -> Self {
        let mut f = self.minpoly.negate_variable();
        if f.leading().is_negative() {
            f = -&f;
        }
        let r = &self.rect;
        AlgebraicNumber {
            minpoly: f,
            rect: Rectangle::new(
                -r.re_hi.clone(),
                -r.re_lo.clone(),
                -r.im_hi.clone(),
                -r.im_lo.clone(),
            ),
        }
    }

    /// Same number with an isolating rectangle of side at most `max_side`;
    /// the new rectangle lies inside the old one.
    pub fn refine(&self, max_side: &BigRational) -> Result<Self> {
        if self.rect.max_side() <= *max_side {
            return Ok(self.clone());
        }
        let mut side = max_side.clone();
        loop {
            let boxes = isolate_roots_to(&self.minpoly, Some(&side))?;
            let hits: Vec<&Rectangle> = boxes.iter().filter(|b| b.intersects(&self.rect)).collect();
            if hits.len() == 1 {
                let rect = hits[0].intersection(&self.rect).unwrap();
                return Ok(AlgebraicNumber {
                    minpoly: self.minpoly.clone(),
                    rect,
                });
            }
            if hits.is_empty() {
                return Err(Error::Certificate("isolating rectangle lost its root".into()));
            }
            side = side / BigRational::from_integer(1024.into());
        }
    }

    /// Complex ball containing the number with radius about `2^-prec`.
    pub fn enclosure(&self, prec: u32) -> Result<ComplexBall> {
        let r = self.refine(&pow2_inv(prec))?;
        Ok(r.rect.to_ball(prec + 2))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "minpoly": self.minpoly.to_strings(),
            "box": {
                "re": [rational_value(&self.rect.re_lo), rational_value(&self.rect.re_hi)],
                "im": [rational_value(&self.rect.im_lo), rational_value(&self.rect.im_hi)],
            }
        })
    }

    /// Parses `{"minpoly": [...], "box": {"re": [lo, hi], "im": [lo, hi]}}`,
    /// or a bare rational string. The input is validated.
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(s) = v.as_str() {
            return Ok(Self::from_rational(&parse_rational(s)?));
        }
        let bad = |what: &str| Error::InvalidInput(format!("algebraic number: {what}"));
        let mp = v.get("minpoly").and_then(Value::as_array).ok_or_else(|| bad("missing minpoly"))?;
        let coeffs: Vec<String> = mp
            .iter()
            .map(|c| match c {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(bad("coefficients must be integer strings")),
            })
            .collect::<Result<_>>()?;
        let f = IntPolynomial::from_strings(&coeffs)?;
        let bx = v.get("box").ok_or_else(|| bad("missing box"))?;
        let pair = |key: &str| -> Result<(BigRational, BigRational)> {
            let a = bx.get(key).and_then(Value::as_array).ok_or_else(|| bad("box needs re and im"))?;
            if a.len() != 2 {
                return Err(bad("box sides need two endpoints"));
            }
            let s = |x: &Value| -> Result<BigRational> {
                match x {
                    Value::String(s) => parse_rational(s),
                    Value::Number(n) => parse_rational(&n.to_string()),
                    _ => Err(bad("box endpoints must be rational strings")),
                }
            };
            Ok((s(&a[0])?, s(&a[1])?))
        };
        let (rl, rh) = pair("re")?;
        let (il, ih) = pair("im")?;
        if rl > rh || il > ih {
            return Err(bad("box endpoints out of order"));
        }
        Self::new(f, Rectangle::new(rl, rh, il, ih))
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in {:?}", self.minpoly, self.rect)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => {
                let (re, im) = self.rect.center();
                write!(
                    f,
                    "root of {} near {:.6}{:+.6}i",
                    self.minpoly,
                    re.to_f64().unwrap_or(f64::NAN),
                    im.to_f64().unwrap_or(f64::NAN)
                )
            }
        }
    }
}

/// Decides equality using the root-separation bound of the common minimal
/// polynomial.
pub fn alg_equal(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<bool> {
    if a.minpoly != b.minpoly {
        return Ok(false);
    }
    if !a.rect.intersects(&b.rect) {
        return Ok(false);
    }
    if a.degree() == 1 {
        return Ok(true);
    }
    let sep2 = root_separation_sq_lower(&a.minpoly)?;
    // Two boxes of side w that meet have points at distance <= 2 sqrt(2) w.
    let mut bits = 16u32;
    loop {
        let w = pow2_inv(bits);
        if BigRational::from_integer(8.into()) * &w * &w < sep2 {
            let ra = a.refine(&w)?;
            let rb = b.refine(&w)?;
            return Ok(ra.rect.intersects(&rb.rect));
        }
        bits += 16;
    }
}

/// `a + s b` as an algebraic number, via `Res_y(A(x - s y), B(y))` and
/// selection of the factor vanishing at the numerical value.
pub fn combine_linear(a: &AlgebraicNumber, b: &AlgebraicNumber, s: &BigInt) -> Result<AlgebraicNumber> {
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return Ok(AlgebraicNumber::from_rational(&(x + y * BigRational::from_integer(s.clone()))));
    }
    if s.is_zero() {
        return Ok(a.clone());
    }
    let r = bivariate_resultant_y(
        &BivariatePolynomial::shifted(a.minpoly(), s),
        &BivariatePolynomial::in_y(b.minpoly()),
    )?;
    let factors: Vec<IntPolynomial> = factor_over_integers(&r)?.factors.into_iter().map(|(g, _)| g).collect();
    select_root(&factors, |prec| {
        let za = a.enclosure(prec)?;
        let zb = b.enclosure(prec)?;
        let sb = RealBall::from_int(s.clone(), prec + 2);
        Ok(za.add(&zb.scale(&sb)))
    })
}

/// Among the roots of pairwise coprime irreducible `factors`, finds the one
/// lying in every ball produced by `ball_at(prec)`.
pub(crate) fn select_root<F>(factors: &[IntPolynomial], ball_at: F) -> Result<AlgebraicNumber>
where
    F: Fn(u32) -> Result<ComplexBall>,
{
    let mut prec = 32u32;
    loop {
        let ball = Rectangle::from_ball(&ball_at(prec)?);
        let side = pow2_inv(prec);
        let mut hits: Vec<AlgebraicNumber> = Vec::new();
        for g in factors {
            let mut g = g.primitive_part();
            if g.leading().is_negative() {
                g = -&g;
            }
            let boxes = if g.deg() == 1 {
                let r = BigRational::new(-g.coeff(0), g.coeff(1));
                vec![Rectangle::point(r, BigRational::zero())]
            } else {
                isolate_roots_to(&g, Some(&side))?
            };
            for rect in boxes {
                if rect.intersects(&ball) {
                    hits.push(AlgebraicNumber {
                        minpoly: g.clone(),
                        rect,
                    });
                }
            }
        }
        if hits.len() == 1 {
            return Ok(hits.pop().unwrap());
        }
        if hits.is_empty() {
            return Err(Error::Certificate("numerical value matches no root of the resultant".into()));
        }
        if prec > 1 << 16 {
            return Err(Error::ResourceCap("could not separate candidate roots".into()));
        }
        prec *= 2;
    }
}

/// Enclosure of `M(f) = |a_d| prod max(1, |root|)` with relative width about
/// `2^(1 - bits)`, clipped to the a priori range `[2^-d L(f), L(f)]`.
pub fn mahler_enclosure(f: &IntPolynomial, bits: u32) -> Result<RealEnclosure> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return domain("Mahler measure requires degree >= 1"),
    };
    let norms = f.norms()?;
    let length = BigRational::from_integer(norms.length.clone());
    let a_d = BigRational::from_integer(f.leading().abs());
    if let Some(exact) = mahler_exact(f) {
        return Ok(RealEnclosure::point(exact));
    }
    let extra = 64 - (d as u64).leading_zeros() + 4;
    let boxes = isolate_roots_to(f, Some(&pow2_inv(bits + extra)))?;
    let one = BigRational::one();
    let mut lo2 = a_d.clone() * &a_d;
    let mut hi2 = lo2.clone();
    for b in &boxes {
        let (l, h) = b.abs_sq_bounds();
        lo2 *= l.max(one.clone());
        hi2 *= h.max(one.clone());
    }
    let sb = bits + extra + 8;
    let (lo, _) = sqrt_bounds(&lo2, sb);
    let (_, hi) = sqrt_bounds(&hi2, sb);
    let floor = &length / BigRational::from_integer(BigInt::one() << d);
    Ok(RealEnclosure::new(lo.max(floor), hi.min(length)))
}

// Closed forms: linear polynomials and quadratics without real roots.
fn mahler_exact(f: &IntPolynomial) -> Option<BigRational> {
    match f.deg() {
        1 => Some(BigRational::from_integer(f.coeff(0).abs().max(f.coeff(1).abs()))),
        2 => {
            let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
            if &b * &b - BigInt::from(4) * &a * &c < BigInt::zero() {
                // |root|^2 = c / a for both roots
                Some(BigRational::from_integer(a.abs().max(c.abs())))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Enclosure of the Weil height `h(alpha) = ln M(alpha) / d`.
pub fn weil_height_enclosure(alpha: &AlgebraicNumber, bits: u32) -> Result<RealEnclosure> {
    let m = mahler_enclosure(alpha.minpoly(), bits + 4)?;
    let prec = bits + 16;
    let ball = RealBall::from_interval(&m.lo, &m.hi, prec + 8).ln()?;
    let d = BigInt::from(alpha.degree());
    let h = ball.div_int(&d);
    // M >= 1, so h >= 0
    let lo = h.lower().max(BigRational::zero());
    Ok(RealEnclosure::new(lo, h.upper()))
}

/// Rational `B >= e^(d h_hi)` bounding every root of `f`.
pub fn root_magnitude_bound(f: &IntPolynomial, h: &RealEnclosure) -> Result<BigRational> {
    let d = BigRational::from_integer(BigInt::from(f.deg()));
    let e = RealBall::from_rational(&(d * &h.hi), 64).exp()?;
    Ok(e.upper())
}

/// Upper bound `sum h(alpha_i)` for the height of the vector `(alpha_i)`.
pub fn vector_height_upper(alphas: &[AlgebraicNumber], bits: u32) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for a in alphas {
        total += weil_height_enclosure(a, bits)?.hi;
    }
    Ok(total)
}

/// Integer value of `ln` bounds helper: `ceil(log2 |q|)` for nonzero `q`.
pub(crate) fn log2_ceil(q: &BigRational) -> i64 {
    let q = q.abs();
    let n = q.numer().bits() as i64;
    let d = q.denom().bits() as i64;
    n - d + 1
}
