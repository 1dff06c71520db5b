use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

/// Dense univariate polynomial with integer coefficients, lowest power first.
///
/// The zero polynomial is the empty coefficient vector; every other value has
/// a nonzero last coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

/// Coefficient norms used throughout the height estimates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyNorms {
    /// max |a_i|
    pub height: BigInt,
    /// sum |a_i|
    pub length: BigInt,
    /// sum a_i^2
    pub two_norm_sq: BigInt,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `a*x - b`, the defining polynomial of the rational `b/a`.
    pub fn linear(a: BigInt, b: BigInt) -> Self {
        Self::new(vec![-b, a])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.content().is_one()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `x^d f(1/x)`.
    pub fn reciprocal(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// `f(-x)`.
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        // Homogenised Horner keeps everything in integers: sum a_i p^i q^(d-i).
        let (p, q) = (x.numer(), x.denom());
        let d = self.deg();
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        if self.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(acc, num_traits::pow(q.clone(), d))
    }

    /// Sign of `f(x)` at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let (p, q) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        // q > 0, so q^d does not change the sign.
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn norms(&self) -> Result<PolyNorms> {
        if self.is_zero() {
            return domain("norms of the zero polynomial are undefined");
        }
        let mut height = BigInt::zero();
        let mut length = BigInt::zero();
        let mut two = BigInt::zero();
        for c in &self.coeffs {
            let a = c.abs();
            if a > height {
                height = a.clone();
            }
            two += &a * &a;
            length += a;
        }
        Ok(PolyNorms {
            height,
            length,
            two_norm_sq: two,
        })
    }

    /// Pseudo-remainder `lc(g)^(deg f - deg g + 1) f mod g`.
    pub fn pseudo_rem(&self, g: &Self) -> Self {
        assert!(!g.is_zero(), "pseudo-remainder by zero polynomial");
        let dg = g.deg();
        if self.is_zero() || self.deg() < dg {
            return self.clone();
        }
        let lg = g.leading();
        let mut r = self.coeffs.clone();
        let mut steps = self.deg() - dg + 1;
        while r.len() > dg && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - dg;
            for c in r.iter_mut() {
                *c *= &lg;
            }
            for (i, gc) in g.coeffs.iter().enumerate() {
                r[i + shift] -= &lr * gc;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            steps -= 1;
        }
        let mut rem = Self::new(r);
        if steps > 0 {
            rem = rem.scale(&num_traits::pow(lg, steps));
        }
        rem
    }

    /// Exact division over the integers; `None` if `d` does not divide `self`
    /// in `Z[x]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let ld = d.leading();
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&ld);
            if !rem.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[i + k] -= &qk * dc;
            }
            q[k] = qk;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Divides every coefficient by the integer `k`, which must divide them all.
    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % k).is_zero());
                    c / k
                })
                .collect(),
        )
    }

    /// `f(a*x + b)` for integers `a`, `b`.
    pub fn compose_linear(&self, a: &BigInt, b: &BigInt) -> Self {
        let lin = IntPolynomial::new(vec![b.clone(), a.clone()]);
        let mut acc = IntPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &IntPolynomial::constant(c.clone());
        }
        acc
    }

    /// Coefficients as exact rationals.
    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Decimal-string coefficients, lowest power first.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let mut out = Vec::with_capacity(items.len());
        for s in items {
            let v: BigInt = s
                .as_ref()
                .trim()
                .parse()
                .map_err(|_| crate::Error::InvalidInput(format!("bad integer {:?}", s.as_ref())))?;
            out.push(v);
        }
        Ok(Self::new(out))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl<'a> Add<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl<'a> Mul<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        poly_mul(self, rhs)
    }
}

/// Schoolbook product.
pub fn poly_mul(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    if f.is_zero() || g.is_zero() {
        return IntPolynomial::zero();
    }
    let mut out = vec![BigInt::zero(); f.coeffs.len() + g.coeffs.len() - 1];
    for (i, a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.coeffs.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    IntPolynomial::new(out)
}

/// `H(f)`, `L(f)` and `||f||_2^2`.
pub fn poly_norms(f: &IntPolynomial) -> Result<PolyNorms> {
    f.norms()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn products() {
        assert_eq!(poly_mul(&p(&[1, 1]), &p(&[-1, 1])), p(&[-1, 0, 1]));
        let f = p(&[3, -2, 7]);
        assert_eq!(poly_mul(&f, &IntPolynomial::one()), f);
        assert_eq!(poly_mul(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), p(&[6, 0, -5, 0, 1]));
        assert!(poly_mul(&f, &IntPolynomial::zero()).is_zero());
    }

    #[test]
    fn norms_examples() {
        let n = poly_norms(&p(&[1, 0, -10, 0, 1])).unwrap();
        assert_eq!((n.height, n.length, n.two_norm_sq), (10.into(), 12.into(), 102.into()));
        let n = poly_norms(&p(&[0, 1])).unwrap();
        assert_eq!((n.height, n.length, n.two_norm_sq), (1.into(), 1.into(), 1.into()));
        let n = poly_norms(&p(&[-3, 0, 3])).unwrap();
        assert_eq!((n.height, n.length, n.two_norm_sq), (3.into(), 6.into(), 18.into()));
        assert!(poly_norms(&IntPolynomial::zero()).is_err());
    }

    #[test]
    fn trimming_and_display() {
        let f = p(&[1, 0, -10, 0, 1, 0, 0]);
        assert_eq!(f.degree(), Some(4));
        assert_eq!(f.to_string(), "x^4 - 10*x^2 + 1");
        assert_eq!(IntPolynomial::zero().degree(), None);
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn exact_division() {
        let f = p(&[6, 0, -5, 0, 1]);
        assert_eq!(f.div_exact(&p(&[-2, 0, 1])), Some(p(&[-3, 0, 1])));
        assert_eq!(f.div_exact(&p(&[1, 1])), None);
        assert_eq!(p(&[1, 2]).div_exact(&p(&[0, 2])), None);
    }

    #[test]
    fn pseudo_remainder() {
        // 2^(2) * (x^2 + 1) mod (2x + 1)  = 4*(1/4 + 1) = 5
        let r = p(&[1, 0, 1]).pseudo_rem(&p(&[1, 2]));
        assert_eq!(r, p(&[5]));
    }

    #[test]
    fn evaluation() {
        let f = p(&[-2, 0, 1]);
        assert_eq!(f.eval(&BigInt::from(3)), BigInt::from(7));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.eval_rational(&half), BigRational::new((-7).into(), 4.into()));
        assert_eq!(f.sign_at(&half), -1);
        assert_eq!(f.compose_linear(&BigInt::from(1), &BigInt::from(1)), p(&[-1, 2, 1]));
        assert_eq!(p(&[1, 2, 3]).reciprocal(), p(&[3, 2, 1]));
    }
}
