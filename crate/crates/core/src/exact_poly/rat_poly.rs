use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntPolynomial;

/// Polynomial in `(1/T) Z[x]`: integer numerators over one positive common
/// denominator, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPolynomial {
    numerators: IntPolynomial,
    denominator: BigInt,
}

impl RatPolynomial {
    pub fn new(numerators: IntPolynomial, denominator: BigInt) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        let mut n = numerators;
        let mut d = denominator;
        if d.is_negative() {
            n = -&n;
            d = -d;
        }
        let g = n.content().gcd(&d);
        if !g.is_one() && !g.is_zero() {
            n = n.div_scalar_exact(&g);
            d /= g;
        }
        if n.is_zero() {
            d = BigInt::one();
        }
        RatPolynomial {
            numerators: n,
            denominator: d,
        }
    }

    pub fn zero() -> Self {
        Self::new(IntPolynomial::zero(), BigInt::one())
    }

    pub fn from_int(p: IntPolynomial) -> Self {
        Self::new(p, BigInt::one())
    }

    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::new(IntPolynomial::new(nums), den)
    }

    pub fn numerators(&self) -> &IntPolynomial {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerators.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.numerators.degree()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.numerators.coeff(i), self.denominator.clone())
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        (0..self.numerators.coeffs().len())
            .map(|i| self.coeff(i))
            .collect()
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.numerators.eval_rational(x) / BigRational::from_integer(self.denominator.clone())
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{}", self.numerators)
        } else {
            write!(f, "({}) / {}", self.numerators, self.denominator)
        }
    }
}

impl fmt::Debug for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPolynomial({self})")
    }
}

// Dense polynomial routines over Q on plain coefficient vectors. Used by the
// number-field layer, where coefficients change denominators constantly.

pub(crate) fn qtrim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub(crate) fn qadd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    qtrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
    )
}

pub(crate) fn qsub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    qtrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

pub(crate) fn qscale(a: &[BigRational], k: &BigRational) -> Vec<BigRational> {
    qtrim(a.iter().map(|c| c * k).collect())
}

pub(crate) fn qmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qtrim(out)
}

/// Euclidean division over Q. Panics on a zero divisor.
pub(crate) fn qdivrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), qtrim(r));
    }
    let inv_lead = b[db].recip();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db] * &inv_lead;
        if top.is_zero() {
            continue;
        }
        for (i, c) in b.iter().enumerate() {
            r[i + k] -= &top * c;
        }
        q[k] = top;
    }
    r.truncate(db);
    (qtrim(q), qtrim(r))
}

pub(crate) fn qrem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    qdivrem(a, b).1
}

/// Extended Euclid over Q: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub(crate) fn qxgcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let one = vec![BigRational::one()];
    let (mut r0, mut r1) = (qtrim(a.to_vec()), qtrim(b.to_vec()));
    let (mut s0, mut s1) = (one.clone(), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), one);
    while !r1.is_empty() {
        let (q, r) = qdivrem(&r0, &r1);
        let s2 = qsub(&s0, &qmul(&q, &s1));
        let t2 = qsub(&t0, &qmul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if let Some(l) = r0.last().cloned() {
        let inv = l.recip();
        (
            qscale(&r0, &inv),
            qscale(&s0, &inv),
            qscale(&t0, &inv),
        )
    } else {
        (r0, s0, t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalization() {
        let p = RatPolynomial::new(IntPolynomial::from_i64s(&[2, 4]), BigInt::from(-6));
        assert_eq!(p.denominator(), &BigInt::from(3));
        assert_eq!(p.numerators(), &IntPolynomial::from_i64s(&[-1, -2]));
        let z = RatPolynomial::new(IntPolynomial::zero(), BigInt::from(7));
        assert_eq!(z.denominator(), &BigInt::one());
    }

    #[test]
    fn from_rationals_lcm() {
        let p = RatPolynomial::from_rationals(&[q(1, 2), q(1, 3)]);
        assert_eq!(p.denominator(), &BigInt::from(6));
        assert_eq!(p.coeff(1), q(1, 3));
    }

    #[test]
    fn xgcd_identity() {
        let a = vec![q(-2, 1), q(0, 1), q(1, 1)];
        let b = vec![q(0, 1), q(1, 1)];
        let (g, s, t) = qxgcd(&a, &b);
        assert_eq!(g, vec![q(1, 1)]);
        let lhs = qadd(&qmul(&s, &a), &qmul(&t, &b));
        assert_eq!(lhs, g);
    }
}
