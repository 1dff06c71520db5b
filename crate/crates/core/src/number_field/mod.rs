//! Arithmetic in `Q(theta) = Q[x] / (p_theta)`, primitive elements for
//! finitely generated extensions, and the integral representation
//! `alpha_i = p_i(vartheta) / T`.

mod primitive;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use primitive::{
    integralize, simple_extend, tower_combine, tower_combine_theta, CertChecks, IntegralRepresentation,
    NodeRecord, PrimitiveElementCert, SimpleExtension, ThetaRepresentation,
};

use crate::algebraic::AlgebraicNumber;
use crate::ball::{ComplexBall, RealBall};
use crate::error::{domain, Error, Result};
use crate::exact_poly::{qadd, qmul, qrem, qscale, qsub, qtrim, qxgcd, RatPolynomial};

/// The field `Q(theta)`, given by the minimal polynomial of `theta` and an
/// isolating rectangle selecting the embedding.
#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    theta: AlgebraicNumber,
    modulus: Vec<BigRational>,
}

impl NumberField {
    pub fn new(theta: AlgebraicNumber) -> Arc<Self> {
        let modulus = theta.minpoly().to_rationals();
        Arc::new(NumberField { theta, modulus })
    }

    pub fn theta(&self) -> &AlgebraicNumber {
        &self.theta
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// Element of `Q(theta)`, stored as its reduced residue (degree below the
/// field degree).
#[derive(Clone)]
pub struct NFElement {
    field: Arc<NumberField>,
    residue: Vec<BigRational>,
}

impl PartialEq for NFElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field) && self.residue == other.residue
    }
}

impl Eq for NFElement {}

impl NFElement {
    /// Element `q(theta)`; `q` is reduced modulo the minimal polynomial.
    pub fn from_poly(field: &Arc<NumberField>, q: &[BigRational]) -> Self {
        NFElement {
            field: field.clone(),
            residue: qrem(&qtrim(q.to_vec()), &field.modulus),
        }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        Self::from_poly(field, &[q])
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &[])
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    /// The generator `theta`.
    pub fn theta(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &[BigRational::zero(), BigRational::one()])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.residue
    }

    pub fn residue(&self) -> RatPolynomial {
        RatPolynomial::from_rationals(&self.residue)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.residue.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.residue[0].clone()),
            _ => None,
        }
    }

    fn same_field(&self, o: &Self) {
        debug_assert!(Arc::ptr_eq(&self.field, &o.field) || self.field == o.field);
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        NFElement {
            field: self.field.clone(),
            residue: qadd(&self.residue, &o.residue),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_field(o);
        NFElement {
            field: self.field.clone(),
            residue: qsub(&self.residue, &o.residue),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        NFElement {
            field: self.field.clone(),
            residue: qscale(&self.residue, k),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        Self::from_poly(&self.field, &qmul(&self.residue, &o.residue))
    }

    /// Inverse modulo the minimal polynomial.
    pub fn invert(&self) -> Result<Self> {
        nf_invert(self)
    }

    /// Evaluates a rational polynomial at this element.
    pub fn eval_poly(&self, q: &[BigRational]) -> Self {
        let mut acc = NFElement::zero(&self.field);
        for c in q.iter().rev() {
            acc = acc.mul(self).add(&NFElement::from_rational(&self.field, c.clone()));
        }
        acc
    }

    /// Complex ball for the value under the embedding fixed by `theta`.
    pub fn enclosure(&self, prec: u32) -> Result<ComplexBall> {
        let work = prec + 16 + 8 * self.residue.len() as u32;
        let t = self.field.theta.enclosure(work)?;
        let mut acc = ComplexBall::real(RealBall::zero(work));
        for c in self.residue.iter().rev() {
            acc = acc.mul(&t).add(&ComplexBall::real(RealBall::from_rational(c, work)));
        }
        Ok(acc)
    }
}

impl fmt::Debug for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue(), self.field.theta.minpoly())
    }
}

/// `x^-1` in `Q(theta)` by the extended Euclidean algorithm.
pub fn nf_invert(x: &NFElement) -> Result<NFElement> {
    if x.is_zero() {
        return domain("inverse of zero in a number field");
    }
    let (g, s, _) = qxgcd(&x.residue, &x.field.modulus);
    if g.len() != 1 {
        return Err(Error::Certificate(
            "field polynomial is reducible: element is a zero divisor".into(),
        ));
    }
    Ok(NFElement::from_poly(&x.field, &s))
}

/// Polynomial over `Q(theta)`, lowest degree first, no trailing zeros.
pub type NFPoly = Vec<NFElement>;

fn nf_trim(mut p: NFPoly) -> NFPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub(crate) fn nf_poly_mul(a: &[NFElement], b: &[NFElement]) -> NFPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let field = a[0].field.clone();
    let mut out = vec![NFElement::zero(&field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    nf_trim(out)
}

pub(crate) fn nf_poly_add(a: &[NFElement], b: &[NFElement]) -> NFPoly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (i, c) in short.iter().enumerate() {
        out[i] = out[i].add(c);
    }
    nf_trim(out)
}

fn nf_poly_rem(a: &[NFElement], b: &[NFElement]) -> Result<NFPoly> {
    let db = b.len() - 1;
    let inv = b[db].invert()?;
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().mul(&inv);
        for (i, bc) in b.iter().enumerate() {
            r[i + k] = r[i + k].sub(&c.mul(bc));
        }
        r.pop();
        r = nf_trim(r);
    }
    Ok(r)
}

fn nf_poly_monic(a: &[NFElement]) -> Result<NFPoly> {
    let inv = a.last().unwrap().invert()?;
    Ok(a.iter().map(|c| c.mul(&inv)).collect())
}

/// Monic gcd in `Q(theta)[x]`. Both inputs zero is rejected.
pub fn nf_poly_gcd(f: &[NFElement], g: &[NFElement]) -> Result<NFPoly> {
    let (mut a, mut b) = (nf_trim(f.to_vec()), nf_trim(g.to_vec()));
    if a.is_empty() && b.is_empty() {
        return domain("gcd of two zero polynomials");
    }
    while !b.is_empty() {
        let r = nf_poly_rem(&a, &b)?;
        a = std::mem::replace(&mut b, r);
    }
    nf_poly_monic(&a)
}

pub(crate) fn lift_int_poly(field: &Arc<NumberField>, q: &[BigInt]) -> NFPoly {
    nf_trim(
        q.iter()
            .map(|c| NFElement::from_rational(field, BigRational::from_integer(c.clone())))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::IntPolynomial;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn field(c: &[i64], near: f64) -> Arc<NumberField> {
        NumberField::new(AlgebraicNumber::root_near(&IntPolynomial::from_i64s(c), near, 0.0).unwrap())
    }

    fn el(k: &Arc<NumberField>, c: &[(i64, i64)]) -> NFElement {
        NFElement::from_poly(k, &c.iter().map(|&(n, d)| q(n, d)).collect::<Vec<_>>())
    }

    #[test]
    fn inverse_examples() {
        let k = field(&[-2, 0, 1], 1.4);
        let th = NFElement::theta(&k);
        assert_eq!(nf_invert(&th).unwrap(), el(&k, &[(0, 1), (1, 2)]));
        let one = NFElement::one(&k);
        assert_eq!(nf_invert(&one).unwrap(), one);
        assert!(nf_invert(&NFElement::zero(&k)).is_err());

        let k = field(&[1, 0, -10, 0, 1], 3.1);
        let th = NFElement::theta(&k);
        // theta^4 - 10 theta^2 + 1 = 0  =>  theta^-1 = 10 theta - theta^3
        let inv = nf_invert(&th).unwrap();
        assert_eq!(inv, el(&k, &[(0, 1), (10, 1), (0, 1), (-1, 1)]));
        assert_eq!(inv.mul(&th), NFElement::one(&k));
        let x = el(&k, &[(3, 7), (-1, 2), (5, 1), (1, 3)]);
        assert_eq!(nf_invert(&nf_invert(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn gcd_examples() {
        let k = field(&[-2, 0, 1], 1.4);
        let th = NFElement::theta(&k);
        let one = NFElement::one(&k);
        let x_minus = vec![th.neg(), one.clone()];
        let x_plus = vec![th.clone(), one.clone()];
        let prod = nf_poly_mul(&x_minus, &x_plus);
        assert_eq!(nf_poly_gcd(&prod, &x_minus).unwrap(), x_minus);
        let a = vec![NFElement::from_rational(&k, q(-1, 1)), one.clone()];
        let b = vec![NFElement::from_rational(&k, q(2, 1)), one.clone()];
        assert_eq!(nf_poly_gcd(&a, &b).unwrap(), vec![one]);
    }

    #[test]
    fn enclosure_of_element() {
        let k = field(&[-2, 0, 1], 1.4);
        let x = el(&k, &[(1, 1), (1, 1)]);
        let b = x.enclosure(80).unwrap();
        let v = 1.0 + std::f64::consts::SQRT_2;
        assert!((b.re.to_f64() - v).abs() < 1e-15);
    }
}
