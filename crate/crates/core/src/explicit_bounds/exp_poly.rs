//! The exponential polynomial `P = C sum beta_i P_i` obtained by writing
//! `e^alpha_i = prod_j (e^(vartheta^j / T))^(c_ij)`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::algebraic::AlgebraicNumber;
use crate::error::{domain, Result};
use crate::json::int_value;
use crate::number_field::PrimitiveElementCert;

#[derive(Clone, Debug)]
pub struct ExpPolynomial {
    /// `c_i = (c_i0, ..., c_i(d-1))`, the coefficients of `p_i`.
    pub monomials: Vec<Vec<BigInt>>,
    /// `c_hat_j = max_i max(0, -c_ij)`.
    pub clearing_exponents: Vec<BigInt>,
    /// `c_i + c_hat`, all entries nonnegative.
    pub cleared: Vec<Vec<BigInt>>,
    pub coefficients: Vec<AlgebraicNumber>,
    /// Total degree of `P` after clearing.
    pub total_degree: BigInt,
}

impl ExpPolynomial {
    pub fn to_json(&self) -> Value {
        let vecs = |v: &Vec<Vec<BigInt>>| -> Vec<Vec<Value>> {
            v.iter().map(|r| r.iter().map(int_value).collect()).collect()
        };
        json!({
            "monomials": vecs(&self.monomials),
            "clearing_exponents": self.clearing_exponents.iter().map(int_value).collect::<Vec<_>>(),
            "cleared": vecs(&self.cleared),
            "coefficients": self.coefficients.iter().map(AlgebraicNumber::to_json).collect::<Vec<_>>(),
            "total_degree": int_value(&self.total_degree),
        })
    }
}

pub fn build_exp_polynomial(cert: &PrimitiveElementCert, betas: &[AlgebraicNumber]) -> Result<ExpPolynomial> {
    if cert.reps.len() != betas.len() {
        return domain(format!(
            "{} representations but {} coefficients",
            cert.reps.len(),
            betas.len()
        ));
    }
    let n = cert.vartheta.degree();
    let monomials: Vec<Vec<BigInt>> = cert
        .reps
        .iter()
        .map(|p| (0..n).map(|j| p.coeff(j)).collect())
        .collect();
    let mut clearing = vec![BigInt::zero(); n];
    for row in &monomials {
        for (j, c) in row.iter().enumerate() {
            if c.is_negative() && -c > clearing[j] {
                clearing[j] = -c;
            }
        }
    }
    let cleared: Vec<Vec<BigInt>> = monomials
        .iter()
        .map(|row| row.iter().zip(&clearing).map(|(c, k)| c + k).collect())
        .collect();
    let total_degree = cleared
        .iter()
        .map(|row| row.iter().sum::<BigInt>())
        .max()
        .unwrap_or_default();
    Ok(ExpPolynomial {
        monomials,
        clearing_exponents: clearing,
        cleared,
        coefficients: betas.to_vec(),
        total_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::tower_combine;
    use num_rational::BigRational;

    fn sqrt(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::sqrt_of(&BigRational::from_integer(n.into())).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn golden_vectors() {
        let cert = tower_combine(&[sqrt(2), sqrt(3)]).unwrap();
        let one = AlgebraicNumber::from_int(1);
        let p = build_exp_polynomial(&cert, &[one.clone(), one]).unwrap();
        assert_eq!(p.monomials[0], ints(&[0, -9, 0, 1]));
        assert_eq!(p.monomials[1], ints(&[0, 11, 0, -1]));
        assert_eq!(p.clearing_exponents, ints(&[0, 9, 0, 1]));
        assert_eq!(p.cleared[0], ints(&[0, 0, 0, 2]));
        assert_eq!(p.cleared[1], ints(&[0, 20, 0, 0]));
        assert!(build_exp_polynomial(&cert, &[sqrt(2)]).is_err());
    }

    #[test]
    fn rational_zero_exponent() {
        let cert = tower_combine(&[AlgebraicNumber::from_int(0)]).unwrap();
        let p = build_exp_polynomial(&cert, &[AlgebraicNumber::from_int(5)]).unwrap();
        assert_eq!(p.monomials, vec![ints(&[0])]);
        assert_eq!(p.total_degree, BigInt::zero());
    }

    #[test]
    fn opposite_reps() {
        let cert = tower_combine(&[sqrt(2), sqrt(2).neg()]).unwrap();
        let one = AlgebraicNumber::from_int(1);
        let p = build_exp_polynomial(&cert, &[one.clone(), one]).unwrap();
        for (row, cl) in p.monomials.iter().zip(&p.cleared) {
            for ((c, k), v) in row.iter().zip(&p.clearing_exponents).zip(cl) {
                assert!(!v.is_negative());
                assert_eq!(&(v - k), c);
            }
        }
        // theta = sqrt2 - 2 sqrt2, so the reps are -x and x
        assert_eq!(cert.t_choices, vec![2]);
        assert_eq!(p.monomials[0], ints(&[0, -1]));
        assert_eq!(p.monomials[1], ints(&[0, 1]));
        assert_eq!(p.clearing_exponents, ints(&[0, 1]));
        assert_eq!(p.cleared[0], ints(&[0, 0]));
        assert_eq!(p.cleared[1], ints(&[0, 2]));
    }
}
