use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::resultant::resultant_any;
use super::IntPolynomial;
use crate::error::{domain, Result};

/// Polynomial in `Z[x][y]`: `coeffs[j]` is the coefficient of `y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariatePolynomial {
    coeffs: Vec<IntPolynomial>,
}

impl BivariatePolynomial {
    pub fn new(mut coeffs: Vec<IntPolynomial>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BivariatePolynomial { coeffs }
    }

    /// From a dense table `table[j][i]` = coefficient of `x^i y^j`.
    pub fn from_table(table: &[Vec<i64>]) -> Self {
        Self::new(table.iter().map(|r| IntPolynomial::from_i64s(r)).collect())
    }

    /// `B(y)` viewed as a bivariate polynomial without `x`.
    pub fn in_y(p: &IntPolynomial) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| IntPolynomial::constant(c.clone()))
                .collect(),
        )
    }

    /// `A(x - t*y)`.
    pub fn shifted(a: &IntPolynomial, t: &BigInt) -> Self {
        // (x - t y)^k expanded by Horner in Z[x][y].
        let lin = BivariatePolynomial::new(vec![
            IntPolynomial::from_i64s(&[0, 1]),
            IntPolynomial::constant(-t.clone()),
        ]);
        let mut acc = BivariatePolynomial::new(Vec::new());
        for c in a.coeffs().iter().rev() {
            acc = acc.mul(&lin).add_const(c);
        }
        acc
    }

    pub fn coeffs(&self) -> &[IntPolynomial] {
        &self.coeffs
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg_x(&self) -> usize {
        self.coeffs.iter().map(|c| c.deg()).max().unwrap_or(0)
    }

    /// Sum of absolute values of all coefficients.
    pub fn length(&self) -> BigInt {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.norms().map(|n| n.length).unwrap_or_default())
            .sum()
    }

    pub fn specialize_x(&self, x: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| c.eval(x)).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = vec![IntPolynomial::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    fn add_const(mut self, c: &BigInt) -> Self {
        if self.coeffs.is_empty() {
            self.coeffs.push(IntPolynomial::zero());
        }
        self.coeffs[0] = &self.coeffs[0] + &IntPolynomial::constant(c.clone());
        Self::new(self.coeffs)
    }
}

/// `Res_y(F, G)` as a polynomial in `x`.
///
/// Computed by specialising `x` at integer points where neither leading
/// coefficient in `y` vanishes, taking univariate resultants, and
/// interpolating. The number of points is the degree bound
/// `deg_x F deg_y G + deg_x G deg_y F` plus one.
pub fn bivariate_resultant_y(f: &BivariatePolynomial, g: &BivariatePolynomial) -> Result<IntPolynomial> {
    let (dfy, dgy) = match (f.deg_y(), g.deg_y()) {
        (Some(a), Some(b)) if a >= 1 && b >= 1 => (a, b),
        _ => return domain("bivariate resultant needs positive degree in y for both inputs"),
    };
    let bound = f.deg_x() * dgy + g.deg_x() * dfy;
    let lf = &f.coeffs[dfy];
    let lg = &g.coeffs[dgy];

    let mut xs: Vec<BigInt> = Vec::with_capacity(bound + 1);
    let mut ys: Vec<BigInt> = Vec::with_capacity(bound + 1);
    let mut k: i64 = 0;
    while xs.len() <= bound {
        // 0, 1, -1, 2, -2, ...
        let x = BigInt::from(if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 });
        k += 1;
        if lf.eval(&x).is_zero() || lg.eval(&x).is_zero() {
            continue;
        }
        let r = resultant_any(&f.specialize_x(&x), &g.specialize_x(&x));
        xs.push(x);
        ys.push(r);
    }
    interpolate_integer(&xs, &ys)
}

// Newton interpolation over Q; the result must have integer coefficients.
fn interpolate_integer(xs: &[BigInt], ys: &[BigInt]) -> Result<IntPolynomial> {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - j]);
            dd[i] = num / den;
        }
    }
    // Expand sum dd[k] prod_{i<k} (x - xs[i]) by Horner.
    let mut acc: Vec<BigRational> = Vec::new();
    for k in (0..n).rev() {
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * BigRational::from_integer(xs[k].clone());
        }
        next[0] += &dd[k];
        acc = next;
    }
    let mut out = Vec::with_capacity(acc.len());
    for c in acc {
        if !c.denom().is_one() {
            return Err(crate::Error::Certificate(
                "interpolated resultant has a non-integral coefficient".into(),
            ));
        }
        out.push(c.to_integer());
    }
    Ok(IntPolynomial::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_plus_sqrt3() {
        let a = IntPolynomial::from_i64s(&[-2, 0, 1]);
        let b = IntPolynomial::from_i64s(&[-3, 0, 1]);
        let r = bivariate_resultant_y(
            &BivariatePolynomial::shifted(&a, &BigInt::from(1)),
            &BivariatePolynomial::in_y(&b),
        )
        .unwrap();
        assert_eq!(r, IntPolynomial::from_i64s(&[1, 0, -10, 0, 1]));

        let r2 = bivariate_resultant_y(
            &BivariatePolynomial::shifted(&a, &BigInt::from(2)),
            &BivariatePolynomial::in_y(&b),
        )
        .unwrap();
        assert_eq!(r2, IntPolynomial::from_i64s(&[100, 0, -28, 0, 1]));
    }

    #[test]
    fn substitution_case() {
        // F = x - y, G = y - 1: Res = lc(F) G(x) = 1 - x
        let f = BivariatePolynomial::from_table(&[vec![0, 1], vec![-1]]);
        let g = BivariatePolynomial::from_table(&[vec![-1], vec![1]]);
        assert_eq!(bivariate_resultant_y(&f, &g).unwrap(), IntPolynomial::from_i64s(&[1, -1]));
    }

    #[test]
    fn vanishing_leading_coefficient_points_are_skipped() {
        // F = x*y - 1, G = y^2 - 2  -> Res = x^2 G(1/x) = 1 - 2x^2
        let f = BivariatePolynomial::from_table(&[vec![-1], vec![0, 1]]);
        let g = BivariatePolynomial::from_table(&[vec![-2], vec![], vec![1]]);
        let r = bivariate_resultant_y(&f, &g).unwrap();
        assert_eq!(r, IntPolynomial::from_i64s(&[1, 0, -2]));
    }

    #[test]
    fn rejects_constant_in_y() {
        let f = BivariatePolynomial::from_table(&[vec![1, 1]]);
        let g = BivariatePolynomial::from_table(&[vec![0], vec![1]]);
        assert!(bivariate_resultant_y(&f, &g).is_err());
    }
}
