use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntPolynomial;
use crate::error::{domain, Result};

/// Primitive gcd over Q with positive leading coefficient, computed with the
/// subresultant remainder sequence. `gcd(0, 0)` is rejected by the caller
/// contract and returns zero here.
pub fn subresultant_gcd(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    let (mut a, mut b) = if f.deg() >= g.deg() || g.is_zero() {
        (f.clone(), g.clone())
    } else {
        (g.clone(), f.clone())
    };
    if b.is_zero() {
        return a.primitive_part();
    }
    a = a.primitive_part();
    b = b.primitive_part();
    let mut g_ = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.deg() - b.deg();
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return b.primitive_part();
        }
        if r.deg() == 0 {
            return IntPolynomial::one();
        }
        a = b;
        let divisor = &g_ * num_traits::pow(h.clone(), delta);
        b = r.div_scalar_exact(&divisor);
        g_ = a.leading();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g_.clone(), delta) / num_traits::pow(h, delta - 1)
        };
    }
}

/// Resultant allowing constant arguments (`Res(f, c) = c^deg f`).
pub(crate) fn resultant_any(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let (df, dg) = (f.deg(), g.deg());
    if df == 0 && dg == 0 {
        return BigInt::one();
    }
    if dg == 0 {
        return num_traits::pow(g.leading(), df);
    }
    if df == 0 {
        return num_traits::pow(f.leading(), dg);
    }
    subresultant_resultant(f, g)
}

// Collins/Brown subresultant PRS (Cohen, Algorithm 3.3.7), both degrees >= 1.
fn subresultant_resultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    let ca = f.content();
    let cb = g.content();
    let mut a = f.div_scalar_exact(&ca);
    let mut b = g.div_scalar_exact(&cb);
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    let mut s = BigInt::one();
    let t = num_traits::pow(ca, g.deg()) * num_traits::pow(cb, f.deg());
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
    }
    loop {
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = &gg * num_traits::pow(h.clone(), delta);
        b = r.div_scalar_exact(&divisor);
        gg = a.leading();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(gg.clone(), delta) / num_traits::pow(h, delta - 1)
        };
        if b.is_zero() {
            return BigInt::zero();
        }
        if b.deg() == 0 {
            let da = a.deg();
            let lb = b.leading();
            let hh = if da == 0 {
                h
            } else {
                num_traits::pow(lb, da) / num_traits::pow(h, da - 1)
            };
            return s * t * hh;
        }
    }
}

/// Resultant of two non-constant integer polynomials.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    if f.deg() < 1 || g.deg() < 1 {
        return domain("resultant requires both polynomials of degree >= 1");
    }
    Ok(resultant_any(f, g))
}

/// `((-1)^(d(d-1)/2) / a_d) Res(f, f')`.
pub fn discriminant(f: &IntPolynomial) -> Result<BigRational> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return domain("discriminant requires degree >= 1"),
    };
    let res = resultant_any(f, &f.derivative());
    let sign = if (d * (d - 1) / 2) % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    Ok(BigRational::new(sign * res, f.leading()))
}

/// True iff `gcd(f, f')` is constant.
pub fn is_squarefree(f: &IntPolynomial) -> bool {
    if f.deg() < 1 {
        return true;
    }
    subresultant_gcd(f, &f.derivative()).deg() == 0
}

/// Squarefree decomposition of a primitive polynomial: pairs `(s_i, i)` with
/// `f = prod s_i^i` up to sign, each `s_i` squarefree, pairwise coprime.
pub fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let f = f.primitive_part();
    if f.deg() < 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut g = subresultant_gcd(&f, &f.derivative());
    let mut w = f.div_exact(&g).expect("gcd divides f").primitive_part();
    let mut i = 1;
    while w.deg() > 0 {
        let y = subresultant_gcd(&w, &g);
        let z = w.div_exact(&y).expect("gcd divides w").primitive_part();
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        g = g.div_exact(&y).expect("gcd divides g").primitive_part();
        w = y;
    }
    out
}

/// Determinant of the Sylvester matrix, by fraction-free elimination.
/// Intended as an independent check on [`resultant`] for small degrees.
pub fn sylvester_resultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    let (m, n) = (f.deg(), g.deg());
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

pub(crate) fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
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
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v.div_floor(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Lower bound on the squared minimal distance between distinct roots of a
/// squarefree `f` (Mahler): `sep^2 >= 3 |disc| d^-(d+2) ||f||_2^(2(1-d))`.
pub fn root_separation_sq_lower(f: &IntPolynomial) -> Result<BigRational> {
    let d = f.deg();
    if d < 2 {
        return domain("root separation needs degree >= 2");
    }
    let disc = discriminant(f)?;
    if disc.is_zero() {
        return domain("root separation of a non-squarefree polynomial");
    }
    let norms = f.norms()?;
    let num = BigRational::from_integer(BigInt::from(3)) * disc.abs();
    let den = BigRational::from_integer(
        num_traits::pow(BigInt::from(d), d + 2) * num_traits::pow(norms.two_norm_sq, d - 1),
    );
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(subresultant_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(subresultant_gcd(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), p(&[1]));
        let f = p(&[6, 0, -4]);
        assert_eq!(subresultant_gcd(&f, &f), p(&[-3, 0, 2]));
        assert_eq!(subresultant_gcd(&p(&[0, 0, 2]), &IntPolynomial::zero()), p(&[0, 0, 1]));
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])).unwrap(), BigInt::from(1));
        for (a, b) in [(2, 5), (-3, 4), (0, 0), (7, -1)] {
            let r = resultant(&p(&[-a, 1]), &p(&[-b, 1])).unwrap();
            assert_eq!(r, BigInt::from(a - b));
        }
        assert!(resultant(&p(&[-1, 0, 1]), &p(&[-1, 0, 1])).unwrap().is_zero());
        assert!(resultant(&p(&[3]), &p(&[1, 1])).is_err());
    }

    #[test]
    fn resultant_matches_sylvester() {
        let cases = [
            (p(&[1, 2, 3]), p(&[4, 0, 5, 1])),
            (p(&[-7, 0, 0, 2]), p(&[3, 1])),
            (p(&[1, -1, 1, -1, 2]), p(&[0, 3, 0, 5])),
            (p(&[2, 4]), p(&[6, 0, 3])),
        ];
        for (f, g) in cases {
            assert_eq!(resultant_any(&f, &g), sylvester_resultant(&f, &g), "{f} / {g}");
            assert_eq!(resultant_any(&g, &f), sylvester_resultant(&g, &f), "{g} / {f}");
        }
    }

    #[test]
    fn discriminant_examples() {
        let d = |c: &[i64]| discriminant(&p(c)).unwrap();
        assert_eq!(d(&[-2, 0, 1]), BigRational::from_integer(8.into()));
        assert_eq!(d(&[1, 1, 1]), BigRational::from_integer((-3).into()));
        assert!(d(&[1, -2, 1]).is_zero());
        assert_eq!(d(&[5, 3]), BigRational::one());
        // b^2 c^2 - 4 c^3 - 4 b^3 d - 27 d^2 + 18 b c d for x^3 + bx^2 + cx + d
        assert_eq!(d(&[1, -3, 0, 1]), BigRational::from_integer(81.into()));
        assert!(discriminant(&p(&[4])).is_err());
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&p(&[1, 0, -10, 0, 1])));
        assert!(!is_squarefree(&p(&[1, -2, 1])));
        assert!(is_squarefree(&p(&[0, 1])));
    }

    #[test]
    fn squarefree_parts() {
        // (x-1)^2 (x+2)^3 (x^2+1)
        let f = [p(&[-1, 1]), p(&[-1, 1]), p(&[2, 1]), p(&[2, 1]), p(&[2, 1]), p(&[1, 0, 1])]
            .iter()
            .fold(IntPolynomial::one(), |acc, q| &acc * q);
        let dec = squarefree_decomposition(&f);
        assert_eq!(dec, vec![(p(&[1, 0, 1]), 1), (p(&[-1, 1]), 2), (p(&[2, 1]), 3)]);
    }

    #[test]
    fn separation_bound_is_below_actual_gap() {
        // roots +-sqrt 2: gap^2 = 8
        let s = root_separation_sq_lower(&p(&[-2, 0, 1])).unwrap();
        assert!(s < BigRational::from_integer(8.into()));
        assert!(s > BigRational::zero());
    }
}
