//! Factorization in `Z[x]`: squarefree decomposition, Cantor-Zassenhaus
//! modulo a small prime, quadratic Hensel lifting along a factor tree, and
//! exhaustive recombination of the lifted factors.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::resultant::squarefree_decomposition;
use super::IntPolynomial;
use crate::error::{domain, Result};

/// `content * prod factors[i].0 ^ factors[i].1 == f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPolynomial, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::constant(self.content.clone());
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = &acc * f;
            }
        }
        acc
    }
}

/// Complete factorization into primitive irreducible factors with positive
/// leading coefficients. Factors are sorted by degree, then coefficients.
pub fn factor_over_integers(f: &IntPolynomial) -> Result<Factorization> {
    if f.deg() < 1 {
        return domain("factorization requires degree >= 1");
    }
    let mut content = f.content();
    if f.leading().is_negative() {
        content = -content;
    }
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for g in factor_squarefree(&part) {
            factors.push((g, mult));
        }
    }
    factors.sort_by(|(a, ea), (b, eb)| {
        a.deg()
            .cmp(&b.deg())
            .then_with(|| sort_key(a).cmp(&sort_key(b)))
            .then(ea.cmp(eb))
    });
    Ok(Factorization { content, factors })
}

// Smaller coefficients first, reading from the leading term down.
fn sort_key(f: &IntPolynomial) -> Vec<(BigInt, BigInt)> {
    f.coeffs().iter().rev().map(|c| (c.abs(), c.clone())).collect()
}

/// True iff `f` is irreducible over Q (constants are not).
pub fn is_irreducible(f: &IntPolynomial) -> bool {
    if f.deg() < 1 {
        return false;
    }
    match factor_over_integers(f) {
        Ok(fa) => fa.factors.len() == 1 && fa.factors[0].1 == 1,
        Err(_) => false,
    }
}

/// Irreducible factors of a primitive squarefree polynomial with positive
/// leading coefficient.
pub(crate) fn factor_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let f = f.primitive_part();
    let d = f.deg();
    if d <= 1 {
        return vec![f];
    }
    // x | f is common for enumerated polynomials; peel it off directly.
    if f.coeff(0).is_zero() {
        let rest = f.div_exact(&IntPolynomial::from_i64s(&[0, 1])).unwrap();
        let mut out = vec![IntPolynomial::from_i64s(&[0, 1])];
        out.extend(factor_squarefree(&rest));
        return out;
    }
    let (p, modular) = match choose_prime(&f) {
        Some(x) => x,
        None => return vec![f],
    };
    if modular.len() == 1 {
        return vec![f];
    }
    let lc = f.leading();
    let norms = f.norms().expect("nonzero");
    let two_norm = norms.two_norm_sq.sqrt() + BigInt::one();
    let bound = (BigInt::one() << d) * two_norm * lc.abs() * 2 + BigInt::one();
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus = &modulus * &modulus;
    }
    let fm = zm_from(&f, &modulus);
    let lifted = multifactor_lift(&fm, &modular, p, &modulus);
    recombine(f, lifted, &modulus)
}

fn recombine(mut f: IntPolynomial, mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<IntPolynomial> {
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let n = lifted.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = f.leading();
            let mut prod = vec![lc.mod_floor(modulus)];
            for &i in &idx {
                prod = zm_mul(&prod, &lifted[i], modulus);
            }
            let cand = IntPolynomial::new(prod.iter().map(|c| symmetric(c, modulus)).collect())
                .primitive_part();
            if cand.deg() >= 1 {
                if let Some(q) = f.div_exact(&cand) {
                    found.push(cand);
                    f = q.primitive_part();
                    for &i in idx.iter().rev() {
                        lifted.remove(i);
                    }
                    continue 'outer;
                }
            }
            // next combination in lexicographic order
            let mut k = size;
            loop {
                if k == 0 {
                    size += 1;
                    continue 'outer;
                }
                k -= 1;
                if idx[k] < n - size + k {
                    idx[k] += 1;
                    for j in k + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    if f.deg() >= 1 {
        found.push(f);
    }
    found
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

const SMALL_PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

/// Picks, among the first few admissible primes, the one giving the fewest
/// modular factors.
fn choose_prime(f: &IntPolynomial) -> Option<(u64, Vec<Vec<u64>>)> {
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for &p in SMALL_PRIMES.iter() {
        if (f.leading() % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp_monic(&fp_from(f, p), p);
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = fp_factor_squarefree(&fp, p);
        tried += 1;
        let better = best.as_ref().map_or(true, |(_, b)| facs.len() < b.len());
        if better {
            best = Some((p, facs));
        }
        if best.as_ref().unwrap().1.len() == 1 || tried >= 6 {
            break;
        }
    }
    best
}

// ---- arithmetic in F_p[x], p < 2^31, lowest power first ----

fn fp_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_from(f: &IntPolynomial, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    fp_trim(
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn fp_inv(a: u64, p: u64) -> u64 {
    fp_pow(a, p - 2, p)
}

fn fp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn fp_monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    fp_trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), fp_trim(r));
    }
    let inv = fp_inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (i, &bc) in b.iter().enumerate() {
            r[i + k] = (r[i + k] + p - c * bc % p) % p;
        }
        q[k] = c;
    }
    r.truncate(db);
    (fp_trim(q), fp_trim(r))
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    fp_divrem(a, b, p).1
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    fp_monic(&x, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
fn fp_xgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = fp_inv(*r0.last().unwrap(), p);
    let sc = |v: &[u64]| fp_trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &[u64], p: u64) -> Vec<u64> {
    fp_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

fn fp_powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = fp_rem(base, m, p);
    for i in 0..e.bits() {
        if e.bit(i) {
            result = fp_rem(&fp_mul(&result, &b, p), m, p);
        }
        b = fp_rem(&fp_mul(&b, &b, p), m, p);
    }
    result
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p.
fn fp_factor_squarefree(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut deg = 0usize;
    let pb = BigUint::from(p);
    while rest.len() > 1 {
        deg += 1;
        if 2 * deg > rest.len() - 1 {
            out.push(fp_monic(&rest, p));
            break;
        }
        h = fp_powmod(&h, &pb, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(p * 1_000_003 + deg as u64);
            equal_degree_split(&g, deg, p, &mut rng, &mut out);
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_rem(&h, &rest, p);
        }
    }
    out.sort();
    out
}

fn equal_degree_split(g: &[u64], deg: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<u64>>) {
    let n = g.len() - 1;
    if n == deg {
        out.push(fp_monic(g, p));
        return;
    }
    let e = (num_traits::pow(BigUint::from(p), deg) - 1u32) / 2u32;
    loop {
        let a: Vec<u64> = fp_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &e, g, p), &[1], p);
        let d = fp_gcd(&b, g, p);
        if d.len() > 1 && d.len() < g.len() {
            let other = fp_divrem(g, &d, p).0;
            equal_degree_split(&d, deg, p, rng, out);
            equal_degree_split(&other, deg, p, rng, out);
            return;
        }
    }
}

// ---- arithmetic in (Z/mZ)[x], coefficients reduced to [0, m) ----

fn zm_trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zm_from(f: &IntPolynomial, m: &BigInt) -> Vec<BigInt> {
    zm_trim(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn zm_lift_fp(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zm_trim(out.into_iter().map(|c| c.mod_floor(m)).collect())
}

/// Division by a monic polynomial.
fn zm_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), zm_trim(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + k] = (&r[i + k] - &c * bc).mod_floor(m);
        }
        q[k] = c;
    }
    r.truncate(db);
    (zm_trim(q), zm_trim(r))
}

type HenselState = (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>);

/// One quadratic Hensel step from modulus `m` to `m^2`: given
/// `f = g h`, `s g + t h = 1` modulo `m` with `h` monic.
fn hensel_step(f: &[BigInt], g: &[BigInt], h: &[BigInt], s: &[BigInt], t: &[BigInt], m2: &BigInt) -> HenselState {
    let e = zm_sub(f, &zm_mul(g, h, m2), m2);
    let (q, r) = zm_divrem_monic(&zm_mul(s, &e, m2), h, m2);
    let g1 = zm_add(&zm_add(g, &zm_mul(t, &e, m2), m2), &zm_mul(&q, g, m2), m2);
    let h1 = zm_add(h, &r, m2);
    let b = zm_sub(&zm_add(&zm_mul(s, &g1, m2), &zm_mul(t, &h1, m2), m2), &[BigInt::one()], m2);
    let (c, d) = zm_divrem_monic(&zm_mul(s, &b, m2), &h1, m2);
    let s1 = zm_sub(s, &d, m2);
    let t1 = zm_sub(&zm_sub(t, &zm_mul(t, &b, m2), m2), &zm_mul(&c, &g1, m2), m2);
    (g1, h1, s1, t1)
}

/// Lifts `f = lc(f) prod factors (mod p)` to monic factors modulo `target`,
/// which must be `p^(2^k)`.
fn multifactor_lift(f: &[BigInt], factors: &[Vec<u64>], p: u64, target: &BigInt) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        let lc = f.last().unwrap().clone();
        let inv = lc.modinv(target).expect("leading coefficient is a unit");
        return vec![zm_trim(f.iter().map(|c| (c * &inv).mod_floor(target)).collect())];
    }
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    let lc_p = (f.last().unwrap() % BigInt::from(p)).to_u64().unwrap();
    let mut g0 = vec![lc_p];
    for a in left {
        g0 = fp_mul(&g0, a, p);
    }
    let mut h0 = vec![1u64];
    for a in right {
        h0 = fp_mul(&h0, a, p);
    }
    let (_, s0, t0) = fp_xgcd(&g0, &h0, p);
    let (mut g, mut h, mut s, mut t) = (zm_lift_fp(&g0), zm_lift_fp(&h0), zm_lift_fp(&s0), zm_lift_fp(&t0));
    let mut m = BigInt::from(p);
    while &m < target {
        m = &m * &m;
        let fm: Vec<BigInt> = zm_trim(f.iter().map(|c| c.mod_floor(&m)).collect());
        (g, h, s, t) = hensel_step(&fm, &g, &h, &s, &t, &m);
    }
    let mut out = multifactor_lift(&g, left, p, target);
    out.extend(multifactor_lift(&h, right, p, target));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn spec_examples() {
        let fa = factor_over_integers(&p(&[6, 0, -5, 0, 1])).unwrap();
        assert_eq!(fa.factors, vec![(p(&[-2, 0, 1]), 1), (p(&[-3, 0, 1]), 1)]);
        let fa = factor_over_integers(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(fa.factors, vec![(p(&[-2, 0, 1]), 1)]);
        let fa = factor_over_integers(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(fa.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn content_and_multiplicity() {
        // -6 (x - 1)^2 (2x + 3)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[3, 2]);
        let f = f.scale(&BigInt::from(-6));
        let fa = factor_over_integers(&f).unwrap();
        assert_eq!(fa.content, BigInt::from(-6));
        assert_eq!(fa.factors, vec![(p(&[-1, 1]), 2), (p(&[3, 2]), 1)]);
        assert_eq!(fa.expand(), f);
    }

    #[test]
    fn swinnerton_dyer_is_irreducible() {
        // minimal polynomial of sqrt2 + sqrt3 + sqrt5; splits into many
        // factors modulo every prime, so this exercises recombination.
        let f = p(&[576, 0, -960, 0, 352, 0, -40, 0, 1]);
        assert!(is_irreducible(&f));
    }

    #[test]
    fn product_of_quartics() {
        let a = p(&[1, 0, -10, 0, 1]);
        let b = p(&[7, 3, 0, 1, 2]);
        let f = &a * &b;
        let fa = factor_over_integers(&f).unwrap();
        assert_eq!(fa.factors.len(), 2);
        assert_eq!(fa.expand(), f);
    }

    #[test]
    fn cyclotomic_product() {
        // x^12 - 1
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let fa = factor_over_integers(&p(&c)).unwrap();
        assert_eq!(fa.factors.len(), 6);
        assert_eq!(fa.expand(), p(&c));
    }
}
