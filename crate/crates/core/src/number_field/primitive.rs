//! Primitive elements by the SIMPLE resultant construction, combined over a
//! balanced binary tree, and the integral representation with its bound
//! certificates.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{lift_int_poly, nf_poly_add, nf_poly_gcd, nf_poly_mul, NFElement, NFPoly, NumberField};
use crate::algebraic::{alg_equal, log2_ceil, select_root, weil_height_enclosure, AlgebraicNumber, RealEnclosure};
use crate::ball::RealBall;
use crate::error::{domain, Error, Result};
use crate::exact_poly::{
    bivariate_resultant_y, discriminant, factor_over_integers, is_squarefree, root_separation_sq_lower,
    BivariatePolynomial, IntPolynomial, RatPolynomial,
};
use crate::json::{int_value, rational_value};

/// Result of one SIMPLE step: `theta = alpha + t beta` with both inputs
/// expressed in `Q(theta)`.
#[derive(Clone, Debug)]
pub struct SimpleExtension {
    pub field: Arc<NumberField>,
    pub t: i64,
    /// Values of `t` tried and rejected because `r(x, t)` was not squarefree.
    pub rejected: usize,
    /// `deg(A) deg(B) (deg(B) - 1)`, the most candidates that can fail.
    pub candidate_limit: usize,
    pub alpha_rep: NFElement,
    pub beta_rep: NFElement,
}

impl SimpleExtension {
    pub fn theta(&self) -> &AlgebraicNumber {
        self.field.theta()
    }
}

pub fn simple_extend(alpha: &AlgebraicNumber, beta: &AlgebraicNumber) -> Result<SimpleExtension> {
    if let (Some(a), Some(b)) = (alpha.as_rational(), beta.as_rational()) {
        let field = NumberField::new(AlgebraicNumber::from_rational(&(&a + &b)));
        return Ok(SimpleExtension {
            alpha_rep: NFElement::from_rational(&field, a),
            beta_rep: NFElement::from_rational(&field, b),
            field,
            t: 1,
            rejected: 0,
            candidate_limit: 0,
        });
    }
    let (fa, fb) = (alpha.minpoly(), beta.minpoly());
    let (da, db) = (fa.deg(), fb.deg());
    let limit = da * db * (db - 1);
    let by = BivariatePolynomial::in_y(fb);
    let mut chosen = None;
    for t in 1..=(limit as i64 + 1) {
        let r = bivariate_resultant_y(&BivariatePolynomial::shifted(fa, &BigInt::from(t)), &by)?;
        if !r.is_zero() && is_squarefree(&r) {
            chosen = Some((t, r));
            break;
        }
        log::debug!("simple_extend: t = {t} rejected");
    }
    let (t, r) = chosen.ok_or_else(|| Error::Certificate("no squarefree r(x, t) among the candidates".into()))?;
    let factors: Vec<IntPolynomial> = factor_over_integers(&r)?.factors.into_iter().map(|(g, _)| g).collect();
    let tb = BigInt::from(t);
    let theta = select_root(&factors, |prec| {
        let za = alpha.enclosure(prec)?;
        let zb = beta.enclosure(prec)?;
        Ok(za.add(&zb.scale(&RealBall::from_int(tb.clone(), prec + 2))))
    })?;
    let field = NumberField::new(theta);
    let th = NFElement::theta(&field);
    let tq = BigRational::from_integer(tb);

    // A(theta - t x) over Q(theta)
    let lin: NFPoly = vec![th.clone(), NFElement::from_rational(&field, -tq.clone())];
    let mut a_shift: NFPoly = Vec::new();
    for c in fa.coeffs().iter().rev() {
        let cst = lift_int_poly(&field, std::slice::from_ref(c));
        a_shift = nf_poly_add(&nf_poly_mul(&a_shift, &lin), &cst);
    }
    let g = nf_poly_gcd(&lift_int_poly(&field, fb.coeffs()), &a_shift)?;
    if g.len() != 2 {
        return Err(Error::Certificate(format!(
            "gcd(B(x), A(theta - t x)) has degree {}, expected 1",
            g.len().saturating_sub(1)
        )));
    }
    let beta_rep = g[0].neg();
    let alpha_rep = th.sub(&beta_rep.scale(&tq));
    Ok(SimpleExtension {
        field,
        t,
        rejected: (t - 1) as usize,
        candidate_limit: limit,
        alpha_rep,
        beta_rep,
    })
}

/// One internal node of the combination tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeRecord {
    pub t: i64,
    pub rejected: usize,
    pub candidate_limit: usize,
}

/// `alpha_i = reps[i](theta)` with rational coefficients.
#[derive(Clone, Debug)]
pub struct ThetaRepresentation {
    pub theta: AlgebraicNumber,
    pub reps: Vec<RatPolynomial>,
    /// Internal nodes in post-order.
    pub nodes: Vec<NodeRecord>,
}

impl ThetaRepresentation {
    pub fn t_choices(&self) -> Vec<i64> {
        self.nodes.iter().map(|n| n.t).collect()
    }
}

struct Node {
    field: Arc<NumberField>,
    reps: Vec<NFElement>,
    records: Vec<NodeRecord>,
}

fn combine_node(gens: &[AlgebraicNumber]) -> Result<Node> {
    if gens.len() == 1 {
        let field = NumberField::new(gens[0].clone());
        let rep = NFElement::theta(&field);
        return Ok(Node {
            field,
            reps: vec![rep],
            records: Vec::new(),
        });
    }
    let k = gens.len().div_ceil(2);
    let (left, right) = rayon::join(|| combine_node(&gens[..k]), || combine_node(&gens[k..]));
    let (left, right) = (left?, right?);
    let ext = simple_extend(left.field.theta(), right.field.theta())?;
    let mut reps = Vec::with_capacity(gens.len());
    for e in &left.reps {
        reps.push(ext.alpha_rep.eval_poly(e.coeffs()));
    }
    for e in &right.reps {
        reps.push(ext.beta_rep.eval_poly(e.coeffs()));
    }
    let mut records = left.records;
    records.extend(right.records);
    records.push(NodeRecord {
        t: ext.t,
        rejected: ext.rejected,
        candidate_limit: ext.candidate_limit,
    });
    Ok(Node {
        field: ext.field,
        reps,
        records,
    })
}

fn check_distinct(gens: &[AlgebraicNumber]) -> Result<()> {
    if gens.is_empty() {
        return domain("at least one generator is required");
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if alg_equal(&gens[i], &gens[j])? {
                return domain(format!("generators {i} and {j} are equal"));
            }
        }
    }
    Ok(())
}

/// Primitive element of `Q(gens)` with rational representations.
pub fn tower_combine_theta(gens: &[AlgebraicNumber]) -> Result<ThetaRepresentation> {
    check_distinct(gens)?;
    let node = combine_node(gens)?;
    Ok(ThetaRepresentation {
        theta: node.field.theta().clone(),
        reps: node.reps.iter().map(NFElement::residue).collect(),
        nodes: node.records,
    })
}

/// `alpha_i = reps[i](vartheta) / denominator` with `vartheta = l theta`
/// an algebraic integer.
#[derive(Clone, Debug)]
pub struct IntegralRepresentation {
    pub theta: AlgebraicNumber,
    pub vartheta: AlgebraicNumber,
    pub leading_coeff: BigInt,
    pub denominator: BigInt,
    pub reps: Vec<IntPolynomial>,
}

pub fn integralize(rep: &ThetaRepresentation) -> Result<IntegralRepresentation> {
    let f = rep.theta.minpoly();
    let d = f.deg();
    let l = f.leading();
    let mut monic = Vec::with_capacity(d + 1);
    for k in 0..d {
        monic.push(f.coeff(k) * num_traits::pow(l.clone(), d - 1 - k));
    }
    monic.push(BigInt::one());
    let lq = BigRational::from_integer(l.clone());
    let vartheta = AlgebraicNumber::from_parts_unchecked(IntPolynomial::new(monic), rep.theta.rect().scale(&lq));

    // q_k theta^k = (q_k / l^k) vartheta^k
    let scaled: Vec<Vec<BigRational>> = rep
        .reps
        .iter()
        .map(|q| {
            let mut lk = BigRational::one();
            q.to_rationals()
                .into_iter()
                .map(|c| {
                    let v = c / &lk;
                    lk *= &lq;
                    v
                })
                .collect()
        })
        .collect();
    let mut den = BigInt::one();
    for c in scaled.iter().flatten() {
        den = den.lcm(c.denom());
    }
    let tq = BigRational::from_integer(den.clone());
    let reps = scaled
        .iter()
        .map(|q| IntPolynomial::new(q.iter().map(|c| (c * &tq).to_integer()).collect()))
        .collect();
    Ok(IntegralRepresentation {
        theta: rep.theta.clone(),
        vartheta,
        leading_coeff: l,
        denominator: den,
        reps,
    })
}

/// Outcome of each certificate check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertChecks {
    pub degree_ok: bool,
    pub height_ok: bool,
    pub denominator_ok: bool,
    pub length_ok: bool,
    pub candidates_ok: bool,
    pub divides_disc_denominator: bool,
    pub identities_ok: bool,
    /// `k` with every `|alpha_i - p_i(vartheta)/T| <= 2^k`.
    pub identity_error_log2: i64,
    pub theta_height: RealEnclosure,
    pub ln_denominator_upper: BigRational,
    pub ln_max_length_upper: BigRational,
}

impl CertChecks {
    pub fn all_ok(&self) -> bool {
        self.degree_ok
            && self.height_ok
            && self.denominator_ok
            && self.length_ok
            && self.candidates_ok
            && self.divides_disc_denominator
            && self.identities_ok
    }
}

#[derive(Clone, Debug)]
pub struct PrimitiveElementCert {
    pub theta: AlgebraicNumber,
    pub vartheta: AlgebraicNumber,
    pub leading_coeff: BigInt,
    /// The common denominator `T`.
    pub denominator: BigInt,
    pub reps: Vec<IntPolynomial>,
    pub t_choices: Vec<i64>,
    pub nodes: Vec<NodeRecord>,
    pub m: usize,
    /// Largest generator degree.
    pub d: usize,
    /// Rational lower bound for the largest generator height. Bounds built
    /// from it never exceed their exact values.
    pub h_lower: BigRational,
    /// `d^(2m)`.
    pub degree_bound: BigInt,
    /// `m d^(2m) (2h/d + 3)`.
    pub height_bound: BigRational,
    /// `4 m d^(8m) (2h/d + 3)`, bound for `ln T`.
    pub ln_denominator_bound: BigRational,
    /// `6 m d^(8m) (2h/d + 3)`, bound for `ln L(p_i)`.
    pub ln_length_bound: BigRational,
    /// `prod l_i |disc(p_vartheta)|` with `l_i` the generator leading coefficients.
    pub disc_denominator: BigInt,
    pub checks: CertChecks,
}

impl PrimitiveElementCert {
    pub fn to_json(&self) -> Value {
        json!({
            "theta": self.theta.to_json(),
            "vartheta": self.vartheta.to_json(),
            "leading_coeff": int_value(&self.leading_coeff),
            "T": int_value(&self.denominator),
            "disc_T": int_value(&self.disc_denominator),
            "reps": self.reps.iter().map(|p| p.to_strings()).collect::<Vec<_>>(),
            "t_choices": self.t_choices,
            "bounds": {
                "degree": int_value(&self.degree_bound),
                "height_log": rational_value(&self.height_bound),
                "ln_T": rational_value(&self.ln_denominator_bound),
                "ln_length": rational_value(&self.ln_length_bound),
            },
            "checks": {
                "degree": self.checks.degree_ok,
                "height": self.checks.height_ok,
                "T": self.checks.denominator_ok,
                "length": self.checks.length_ok,
                "candidates": self.checks.candidates_ok,
                "T_divides_disc_T": self.checks.divides_disc_denominator,
                "identities": self.checks.identities_ok,
                "identity_error_log2": self.checks.identity_error_log2,
            },
        })
    }
}

/// Primitive element for `Q(gens)` with the integral representation and
/// all certificate checks evaluated.
pub fn tower_combine(gens: &[AlgebraicNumber]) -> Result<PrimitiveElementCert> {
    let rep = tower_combine_theta(gens)?;
    let int = integralize(&rep)?;
    certify(gens, &rep, int)
}

fn ln_upper(n: &BigInt) -> Result<BigRational> {
    Ok(RealBall::from_int(n.clone(), 64).ln()?.upper())
}

fn certify(gens: &[AlgebraicNumber], rep: &ThetaRepresentation, int: IntegralRepresentation) -> Result<PrimitiveElementCert> {
    let m = gens.len();
    let d = gens.iter().map(AlgebraicNumber::degree).max().unwrap_or(1);
    let mut h_lower = BigRational::zero();
    for g in gens {
        h_lower = h_lower.max(weil_height_enclosure(g, 48)?.lo);
    }
    let dq = BigRational::from_integer(BigInt::from(d));
    let mq = BigRational::from_integer(BigInt::from(m));
    let inner = BigRational::from_integer(2.into()) * &h_lower / &dq + BigRational::from_integer(3.into());
    let d2m = num_traits::pow(BigInt::from(d), 2 * m);
    let d8m = BigRational::from_integer(num_traits::pow(BigInt::from(d), 8 * m));
    let height_bound = &mq * BigRational::from_integer(d2m.clone()) * &inner;
    let base = &mq * &d8m * &inner;
    let ln_denominator_bound = BigRational::from_integer(4.into()) * &base;
    let ln_length_bound = BigRational::from_integer(6.into()) * &base;

    let theta_height = weil_height_enclosure(&int.theta, 48)?;
    let ln_denominator_upper = ln_upper(&int.denominator)?;
    let mut max_len = BigInt::one();
    for p in &int.reps {
        if !p.is_zero() {
            max_len = max_len.max(p.norms()?.length);
        }
    }
    let ln_max_length_upper = ln_upper(&max_len)?;

    let mut disc_t = discriminant(int.vartheta.minpoly())?.to_integer().abs();
    for g in gens {
        disc_t *= g.minpoly().leading();
    }

    let (identities_ok, identity_error_log2) = check_identities(gens, &int)?;

    let checks = CertChecks {
        degree_ok: BigInt::from(int.vartheta.degree()) <= d2m,
        height_ok: theta_height.hi <= height_bound,
        denominator_ok: ln_denominator_upper <= ln_denominator_bound,
        length_ok: ln_max_length_upper <= ln_length_bound,
        candidates_ok: rep.nodes.iter().all(|n| n.t >= 1 && n.rejected <= n.candidate_limit),
        divides_disc_denominator: (&disc_t % &int.denominator).is_zero(),
        identities_ok,
        identity_error_log2,
        theta_height,
        ln_denominator_upper,
        ln_max_length_upper,
    };
    Ok(PrimitiveElementCert {
        theta: int.theta,
        vartheta: int.vartheta,
        leading_coeff: int.leading_coeff,
        denominator: int.denominator,
        reps: int.reps,
        t_choices: rep.t_choices(),
        nodes: rep.nodes.clone(),
        m,
        d,
        h_lower,
        degree_bound: d2m,
        height_bound,
        ln_denominator_bound,
        ln_length_bound,
        disc_denominator: disc_t,
        checks,
    })
}

// Exact: f_i(p_i(vartheta)/T) = 0 in Q(vartheta). Numeric: the value lies
// within half the root separation of alpha_i.
fn check_identities(gens: &[AlgebraicNumber], int: &IntegralRepresentation) -> Result<(bool, i64)> {
    let field = NumberField::new(int.vartheta.clone());
    let tq = BigRational::from_integer(int.denominator.clone());
    let mut ok = true;
    let mut worst = i64::MIN;
    for (g, p) in gens.iter().zip(&int.reps) {
        let coeffs: Vec<BigRational> = p.to_rationals().into_iter().map(|c| c / &tq).collect();
        let el = NFElement::from_poly(&field, &coeffs);
        if !el.eval_poly(&g.minpoly().to_rationals()).is_zero() {
            ok = false;
        }
        let sep2 = if g.degree() >= 2 {
            Some(root_separation_sq_lower(g.minpoly())?)
        } else {
            None
        };
        let mut prec = 160u32;
        loop {
            let diff = g.enclosure(prec)?.sub(&el.enclosure(prec)?);
            let err = diff.re.abs_upper() + diff.im.abs_upper();
            let close = match &sep2 {
                Some(s) => BigRational::from_integer(4.into()) * &err * &err < *s,
                None => true,
            };
            if close || prec >= 2048 {
                ok &= close;
                if !err.is_zero() {
                    worst = worst.max(log2_ceil(&err));
                }
                break;
            }
            prec *= 2;
        }
    }
    if worst == i64::MIN {
        worst = -(1 << 20);
    }
    Ok((ok, worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::sqrt_of(&BigRational::from_integer(n.into())).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn simple_sqrt2_sqrt3() {
        let ext = simple_extend(&sqrt(2), &sqrt(3)).unwrap();
        assert_eq!(ext.t, 1);
        assert_eq!(ext.theta().minpoly(), &IntPolynomial::from_i64s(&[1, 0, -10, 0, 1]));
        // sqrt3 = (11 theta - theta^3) / 2
        assert_eq!(ext.beta_rep.coeffs(), &[q(0, 1), q(11, 2), q(0, 1), q(-1, 2)]);
        assert_eq!(ext.alpha_rep.coeffs(), &[q(0, 1), q(-9, 2), q(0, 1), q(1, 2)]);
    }

    #[test]
    fn simple_with_rationals() {
        let ext = simple_extend(&sqrt(2), &AlgebraicNumber::from_rational(&q(1, 2))).unwrap();
        assert_eq!(ext.theta().degree(), 2);
        assert_eq!(ext.beta_rep.as_rational(), Some(q(1, 2)));
        let ext = simple_extend(&AlgebraicNumber::from_int(1), &AlgebraicNumber::from_int(2)).unwrap();
        assert_eq!(ext.theta().as_rational(), Some(q(3, 1)));
        assert_eq!(ext.alpha_rep.as_rational(), Some(q(1, 1)));
    }

    #[test]
    fn simple_rejects_collisions() {
        // sqrt2 + 1 * (-sqrt2) = 0 is a double root of r(x, 1)
        let ext = simple_extend(&sqrt(2), &sqrt(2).neg()).unwrap();
        assert_eq!(ext.t, 2);
        assert_eq!(ext.rejected, 1);
        assert!(ext.rejected <= ext.candidate_limit);
    }

    #[test]
    fn golden_cert() {
        let cert = tower_combine(&[sqrt(2), sqrt(3)]).unwrap();
        assert_eq!(cert.vartheta.minpoly(), &IntPolynomial::from_i64s(&[1, 0, -10, 0, 1]));
        assert_eq!(cert.t_choices, vec![1]);
        assert_eq!(cert.denominator, BigInt::from(2));
        assert_eq!(cert.reps[0], IntPolynomial::from_i64s(&[0, -9, 0, 1]));
        assert_eq!(cert.reps[1], IntPolynomial::from_i64s(&[0, 11, 0, -1]));
        assert!(cert.checks.all_ok(), "{:?}", cert.checks);
        assert!(cert.checks.identity_error_log2 < -100);
    }

    #[test]
    fn single_rational_generator() {
        let cert = tower_combine(&[AlgebraicNumber::from_rational(&q(1, 2))]).unwrap();
        assert_eq!(cert.theta.as_rational(), Some(q(1, 2)));
        assert_eq!(cert.vartheta.as_rational(), Some(q(1, 1)));
        assert_eq!(cert.denominator, BigInt::from(2));
        assert_eq!(cert.reps[0], IntPolynomial::from_i64s(&[1]));
        assert!(cert.checks.all_ok());
    }

    #[test]
    fn non_integral_theta() {
        let a = AlgebraicNumber::root_near(&IntPolynomial::from_i64s(&[-1, 0, 2]), 0.7, 0.0).unwrap();
        let cert = tower_combine(&[a]).unwrap();
        assert_eq!(cert.leading_coeff, BigInt::from(2));
        assert_eq!(cert.vartheta.minpoly(), &IntPolynomial::from_i64s(&[-2, 0, 1]));
        assert_eq!(cert.denominator, BigInt::from(2));
        assert!(cert.checks.all_ok());
    }

    #[test]
    fn three_square_roots() {
        let cert = tower_combine(&[sqrt(2), sqrt(3), sqrt(5)]).unwrap();
        assert_eq!(cert.vartheta.degree(), 8);
        assert_eq!(cert.t_choices.len(), 2);
        assert!(cert.checks.all_ok(), "{:?}", cert.checks);
    }

    #[test]
    fn duplicate_generators() {
        let err = tower_combine(&[sqrt(2), sqrt(3), sqrt(2)]).unwrap_err();
        assert!(err.to_string().contains("0 and 2"), "{err}");
    }
}
