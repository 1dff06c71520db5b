mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use expgap::algebraic::{alg_equal, mahler_enclosure, weil_height_enclosure, AlgebraicNumber};
use expgap::ball::RealBall;
use expgap::certified_eval::{decide_sign, LinearForm, Verdict};
use expgap::exact_poly::{bivariate_resultant_y, is_squarefree, resultant, BivariatePolynomial, IntPolynomial};
use expgap::explicit_bounds::TowerReal;
use expgap::number_field::{nf_invert, NFElement, NumberField};
use expgap::pigeonhole::enumerate_algnums;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-1000i64..1000, 1i64..100).prop_map(|(n, d)| q(n, d))
}

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (0i64..100_000, 1i64..100).prop_map(|(n, d)| q(n, d))
}

fn cube_root_two_field() -> std::sync::Arc<NumberField> {
    let f = IntPolynomial::from_i64s(&[-2, 0, 0, 1]);
    NumberField::new(AlgebraicNumber::root_near(&f, 1.26, 0.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nf_inverse_is_involution(c in proptest::collection::vec(rational(), 3)) {
        let k = cube_root_two_field();
        let x = NFElement::from_poly(&k, &c);
        prop_assume!(!x.is_zero());
        let y = nf_invert(&x).unwrap();
        prop_assert!(x.mul(&y).sub(&NFElement::one(&k)).is_zero());
        let back = nf_invert(&y).unwrap();
        prop_assert_eq!(back.coeffs(), x.coeffs());
    }

    #[test]
    fn tower_add_mul_are_upper_bounds(a in positive_rational(), b in positive_rational()) {
        let ta = TowerReal::from_rational(&a).unwrap();
        let tb = TowerReal::from_rational(&b).unwrap();
        let sum = TowerReal::from_rational(&(&a + &b)).unwrap();
        let prod = TowerReal::from_rational(&(&a * &b)).unwrap();
        prop_assert!(ta.add_ub(&tb).unwrap() >= sum);
        prop_assert!(ta.mul_ub(&tb).unwrap() >= prod);
    }

    #[test]
    fn tower_exp_bounds(x in 30i64..5000, y in 30i64..5000) {
        // e^x e^y = e^(x+y) and e^x + e^y >= e^max(x, y)
        let ex = TowerReal::exp_of(&q(x, 1)).unwrap();
        let ey = TowerReal::exp_of(&q(y, 1)).unwrap();
        prop_assert!(ex.mul_ub(&ey).unwrap() >= TowerReal::exp_of(&q(x + y, 1)).unwrap());
        let s = ex.add_ub(&ey).unwrap();
        prop_assert!(s >= ex && s >= ey);
        prop_assert!(ex.ln().unwrap() >= TowerReal::from_rational(&q(x, 1)).unwrap());
    }

    #[test]
    fn ordering_matches_rationals(a in positive_rational(), b in positive_rational()) {
        let ta = TowerReal::from_rational(&a).unwrap();
        let tb = TowerReal::from_rational(&b).unwrap();
        if a < b {
            prop_assert!(ta <= tb);
        }
    }

    #[test]
    fn resultant_length_inequality(
        f in proptest::collection::vec(proptest::collection::vec(-10i64..=10, 1..4), 2..4),
        g in proptest::collection::vec(proptest::collection::vec(-10i64..=10, 1..4), 2..4),
    ) {
        let f = BivariatePolynomial::from_table(&f);
        let g = BivariatePolynomial::from_table(&g);
        prop_assume!(f.deg_y().unwrap_or(0) >= 1 && g.deg_y().unwrap_or(0) >= 1);
        let r = bivariate_resultant_y(&f, &g).unwrap();
        let lr = if r.is_zero() { BigInt::zero() } else { r.norms().unwrap().length };
        let bound = f.length().pow(g.deg_y().unwrap() as u32) * g.length().pow(f.deg_y().unwrap() as u32);
        prop_assert!(lr <= bound);
    }

    #[test]
    fn resultant_matches_sylvester_oracle(
        f in proptest::collection::vec(-20i64..=20, 2..6),
        g in proptest::collection::vec(-20i64..=20, 2..6),
    ) {
        let fp = IntPolynomial::from_i64s(&f);
        let gp = IntPolynomial::from_i64s(&g);
        prop_assume!(fp.deg() >= 1 && gp.deg() >= 1);
        let fb: Vec<BigInt> = fp.coeffs().to_vec();
        let gb: Vec<BigInt> = gp.coeffs().to_vec();
        prop_assert_eq!(resultant(&fp, &gp).unwrap(), common::det(common::sylvester(&fb, &gb)));
    }

    #[test]
    fn mahler_bounds_and_symmetries(c in proptest::collection::vec(-12i64..=12, 2..6)) {
        let f = IntPolynomial::from_i64s(&c);
        prop_assume!(f.deg() >= 1 && !f.coeff(0).is_zero() && is_squarefree(&f));
        let m = mahler_enclosure(&f, 48).unwrap();
        let norms = f.norms().unwrap();
        let d = f.deg();
        let h = BigRational::from_integer(norms.height.clone());
        let l = BigRational::from_integer(norms.length.clone());
        let two_d = BigRational::from_integer(BigInt::one() << d);
        // L(f) <= 2^d M(f) and M(f) <= L(f)
        prop_assert!(m.lo <= l);
        prop_assert!(h <= &two_d * &m.hi && l <= &two_d * &m.hi);
        // M is invariant under x -> 1/x and x -> -x
        for g in [f.reciprocal(), f.negate_variable()] {
            let mg = mahler_enclosure(&g, 48).unwrap();
            prop_assert!(mg.lo <= m.hi && m.lo <= mg.hi);
        }
    }

    #[test]
    fn exp_ball_is_multiplicative(a in rational(), b in rational()) {
        let a = a / q(100, 1);
        let b = b / q(100, 1);
        let p = 128;
        let ea = RealBall::from_rational(&a, p).exp().unwrap();
        let eb = RealBall::from_rational(&b, p).exp().unwrap();
        let eab = RealBall::from_rational(&(&a + &b), p).exp().unwrap();
        let prod = ea.mul(&eb);
        prop_assert!(prod.lower() <= eab.upper() && eab.lower() <= prod.upper());
    }

    #[test]
    fn sign_of_exponential_difference(a in rational(), b in rational()) {
        prop_assume!(a != b);
        let a = a / q(50, 1);
        let b = b / q(50, 1);
        let form = LinearForm::new(vec![
            (AlgebraicNumber::from_rational(&a), AlgebraicNumber::from_int(1)),
            (AlgebraicNumber::from_rational(&b), AlgebraicNumber::from_int(-1)),
        ]).unwrap();
        let cert = decide_sign(&form, 4096).unwrap();
        let want = if a > b { Verdict::PositiveReal } else { Verdict::NegativeReal };
        prop_assert_eq!(cert.verdict, want);
    }

    #[test]
    fn algebraic_json_round_trip(c in proptest::collection::vec(-9i64..=9, 3..5)) {
        let f = IntPolynomial::from_i64s(&c);
        prop_assume!(f.deg() >= 2);
        if let Ok(roots) = AlgebraicNumber::roots_of(&f) {
            for a in roots {
                let b = AlgebraicNumber::from_json(&a.to_json()).unwrap();
                prop_assert!(alg_equal(&a, &b).unwrap());
                let h = weil_height_enclosure(&a, 32).unwrap();
                prop_assert!(!h.lo.is_negative());
            }
        }
    }
}

#[test]
fn inverse_map_preserves_height() {
    let set = enumerate_algnums(2, &q(2, 1), false).unwrap();
    for a in set.members.iter().filter(|a| !a.is_zero()) {
        let g = a.minpoly().reciprocal();
        let inv = AlgebraicNumber::roots_of(&g).unwrap();
        let (ha, hg) = (
            mahler_enclosure(a.minpoly(), 64).unwrap(),
            mahler_enclosure(&g, 64).unwrap(),
        );
        assert!(ha.lo <= hg.hi && hg.lo <= ha.hi);
        assert!(inv.iter().all(|b| b.degree() == a.degree()));
    }
}
