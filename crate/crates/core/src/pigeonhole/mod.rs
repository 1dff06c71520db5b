//! Enumeration of algebraic numbers of bounded degree and height, and a
//! grid-bucketing search for two distinct short linear forms whose values
//! are close.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebraic::{alg_equal, combine_linear, mahler_enclosure, AlgebraicNumber, RealEnclosure};
use crate::ball::{rational_to_decimal, sqrt_bounds, ComplexBall, RealBall};
use crate::certified_eval::{decide_sign, LinearForm, Verdict, DEFAULT_MAX_BITS};
use crate::error::{domain, Error, Result};
use crate::exact_poly::{is_irreducible, IntPolynomial};
use crate::explicit_bounds::{main_result_b, HeightInput, MainResultB};
use crate::json::{int_value, rational_value};

/// Precision at which an undecided height or modulus comparison is settled
/// by inclusion.
const BOUNDARY_BITS: u32 = 256;
const CHUNK: usize = 4096;

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// Algebraic numbers of degree exactly `degree` with `M(alpha)^2 <= mahler_sq_cap`.
#[derive(Clone, Debug)]
pub struct AlgNumSet {
    pub degree: usize,
    /// Multiplicative height cap `H` when it is rational.
    pub mult_height_cap: Option<BigRational>,
    /// `H^(2 degree)`, the cap on the squared Mahler measure.
    pub mahler_sq_cap: BigRational,
    pub unit_disk_only: bool,
    pub members: Vec<AlgebraicNumber>,
    /// Members admitted because a height or modulus test stayed undecided.
    pub straddling: usize,
    pub polys_scanned: u64,
}

impl AlgNumSet {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "mult_height_cap": self.mult_height_cap.as_ref().map(rational_value),
            "mahler_sq_cap": rational_value(&self.mahler_sq_cap),
            "unit_disk_only": self.unit_disk_only,
            "count": self.count(),
            "straddling": self.straddling,
            "polys_scanned": self.polys_scanned,
            "members": self.members.iter().map(AlgebraicNumber::to_json).collect::<Vec<_>>(),
        })
    }
}

/// All algebraic numbers of degree `d` and multiplicative height at most `h_mult`.
pub fn enumerate_algnums(d: usize, h_mult: &BigRational, unit_disk_only: bool) -> Result<AlgNumSet> {
    if *h_mult < BigRational::one() {
        return domain("height cap must be at least 1");
    }
    let cap = num_traits::pow(h_mult.clone(), 2 * d);
    let mut set = enumerate_with_cap(d, &cap, unit_disk_only, u64::MAX)?;
    set.mult_height_cap = Some(h_mult.clone());
    Ok(set)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

// |a_i| <= C(d, i) M(f) <= C(d, i) sqrt(cap)
fn coefficient_bounds(d: usize, cap: &BigRational) -> Vec<BigInt> {
    (0..=d)
        .map(|i| {
            let c = binomial(d, i);
            let q = cap * BigRational::from_integer(&c * &c);
            q.floor().to_integer().sqrt()
        })
        .collect()
}

fn fast_irreducible(f: &IntPolynomial) -> bool {
    match f.deg() {
        1 => true,
        2 => {
            let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
            let disc = &b * &b - BigInt::from(4) * a * c;
            disc.is_negative() || {
                let s = disc.sqrt();
                &s * &s != disc
            }
        }
        _ => is_irreducible(f),
    }
}

enum Cmp {
    Below,
    Above,
    Straddle,
}

fn mahler_vs_cap(f: &IntPolynomial, cap: &BigRational) -> Result<Cmp> {
    for bits in [32, BOUNDARY_BITS] {
        let m = mahler_enclosure(f, bits)?;
        if &m.hi * &m.hi <= *cap {
            return Ok(Cmp::Below);
        }
        if &m.lo * &m.lo > *cap {
            return Ok(Cmp::Above);
        }
    }
    Ok(Cmp::Straddle)
}

fn modulus_vs_one(a: &AlgebraicNumber) -> Result<Cmp> {
    let one = BigRational::one();
    if let Some(q) = a.as_rational() {
        return Ok(if q.abs() <= one { Cmp::Below } else { Cmp::Above });
    }
    let f = a.minpoly();
    if f.deg() == 2 && !a.is_real() {
        // conjugate pair: |alpha|^2 = c / a
        let m2 = BigRational::new(f.coeff(0), f.coeff(2));
        return Ok(if m2 <= one { Cmp::Below } else { Cmp::Above });
    }
    let mut cur = a.clone();
    for bits in [0, BOUNDARY_BITS] {
        if bits > 0 {
            cur = cur.refine(&pow2_inv(bits))?;
        }
        let (lo, hi) = cur.rect().abs_sq_bounds();
        if hi <= one {
            return Ok(Cmp::Below);
        }
        if lo > one {
            return Ok(Cmp::Above);
        }
    }
    Ok(Cmp::Straddle)
}

// Members contributed by one polynomial, with the number of straddling decisions.
fn members_of(f: &IntPolynomial, cap: &BigRational, unit_disk: bool) -> Result<(Vec<AlgebraicNumber>, usize)> {
    if f.coeff(0).is_zero() && f.deg() > 1 {
        return Ok((Vec::new(), 0));
    }
    if !f.is_primitive() || !fast_irreducible(f) {
        return Ok((Vec::new(), 0));
    }
    let mut straddle = 0;
    match mahler_vs_cap(f, cap)? {
        Cmp::Above => return Ok((Vec::new(), 0)),
        Cmp::Below => {}
        Cmp::Straddle => {
            log::info!("height of {f} straddles the cap; included");
            straddle += 1;
        }
    }
    let mut out = Vec::new();
    for a in AlgebraicNumber::roots_unchecked(f)? {
        if unit_disk {
            match modulus_vs_one(&a)? {
                Cmp::Above => continue,
                Cmp::Below => {}
                Cmp::Straddle => {
                    log::info!("root of {f} straddles the unit circle; included");
                    straddle += 1;
                }
            }
        }
        out.push(a);
    }
    Ok((out, straddle))
}

/// Enumerates degree-`d` algebraic numbers with `M(alpha)^2 <= cap` by
/// scanning primitive irreducible integer polynomials with positive leading
/// coefficient. Fails with [`Error::ResourceCap`] when more than `max_polys`
/// polynomials would be scanned.
pub fn enumerate_with_cap(d: usize, cap: &BigRational, unit_disk_only: bool, max_polys: u64) -> Result<AlgNumSet> {
    if d == 0 {
        return domain("degree must be at least 1");
    }
    if *cap < BigRational::one() {
        return domain("Mahler measure cap must be at least 1");
    }
    let bounds = coefficient_bounds(d, cap);
    let mut total = bounds[d].clone();
    for b in &bounds[..d] {
        total *= BigInt::from(2) * b + 1;
    }
    let total_u = total.to_u64().filter(|&n| n <= max_polys);
    let Some(scanned) = total_u else {
        return Err(Error::ResourceCap(format!(
            "enumeration of degree {d} needs {total} polynomials (cap {max_polys}); nothing enumerated"
        )));
    };

    // Outer loop over (a_d, a_(d-1)) in parallel, inner loops sequential.
    let top = bounds[d].to_i64().unwrap_or(0);
    let next = bounds[d - 1].to_i64().unwrap_or(0);
    let prefixes: Vec<(i64, i64)> = (1..=top)
        .flat_map(|a| (-next..=next).map(move |b| (a, b)))
        .collect();
    let low: Vec<i64> = bounds[..d - 1].iter().map(|b| b.to_i64().unwrap_or(0)).collect();
    let parts: Vec<(Vec<AlgebraicNumber>, usize)> = prefixes
        .par_iter()
        .map(|&(a, b)| {
            let mut members = Vec::new();
            let mut straddle = 0;
            let mut coeffs: Vec<i64> = low.iter().map(|&l| -l).collect();
            loop {
                let mut all = coeffs.clone();
                all.push(b);
                all.push(a);
                let f = IntPolynomial::from_i64s(&all);
                let (m, s) = members_of(&f, cap, unit_disk_only)?;
                members.extend(m);
                straddle += s;
                // odometer over a_0..a_(d-2)
                let mut i = 0;
                loop {
                    if i == coeffs.len() {
                        return Ok((members, straddle));
                    }
                    if coeffs[i] < low[i] {
                        coeffs[i] += 1;
                        break;
                    }
                    coeffs[i] = -low[i];
                    i += 1;
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut members = Vec::new();
    let mut straddling = 0;
    for (m, s) in parts {
        members.extend(m);
        straddling += s;
    }
    Ok(AlgNumSet {
        degree: d,
        mult_height_cap: None,
        mahler_sq_cap: cap.clone(),
        unit_disk_only,
        members,
        straddling,
        polys_scanned: scanned,
    })
}

/// `|Lambda| = sum_(k=1)^ell N2^k C(N1, k)` and the comparison with
/// `(N1 N2 / ell)^ell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaCount {
    pub total: BigInt,
    pub lower_bound: BigRational,
    /// `total > lower_bound`, reported when `N1 >= ell + 1`.
    pub exceeds_bound: Option<bool>,
}

pub fn count_lambda(n1: u64, n2: u64, ell: u64) -> LambdaCount {
    let mut total = BigInt::zero();
    for k in 1..=ell.min(n1) {
        total += num_traits::pow(BigInt::from(n2), k as usize) * binomial(n1 as usize, k as usize);
    }
    let lower_bound = if ell == 0 {
        BigRational::one()
    } else {
        num_traits::pow(BigRational::new((n1 * n2).into(), ell.into()), ell as usize)
    };
    let exceeds_bound = (ell >= 1 && n1 > ell).then(|| BigRational::from_integer(total.clone()) > lower_bound);
    LambdaCount {
        total,
        lower_bound,
        exceeds_bound,
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub m: u64,
    pub d: u64,
    pub h: HeightInput,
    /// `floor(m / 2)`.
    pub ell: u64,
    pub d1: usize,
    /// `floor(sqrt d)`.
    pub d2: usize,
    /// `H1^(2 d1)` with `H1 = e^h`.
    pub h1_mahler_sq: BigRational,
    /// `H2^(2 d2) = (H / 2)^d2` with `H2 = sqrt(H / 2)`.
    pub h2_mahler_sq: BigRational,
    /// User cap on the grid size `t`.
    pub grid_t_cap: Option<u64>,
    pub eval_precision_bits: u32,
    pub max_bits: u32,
    pub max_polys: u64,
    pub max_forms: u64,
}

impl SearchConfig {
    pub fn new(m: u64, d: u64, h: &HeightInput) -> Result<Self> {
        if m < 2 {
            return domain("the search needs m >= 2");
        }
        if d == 0 {
            return domain("d must be at least 1");
        }
        // H = e^h, exact for h = ln N, else a rational upper bound
        let big_h = match h {
            HeightInput::LnOf(n) => n.clone(),
            HeightInput::Rational(q) => RealBall::from_rational(q, BOUNDARY_BITS).exp()?.upper(),
        };
        let d1 = d as usize;
        let d2 = d.sqrt() as usize;
        let h1 = num_traits::pow(big_h.clone(), 2 * d1);
        let h2 = num_traits::pow(big_h / rat(2), d2);
        if h2 < BigRational::one() {
            return domain("H / 2 < 1 leaves no nonzero coefficients");
        }
        Ok(SearchConfig {
            m,
            d,
            h: h.clone(),
            ell: m / 2,
            d1,
            d2,
            h1_mahler_sq: h1,
            h2_mahler_sq: h2,
            grid_t_cap: None,
            eval_precision_bits: 64,
            max_bits: DEFAULT_MAX_BITS,
            max_polys: 5_000_000,
            max_forms: 5_000_000,
        })
    }

    pub fn with_grid_cap(mut self, t: u64) -> Self {
        self.grid_t_cap = Some(t);
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "d": self.d,
            "h": self.h.to_string(),
            "ell": self.ell,
            "d1": self.d1,
            "d2": self.d2,
            "h1_mahler_sq": rational_value(&self.h1_mahler_sq),
            "h2_mahler_sq": rational_value(&self.h2_mahler_sq),
            "grid_t_cap": self.grid_t_cap,
            "eval_precision_bits": self.eval_precision_bits,
        })
    }
}

#[derive(Clone, Debug)]
pub struct CollisionResult {
    pub lambda1: LinearForm,
    pub lambda2: LinearForm,
    pub lambda1_ball: ComplexBall,
    pub lambda2_ball: ComplexBall,
    /// `lambda1 - lambda2`.
    pub difference: LinearForm,
    pub value_enclosure: ComplexBall,
    pub verdict: Verdict,
    pub cell_index: (u64, u64),
    pub t: u64,
    pub t_default: u64,
    pub n1: usize,
    pub n2: usize,
    pub lambda_count: LambdaCount,
    /// `e~ m / t` with `e~ >= e` rational.
    pub cell_width: BigRational,
    /// `sqrt2~ e~ m / t`.
    pub grid_bound: BigRational,
    /// Twice the larger evaluation radius.
    pub slack: BigRational,
    /// Upper bound of `|lambda1 - lambda2|` from the refined enclosure.
    pub abs_upper: BigRational,
    pub within_grid_bound: bool,
    pub precision_bits: u32,
    pub forms_scanned: u64,
    pub degenerate_skipped: usize,
    pub straddling: usize,
}

impl CollisionResult {
    pub fn t_capped(&self) -> bool {
        self.t < self.t_default
    }

    pub fn to_json(&self) -> Value {
        let ball = |z: &ComplexBall| {
            json!({
                "re": [rational_to_decimal(&z.re.lower(), 40), rational_to_decimal(&z.re.upper(), 40)],
                "im": [rational_to_decimal(&z.im.lower(), 40), rational_to_decimal(&z.im.upper(), 40)],
            })
        };
        json!({
            "lambda1": self.lambda1.to_json(),
            "lambda2": self.lambda2.to_json(),
            "lambda1_enclosure": ball(&self.lambda1_ball),
            "lambda2_enclosure": ball(&self.lambda2_ball),
            "difference": self.difference.to_json(),
            "value_enclosure": ball(&self.value_enclosure),
            "verdict": self.verdict.as_str(),
            "cell_index": [self.cell_index.0, self.cell_index.1],
            "t": self.t,
            "t_default": self.t_default,
            "t_capped": self.t_capped(),
            "n1": self.n1,
            "n2": self.n2,
            "lambda_count": int_value(&self.lambda_count.total),
            "cell_width": rational_to_decimal(&self.cell_width, 30),
            "grid_bound": rational_to_decimal(&self.grid_bound, 30),
            "slack": rational_to_decimal(&self.slack, 30),
            "abs_upper": rational_to_decimal(&self.abs_upper, 30),
            "within_grid_bound": self.within_grid_bound,
            "precision_bits": self.precision_bits,
            "forms_scanned": self.forms_scanned,
            "degenerate_skipped": self.degenerate_skipped,
            "straddling": self.straddling,
        })
    }
}

// Forms with 1..=ell terms in canonical order: by term count, then
// lexicographic exponent index set, then lexicographic coefficient tuple.
struct FormIter {
    n1: usize,
    n2: usize,
    ell: usize,
    k: usize,
    alphas: Vec<usize>,
    betas: Vec<usize>,
    done: bool,
}

impl FormIter {
    fn new(n1: usize, n2: usize, ell: usize) -> Self {
        let done = n1 == 0 || n2 == 0 || ell == 0;
        FormIter {
            n1,
            n2,
            ell: ell.min(n1),
            k: 1,
            alphas: vec![0],
            betas: vec![0],
            done,
        }
    }

    fn advance(&mut self) {
        let k = self.k;
        for i in (0..k).rev() {
            if self.betas[i] + 1 < self.n2 {
                self.betas[i] += 1;
                self.betas[i + 1..].iter_mut().for_each(|b| *b = 0);
                return;
            }
        }
        self.betas = vec![0; k];
        for i in (0..k).rev() {
            if self.alphas[i] < self.n1 - k + i {
                self.alphas[i] += 1;
                for j in i + 1..k {
                    self.alphas[j] = self.alphas[j - 1] + 1;
                }
                return;
            }
        }
        if k == self.ell {
            self.done = true;
            return;
        }
        self.k += 1;
        self.alphas = (0..self.k).collect();
        self.betas = vec![0; self.k];
    }
}

impl Iterator for FormIter {
    type Item = (Vec<usize>, Vec<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = (self.alphas.clone(), self.betas.clone());
        self.advance();
        Some(item)
    }
}

fn cell_of(x: &BigRational, half: &BigRational, w: &BigRational, t: u64) -> u64 {
    let i = ((x + half) / w).floor().to_integer();
    if i.is_negative() {
        0
    } else {
        i.to_u64().unwrap_or(u64::MAX).min(t - 1)
    }
}

// `lambda1 - lambda2`, or None when the coefficients cancel everywhere.
fn formal_difference(
    a: &(Vec<usize>, Vec<usize>),
    b: &(Vec<usize>, Vec<usize>),
    alphas: &[AlgebraicNumber],
    betas: &[AlgebraicNumber],
) -> Result<Option<LinearForm>> {
    let mut coef: Vec<(usize, Vec<AlgebraicNumber>, Vec<AlgebraicNumber>)> = Vec::new();
    let mut put = |idx: usize, beta: &AlgebraicNumber, first: bool| {
        let pos = match coef.iter().position(|(i, _, _)| *i == idx) {
            Some(p) => p,
            None => {
                coef.push((idx, Vec::new(), Vec::new()));
                coef.len() - 1
            }
        };
        if first {
            coef[pos].1.push(beta.clone());
        } else {
            coef[pos].2.push(beta.clone());
        }
    };
    for (ai, bi) in a.0.iter().zip(&a.1) {
        put(*ai, &betas[*bi], true);
    }
    for (ai, bi) in b.0.iter().zip(&b.1) {
        put(*ai, &betas[*bi], false);
    }
    coef.sort_by_key(|(i, _, _)| *i);
    let mut terms = Vec::new();
    for (idx, p, q) in coef {
        let beta = match (p.first(), q.first()) {
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.neg(),
            (Some(x), Some(y)) => {
                if alg_equal(x, y)? {
                    continue;
                }
                combine_linear(x, y, &BigInt::from(-1))?
            }
            (None, None) => continue,
        };
        terms.push((alphas[idx].clone(), beta));
    }
    if terms.is_empty() {
        return Ok(None);
    }
    LinearForm::new(terms).map(Some)
}

fn form_of(f: &(Vec<usize>, Vec<usize>), alphas: &[AlgebraicNumber], betas: &[AlgebraicNumber]) -> Result<LinearForm> {
    LinearForm::new(
        f.0.iter()
            .zip(&f.1)
            .map(|(a, b)| (alphas[*a].clone(), betas[*b].clone()))
            .collect(),
    )
}

/// Enumerates both height classes, buckets the forms of `Lambda` on a
/// `t x t` grid over `[-e m/2, e m/2]^2` and returns the first collision in
/// canonical order.
pub fn run_search(cfg: &SearchConfig) -> Result<CollisionResult> {
    let aset = enumerate_with_cap(cfg.d1, &cfg.h1_mahler_sq, true, cfg.max_polys)?;
    let bset = enumerate_with_cap(cfg.d2, &cfg.h2_mahler_sq, true, cfg.max_polys)?;
    let alphas = aset.members;
    let betas: Vec<AlgebraicNumber> = bset.members.into_iter().filter(|b| !b.is_zero()).collect();
    if alphas.is_empty() || betas.is_empty() {
        return domain("empty candidate set");
    }
    let (n1, n2) = (alphas.len(), betas.len());
    let count = count_lambda(n1 as u64, n2 as u64, cfg.ell);
    let t_default = count.lower_bound.floor().to_integer().sqrt().to_u64().unwrap_or(u64::MAX).max(1);
    let t = cfg.grid_t_cap.map_or(t_default, |c| c.min(t_default)).max(1);
    let need = BigInt::from(t) * BigInt::from(t) + 1;
    if count.total < need {
        return domain(format!("insufficient candidates: |Lambda| = {} < t^2 + 1 = {need}", count.total));
    }
    if need > BigInt::from(cfg.max_forms) {
        return Err(Error::ResourceCap(format!("t = {t} needs {need} forms (cap {})", cfg.max_forms)));
    }

    let e_up = RealBall::from_int(1, 160).exp()?.upper();
    let m = rat(cfg.m);
    let half = &e_up * &m / rat(2);
    let w = &e_up * &m / rat(t);
    let quarter = &w / rat(4);

    let ctx = Grid { half, w, quarter, t };
    let mut prec = cfg.eval_precision_bits.max(32);
    loop {
        if let Some(mut res) = scan(cfg, &alphas, &betas, &ctx, prec)? {
            res.t_default = t_default;
            res.lambda_count = count;
            res.straddling = aset.straddling + bset.straddling;
            return Ok(res);
        }
        if prec >= cfg.max_bits {
            return Err(Error::ResourceCap(format!("evaluation precision cap {} bits reached", cfg.max_bits)));
        }
        prec = (prec * 2).min(cfg.max_bits);
    }
}

struct Grid {
    half: BigRational,
    w: BigRational,
    quarter: BigRational,
    t: u64,
}

// None when some enclosure is wider than a quarter cell at `prec`.
fn scan(
    cfg: &SearchConfig,
    alphas: &[AlgebraicNumber],
    betas: &[AlgebraicNumber],
    g: &Grid,
    prec: u32,
) -> Result<Option<CollisionResult>> {
    let (n1, n2) = (alphas.len(), betas.len());
    let r = pow2_inv(prec);
    let ea: Vec<ComplexBall> = alphas
        .par_iter()
        .map(|a| a.refine(&r)?.rect().to_ball(prec + 32).exp())
        .collect::<Result<_>>()?;
    let bb: Vec<ComplexBall> = betas
        .par_iter()
        .map(|b| Ok(b.refine(&r)?.rect().to_ball(prec + 32)))
        .collect::<Result<_>>()?;
    let mut forms: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut balls: Vec<ComplexBall> = Vec::new();
    let mut cells: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    let mut degenerate = 0;
    let mut iter = FormIter::new(n1, n2, cfg.ell as usize);
    loop {
        let chunk: Vec<_> = iter.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return domain("no collision found among the enumerated forms");
        }
        let values: Vec<ComplexBall> = chunk
            .par_iter()
            .map(|(ai, bi)| {
                let mut acc = ComplexBall::real(RealBall::zero(prec + 32));
                for (a, b) in ai.iter().zip(bi) {
                    acc = acc.add(&bb[*b].mul(&ea[*a]));
                }
                acc
            })
            .collect();
        for (f, z) in chunk.into_iter().zip(values) {
            if z.radius() >= g.quarter {
                return Ok(None);
            }
            let key = (
                cell_of(&z.re.mid_rational(), &g.half, &g.w, g.t),
                cell_of(&z.im.mid_rational(), &g.half, &g.w, g.t),
            );
            let idx = forms.len();
            forms.push(f);
            balls.push(z);
            let slot = cells.entry(key).or_default();
            for &j in slot.iter() {
                let Some(diff) = formal_difference(&forms[j], &forms[idx], &alphas, &betas)? else {
                    degenerate += 1;
                    log::info!("forms {j} and {idx} are formally equal; skipped");
                    continue;
                };
                let cert = decide_sign(&diff, cfg.max_bits)?;
                let r = balls[j].radius().max(balls[idx].radius());
                let slack = rat(2) * r;
                let (_, sqrt2_up) = sqrt_bounds(&rat(2), 64);
                let grid_bound = sqrt2_up * &g.w;
                let (_, hi2) = cert.lambda.abs_sq_bounds();
                let (_, abs_upper) = sqrt_bounds(&hi2, 64);
                let lim = &grid_bound + &slack;
                let within = hi2 <= &lim * &lim;
                return Ok(Some(CollisionResult {
                    lambda1: form_of(&forms[j], &alphas, &betas)?,
                    lambda2: form_of(&forms[idx], &alphas, &betas)?,
                    lambda1_ball: balls[j].clone(),
                    lambda2_ball: balls[idx].clone(),
                    difference: diff,
                    value_enclosure: cert.lambda,
                    verdict: cert.verdict,
                    cell_index: key,
                    t: g.t,
                    t_default: g.t,
                    n1,
                    n2,
                    lambda_count: count_lambda(n1 as u64, n2 as u64, cfg.ell),
                    cell_width: g.w.clone(),
                    grid_bound,
                    slack,
                    abs_upper,
                    within_grid_bound: within,
                    precision_bits: prec,
                    forms_scanned: (idx + 1) as u64,
                    degenerate_skipped: degenerate,
                    straddling: 0,
                }));
            }
            slot.push(idx);
        }
    }
}

/// Measured `ln|lambda1 - lambda2|` against the grid bound and, when it
/// applies, the closed-form upper bound.
#[derive(Clone, Debug)]
pub struct UpperBoundReport {
    pub ln_abs: RealEnclosure,
    /// Upper bound of `ln(grid_bound + slack)`.
    pub grid_ln_bound: BigRational,
    pub grid_ok: bool,
    pub theorem: MainResultB,
    /// The closed form applies: validity holds and `t` was not capped.
    pub theorem_applicable: bool,
    pub theorem_ok: Option<bool>,
}

impl UpperBoundReport {
    pub fn cited(&self) -> &'static str {
        if self.theorem_applicable {
            "main_b"
        } else {
            "grid"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ln_abs": [rational_to_decimal(&self.ln_abs.lo, 30), rational_to_decimal(&self.ln_abs.hi, 30)],
            "grid_ln_bound": rational_to_decimal(&self.grid_ln_bound, 30),
            "grid_ok": self.grid_ok,
            "main_b": self.theorem.to_json(),
            "theorem_applicable": self.theorem_applicable,
            "theorem_ok": self.theorem_ok,
            "cited": self.cited(),
        })
    }
}

pub fn verify_upper_bound(res: &CollisionResult, cfg: &SearchConfig) -> Result<UpperBoundReport> {
    let theorem = main_result_b(cfg.m, cfg.d, &cfg.h)?;
    let (lo2, hi2) = res.value_enclosure.abs_sq_bounds();
    if !lo2.is_positive() {
        return Err(Error::InsufficientPrecision("difference enclosure touches zero".into()));
    }
    let p = res.value_enclosure.prec() + 16;
    let ln_abs = RealBall::from_interval(&lo2, &hi2, p)
        .ln()?
        .div_int(&BigInt::from(2))
        .to_enclosure();
    let grid_ln_bound = RealBall::from_rational(&(&res.grid_bound + &res.slack), 128).ln()?.upper();
    let grid_ok = ln_abs.hi <= grid_ln_bound;
    let theorem_applicable = theorem.valid && !res.t_capped();
    let theorem_ok = theorem_applicable.then(|| ln_abs.hi <= theorem.ln_bound.upper());
    Ok(UpperBoundReport {
        ln_abs,
        grid_ln_bound,
        grid_ok,
        theorem,
        theorem_applicable,
        theorem_ok,
    })
}
