//! Explicit lower bounds for `|beta_1 e^alpha_1 + ... + beta_m e^alpha_m|`
//! and the pigeonhole upper bound, evaluated with certified rounding.

mod exp_poly;
mod main_a;
mod main_b;
mod tower;

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

pub use exp_poly::{build_exp_polynomial, ExpPolynomial};
pub use main_a::{chi_prime_lower, main_result_a, sert_bound, worstcase_sert_params, BoundParamsA, SertParams};
pub use main_b::{main_result_b, MainResultB};
pub use tower::{TowerReal, MANTISSA_BITS, MAX_LEVEL};

use crate::ball::RealBall;
use crate::error::{Error, Result};
use crate::json::{parse_rational, rational_to_string};

/// A height parameter: either a nonnegative rational or `ln N` for a
/// rational `N >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeightInput {
    Rational(BigRational),
    LnOf(BigRational),
}

impl HeightInput {
    /// Accepts `"3/2"`, `"0.5"`, `"ln 288"` and `"ln(288)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let h = if let Some(rest) = t.strip_prefix("ln") {
            let rest = rest.trim();
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .unwrap_or(rest);
            let n = parse_rational(inner)?;
            if n < BigRational::from_integer(1.into()) {
                return Err(Error::InvalidInput(format!("height {s:?}: need N >= 1 in ln N")));
            }
            HeightInput::LnOf(n)
        } else {
            let q = parse_rational(t)?;
            if q.is_negative() {
                return Err(Error::InvalidInput(format!("height {s:?} is negative")));
            }
            HeightInput::Rational(q)
        };
        Ok(h)
    }

    /// Ball enclosing the height.
    pub fn ball(&self, prec: u32) -> Result<RealBall> {
        match self {
            HeightInput::Rational(q) => Ok(RealBall::from_rational(q, prec)),
            HeightInput::LnOf(n) => RealBall::from_rational(n, prec + 8).ln(),
        }
    }

    /// Rational upper bound, exact for rational input.
    pub fn upper(&self) -> Result<BigRational> {
        match self {
            HeightInput::Rational(q) => Ok(q.clone()),
            HeightInput::LnOf(_) => Ok(self.ball(192)?.upper()),
        }
    }
}

impl fmt::Display for HeightInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightInput::Rational(q) => write!(f, "{}", rational_to_string(q)),
            HeightInput::LnOf(n) => write!(f, "ln {}", rational_to_string(n)),
        }
    }
}
