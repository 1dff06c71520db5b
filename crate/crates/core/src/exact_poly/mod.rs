//! Exact arithmetic on univariate and bivariate integer polynomials.

mod bivariate;
mod factor;
mod int_poly;
mod rat_poly;
mod resultant;

pub use bivariate::{bivariate_resultant_y, BivariatePolynomial};
pub use factor::{factor_over_integers, is_irreducible, Factorization};
pub use int_poly::{poly_mul, poly_norms, IntPolynomial, PolyNorms};
pub use rat_poly::RatPolynomial;
pub(crate) use rat_poly::{qadd, qmul, qrem, qscale, qsub, qtrim, qxgcd};
pub use resultant::{
    discriminant, is_squarefree, resultant, root_separation_sq_lower, squarefree_decomposition,
    subresultant_gcd, sylvester_resultant,
};
