//! Sparse polynomials over exact rationals, complex doubles, and the lifted
//! domain `Σ a t^w`, together with weights, initial forms and evaluation.

mod lifted;
mod monomial;
mod parse;
mod poly;
mod render;

pub use lifted::{
    evaluate_family, initial_form, lift_rational, min_weight, monomial_value, rational_to_complex, specialize,
    t_initial_form, term_weight, to_complex, ComplexPoly, LiftedCoeff, LiftedPoly, RationalPoly,
};
pub use monomial::ExponentVector;
pub use parse::parse_poly;
pub use poly::{Coefficient, SparsePoly};
pub use render::{render_complex, render_complex_number, render_rational};

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

/// A weight vector `ω ∈ ℚ^N`.
pub type WeightVector = Vec<Rational>;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
