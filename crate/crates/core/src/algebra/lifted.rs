use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::{ExponentVector, Rational, SparsePoly};
use crate::error::{Error, Result};

/// A coefficient `Σ a_w t^w` with complex `a_w` and rational exponents `w`.
///
/// Members of a lifted family carry a single such term per monomial; sums
/// are allowed so that arbitrary leading-term computations can be written
/// down.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct LiftedCoeff {
    terms: BTreeMap<Rational, Complex64>,
}

impl LiftedCoeff {
    pub fn single(a: Complex64, t_exponent: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(t_exponent, a);
        }
        LiftedCoeff { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Complex64, Rational)>>(terms: I) -> Self {
        let mut out = LiftedCoeff::default();
        for (a, w) in terms {
            out = out + LiftedCoeff::single(a, w);
        }
        out
    }

    /// Lowest t-exponent and its coefficient.
    pub fn leading(&self) -> Option<(&Rational, &Complex64)> {
        self.terms.iter().next()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Complex64)> {
        self.terms.iter()
    }

    /// Value at a real `t > 0` on the positive real branch.
    pub fn at(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(w, a)| a * t.powf(w.to_f64().unwrap_or(f64::NAN)))
            .sum()
    }
}

impl Zero for LiftedCoeff {
    fn zero() -> Self {
        LiftedCoeff::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for LiftedCoeff {
    type Output = LiftedCoeff;
    fn add(mut self, rhs: LiftedCoeff) -> LiftedCoeff {
        for (w, a) in rhs.terms {
            let sum = self.terms.get(&w).copied().unwrap_or_default() + a;
            if sum.is_zero() {
                self.terms.remove(&w);
            } else {
                self.terms.insert(w, sum);
            }
        }
        self
    }
}

impl Mul for LiftedCoeff {
    type Output = LiftedCoeff;
    fn mul(self, rhs: LiftedCoeff) -> LiftedCoeff {
        let mut out = LiftedCoeff::default();
        for (wa, a) in &self.terms {
            for (wb, b) in &rhs.terms {
                out = out + LiftedCoeff::single(a * b, wa + wb);
            }
        }
        out
    }
}

impl Neg for LiftedCoeff {
    type Output = LiftedCoeff;
    fn neg(mut self) -> LiftedCoeff {
        for a in self.terms.values_mut() {
            *a = -*a;
        }
        self
    }
}

pub type LiftedPoly = SparsePoly<LiftedCoeff>;
pub type ComplexPoly = SparsePoly<Complex64>;
pub type RationalPoly = SparsePoly<Rational>;

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Weight `w + ω·α` of the term `t^w x^α`.
pub fn term_weight(exponent: &ExponentVector, t_exponent: &Rational, weight: &[Rational]) -> Result<Rational> {
    check_dims(exponent.len(), weight.len())?;
    Ok(t_exponent + exponent.dot(weight))
}

/// Minimal term weight of a lifted polynomial, `None` for the zero polynomial.
pub fn min_weight(f: &LiftedPoly, weight: &[Rational]) -> Result<Option<Rational>> {
    check_dims(f.nvars(), weight.len())?;
    let mut best: Option<Rational> = None;
    for (e, c) in f.terms() {
        let Some((w, _)) = c.leading() else { continue };
        let v = term_weight(e, w, weight)?;
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    Ok(best)
}

/// `tinit_ω(f)`: the terms of minimal weight (t has weight 1, x has weight
/// ω), with t then set to 1.
pub fn t_initial_form(f: &LiftedPoly, weight: &[Rational]) -> Result<ComplexPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let min = min_weight(f, weight)?.ok_or(Error::ZeroPolynomial)?;
    let mut out = ComplexPoly::zero(f.nvars());
    for (e, c) in f.terms() {
        for (w, a) in c.terms() {
            if term_weight(e, w, weight)? == min {
                out.add_term(e.clone(), *a);
            }
        }
    }
    Ok(out)
}

/// Classical initial form `init_ω(g)` of a polynomial with trivially valued
/// coefficients.
pub fn initial_form<K: super::Coefficient>(g: &SparsePoly<K>, weight: &[Rational]) -> Result<SparsePoly<K>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_dims(g.nvars(), weight.len())?;
    let min = g.terms().map(|(e, _)| e.dot(weight)).min().expect("nonzero");
    Ok(g.filter_terms(|e, _| e.dot(weight) == min))
}

/// Lifts a rational polynomial into the family domain with t-exponent 0.
pub fn lift_rational(g: &RationalPoly) -> LiftedPoly {
    g.map_coeffs(|c| LiftedCoeff::single(rational_to_complex(c), Rational::zero()))
}

pub fn rational_to_complex(c: &Rational) -> Complex64 {
    Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
}

pub fn to_complex(g: &RationalPoly) -> ComplexPoly {
    g.map_coeffs(rational_to_complex)
}

/// `x^α` for a complex point.
pub fn monomial_value(exponent: &ExponentVector, x: &[Complex64]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for (&e, xi) in exponent.entries().iter().zip(x) {
        if e != 0 {
            v *= xi.powu(e);
        }
    }
    v
}

impl ComplexPoly {
    /// `Σ a_α x^α` in double precision.
    pub fn evaluate(&self, x: &[Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.nvars(), "point dimension mismatch");
        self.terms().map(|(e, a)| a * monomial_value(e, x)).sum()
    }

    /// `Σ |a_α x^α|`, the scale against which residuals are measured.
    pub fn term_magnitude(&self, x: &[Complex64]) -> f64 {
        self.terms().map(|(e, a)| (a * monomial_value(e, x)).norm()).sum()
    }

    /// `|f(x)| / max(1, Σ|a_α x^α|)`.
    pub fn relative_residual(&self, x: &[Complex64]) -> f64 {
        self.evaluate(x).norm() / self.term_magnitude(x).max(1.0)
    }
}

/// `Σ a t^w x^α` for real `t > 0`.
pub fn evaluate_family(f: &LiftedPoly, x: &[Complex64], t: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveParameter(t));
    }
    check_dims(f.nvars(), x.len())?;
    Ok(f.terms().map(|(e, c)| c.at(t) * monomial_value(e, x)).sum())
}

/// The member `f(t)` of the family at a fixed real `t > 0`.
pub fn specialize(f: &LiftedPoly, t: f64) -> Result<ComplexPoly> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveParameter(t));
    }
    Ok(f.map_coeffs(|c| c.at(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    /// (t+t²)x + 2y + 3tx² + (5t²+7t³)
    fn worked_example() -> LiftedPoly {
        LiftedPoly::from_terms(
            2,
            [
                (ev(&[1, 0]), LiftedCoeff::from_terms([(c(1.0), q(1, 1)), (c(1.0), q(2, 1))])),
                (ev(&[0, 1]), LiftedCoeff::single(c(2.0), q(0, 1))),
                (ev(&[2, 0]), LiftedCoeff::single(c(3.0), q(1, 1))),
                (ev(&[0, 0]), LiftedCoeff::from_terms([(c(5.0), q(2, 1)), (c(7.0), q(3, 1))])),
            ],
        )
    }

    #[test]
    fn term_weights_of_worked_example() {
        let w = vec![q(1, 1), q(2, 1)];
        assert_eq!(term_weight(&ev(&[2, 0]), &q(1, 1), &w).unwrap(), q(3, 1));
        assert_eq!(term_weight(&ev(&[0, 0]), &q(2, 1), &w).unwrap(), q(2, 1));
        assert_eq!(term_weight(&ev(&[0, 0]), &q(0, 1), &[q(5, 3), q(-1, 7)]).unwrap(), q(0, 1));
        assert!(matches!(
            term_weight(&ev(&[1, 0]), &q(0, 1), &[q(1, 1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn t_initial_of_worked_example() {
        let w = vec![q(1, 1), q(2, 1)];
        let init = t_initial_form(&worked_example(), &w).unwrap();
        let expected = ComplexPoly::from_terms(
            2,
            [(ev(&[1, 0]), c(1.0)), (ev(&[0, 1]), c(2.0)), (ev(&[0, 0]), c(5.0))],
        );
        assert_eq!(init, expected);
    }

    #[test]
    fn t_initial_of_single_term_sets_t_to_one() {
        let f = LiftedPoly::from_terms(2, [(ev(&[3, 1]), LiftedCoeff::single(Complex64::new(0.5, -2.0), q(7, 3)))]);
        let init = t_initial_form(&f, &[q(-1, 1), q(4, 5)]).unwrap();
        assert_eq!(init, ComplexPoly::from_terms(2, [(ev(&[3, 1]), Complex64::new(0.5, -2.0))]));
    }

    #[test]
    fn t_initial_of_zero_is_an_error() {
        assert!(matches!(t_initial_form(&LiftedPoly::zero(1), &[q(0, 1)]), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn classical_initial_form_of_paraboloid() {
        let g = lift_rational(&crate::algebra::parse_poly("x^2 + y^2 - z", &["x", "y", "z"]).unwrap());
        let init = t_initial_form(&g, &[q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(init, ComplexPoly::from_terms(3, [(ev(&[2, 0, 0]), c(1.0)), (ev(&[0, 2, 0]), c(1.0))]));
    }

    #[test]
    fn evaluation_examples() {
        let vars = ["x", "y"];
        let p = to_complex(&crate::algebra::parse_poly("x + 2*y + 5", &vars).unwrap());
        assert_eq!(p.evaluate(&[c(1.0), c(1.0)]), c(8.0));
        let p = to_complex(&crate::algebra::parse_poly("x^2*y", &vars).unwrap());
        assert_eq!(p.evaluate(&[c(2.0), c(3.0)]), c(12.0));
        let g = to_complex(&crate::algebra::parse_poly("x^2 + y^2 - z", &["x", "y", "z"]).unwrap());
        let (x, y) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        assert!(g.evaluate(&[x, y, x * x + y * y]).norm() < 1e-14);
    }

    #[test]
    fn family_evaluation() {
        // t·x + 1 at x = −1, t = 1
        let f = LiftedPoly::from_terms(
            1,
            [
                (ev(&[1]), LiftedCoeff::single(c(1.0), q(1, 1))),
                (ev(&[0]), LiftedCoeff::single(c(1.0), q(0, 1))),
            ],
        );
        assert_eq!(evaluate_family(&f, &[c(-1.0)], 1.0).unwrap(), c(0.0));
        let half = LiftedPoly::from_terms(1, [(ev(&[1]), LiftedCoeff::single(c(1.0), q(1, 2)))]);
        assert!((evaluate_family(&half, &[c(1.0)], 0.25).unwrap() - c(0.5)).norm() < 1e-15);
        assert!(matches!(evaluate_family(&f, &[c(1.0)], 0.0), Err(Error::NonPositiveParameter(_))));
        assert!(evaluate_family(&f, &[c(1.0)], -1.0).is_err());
    }
}
