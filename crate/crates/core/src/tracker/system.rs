//! Square homotopies `H(y, t)` with analytic Jacobians.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{to_complex, ComplexPoly, LiftedPoly, Rational, RationalPoly};
use crate::error::{Error, Result};
use crate::liftgen::LiftedSystem;

const SQUARING_STREAM: u64 = 2;

/// `H`, its magnitudes, `∂H/∂y` and `∂H/∂t` at one point.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub values: DVector<Complex64>,
    /// `Σ |term|` per equation, the scale for relative residuals.
    pub magnitudes: Vec<f64>,
    pub jacobian: DMatrix<Complex64>,
    pub dt: DVector<Complex64>,
}

impl Evaluation {
    /// `maxⱼ |Hⱼ| / max(1, Σ|terms of Hⱼ|)`.
    pub fn relative_residual(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.magnitudes)
            .map(|(v, m)| v.norm() / m.max(1.0))
            .fold(0.0, f64::max)
    }
}

pub trait Homotopy: Sync {
    fn nvars(&self) -> usize;
    fn evaluate(&self, y: &[Complex64], t: f64) -> Evaluation;
}

/// Value and gradient of `y^α`.
fn monomial_with_gradient(exponent: &[u32], y: &[Complex64], grad: &mut [Complex64]) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let mut value = one;
    for (&e, yi) in exponent.iter().zip(y) {
        if e != 0 {
            value *= yi.powu(e);
        }
    }
    for k in 0..exponent.len() {
        if exponent[k] == 0 {
            grad[k] = Complex64::zero();
            continue;
        }
        let mut g = Complex64::new(exponent[k] as f64, 0.0) * y[k].powu(exponent[k] - 1);
        for (j, (&e, yj)) in exponent.iter().zip(y).enumerate() {
            if j != k && e != 0 {
                g *= yj.powu(e);
            }
        }
        grad[k] = g;
    }
    value
}

#[derive(Clone, Debug, PartialEq)]
struct ScaledTerm {
    exponent: Vec<u32>,
    coefficient: Complex64,
    /// Nonnegative power of `t` after scaling.
    t_power: f64,
    /// Exact power, kept only to decide whether it is zero.
    constant_in_t: bool,
}

/// A family in scaled coordinates `y = x ⊙ t^{-ω}`, each equation divided
/// by `t` to its minimal weight so that `H(y, 0)` is the initial system.
/// With `ω = 0` and no minimal-weight division this is the family itself.
#[derive(Clone, Debug)]
pub struct ScaledFamily {
    nvars: usize,
    equations: Vec<Vec<ScaledTerm>>,
}

fn scaled_terms(weighted: Vec<(Vec<u32>, Complex64, Rational)>) -> Result<Vec<ScaledTerm>> {
    let min = weighted.iter().map(|(_, _, w)| w).min().cloned().ok_or(Error::ZeroPolynomial)?;
    Ok(weighted
        .into_iter()
        .map(|(exponent, coefficient, w)| {
            let d = w - &min;
            ScaledTerm {
                exponent,
                coefficient,
                t_power: d.to_f64().unwrap_or(f64::INFINITY),
                constant_in_t: d.is_zero(),
            }
        })
        .collect())
}

fn fixed_terms(g: &ComplexPoly, omega: &[Rational]) -> Result<Vec<ScaledTerm>> {
    if g.nvars() != omega.len() {
        return Err(Error::DimensionMismatch {
            expected: omega.len(),
            got: g.nvars(),
        });
    }
    scaled_terms(g.terms().map(|(e, a)| (e.entries().to_vec(), *a, e.dot(omega))).collect())
}

fn lifted_terms(f: &LiftedPoly, omega: &[Rational]) -> Result<Vec<ScaledTerm>> {
    if f.nvars() != omega.len() {
        return Err(Error::DimensionMismatch {
            expected: omega.len(),
            got: f.nvars(),
        });
    }
    let mut terms = Vec::new();
    for (e, c) in f.terms() {
        let base = e.dot(omega);
        for (w, a) in c.terms() {
            terms.push((e.entries().to_vec(), *a, w + &base));
        }
    }
    scaled_terms(terms)
}

impl ScaledFamily {
    /// `fixed` are t-independent, `lifted` carry t-exponents.
    pub fn new(fixed: &[ComplexPoly], lifted: &[LiftedPoly], omega: &[Rational]) -> Result<Self> {
        Self::squared(fixed, None, lifted, omega)
    }

    /// As [`ScaledFamily::new`], with the fixed part replaced by random
    /// combinations of it. Each generator is scaled by its own minimal
    /// weight before combining, so the combinations at `t = 0` are
    /// combinations of initial forms rather than of the lowest one alone.
    pub fn squared(
        fixed: &[ComplexPoly],
        weights: Option<&[Vec<Complex64>]>,
        lifted: &[LiftedPoly],
        omega: &[Rational],
    ) -> Result<Self> {
        let nvars = omega.len();
        let scaled = fixed.iter().map(|g| fixed_terms(g, omega)).collect::<Result<Vec<_>>>()?;
        let mut equations = match weights {
            None => scaled,
            Some(rows) => rows
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&scaled)
                        .flat_map(|(w, terms)| {
                            terms.iter().map(move |t| ScaledTerm {
                                coefficient: w * t.coefficient,
                                ..t.clone()
                            })
                        })
                        .collect()
                })
                .collect(),
        };
        for f in lifted {
            equations.push(lifted_terms(f, omega)?);
        }
        Ok(ScaledFamily { nvars, equations })
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }
}

impl Homotopy for ScaledFamily {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn evaluate(&self, y: &[Complex64], t: f64) -> Evaluation {
        let n = self.nvars;
        let m = self.equations.len();
        let mut values = DVector::zeros(m);
        let mut magnitudes = vec![0.0; m];
        let mut jacobian = DMatrix::zeros(m, n);
        let mut dt = DVector::zeros(m);
        let mut grad = vec![Complex64::zero(); n];
        for (j, eq) in self.equations.iter().enumerate() {
            for term in eq {
                let (tp, dtp) = if term.constant_in_t {
                    (1.0, 0.0)
                } else {
                    (t.powf(term.t_power), term.t_power * t.powf(term.t_power - 1.0))
                };
                let mono = monomial_with_gradient(&term.exponent, y, &mut grad);
                let c = term.coefficient * tp;
                let v = c * mono;
                values[j] += v;
                magnitudes[j] += v.norm();
                dt[j] += term.coefficient * dtp * mono;
                for k in 0..n {
                    jacobian[(j, k)] += c * grad[k];
                }
            }
        }
        Evaluation {
            values,
            magnitudes,
            jacobian,
            dt,
        }
    }
}

/// `(1 − s)·γ·Q(x) + s·P(x)` for square `P`, `Q`.
#[derive(Clone, Debug)]
pub struct LinearHomotopy {
    pub start: Vec<ComplexPoly>,
    pub target: Vec<ComplexPoly>,
    pub gamma: Complex64,
}

fn poly_eval(p: &ComplexPoly, y: &[Complex64], grad_row: &mut [Complex64]) -> (Complex64, f64) {
    let n = y.len();
    let mut grad = vec![Complex64::zero(); n];
    let mut value = Complex64::zero();
    let mut magnitude = 0.0;
    for g in grad_row.iter_mut() {
        *g = Complex64::zero();
    }
    for (e, a) in p.terms() {
        let mono = monomial_with_gradient(e.entries(), y, &mut grad);
        let v = a * mono;
        value += v;
        magnitude += v.norm();
        for k in 0..n {
            grad_row[k] += a * grad[k];
        }
    }
    (value, magnitude)
}

impl Homotopy for LinearHomotopy {
    fn nvars(&self) -> usize {
        self.target.first().map_or(0, |p| p.nvars())
    }

    fn evaluate(&self, y: &[Complex64], s: f64) -> Evaluation {
        let n = y.len();
        let m = self.target.len();
        let mut values = DVector::zeros(m);
        let mut magnitudes = vec![0.0; m];
        let mut jacobian = DMatrix::zeros(m, n);
        let mut dt = DVector::zeros(m);
        let mut gq = vec![Complex64::zero(); n];
        let mut gp = vec![Complex64::zero(); n];
        let a = self.gamma * (1.0 - s);
        for j in 0..m {
            let (q, mq) = poly_eval(&self.start[j], y, &mut gq);
            let (p, mp) = poly_eval(&self.target[j], y, &mut gp);
            values[j] = a * q + p * s;
            magnitudes[j] = (1.0 - s) * mq + s * mp;
            dt[j] = p - self.gamma * q;
            for k in 0..n {
                jacobian[(j, k)] = a * gq[k] + gp[k] * s;
            }
        }
        Evaluation {
            values,
            magnitudes,
            jacobian,
            dt,
        }
    }
}

/// `0 ≤ θ < 1 ↦ e^{2πiθ}`.
pub fn random_phase<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * rng.gen::<f64>())
}

/// `k` random unit-modulus combinations of `polys`; the identity when
/// `k = polys.len()`.
pub fn random_combinations(polys: &[ComplexPoly], k: usize, rng: &mut ChaCha8Rng) -> (Vec<ComplexPoly>, Option<Vec<Vec<Complex64>>>) {
    if k == polys.len() {
        return (polys.to_vec(), None);
    }
    let weights: Vec<Vec<Complex64>> = (0..k).map(|_| polys.iter().map(|_| random_phase(rng)).collect()).collect();
    let combos = weights
        .iter()
        .map(|row| {
            row.iter()
                .zip(polys)
                .fold(ComplexPoly::zero(polys[0].nvars()), |acc, (w, p)| acc.add(&p.scale(w)))
        })
        .collect();
    (combos, Some(weights))
}

/// The `X`-part of `H`: `G′` itself, or `N − r` random combinations of it.
#[derive(Clone, Debug)]
pub struct SquareSystem {
    pub generators: Vec<ComplexPoly>,
    /// Combination weights when `G′` was squared up.
    pub combinations: Option<Vec<Vec<Complex64>>>,
    pub lifted: Vec<LiftedPoly>,
}

impl SquareSystem {
    pub fn family(&self, omega: &[Rational]) -> Result<ScaledFamily> {
        ScaledFamily::squared(&self.generators, self.combinations.as_deref(), &self.lifted, omega)
    }
}

pub fn square_system(g: &[RationalPoly], ls: &LiftedSystem) -> Result<SquareSystem> {
    let n = ls.nvars;
    let need = n.checked_sub(ls.r()).ok_or(Error::Underdetermined { have: g.len(), need: 0 })?;
    if g.len() < need {
        return Err(Error::Underdetermined { have: g.len(), need });
    }
    let complex: Vec<ComplexPoly> = g.iter().map(to_complex).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(ls.seed);
    rng.set_stream(SQUARING_STREAM);
    let (_, combinations) = random_combinations(&complex, need, &mut rng);
    Ok(SquareSystem {
        generators: complex,
        combinations,
        lifted: ls.polys(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integer, parse_poly, ExponentVector, LiftedCoeff};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let v = ["x", "y"];
        let g = to_complex(&parse_poly("x^2*y - 3*y^3 + x - 2", &v).unwrap());
        let f = LiftedPoly::from_terms(
            2,
            [
                (ExponentVector::new(vec![1, 1]), LiftedCoeff::single(c(0.5, 1.0), Rational::new(3.into(), 2.into()))),
                (ExponentVector::new(vec![0, 0]), LiftedCoeff::single(c(-1.0, 0.0), integer(0))),
            ],
        );
        let omega = vec![Rational::new(1.into(), 3.into()), integer(-1)];
        let h = ScaledFamily::new(&[g], &[f], &omega).unwrap();
        let y = [c(0.7, -0.2), c(1.1, 0.4)];
        let t = 0.37;
        let e = h.evaluate(&y, t);
        let step = 1e-7;
        for k in 0..2 {
            let mut yp = y;
            yp[k] += step;
            let d = (h.evaluate(&yp, t).values - &e.values) / c(step, 0.0);
            for j in 0..2 {
                assert!((d[j] - e.jacobian[(j, k)]).norm() < 1e-5);
            }
        }
        let d = (h.evaluate(&y, t + step).values - &e.values) / c(step, 0.0);
        for j in 0..2 {
            assert!((d[j] - e.dt[j]).norm() < 1e-5);
        }
    }

    #[test]
    fn scaled_family_at_zero_is_initial_system() {
        let v = ["x", "y", "z"];
        let g = to_complex(&parse_poly("z - x^2 - y^2", &v).unwrap());
        let omega = vec![integer(1), integer(2), integer(2)];
        let h = ScaledFamily::new(&[g], &[], &omega).unwrap();
        // init at (1,2,2) is z - x²; choose y on it with y² ≠ 0
        let e = h.evaluate(&[c(2.0, 0.0), c(5.0, 0.0), c(4.0, 0.0)], 0.0);
        assert!(e.values[0].norm() < 1e-15);
    }

    #[test]
    fn squared_family_keeps_every_initial_form() {
        let v = ["x", "y", "z"];
        let gs: Vec<ComplexPoly> = ["y - x^2", "z - x*y", "x*z - y^2"].iter().map(|s| to_complex(&parse_poly(s, &v).unwrap())).collect();
        let omega = [integer(1), integer(2), integer(3)];
        let one = c(1.0, 0.0);
        let rows = vec![vec![one, one, one], vec![one, -one, c(2.0, 0.0)]];
        let h = ScaledFamily::squared(&gs, Some(&rows), &[], &omega).unwrap();
        let e = h.evaluate(&[c(2.0, 0.0), c(4.0, 0.0), c(8.0, 0.0)], 0.0);
        assert!(e.values.iter().all(|z| z.norm() < 1e-12));
        let sv = e.jacobian.singular_values();
        assert!(sv.min() > 1e-3 * sv.max(), "{sv:?}");
    }

    #[test]
    fn squaring_needs_enough_generators() {
        let v = ["x", "y"];
        let ls = LiftedSystem::from_parts(
            2,
            vec![vec![ExponentVector::new(vec![1, 0]), ExponentVector::new(vec![0, 0])]],
            vec![vec![c(1.0, 0.0), c(1.0, 0.0)]],
            vec![vec![integer(0), integer(0)]],
        )
        .unwrap();
        assert!(matches!(square_system(&[], &ls), Err(Error::Underdetermined { have: 0, need: 1 })));
        let gs: Vec<RationalPoly> = ["x - y", "x + y - 1", "x*y"].iter().map(|s| parse_poly(s, &v).unwrap()).collect();
        let sq = square_system(&gs, &ls).unwrap();
        assert_eq!(sq.family(&[integer(0), integer(0)]).unwrap().len(), 2);
        assert_eq!(sq.combinations.as_ref().unwrap()[0].len(), 3);
        let sq = square_system(&gs[..1], &ls).unwrap();
        assert!(sq.combinations.is_none());
    }
}
