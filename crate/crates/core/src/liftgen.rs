//! Random lifted families `fᵢ(t) = Σ a_{i,α} t^{ω_{i,α}} x^α`.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexPoly, ExponentVector, LiftedCoeff, LiftedPoly, Rational};
use crate::error::{Error, Result};
use crate::reformulate::ProblemA;

const COEFFICIENT_STREAM: u64 = 0;
const LIFT_STREAM: u64 = 1;

pub const DEFAULT_MAX_RETRIES: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftParams {
    pub seed: u64,
    pub lift_denominator: u64,
    /// `None` selects `10 · N · max |Fᵢ|`.
    pub lift_bound: Option<u64>,
    /// Pins the target coefficients independently of `seed`.
    pub coefficient_seed: Option<u64>,
}

impl Default for LiftParams {
    fn default() -> Self {
        LiftParams {
            seed: 0,
            lift_denominator: 1,
            lift_bound: None,
            coefficient_seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftedSystem {
    pub nvars: usize,
    pub supports: Vec<Vec<ExponentVector>>,
    /// Unit-modulus `a_{i,α}`, aligned with `supports`.
    pub coefficients: Vec<Vec<Complex64>>,
    /// `ω_{i,α} ∈ {0, 1/D, …, M/D}`, aligned with `supports`.
    pub lifts: Vec<Vec<Rational>>,
    pub seed: u64,
    pub coefficient_seed: Option<u64>,
    pub lift_denominator: u64,
    pub lift_bound: u64,
    pub retries: u32,
}

pub fn default_lift_bound(nvars: usize, supports: &[Vec<ExponentVector>]) -> u64 {
    let widest = supports.iter().map(|f| f.len()).max().unwrap_or(1) as u64;
    10 * nvars as u64 * widest
}

pub fn generate_lift(p: &ProblemA, params: &LiftParams) -> Result<LiftedSystem> {
    let bound = params
        .lift_bound
        .unwrap_or_else(|| default_lift_bound(p.nvars(), &p.supports));
    lift_supports(
        p.nvars(),
        &p.supports,
        params.seed,
        params.coefficient_seed,
        params.lift_denominator,
        bound,
        0,
    )
}

fn lift_supports(
    nvars: usize,
    supports: &[Vec<ExponentVector>],
    seed: u64,
    coefficient_seed: Option<u64>,
    denominator: u64,
    bound: u64,
    retries: u32,
) -> Result<LiftedSystem> {
    if supports.is_empty() || supports.iter().any(|f| f.is_empty()) {
        return Err(Error::EmptySupport);
    }
    if denominator == 0 {
        return Err(Error::InvalidLift("lift denominator must be at least 1".into()));
    }
    let widest = supports.iter().map(|f| f.len()).max().unwrap_or(1) as u64;
    if bound < widest * nvars as u64 {
        return Err(Error::InvalidLift(format!(
            "lift bound {bound} is below |largest support| · N = {}",
            widest * nvars as u64
        )));
    }

    let mut coeff_rng = ChaCha8Rng::seed_from_u64(coefficient_seed.unwrap_or(seed));
    coeff_rng.set_stream(COEFFICIENT_STREAM);
    let mut lift_rng = ChaCha8Rng::seed_from_u64(seed);
    lift_rng.set_stream(LIFT_STREAM);

    let coefficients = supports
        .iter()
        .map(|f| {
            f.iter()
                .map(|_| Complex64::from_polar(1.0, TAU * coeff_rng.gen::<f64>()))
                .collect()
        })
        .collect();
    let lifts = supports
        .iter()
        .map(|f| {
            f.iter()
                .map(|_| {
                    let k = lift_rng.gen_range(0..=bound);
                    Rational::new(BigInt::from(k), BigInt::from(denominator))
                })
                .collect()
        })
        .collect();

    Ok(LiftedSystem {
        nvars,
        supports: supports.to_vec(),
        coefficients,
        lifts,
        seed,
        coefficient_seed,
        lift_denominator: denominator,
        lift_bound: bound,
        retries,
    })
}

/// Fresh lift from `seed + 1`; every third retry doubles the lift bound.
pub fn regenerate_on_degeneracy(ls: &LiftedSystem, max_retries: u32, reason: &str) -> Result<LiftedSystem> {
    let retries = ls.retries + 1;
    if retries > max_retries {
        return Err(Error::RetryCapExceeded {
            cap: max_retries,
            last: reason.to_string(),
        });
    }
    let bound = if retries % 3 == 0 { ls.lift_bound * 2 } else { ls.lift_bound };
    lift_supports(
        ls.nvars,
        &ls.supports,
        ls.seed.wrapping_add(1),
        ls.coefficient_seed,
        ls.lift_denominator,
        bound,
        retries,
    )
}

impl LiftedSystem {
    /// Explicit family, for crafted instances. Lifts are taken as given.
    pub fn from_parts(
        nvars: usize,
        supports: Vec<Vec<ExponentVector>>,
        coefficients: Vec<Vec<Complex64>>,
        lifts: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if supports.is_empty() || supports.iter().any(|f| f.is_empty()) {
            return Err(Error::EmptySupport);
        }
        let shapes_agree = supports.len() == coefficients.len()
            && supports.len() == lifts.len()
            && supports
                .iter()
                .zip(&coefficients)
                .zip(&lifts)
                .all(|((f, c), w)| f.len() == c.len() && f.len() == w.len());
        if !shapes_agree {
            return Err(Error::InvalidLift("supports, coefficients and lifts must align".into()));
        }
        if let Some(e) = supports.iter().flatten().find(|e| e.len() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                got: e.len(),
            });
        }
        let bound = lifts
            .iter()
            .flatten()
            .map(|w| w.ceil().to_integer())
            .max()
            .and_then(|b| u64::try_from(b).ok())
            .unwrap_or(0);
        let lift_bound = bound.max(default_lift_bound(nvars, &supports));
        Ok(LiftedSystem {
            nvars,
            supports,
            coefficients,
            lifts,
            seed: 0,
            coefficient_seed: None,
            lift_denominator: 1,
            lift_bound,
            retries: 0,
        })
    }

    pub fn r(&self) -> usize {
        self.supports.len()
    }

    /// `fᵢ(t)`.
    pub fn poly(&self, i: usize) -> LiftedPoly {
        LiftedPoly::from_terms(
            self.nvars,
            self.supports[i]
                .iter()
                .zip(&self.coefficients[i])
                .zip(&self.lifts[i])
                .map(|((e, a), w)| (e.clone(), LiftedCoeff::single(*a, w.clone()))),
        )
    }

    pub fn polys(&self) -> Vec<LiftedPoly> {
        (0..self.r()).map(|i| self.poly(i)).collect()
    }

    /// The realized generic member `fᵢ = fᵢ(1)`.
    pub fn target(&self, i: usize) -> ComplexPoly {
        ComplexPoly::from_terms(
            self.nvars,
            self.supports[i].iter().cloned().zip(self.coefficients[i].iter().copied()),
        )
    }

    pub fn targets(&self) -> Vec<ComplexPoly> {
        (0..self.r()).map(|i| self.target(i)).collect()
    }

    pub fn lift_of(&self, i: usize, exponent: &ExponentVector) -> Option<&Rational> {
        self.supports[i].iter().position(|e| e == exponent).map(|k| &self.lifts[i][k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integer, specialize};
    use crate::reformulate::{to_setting_a, ProblemB};

    fn circles() -> ProblemA {
        let v = ["x", "y"];
        let f: Vec<_> = ["x^2 + y^2", "x", "y", "1"]
            .iter()
            .map(|s| crate::algebra::parse_poly(s, &v).unwrap())
            .collect();
        let b = ProblemB::new(v.iter().map(|s| s.to_string()).collect(), vec![], vec![f.clone(), f]).unwrap();
        to_setting_a(&b).unwrap()
    }

    #[test]
    fn deterministic_given_seed() {
        let p = circles();
        let params = LiftParams {
            seed: 42,
            ..Default::default()
        };
        let a = generate_lift(&p, &params).unwrap();
        let b = generate_lift(&p, &params).unwrap();
        assert_eq!(a, b);
        let c = generate_lift(&p, &LiftParams { seed: 43, ..params }).unwrap();
        assert_ne!(a.lifts, c.lifts);
    }

    #[test]
    fn shape_and_ranges() {
        let p = circles();
        let ls = generate_lift(&p, &LiftParams::default()).unwrap();
        assert_eq!(ls.lift_bound, 10 * 3 * 4);
        for i in 0..2 {
            assert_eq!(ls.coefficients[i].len(), 4);
            assert_eq!(ls.lifts[i].len(), 4);
            for a in &ls.coefficients[i] {
                assert!((a.norm() - 1.0).abs() < 1e-15);
            }
            for w in &ls.lifts[i] {
                assert!(w.is_integer() && *w >= integer(0) && *w <= integer(120));
            }
        }
    }

    #[test]
    fn fractional_grid() {
        let p = circles();
        let ls = generate_lift(
            &p,
            &LiftParams {
                seed: 1,
                lift_denominator: 7,
                lift_bound: Some(50),
                coefficient_seed: None,
            },
        )
        .unwrap();
        for w in ls.lifts.iter().flatten() {
            assert!((w * integer(7)).is_integer());
            assert!(*w <= Rational::new(50.into(), 7.into()));
        }
    }

    #[test]
    fn target_is_family_at_one() {
        let ls = generate_lift(&circles(), &LiftParams::default()).unwrap();
        for i in 0..2 {
            assert_eq!(specialize(&ls.poly(i), 1.0).unwrap(), ls.target(i));
        }
    }

    #[test]
    fn pinned_coefficients_survive_reseeding() {
        let p = circles();
        let a = generate_lift(
            &p,
            &LiftParams {
                seed: 1,
                coefficient_seed: Some(99),
                ..Default::default()
            },
        )
        .unwrap();
        let b = generate_lift(
            &p,
            &LiftParams {
                seed: 2,
                coefficient_seed: Some(99),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_ne!(a.lifts, b.lifts);
    }

    #[test]
    fn bound_precondition() {
        let p = circles();
        let err = generate_lift(
            &p,
            &LiftParams {
                lift_bound: Some(11),
                ..Default::default()
            },
        );
        assert!(matches!(err, Err(Error::InvalidLift(_))));
        assert!(matches!(
            generate_lift(
                &p,
                &LiftParams {
                    lift_denominator: 0,
                    ..Default::default()
                }
            ),
            Err(Error::InvalidLift(_))
        ));
    }

    #[test]
    fn regeneration_schedule_and_cap() {
        let ls = generate_lift(&circles(), &LiftParams::default()).unwrap();
        let mut cur = ls.clone();
        for k in 1..=10u32 {
            let next = regenerate_on_degeneracy(&cur, 10, "forced").unwrap();
            assert_eq!(next.retries, k);
            assert_eq!(next.seed, k as u64);
            let expected_bound = if k % 3 == 0 { cur.lift_bound * 2 } else { cur.lift_bound };
            assert_eq!(next.lift_bound, expected_bound);
            cur = next;
        }
        assert!(matches!(
            regenerate_on_degeneracy(&cur, 10, "forced"),
            Err(Error::RetryCapExceeded { cap: 10, .. })
        ));
    }

    #[test]
    fn regeneration_replaces_all_zero_lifts() {
        let e = |v: &[u32]| ExponentVector::new(v.to_vec());
        let line = vec![e(&[1, 0]), e(&[0, 1]), e(&[0, 0])];
        let one = Complex64::new(1.0, 0.0);
        let ls = LiftedSystem::from_parts(
            2,
            vec![line.clone(), line],
            vec![vec![one; 3], vec![one; 3]],
            vec![vec![integer(0); 3], vec![integer(0); 3]],
        )
        .unwrap();
        let next = regenerate_on_degeneracy(&ls, 10, "overlap").unwrap();
        assert_ne!(next.lifts, ls.lifts);
    }
}
