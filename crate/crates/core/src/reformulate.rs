//! Monomialization of arbitrary supports.
//!
//! Every non-monomial `hᵢ` appearing in some spanning set is replaced by a
//! fresh variable `zᵢ`, and `zᵢ − hᵢ(x)` joins the equations of the
//! variety. Solutions correspond under `x ↦ (x, h(x))`.

use num_complex::Complex64;
use num_traits::One;

use crate::algebra::{to_complex, ExponentVector, Rational, RationalPoly};
use crate::error::{Error, Result};

/// Problem with arbitrary spanning sets `F₁, …, F_r` in `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemB {
    pub variables: Vec<String>,
    pub equations: Vec<RationalPoly>,
    pub supports: Vec<Vec<RationalPoly>>,
}

/// A slack variable standing for the non-monomial it replaced.
#[derive(Clone, Debug, PartialEq)]
pub struct Slack {
    /// Index of the slack among all `N` variables.
    pub variable: usize,
    /// The replaced polynomial, in the original `n` variables.
    pub replaced: RationalPoly,
}

/// Problem with monomial supports in `N = n + ℓ` variables (x first, then z).
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemA {
    pub variables: Vec<String>,
    pub original_vars: usize,
    pub equations: Vec<RationalPoly>,
    pub supports: Vec<Vec<ExponentVector>>,
    pub slacks: Vec<Slack>,
}

impl ProblemB {
    pub fn new(variables: Vec<String>, equations: Vec<RationalPoly>, supports: Vec<Vec<RationalPoly>>) -> Result<Self> {
        let p = ProblemB {
            variables,
            equations,
            supports,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nvars();
        if n == 0 {
            return Err(Error::InvalidProblem("no variables".into()));
        }
        if self.supports.is_empty() {
            return Err(Error::InvalidProblem("at least one linear system is required".into()));
        }
        for (i, f) in self.supports.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::InvalidProblem(format!("spanning set {} is empty", i + 1)));
            }
        }
        let all = self.equations.iter().chain(self.supports.iter().flatten());
        for p in all {
            if p.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.nvars(),
                });
            }
        }
        Ok(())
    }
}

pub fn to_setting_a(p: &ProblemB) -> Result<ProblemA> {
    p.validate()?;
    let n = p.nvars();
    let mut nonmonomials: Vec<RationalPoly> = Vec::new();
    // per support member: Err(slack index) or Ok(monomial exponent in n vars)
    let mut mapped: Vec<Vec<std::result::Result<ExponentVector, usize>>> = Vec::new();
    for f in &p.supports {
        let mut out = Vec::with_capacity(f.len());
        for s in f {
            if s.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            if s.is_monomial() {
                let (e, _) = s.terms().next().expect("one term");
                out.push(Ok(e.clone()));
            } else {
                let k = match nonmonomials.iter().position(|h| h == s) {
                    Some(k) => k,
                    None => {
                        nonmonomials.push(s.clone());
                        nonmonomials.len() - 1
                    }
                };
                out.push(Err(k));
            }
        }
        mapped.push(out);
    }

    let ell = nonmonomials.len();
    let nn = n + ell;
    let mut variables = p.variables.clone();
    for k in 0..ell {
        let mut name = format!("z{}", k + 1);
        while variables.contains(&name) {
            name.push('_');
        }
        variables.push(name);
    }

    let mut equations: Vec<RationalPoly> = p.equations.iter().map(|g| g.embed(nn)).collect();
    let slacks: Vec<Slack> = nonmonomials
        .into_iter()
        .enumerate()
        .map(|(k, h)| {
            let z = RationalPoly::monomial(ExponentVector::unit(nn, n + k), Rational::one());
            equations.push(z.sub(&h.embed(nn)));
            Slack {
                variable: n + k,
                replaced: h,
            }
        })
        .collect();

    let supports = mapped
        .into_iter()
        .map(|f| {
            let mut out: Vec<ExponentVector> = Vec::with_capacity(f.len());
            for m in f {
                let e = match m {
                    Ok(e) => e.embed(nn),
                    Err(k) => ExponentVector::unit(nn, n + k),
                };
                if !out.contains(&e) {
                    out.push(e);
                }
            }
            out
        })
        .collect();

    Ok(ProblemA {
        variables,
        original_vars: n,
        equations,
        supports,
        slacks,
    })
}

impl ProblemA {
    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn r(&self) -> usize {
        self.supports.len()
    }

    /// Monomial-support problem without slacks.
    pub fn monomial(variables: Vec<String>, equations: Vec<RationalPoly>, supports: Vec<Vec<ExponentVector>>) -> Result<Self> {
        let n = variables.len();
        for e in supports.iter().flatten() {
            if e.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: e.len() });
            }
        }
        if supports.iter().any(|f| f.is_empty()) {
            return Err(Error::EmptySupport);
        }
        Ok(ProblemA {
            variables,
            original_vars: n,
            equations,
            supports,
            slacks: Vec::new(),
        })
    }

    /// `x ↦ (x, h₁(x), …, h_ℓ(x))`.
    pub fn push_forward_solution(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.original_vars, "point dimension mismatch");
        let mut out = x.to_vec();
        for s in &self.slacks {
            out.push(to_complex(&s.replaced).evaluate(x));
        }
        out
    }

    /// Drops the slack coordinates.
    pub fn project_solution(&self, x: &[Complex64]) -> Vec<Complex64> {
        x[..self.original_vars].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, render_rational};

    fn polys(src: &[&str], vars: &[&str]) -> Vec<RationalPoly> {
        src.iter().map(|s| parse_poly(s, vars).unwrap()).collect()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    pub(crate) fn two_circles() -> ProblemB {
        let v = ["x", "y"];
        let f = polys(&["x^2 + y^2", "x", "y", "1"], &v);
        ProblemB::new(names(&v), vec![], vec![f.clone(), f]).unwrap()
    }

    #[test]
    fn two_circles_gets_one_slack() {
        let a = to_setting_a(&two_circles()).unwrap();
        assert_eq!(a.nvars(), 3);
        assert_eq!(a.slacks.len(), 1);
        assert_eq!(a.equations.len(), 1);
        assert_eq!(render_rational(&a.equations[0], &a.variables), "-x^2 - y^2 + z1");
        let expect: Vec<ExponentVector> = [[0, 0, 1], [1, 0, 0], [0, 1, 0], [0, 0, 0]]
            .iter()
            .map(|e| ExponentVector::new(e.to_vec()))
            .collect();
        assert_eq!(a.supports[0], expect);
        assert_eq!(a.supports[1], expect);
    }

    #[test]
    fn monomial_supports_pass_through() {
        let v = ["x", "y"];
        let g = polys(&["x*y - 1"], &v);
        let p = ProblemB::new(names(&v), g.clone(), vec![polys(&["x", "y^2", "1"], &v)]).unwrap();
        let a = to_setting_a(&p).unwrap();
        assert_eq!(a.nvars(), 2);
        assert!(a.slacks.is_empty());
        assert_eq!(a.equations, g);
    }

    #[test]
    fn shared_nonmonomial_shares_a_slack() {
        let v = ["x", "y"];
        let p = ProblemB::new(
            names(&v),
            vec![],
            vec![polys(&["x + y", "x"], &v), polys(&["y + x", "y"], &v)],
        )
        .unwrap();
        let a = to_setting_a(&p).unwrap();
        assert_eq!(a.slacks.len(), 1);
        assert_eq!(a.equations.len(), 1);
        assert_eq!(a.supports[0][0], a.supports[1][0]);
    }

    #[test]
    fn zero_member_is_rejected() {
        let v = ["x"];
        let p = ProblemB {
            variables: names(&v),
            equations: vec![],
            supports: vec![vec![RationalPoly::zero(1), parse_poly("x", &v).unwrap()]],
        };
        assert!(matches!(to_setting_a(&p), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn push_forward_examples() {
        let a = to_setting_a(&two_circles()).unwrap();
        let c = |re: f64| Complex64::new(re, 0.0);
        assert_eq!(a.push_forward_solution(&[c(1.0), c(2.0)]), vec![c(1.0), c(2.0), c(5.0)]);
        assert_eq!(a.push_forward_solution(&[c(0.0), c(0.0)]), vec![c(0.0); 3]);
        assert_eq!(a.project_solution(&[c(1.0), c(2.0), c(5.0)]), vec![c(1.0), c(2.0)]);
    }

    #[test]
    fn slack_names_avoid_collisions() {
        let v = ["z1", "y"];
        let p = ProblemB::new(names(&v), vec![], vec![polys(&["z1 + y", "1"], &v)]).unwrap();
        let a = to_setting_a(&p).unwrap();
        assert_eq!(a.variables, names(&["z1", "y", "z1_"]));
    }
}
