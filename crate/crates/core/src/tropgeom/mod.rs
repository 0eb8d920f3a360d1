//! `trop(X)` as a weighted polyhedral complex with per-cell initial forms.
//!
//! Three sources: the whole space (`G = ∅`), a single hypersurface (cells
//! dual to the edges of its Newton polytope), or a validated JSON file.

pub mod io;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::{integer, ExponentVector, Rational, RationalPoly, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::lp::{LinearProgram, LpOutcome};
use crate::linalg::rational::{dot, rank, solve, LinearSolution};

pub use io::{ingest_complex, ingest_complex_file, serialize_complex, COMPLEX_SCHEMA};

/// Closed cell `{ω : A ω = b, C ω ≤ d}` with multiplicity and the
/// generators of `init_ω⟨G⟩` valid on its relative interior.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalCell {
    pub equations: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    /// `(c, d)` meaning `c·ω ≤ d`.
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    pub multiplicity: u64,
    pub initial_generators: Vec<RationalPoly>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TropicalComplex {
    pub ambient_dim: usize,
    pub dim: usize,
    pub variables: Vec<String>,
    pub cells: Vec<TropicalCell>,
}

pub fn default_variables(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl TropicalCell {
    pub fn contains(&self, w: &[Rational]) -> bool {
        self.equations.iter().zip(&self.rhs).all(|(a, b)| dot(a, w) == *b)
            && self.inequalities.iter().all(|(c, d)| dot(c, w) <= *d)
    }

    /// Whether some inequality holds with equality at `w`.
    pub fn on_boundary(&self, w: &[Rational]) -> bool {
        self.inequalities.iter().any(|(c, d)| dot(c, w) == *d)
    }

    /// Equation rows scaled to primitive integer vectors.
    pub fn integer_equations(&self) -> Vec<Vec<BigInt>> {
        self.equations.iter().map(|r| primitive_integer_row(r)).collect()
    }
}

/// Clears denominators and divides by the content.
pub fn primitive_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = row.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

pub fn trop_fullspace(n: usize) -> TropicalComplex {
    TropicalComplex {
        ambient_dim: n,
        dim: n,
        variables: default_variables(n),
        cells: vec![TropicalCell {
            equations: vec![],
            rhs: vec![],
            inequalities: vec![],
            multiplicity: 1,
            initial_generators: vec![],
        }],
    }
}

fn to_rational_row(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| integer(x)).collect()
}

/// Whether `γ` lies on the open segment `(a, b)`.
fn on_open_segment(a: &ExponentVector, b: &ExponentVector, g: &ExponentVector) -> bool {
    let d = b.difference(a);
    let v = g.difference(a);
    let Some(k) = d.iter().position(|&x| x != 0) else {
        return false;
    };
    let s = Rational::new(v[k].into(), d[k].into());
    if !(s > integer(0) && s < integer(1)) {
        return false;
    }
    d.iter()
        .zip(&v)
        .all(|(&dk, &vk)| Rational::from_integer(vk.into()) == &s * Rational::from_integer(dk.into()))
}

/// Whether `conv{αᵢ, αⱼ}` is an edge of the Newton polytope of `support`:
/// some `ω` has `ω·αᵢ = ω·αⱼ < ω·γ` for every support point `γ` off the
/// closed segment. Points strictly between `αᵢ` and `αⱼ` belong to the edge.
pub fn is_edge(support: &[ExponentVector], i: usize, j: usize) -> bool {
    assert_ne!(i, j);
    let (a, b) = (&support[i], &support[j]);
    let n = a.len();
    let mut lp = LinearProgram::new(n);
    lp.equality(to_rational_row(&a.difference(b)), integer(0));
    for (k, g) in support.iter().enumerate() {
        if k == i || k == j || on_open_segment(a, b, g) {
            continue;
        }
        lp.ge(to_rational_row(&g.difference(a)), integer(1));
    }
    lp.is_feasible()
}

/// Cells of `trop(g)` for trivially valued coefficients: one per edge of
/// the Newton polytope, weighted by lattice length.
pub fn trop_hypersurface(g: &RationalPoly, variables: &[String]) -> Result<TropicalComplex> {
    let n = g.nvars();
    if variables.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: variables.len(),
        });
    }
    if g.len() < 2 {
        return Err(Error::InvalidComplex(
            "a polynomial with fewer than two terms has an empty tropical hypersurface".into(),
        ));
    }
    let support = g.support();
    let mut cells = Vec::new();
    for i in 0..support.len() {
        for j in i + 1..support.len() {
            if !is_edge(&support, i, j) {
                continue;
            }
            let (a, b) = (&support[i], &support[j]);
            let members: Vec<&ExponentVector> = support
                .iter()
                .filter(|e| *e == a || *e == b || on_open_segment(a, b, e))
                .collect();
            let direction = a.difference(b);
            let length = direction.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            let inequalities = support
                .iter()
                .filter(|e| !members.contains(e))
                .map(|e| (to_rational_row(&a.difference(e)), integer(0)))
                .collect();
            let generator = g.filter_terms(|e, _| members.contains(&e));
            cells.push(TropicalCell {
                equations: vec![to_rational_row(&direction)],
                rhs: vec![integer(0)],
                inequalities,
                multiplicity: length.unsigned_abs(),
                initial_generators: vec![generator],
            });
        }
    }
    Ok(TropicalComplex {
        ambient_dim: n,
        dim: n - 1,
        variables: variables.to_vec(),
        cells,
    })
}

/// A point of the cell, strictly inside every inequality when possible.
pub fn interior_point(cell: &TropicalCell, n: usize) -> Result<WeightVector> {
    let mut lp = LinearProgram::new(n + 1);
    for (a, b) in cell.equations.iter().zip(&cell.rhs) {
        let mut row = a.clone();
        row.push(integer(0));
        lp.equality(row, b.clone());
    }
    for (c, d) in &cell.inequalities {
        let mut row = c.clone();
        row.push(integer(1));
        lp.le(row, d.clone());
    }
    let mut cap = vec![integer(0); n];
    cap.push(integer(1));
    lp.le(cap.clone(), integer(1));
    lp.objective(cap);
    match lp.solve() {
        LpOutcome::Optimal { mut point, value } => {
            point.truncate(n);
            // a negative optimum relaxes some inequality: the cell is empty
            if value.is_negative() {
                return Err(Error::EmptyCell);
            }
            Ok(point)
        }
        LpOutcome::Infeasible => Err(Error::EmptyCell),
        LpOutcome::Unbounded => unreachable!("slack is capped"),
    }
}

/// All terms share one `ω`-weight.
pub fn is_weight_homogeneous(g: &RationalPoly, w: &[Rational]) -> bool {
    let mut weights = g.terms().map(|(e, _)| e.dot(w));
    match weights.next() {
        Some(first) => weights.all(|x| x == first),
        None => true,
    }
}

/// Homogeneity on the whole affine span of the cell: every exponent
/// difference lies in the row space of the equations and is weight-zero at
/// one point of the span.
fn homogeneous_on_cell(g: &RationalPoly, cell: &TropicalCell, w: &[Rational], rk: usize) -> bool {
    if !is_weight_homogeneous(g, w) {
        return false;
    }
    let mut terms = g.terms().map(|(e, _)| e);
    let Some(first) = terms.next() else { return true };
    terms.all(|e| {
        let mut rows = cell.equations.clone();
        rows.push(to_rational_row(&e.difference(first)));
        rank(&rows) == rk
    })
}

impl TropicalComplex {
    pub fn with_variables(mut self, variables: Vec<String>) -> Result<Self> {
        if variables.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: variables.len(),
            });
        }
        self.variables = variables;
        Ok(self)
    }

    /// Checks rank, multiplicity, nonemptiness and generator homogeneity.
    pub fn validate(&self) -> Result<()> {
        let n = self.ambient_dim;
        if n == 0 || self.dim > n {
            return Err(Error::InvalidComplex(format!("dimension {} in ambient {}", self.dim, n)));
        }
        if self.variables.len() != n {
            return Err(Error::InvalidComplex("variable list does not match ambient_dim".into()));
        }
        for (k, cell) in self.cells.iter().enumerate() {
            let ctx = |m: String| Error::InvalidComplex(format!("cell {k}: {m}"));
            if cell.equations.len() != cell.rhs.len() {
                return Err(ctx("equation and rhs counts differ".into()));
            }
            if cell.equations.iter().chain(cell.inequalities.iter().map(|(c, _)| c)).any(|r| r.len() != n) {
                return Err(ctx("row length differs from ambient_dim".into()));
            }
            if cell.multiplicity == 0 {
                return Err(ctx("multiplicity must be positive".into()));
            }
            let rk = rank(&cell.equations);
            if rk != n - self.dim {
                return Err(ctx(format!("rank(A) = {rk}, expected {}", n - self.dim)));
            }
            if matches!(solve(&cell.equations, &cell.rhs, n), LinearSolution::Inconsistent) {
                return Err(ctx("inconsistent equations".into()));
            }
            let w = interior_point(cell, n).map_err(|_| ctx("empty cell".into()))?;
            for g in &cell.initial_generators {
                if g.nvars() != n {
                    return Err(ctx("generator in the wrong number of variables".into()));
                }
                if !homogeneous_on_cell(g, cell, &w, rk) {
                    return Err(ctx(format!(
                        "initial generator {} is not homogeneous on the cell",
                        crate::algebra::render_rational(g, &self.variables)
                    )));
                }
            }
        }
        Ok(())
    }
}
