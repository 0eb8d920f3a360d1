//! Transverse intersection of `trop(X)` with the tropical hypersurfaces of
//! the lifted family, with lattice multiplicities.
//!
//! Candidates are all choices of a cell and one pair of support points per
//! lifted polynomial. Each candidate gives a square exact linear system for
//! `ω`; a unique solution that respects the cell and makes its pairs the
//! strict minima is an intersection point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{integer, ExponentVector, Rational, WeightVector};
use crate::error::{Error, Result};
use crate::liftgen::LiftedSystem;
use crate::linalg::lattice::{hermite_normal_form, int_dot, kernel_basis, lattice_index, IntVector};
use crate::linalg::lp::LinearProgram;
use crate::linalg::rational::{dot, rank, solve, LinearSolution};
use crate::tropgeom::{primitive_integer_row, TropicalCell, TropicalComplex};

/// Which cell and which support pair of every `fᵢ` produced a point.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificate {
    pub cell_index: usize,
    /// `(αᵢ, βᵢ)` per lifted polynomial.
    pub edge_pairs: Vec<(ExponentVector, ExponentVector)>,
    /// Support points tying with the pair. Empty for accepted points.
    pub ties: Vec<Vec<ExponentVector>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionPoint {
    pub omega: WeightVector,
    pub multiplicity: u64,
    pub certificate: DualCertificate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Degeneracy {
    pub cell_index: usize,
    pub omega: Option<WeightVector>,
    pub reason: String,
}

impl std::fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cell {}: {}", self.cell_index, self.reason)?;
        if let Some(w) = &self.omega {
            let parts: Vec<String> = w.iter().map(|q| q.to_string()).collect();
            write!(f, " at omega = ({})", parts.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stage2Outcome {
    Transverse(Vec<IntersectionPoint>),
    Degenerate(Degeneracy),
}

impl Stage2Outcome {
    /// Points, or [`Error::Degenerate`].
    pub fn into_result(self) -> Result<Vec<IntersectionPoint>> {
        match self {
            Stage2Outcome::Transverse(p) => Ok(p),
            Stage2Outcome::Degenerate(d) => Err(Error::Degenerate(d.to_string())),
        }
    }
}

enum Candidate {
    Reject,
    Accept(IntersectionPoint),
    Degenerate(Degeneracy),
}

fn exponent_row(e: &[i64]) -> Vec<Rational> {
    e.iter().map(|&x| integer(x)).collect()
}

fn pairs(len: usize) -> Vec<(usize, usize)> {
    (0..len).flat_map(|a| (a + 1..len).map(move |b| (a, b))).collect()
}

/// Weight `lift(γ) + ω·γ` of every support point of `fᵢ`.
fn weights(ls: &LiftedSystem, i: usize, w: &[Rational]) -> Vec<Rational> {
    ls.supports[i].iter().zip(&ls.lifts[i]).map(|(e, l)| l + e.dot(w)).collect()
}

struct CellContext<'a> {
    index: usize,
    cell: &'a TropicalCell,
    pair_lists: Vec<Vec<(usize, usize)>>,
}

impl CellContext<'_> {
    fn tuple(&self, mut code: usize) -> Vec<(usize, usize)> {
        self.pair_lists
            .iter()
            .map(|list| {
                let p = list[code % list.len()];
                code /= list.len();
                p
            })
            .collect()
    }

    fn count(&self) -> usize {
        self.pair_lists.iter().map(|l| l.len()).product()
    }
}

fn check_candidate(ctx: &CellContext, tuple: &[(usize, usize)], ls: &LiftedSystem) -> Candidate {
    let n = ls.nvars;
    let cell = ctx.cell;
    let mut rows = cell.equations.clone();
    let mut rhs = cell.rhs.clone();
    for (i, &(a, b)) in tuple.iter().enumerate() {
        let (ea, eb) = (&ls.supports[i][a], &ls.supports[i][b]);
        rows.push(exponent_row(&ea.difference(eb)));
        rhs.push(&ls.lifts[i][b] - &ls.lifts[i][a]);
    }
    let degenerate = |omega: Option<WeightVector>, reason: String| {
        Candidate::Degenerate(Degeneracy {
            cell_index: ctx.index,
            omega,
            reason,
        })
    };
    match solve(&rows, &rhs, n) {
        LinearSolution::Inconsistent => Candidate::Reject,
        LinearSolution::Affine { .. } => {
            // a positive-dimensional solution set is harmless unless it meets
            // the closed region where every chosen pair attains the minimum
            let mut lp = LinearProgram::new(n);
            for (r, b) in rows.iter().zip(&rhs) {
                lp.equality(r.clone(), b.clone());
            }
            for (c, d) in &cell.inequalities {
                lp.le(c.clone(), d.clone());
            }
            for (i, &(a, _)) in tuple.iter().enumerate() {
                let ea = &ls.supports[i][a];
                for (g, lg) in ls.supports[i].iter().zip(&ls.lifts[i]) {
                    if g != ea {
                        // ω·(γ − α) ≥ lift(α) − lift(γ)
                        lp.ge(exponent_row(&g.difference(ea)), &ls.lifts[i][a] - lg);
                    }
                }
            }
            if lp.is_feasible() {
                degenerate(None, "chosen pairs attain their minima on a positive-dimensional set".into())
            } else {
                Candidate::Reject
            }
        }
        LinearSolution::Unique(omega) => {
            if cell.inequalities.iter().any(|(c, d)| dot(c, &omega) > *d) {
                return Candidate::Reject;
            }
            let mut ties = Vec::with_capacity(tuple.len());
            for (i, &(a, b)) in tuple.iter().enumerate() {
                let w = weights(ls, i, &omega);
                let target = &w[a];
                if w.iter().any(|x| x < target) {
                    return Candidate::Reject;
                }
                ties.push(
                    (0..w.len())
                        .filter(|&k| k != a && k != b && w[k] == *target)
                        .map(|k| ls.supports[i][k].clone())
                        .collect::<Vec<_>>(),
                );
            }
            if let Some(i) = ties.iter().position(|t| !t.is_empty()) {
                return degenerate(Some(omega), format!("minimum of lifted polynomial {} is attained by more than two terms", i + 1));
            }
            if cell.on_boundary(&omega) {
                return degenerate(Some(omega), "intersection point on a cell boundary".into());
            }
            let certificate = DualCertificate {
                cell_index: ctx.index,
                edge_pairs: tuple
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| (ls.supports[i][a].clone(), ls.supports[i][b].clone()))
                    .collect(),
                ties,
            };
            if !transversality_audit(cell, &certificate) {
                return degenerate(Some(omega), "spans do not sum to the ambient space".into());
            }
            match intersection_multiplicity(cell, &certificate) {
                Ok(multiplicity) => Candidate::Accept(IntersectionPoint {
                    omega,
                    multiplicity,
                    certificate,
                }),
                Err(e) => degenerate(Some(omega), e.to_string()),
            }
        }
    }
}

/// `trop(X) ∩ trop(f₁(t)) ∩ ⋯ ∩ trop(f_r(t))`, sorted by `ω`.
pub fn transverse_intersection(tx: &TropicalComplex, ls: &LiftedSystem) -> Result<Stage2Outcome> {
    if tx.ambient_dim != ls.nvars {
        return Err(Error::DimensionMismatch {
            expected: tx.ambient_dim,
            got: ls.nvars,
        });
    }
    if tx.dim != ls.r() {
        return Err(Error::DimensionMismatch {
            expected: tx.dim,
            got: ls.r(),
        });
    }
    let pair_lists: Vec<Vec<(usize, usize)>> = ls.supports.iter().map(|f| pairs(f.len())).collect();
    let mut accepted = Vec::new();
    for (index, cell) in tx.cells.iter().enumerate() {
        let ctx = CellContext {
            index,
            cell,
            pair_lists: pair_lists.clone(),
        };
        let results: Vec<Candidate> = (0..ctx.count())
            .into_par_iter()
            .map(|code| check_candidate(&ctx, &ctx.tuple(code), ls))
            .filter(|c| !matches!(c, Candidate::Reject))
            .collect();
        for c in results {
            match c {
                Candidate::Accept(p) => accepted.push(p),
                Candidate::Degenerate(d) => return Ok(Stage2Outcome::Degenerate(d)),
                Candidate::Reject => {}
            }
        }
    }
    accepted.sort_by(|a, b| a.omega.cmp(&b.omega).then(a.certificate.cell_index.cmp(&b.certificate.cell_index)));
    // a point found from two cells means it sits on their common boundary
    for w in accepted.windows(2) {
        if w[0].omega == w[1].omega {
            return Ok(Stage2Outcome::Degenerate(Degeneracy {
                cell_index: w[1].certificate.cell_index,
                omega: Some(w[1].omega.clone()),
                reason: "point found in two cells".into(),
            }));
        }
    }
    Ok(Stage2Outcome::Transverse(accepted))
}

/// Full rank of the cell equations together with the pair directions.
pub fn transversality_audit(cell: &TropicalCell, certificate: &DualCertificate) -> bool {
    let n = certificate
        .edge_pairs
        .first()
        .map(|(a, _)| a.len())
        .or_else(|| cell.equations.first().map(|r| r.len()))
        .unwrap_or(0);
    let mut rows = cell.equations.clone();
    rows.extend(certificate.edge_pairs.iter().map(|(a, b)| exponent_row(&a.difference(b))));
    rank(&rows) == n
}

/// Iterated pairwise lattice index: start from the integer kernel of the
/// cell equations with weight `m_σ`; intersecting with each edge
/// hyperplane `vᵢ^⊥` multiplies by the lattice length of `vᵢ` and by
/// `[ℤᴺ : ℤB + vᵢ^⊥]`.
pub fn intersection_multiplicity(cell: &TropicalCell, certificate: &DualCertificate) -> Result<u64> {
    let n = certificate
        .edge_pairs
        .first()
        .map(|(a, _)| a.len())
        .or_else(|| cell.equations.first().map(|r| r.len()))
        .unwrap_or(0);
    let equations: Vec<IntVector> = cell.equations.iter().map(|r| primitive_integer_row(r)).collect();
    let mut basis = if equations.is_empty() {
        kernel_basis(&[], n)
    } else {
        hermite_normal_form(&kernel_basis(&equations, n), n)
    };
    let mut m = BigInt::from(cell.multiplicity);
    for (a, b) in &certificate.edge_pairs {
        let v: IntVector = a.difference(b).into_iter().map(BigInt::from).collect();
        let length = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if length.is_zero() {
            return Err(Error::Degenerate("edge pair with equal endpoints".into()));
        }
        let hyperplane = kernel_basis(std::slice::from_ref(&v), n);
        let mut generators = basis.clone();
        generators.extend(hyperplane);
        let index = lattice_index(&generators, n)
            .ok_or_else(|| Error::Degenerate("cell span and edge hyperplane do not span the ambient space".into()))?;
        m *= length * index;

        // ℤB ∩ vᵢ^⊥ = B · ker(y ↦ Σ yₖ (bₖ·vᵢ))
        let pairing: IntVector = basis.iter().map(|b| int_dot(b, &v)).collect();
        let coords = kernel_basis(std::slice::from_ref(&pairing), basis.len());
        let next: Vec<IntVector> = coords
            .iter()
            .map(|y| {
                (0..n)
                    .map(|j| basis.iter().zip(y).map(|(b, yk)| &b[j] * yk).sum())
                    .collect()
            })
            .collect();
        basis = hermite_normal_form(&next, n);
    }
    if !basis.is_empty() {
        return Err(Error::Degenerate("intersection is not zero-dimensional".into()));
    }
    debug_assert!(m.is_positive());
    m.to_u64().ok_or(Error::Overflow)
}

pub fn total_count(points: &[IntersectionPoint]) -> u64 {
    points.iter().map(|p| p.multiplicity).sum()
}

/// Re-derives every defining property of an accepted point from scratch.
pub fn audit_point(tx: &TropicalComplex, ls: &LiftedSystem, p: &IntersectionPoint) -> bool {
    let Some(cell) = tx.cells.get(p.certificate.cell_index) else {
        return false;
    };
    if !cell.contains(&p.omega) || cell.on_boundary(&p.omega) {
        return false;
    }
    if p.certificate.edge_pairs.len() != ls.r() || p.certificate.ties.iter().any(|t| !t.is_empty()) {
        return false;
    }
    for (i, (a, b)) in p.certificate.edge_pairs.iter().enumerate() {
        let (Some(la), Some(lb)) = (ls.lift_of(i, a), ls.lift_of(i, b)) else {
            return false;
        };
        let wa = la + a.dot(&p.omega);
        if wa != lb + b.dot(&p.omega) {
            return false;
        }
        let strict = ls.supports[i]
            .iter()
            .zip(&ls.lifts[i])
            .filter(|(g, _)| *g != a && *g != b)
            .all(|(g, l)| l + g.dot(&p.omega) > wa);
        if !strict {
            return false;
        }
    }
    transversality_audit(cell, &p.certificate) && p.multiplicity >= 1
}
