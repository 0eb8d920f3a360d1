//! Endpoint verification: residuals against the unsquared system, removal
//! of base-locus points and duplicates, projection to the original
//! variables. Every endpoint is either kept or listed with a reason.

use num_complex::Complex64;

use super::{PathResult, PathStatus};
use crate::algebra::{monomial_value, to_complex};
use crate::liftgen::LiftedSystem;
use crate::linalg::max_norm;
use crate::reformulate::ProblemA;

const BASE_LOCUS_TOL: f64 = 1e-8;
const DUPLICATE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum DiscardReason {
    Tracking(PathStatus),
    /// Some generator of `G′` is not satisfied.
    GResidual(f64),
    FResidual(f64),
    /// Every monomial of `F′ᵢ` vanishes.
    BaseLocus { support: usize },
    /// Within tolerance of an earlier kept endpoint, a suspected path crossing.
    Duplicate { of_path: usize },
}

impl std::fmt::Display for DiscardReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiscardReason::Tracking(s) => write!(f, "tracking: {s}"),
            DiscardReason::GResidual(r) => write!(f, "G-residual {r:e}"),
            DiscardReason::FResidual(r) => write!(f, "f-residual {r:e}"),
            DiscardReason::BaseLocus { support } => write!(f, "base-locus of support {}", support + 1),
            DiscardReason::Duplicate { of_path } => write!(f, "duplicate of path {of_path} (suspected path crossing)"),
        }
    }
}

impl DiscardReason {
    pub fn code(&self) -> &'static str {
        match self {
            DiscardReason::Tracking(_) => "tracking",
            DiscardReason::GResidual(_) => "G-residual",
            DiscardReason::FResidual(_) => "f-residual",
            DiscardReason::BaseLocus { .. } => "base-locus",
            DiscardReason::Duplicate { .. } => "duplicate",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Coordinates in the original variables.
    pub x: Vec<Complex64>,
    /// Coordinates including slacks.
    pub point: Vec<Complex64>,
    pub path: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Discarded {
    pub path: usize,
    pub endpoint: Vec<Complex64>,
    pub reason: DiscardReason,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FilterOutcome {
    pub solutions: Vec<Solution>,
    pub discarded: Vec<Discarded>,
}

/// `|m(x)| ≤ tol · (1 + ‖x‖^{deg m})` for every monomial of some `F′ᵢ`.
pub fn base_locus_support(ls: &LiftedSystem, x: &[Complex64]) -> Option<usize> {
    let norm = max_norm(x);
    ls.supports.iter().position(|f| {
        f.iter().all(|e| {
            let bound = BASE_LOCUS_TOL * (1.0 + norm.powi(e.degree() as i32));
            monomial_value(e, x).norm() <= bound
        })
    })
}

pub fn refine_and_filter(results: &[PathResult], problem: &ProblemA, ls: &LiftedSystem, residual_tol: f64) -> FilterOutcome {
    let g: Vec<_> = problem.equations.iter().map(to_complex).collect();
    let f = ls.targets();
    let mut out = FilterOutcome::default();
    for (path, r) in results.iter().enumerate() {
        let discard = |reason| Discarded {
            path,
            endpoint: r.endpoint.clone(),
            reason,
        };
        if r.status != PathStatus::Success {
            out.discarded.push(discard(DiscardReason::Tracking(r.status)));
            continue;
        }
        let x = &r.endpoint;
        let gr = g.iter().map(|p| p.relative_residual(x)).fold(0.0, f64::max);
        if gr > residual_tol {
            out.discarded.push(discard(DiscardReason::GResidual(gr)));
            continue;
        }
        let fr = f.iter().map(|p| p.relative_residual(x)).fold(0.0, f64::max);
        if fr > residual_tol {
            out.discarded.push(discard(DiscardReason::FResidual(fr)));
            continue;
        }
        if let Some(support) = base_locus_support(ls, x) {
            out.discarded.push(discard(DiscardReason::BaseLocus { support }));
            continue;
        }
        let near = out.solutions.iter().find(|s| {
            let d = s.point.iter().zip(x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            d <= DUPLICATE_TOL * max_norm(x).max(1.0)
        });
        if let Some(s) = near {
            out.discarded.push(discard(DiscardReason::Duplicate { of_path: s.path }));
            continue;
        }
        out.solutions.push(Solution {
            x: problem.project_solution(x),
            point: x.clone(),
            path,
            residual: gr.max(fr),
        });
    }
    out
}
