//! Initial systems `J_ω` and their torus roots, the leading coefficients
//! of the Puiseux solutions.
//!
//! Binomial systems are solved in closed form through the Smith normal form
//! of their exponent matrix. Anything else goes through a total-degree
//! homotopy whose endpoints are verified against every generator.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{integer, t_initial_form, to_complex, ComplexPoly, ExponentVector, Rational, WeightVector};
use crate::error::{Error, Result};
use crate::intersect::IntersectionPoint;
use crate::liftgen::LiftedSystem;
use crate::linalg::lattice::smith_normal_form;
use crate::linalg::max_norm;
use crate::tracker::system::{random_combinations, random_phase, Homotopy};
use crate::tracker::{newton, refine_endpoint, track_segment, LinearHomotopy, ScaledFamily, TrackerSettings};
use crate::tropgeom::TropicalComplex;

const GENERAL_STREAM: u64 = 3;
const CLUSTER_TOL: f64 = 1e-6;
const VERIFY_TOL: f64 = 1e-8;
/// Coordinates below this (relative) are suspect when the Jacobian is singular.
const NEAR_ZERO_TOL: f64 = 1e-4;
const SINGULAR_TOL: f64 = 1e-3;
const MAX_START_ROOTS: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootFlag {
    Simple,
    /// A cluster of this many coincident roots.
    Multiple(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeadingTerm {
    pub c: Vec<Complex64>,
    pub omega: WeightVector,
    pub flag: RootFlag,
    /// Largest relative generator residual at `c`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialSystem {
    pub omega: WeightVector,
    /// `init_ω⟨G⟩` as stored on the cell.
    pub cell_generators: Vec<ComplexPoly>,
    /// `tinit_ω fᵢ(t)` for each lifted polynomial.
    pub tinit: Vec<ComplexPoly>,
    pub is_binomial: bool,
    /// Stage 2 multiplicity of the point.
    pub multiplicity: u64,
    /// Seed for the randomness of the fallback solver.
    pub seed: u64,
}

impl InitialSystem {
    pub fn nvars(&self) -> usize {
        self.omega.len()
    }

    pub fn generators(&self) -> Vec<ComplexPoly> {
        self.cell_generators.iter().chain(&self.tinit).cloned().collect()
    }

    pub fn residual(&self, c: &[Complex64]) -> f64 {
        self.cell_generators
            .iter()
            .chain(&self.tinit)
            .map(|g| g.relative_residual(c))
            .fold(0.0, f64::max)
    }
}

pub fn build_initial_system(pt: &IntersectionPoint, tx: &TropicalComplex, ls: &LiftedSystem) -> Result<InitialSystem> {
    let cell = tx
        .cells
        .get(pt.certificate.cell_index)
        .ok_or_else(|| Error::InvalidComplex(format!("no cell {}", pt.certificate.cell_index)))?;
    let mut tinit = Vec::with_capacity(ls.r());
    for (i, (a, b)) in pt.certificate.edge_pairs.iter().enumerate() {
        let form = t_initial_form(&ls.poly(i), &pt.omega)?;
        let support = form.support();
        if support.len() != 2 || !support.contains(a) || !support.contains(b) {
            return Err(Error::Degenerate(format!(
                "t-initial form of lifted polynomial {} is not supported on its certificate pair",
                i + 1
            )));
        }
        tinit.push(form);
    }
    let cell_generators: Vec<ComplexPoly> = cell.initial_generators.iter().map(to_complex).collect();
    let is_binomial = cell_generators.iter().chain(&tinit).all(|g| g.len() == 2);
    Ok(InitialSystem {
        omega: pt.omega.clone(),
        cell_generators,
        tinit,
        is_binomial,
        multiplicity: pt.multiplicity,
        seed: ls.seed,
    })
}

fn lex_key(c: &[Complex64]) -> Vec<(f64, f64)> {
    c.iter().map(|z| (z.re, z.im)).collect()
}

fn sort_roots(roots: &mut [LeadingTerm]) {
    roots.sort_by(|a, b| {
        lex_key(&a.c)
            .partial_cmp(&lex_key(&b.c))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// All `|det V|` torus roots of `N` binomials `a x^α + b x^β` in `N`
/// unknowns, where `V` has rows `α − β`.
pub fn solve_binomial(sys: &InitialSystem) -> Result<Vec<LeadingTerm>> {
    let n = sys.nvars();
    let gens = sys.generators();
    if !sys.is_binomial || gens.len() != n {
        return Err(Error::InvalidProblem(format!(
            "binomial solve needs {n} binomials, got {} generators",
            gens.len()
        )));
    }
    let mut rows = Vec::with_capacity(n);
    let mut log_rhs = Vec::with_capacity(n);
    for g in &gens {
        let mut terms = g.terms();
        let (alpha, a) = terms.next().expect("two terms");
        let (beta, b) = terms.next().expect("two terms");
        rows.push(alpha.difference(beta).into_iter().map(BigInt::from).collect::<Vec<_>>());
        log_rhs.push((-b / a).ln());
    }
    let snf = smith_normal_form(&rows, n);
    if snf.rank() < n {
        return Err(Error::Degenerate("singular binomial exponent matrix".into()));
    }
    let diag: Vec<u64> = snf
        .diagonal
        .iter()
        .map(|d| d.to_u64().ok_or(Error::Overflow))
        .collect::<Result<_>>()?;
    let count = diag.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d)).ok_or(Error::Overflow)?;
    if count > MAX_START_ROOTS {
        return Err(Error::Overflow);
    }
    let to_f = |v: &BigInt| v.to_f64().unwrap_or(f64::NAN);
    let p_log: Vec<Complex64> = snf
        .p
        .iter()
        .map(|row| row.iter().zip(&log_rhs).map(|(p, l)| l * to_f(p)).sum())
        .collect();

    let family = ScaledFamily::new(&gens, &[], &vec![integer(0); n])?;
    let tau = std::f64::consts::TAU;
    let mut roots = Vec::with_capacity(count as usize);
    for code in 0..count {
        let mut rest = code;
        let y_prime: Vec<Complex64> = (0..n)
            .map(|j| {
                let k = rest % diag[j];
                rest /= diag[j];
                (p_log[j] + Complex64::new(0.0, tau * k as f64)) / diag[j] as f64
            })
            .collect();
        let c0: Vec<Complex64> = snf
            .q
            .iter()
            .map(|row| row.iter().zip(&y_prime).map(|(q, y)| y * to_f(q)).sum::<Complex64>().exp())
            .collect();
        let polished = newton(&family, &c0, 1.0, 3, f64::EPSILON);
        let c = if polished.residual_after <= polished.residual_before { polished.point } else { c0 };
        roots.push(LeadingTerm {
            residual: sys.residual(&c),
            c,
            omega: sys.omega.clone(),
            flag: RootFlag::Simple,
        });
    }
    sort_roots(&mut roots);
    Ok(roots)
}

/// Outcome of the total-degree fallback, with what was dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralSolve {
    pub roots: Vec<LeadingTerm>,
    pub paths: usize,
    pub diverged: usize,
    pub failed: usize,
    pub zero_coordinate: usize,
    /// Endpoints of the squared system violating some generator.
    pub spurious: usize,
}

impl GeneralSolve {
    /// Roots counted with cluster size.
    pub fn counted(&self) -> usize {
        self.roots
            .iter()
            .map(|r| match r.flag {
                RootFlag::Simple => 1,
                RootFlag::Multiple(k) => k,
            })
            .sum()
    }
}

fn unit_poly(nvars: usize, var: usize, degree: u32, b: Complex64) -> ComplexPoly {
    let mut e = vec![0u32; nvars];
    e[var] = degree;
    ComplexPoly::from_terms(
        nvars,
        [(ExponentVector::new(e), Complex64::new(1.0, 0.0)), (ExponentVector::zero(nvars), -b)],
    )
}

/// Torus roots by a total-degree homotopy on a square version of the
/// system. Zero-coordinate roots cannot be leading coefficients and are
/// dropped; near-coincident roots are merged into one flagged cluster.
pub fn solve_general(sys: &InitialSystem, settings: &TrackerSettings) -> Result<GeneralSolve> {
    let n = sys.nvars();
    let r = sys.tinit.len();
    let need = n.checked_sub(r).ok_or(Error::Underdetermined { have: r, need: n })?;
    if sys.cell_generators.len() < need {
        return Err(Error::Underdetermined {
            have: sys.cell_generators.len(),
            need,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sys.seed);
    rng.set_stream(GENERAL_STREAM);
    let (mut square, _) = if need == 0 {
        (Vec::new(), None)
    } else {
        random_combinations(&sys.cell_generators, need, &mut rng)
    };
    square.extend(sys.tinit.iter().cloned());

    let degrees: Vec<u32> = square.iter().map(|g| g.total_degree() as u32).collect();
    if degrees.contains(&0) {
        return Err(Error::Degenerate("constant equation in the initial system".into()));
    }
    let paths = degrees.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d as u64)).ok_or(Error::Overflow)?;
    if paths > MAX_START_ROOTS {
        return Err(Error::Overflow);
    }
    let b: Vec<Complex64> = (0..n).map(|_| random_phase(&mut rng)).collect();
    let gamma = random_phase(&mut rng);
    let start: Vec<ComplexPoly> = (0..n).map(|j| unit_poly(n, j, degrees[j], b[j])).collect();
    let h = LinearHomotopy {
        start,
        target: square,
        gamma,
    };

    let tau = std::f64::consts::TAU;
    let starts: Vec<Vec<Complex64>> = (0..paths)
        .map(|code| {
            let mut rest = code;
            (0..n)
                .map(|j| {
                    let d = degrees[j] as u64;
                    let k = rest % d;
                    rest /= d;
                    let base = b[j].powf(1.0 / d as f64);
                    base * Complex64::from_polar(1.0, tau * k as f64 / d as f64)
                })
                .collect()
        })
        .collect();

    enum End {
        Point(Vec<Complex64>),
        Diverged,
        Failed,
    }
    let ends: Vec<End> = starts
        .par_iter()
        .map(|x0| {
            let seg = track_segment(&h, x0, 0.0, 1.0, settings, false);
            if max_norm(&seg.point) > 1e6 {
                return End::Diverged;
            }
            // a path stalling just short of s = 1 may be heading into a singular root
            let (y, res) = refine_endpoint(&h, &seg.point, 1.0, settings);
            if res <= VERIFY_TOL && max_norm(&y) <= 1e6 {
                End::Point(y)
            } else if seg.failure.is_none() {
                End::Failed
            } else if max_norm(&seg.point) > 1e4 {
                End::Diverged
            } else {
                End::Failed
            }
        })
        .collect();

    let mut out = GeneralSolve {
        roots: Vec::new(),
        paths: paths as usize,
        diverged: 0,
        failed: 0,
        zero_coordinate: 0,
        spurious: 0,
    };
    let mut points: Vec<Vec<Complex64>> = Vec::new();
    for e in ends {
        match e {
            End::Diverged => out.diverged += 1,
            End::Failed => out.failed += 1,
            End::Point(x) => {
                let scale = max_norm(&x).max(1.0);
                if x.iter().any(|v| v.norm() <= VERIFY_TOL * scale) || approaches_boundary(&h, &x, scale) {
                    out.zero_coordinate += 1;
                } else if sys.residual(&x) > VERIFY_TOL {
                    out.spurious += 1;
                } else {
                    points.push(x);
                }
            }
        }
    }

    let mut clusters: Vec<(Vec<Complex64>, usize)> = Vec::new();
    for x in points {
        let scale = max_norm(&x).max(1.0);
        let hit = clusters.iter_mut().find(|(rep, _)| {
            rep.iter().zip(&x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) <= CLUSTER_TOL * scale
        });
        match hit {
            Some((_, k)) => *k += 1,
            None => clusters.push((x, 1)),
        }
    }
    out.roots = clusters
        .into_iter()
        .map(|(c, k)| LeadingTerm {
            residual: sys.residual(&c),
            c,
            omega: sys.omega.clone(),
            flag: if k == 1 { RootFlag::Simple } else { RootFlag::Multiple(k) },
        })
        .collect();
    sort_roots(&mut out.roots);
    Ok(out)
}

/// Endpoints converging slowly onto a coordinate hyperplane: some small
/// coordinate and a numerically singular Jacobian.
fn approaches_boundary(h: &LinearHomotopy, x: &[Complex64], scale: f64) -> bool {
    if !x.iter().any(|v| v.norm() <= NEAR_ZERO_TOL * scale) {
        return false;
    }
    let sv = h.evaluate(x, 1.0).jacobian.singular_values();
    let largest = sv.max();
    largest == 0.0 || sv.min() <= SINGULAR_TOL * largest
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Binomial,
    TotalDegree,
}

/// Leading terms at one intersection point, checked against its
/// multiplicity. Multiple roots are an error: they would need longer
/// Puiseux truncations.
pub fn solve_initial_system(sys: &InitialSystem, settings: &TrackerSettings) -> Result<(Vec<LeadingTerm>, SolveMethod)> {
    let omega_text = || sys.omega.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ");
    let (roots, method, counted) = if sys.is_binomial && sys.generators().len() == sys.nvars() {
        let roots = solve_binomial(sys)?;
        let k = roots.len();
        (roots, SolveMethod::Binomial, k)
    } else {
        let g = solve_general(sys, settings)?;
        let k = g.counted();
        (g.roots, SolveMethod::TotalDegree, k)
    };
    if roots.iter().any(|r| r.flag != RootFlag::Simple) {
        return Err(Error::MultipleRoot { omega: format!("({})", omega_text()) });
    }
    if counted as u64 != sys.multiplicity {
        return Err(Error::RootCountMismatch {
            found: counted,
            expected: sys.multiplicity,
        });
    }
    Ok((roots, method))
}

/// `|g(c)|` of every generator is small relative to its terms.
pub fn is_root(sys: &InitialSystem, c: &[Complex64], tol: f64) -> bool {
    c.iter().all(|v| !v.is_zero()) && sys.residual(c) <= tol
}
