//! End-to-end orchestration: reformulate, lift, intersect, solve initial
//! systems, track, filter. One seed governs an attempt; lift-related
//! failures regenerate the lift and try again up to a cap.

pub mod io;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{render_complex, render_rational};
use crate::error::{Error, Result};
use crate::initsys::{build_initial_system, solve_initial_system, LeadingTerm, SolveMethod};
use crate::intersect::{total_count, transverse_intersection, IntersectionPoint};
use crate::liftgen::{generate_lift, regenerate_on_degeneracy, LiftParams, LiftedSystem, DEFAULT_MAX_RETRIES};
use crate::reformulate::{to_setting_a, ProblemA, ProblemB};
use crate::tracker::{
    choose_epsilon, refine_and_filter, square_system, start_separations, track_path, FilterOutcome, PathResult, PathStatus,
    TrackerSettings,
};
use crate::tropgeom::{trop_fullspace, trop_hypersurface, TropicalComplex};

use io::*;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub lift: LiftParams,
    pub max_retries: u32,
    pub tracker: TrackerSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lift: LiftParams::default(),
            max_retries: DEFAULT_MAX_RETRIES,
            tracker: TrackerSettings::default(),
        }
    }
}

/// TOML configuration file; only the `[tracker]` section is recognized.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub tracker: TrackerSettings,
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    toml::from_str(text).map_err(|e| Error::Schema {
        path: "config".into(),
        message: e.to_string(),
    })
}

/// Exit status of the command-line tool for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::RetryCapExceeded { .. } | Error::Degenerate(_) => 2,
        Error::MultipleRoot { .. } => 3,
        _ => 1,
    }
}

/// `trop(X)`: the whole space for `G′ = ∅`, the hypersurface for one
/// generator, otherwise the supplied complex (which also overrides).
pub fn trop_source(a: &ProblemA, supplied: Option<&TropicalComplex>) -> Result<TropicalComplex> {
    if let Some(tx) = supplied {
        if tx.ambient_dim != a.nvars() {
            return Err(Error::InvalidComplex(format!(
                "complex lives in {} variables, the reformulated problem in {}",
                tx.ambient_dim,
                a.nvars()
            )));
        }
        if tx.variables != a.variables {
            return Err(Error::InvalidComplex(format!(
                "complex variables {:?} differ from the reformulated variables {:?}",
                tx.variables, a.variables
            )));
        }
        return Ok(tx.clone());
    }
    match a.equations.len() {
        0 => Ok(trop_fullspace(a.nvars()).with_variables(a.variables.clone())?),
        1 => trop_hypersurface(&a.equations[0], &a.variables),
        k => Err(Error::MissingComplex(k)),
    }
}

fn check_dimension(tx: &TropicalComplex, a: &ProblemA) -> Result<()> {
    if tx.dim != a.r() {
        return Err(Error::InvalidProblem(format!(
            "dim X = {} but there are {} linear systems; the solution set would not be finite",
            tx.dim,
            a.r()
        )));
    }
    Ok(())
}

struct Attempt {
    points: Vec<IntersectionPoint>,
    initial: Vec<InitialSystemJson>,
    paths: Vec<PathResult>,
    filtered: FilterOutcome,
    squaring: Option<Vec<Vec<num_complex::Complex64>>>,
    timings: Timings,
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

fn stage2(tx: &TropicalComplex, ls: &LiftedSystem) -> Result<Vec<IntersectionPoint>> {
    transverse_intersection(tx, ls)?.into_result()
}

fn attempt(a: &ProblemA, tx: &TropicalComplex, ls: &LiftedSystem, settings: &TrackerSettings) -> Result<Attempt> {
    let mut timings = Timings::default();
    let clock = Instant::now();
    let points = stage2(tx, ls)?;
    timings.intersect = secs(clock);

    let clock = Instant::now();
    let solved: Vec<(Vec<LeadingTerm>, SolveMethod)> = points
        .par_iter()
        .map(|p| solve_initial_system(&build_initial_system(p, tx, ls)?, settings))
        .collect::<Result<_>>()?;
    let initial = points
        .iter()
        .zip(&solved)
        .map(|(p, (roots, method))| InitialSystemJson {
            omega: json_rationals(&p.omega),
            method: match method {
                SolveMethod::Binomial => "binomial".into(),
                SolveMethod::TotalDegree => "total_degree".into(),
            },
            roots: roots.len(),
            max_residual: roots.iter().map(|r| r.residual).fold(0.0, f64::max),
        })
        .collect();
    let mut starts: Vec<LeadingTerm> = solved.into_iter().flat_map(|(r, _)| r).collect();
    timings.initial_systems = secs(clock);

    let clock = Instant::now();
    // starts sorted by ω, then by c; the per-path output follows this order
    starts.sort_by(|x, y| {
        x.omega.cmp(&y.omega).then_with(|| {
            let kx: Vec<(f64, f64)> = x.c.iter().map(|z| (z.re, z.im)).collect();
            let ky: Vec<(f64, f64)> = y.c.iter().map(|z| (z.re, z.im)).collect();
            kx.partial_cmp(&ky).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let square = square_system(&a.equations, ls)?;
    let separations = start_separations(&starts);
    let paths: Vec<PathResult> = starts
        .par_iter()
        .zip(&separations)
        .map(|(lt, sep)| {
            let family = square.family(&lt.omega)?;
            let choice = choose_epsilon(&lt.c, &family, *sep, settings)?;
            Ok(track_path(&family, lt, &choice, settings))
        })
        .collect::<Result<_>>()?;
    timings.tracking = secs(clock);

    let failed = paths.iter().filter(|p| p.status != PathStatus::Success).count();
    if failed > 0 {
        return Err(Error::PathFailures {
            failed,
            launched: paths.len(),
        });
    }

    let clock = Instant::now();
    let filtered = refine_and_filter(&paths, a, ls, settings.residual_tol);
    timings.filter = secs(clock);
    Ok(Attempt {
        points,
        initial,
        paths,
        filtered,
        squaring: square.combinations,
        timings,
    })
}

/// Runs `body` on successive lifts until it succeeds or fails for a
/// reason a new lift cannot cure.
fn with_retries<T>(
    a: &ProblemA,
    config: &RunConfig,
    mut body: impl FnMut(&LiftedSystem) -> Result<T>,
) -> Result<(T, LiftedSystem, Vec<RetryJson>)> {
    let mut ls = generate_lift(a, &config.lift)?;
    let mut retries = Vec::new();
    loop {
        match body(&ls) {
            Ok(v) => return Ok((v, ls, retries)),
            Err(e) if e.is_lift_related() => {
                let reason = e.to_string();
                retries.push(RetryJson {
                    seed: ls.seed,
                    reason: reason.clone(),
                });
                ls = regenerate_on_degeneracy(&ls, config.max_retries, &reason)?;
            }
            Err(e) => return Err(e),
        }
    }
}

pub fn lift_json(a: &ProblemA, ls: &LiftedSystem) -> LiftJson {
    LiftJson {
        seed: ls.seed,
        coefficient_seed: ls.coefficient_seed,
        lift_denominator: ls.lift_denominator,
        lift_bound: ls.lift_bound,
        retries: ls.retries,
        variables: a.variables.clone(),
        supports: ls.supports.iter().map(|f| f.iter().map(|e| e.entries().to_vec()).collect()).collect(),
        coefficients: ls.coefficients.iter().map(|c| json_point(c)).collect(),
        lifts: ls.lifts.iter().map(|w| json_rationals(w)).collect(),
        generic_system: ls.targets().iter().map(|f| render_complex(f, &a.variables)).collect(),
    }
}

/// Everything a solve or count produced before it is serialized.
pub struct Prepared {
    pub problem_a: ProblemA,
    pub complex: TropicalComplex,
}

pub fn prepare(problem: &ProblemB, complex: Option<&TropicalComplex>) -> Result<Prepared> {
    let a = to_setting_a(problem)?;
    let tx = trop_source(&a, complex)?;
    check_dimension(&tx, &a)?;
    Ok(Prepared { problem_a: a, complex: tx })
}

pub fn solve(problem: &ProblemB, complex: Option<&TropicalComplex>, config: &RunConfig) -> Result<RunReport> {
    config.tracker.validate()?;
    let start = Instant::now();
    let clock = Instant::now();
    let a = to_setting_a(problem)?;
    let reformulate = secs(clock);
    let clock = Instant::now();
    let tx = trop_source(&a, complex)?;
    check_dimension(&tx, &a)?;
    let trop = secs(clock);

    let (run, ls, retries) = with_retries(&a, config, |ls| attempt(&a, &tx, ls, &config.tracker))?;
    let mut timings = run.timings;
    timings.reformulate = reformulate;
    timings.trop = trop;
    timings.total = secs(start);

    Ok(RunReport {
        schema: REPORT_SCHEMA.into(),
        problem: ProblemFile::from_problem(problem),
        variables: a.variables.clone(),
        g_prime: a.equations.iter().map(|g| render_rational(g, &a.variables)).collect(),
        lift: lift_json(&a, &ls),
        timings,
        total_count: total_count(&run.points),
        intersection_points: run.points.iter().map(PointJson::from_point).collect(),
        paths: run
            .paths
            .iter()
            .map(|p| PathJson {
                omega: json_rationals(&p.start.omega),
                start: json_point(&p.start.c),
                epsilon: crate::tropgeom::io::JsonRational::from_rational(&p.epsilon_used),
                status: p.status,
                steps: p.steps_taken,
                residual: p.residual,
                endpoint: json_point(&p.endpoint),
            })
            .collect(),
        solutions: run
            .filtered
            .solutions
            .iter()
            .map(|s| SolutionJson {
                x: json_point(&s.x),
                residual: s.residual,
                path: s.path,
            })
            .collect(),
        diagnostics: Diagnostics {
            retries,
            initial_systems: run.initial,
            discarded: run
                .filtered
                .discarded
                .iter()
                .map(|d| DiscardJson {
                    path: d.path,
                    reason: d.reason.code().into(),
                    detail: d.reason.to_string(),
                    endpoint: json_point(&d.endpoint),
                })
                .collect(),
            squaring: run.squaring.map(|w| w.iter().map(|r| json_point(r)).collect()),
        },
    })
}

/// Stage 2 only; the total is `deg(X, L)`.
pub fn count(problem: &ProblemB, complex: Option<&TropicalComplex>, config: &RunConfig) -> Result<IntersectionReport> {
    let p = prepare(problem, complex)?;
    let (points, ls, retries) = with_retries(&p.problem_a, config, |ls| stage2(&p.complex, ls))?;
    Ok(IntersectionReport {
        schema: INTERSECTION_SCHEMA.into(),
        seed: ls.seed,
        lift_denominator: ls.lift_denominator,
        lift_bound: ls.lift_bound,
        retries: ls.retries,
        total: total_count(&points),
        points: points.iter().map(PointJson::from_point).collect(),
        degeneracies: retries,
    })
}

/// The lifted family for the configured seed, without any retries.
pub fn lift(problem: &ProblemB, config: &RunConfig) -> Result<LiftJson> {
    let a = to_setting_a(problem)?;
    let ls = generate_lift(&a, &config.lift)?;
    Ok(lift_json(&a, &ls))
}

/// Solutions of a report as complex points.
pub fn report_solutions(r: &RunReport) -> Vec<Vec<num_complex::Complex64>> {
    r.solutions
        .iter()
        .map(|s| s.x.iter().map(|z| num_complex::Complex64::new(z[0], z[1])).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circles() -> ProblemB {
        parse_problem(r#"{"variables":["x","y"],"supports":[["x^2+y^2","x","y","1"],["x^2+y^2","x","y","1"]]}"#).unwrap()
    }

    #[test]
    fn two_circles_solve() {
        let config = RunConfig {
            lift: LiftParams { seed: 7, ..Default::default() },
            ..Default::default()
        };
        let r = solve(&circles(), None, &config).unwrap();
        assert_eq!(r.total_count, 2);
        assert_eq!(r.solutions.len(), 2, "{:#?}", r.diagnostics);
        let back = RunReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), r.to_json());
    }

    #[test]
    fn count_matches() {
        let r = count(&circles(), None, &RunConfig::default()).unwrap();
        assert_eq!(r.total, 2);
    }

    #[test]
    fn monomial_supports_have_nothing() {
        let p = parse_problem(r#"{"variables":["x","y"],"supports":[["x"],["y^2"]]}"#).unwrap();
        let r = solve(&p, None, &RunConfig::default()).unwrap();
        assert_eq!(r.total_count, 0);
        assert!(r.paths.is_empty() && r.solutions.is_empty());
    }

    #[test]
    fn two_generators_need_a_complex() {
        let p = parse_problem(r#"{"variables":["x","y","z"],"G":["x - y", "y - z"],"supports":[["x","1"]]}"#).unwrap();
        assert!(matches!(solve(&p, None, &RunConfig::default()), Err(Error::MissingComplex(2))));
    }

    #[test]
    fn config_sections() {
        let c = parse_config("[tracker]\ninitial_step = 0.05\n").unwrap();
        assert_eq!(c.tracker.initial_step, 0.05);
        assert!(parse_config("[other]\n").is_err());
    }
}
