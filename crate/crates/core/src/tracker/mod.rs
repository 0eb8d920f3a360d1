//! Predictor–corrector continuation along the real segment `t ∈ [ε, 1]`.
//!
//! Paths are followed in the scaled coordinates of their start point
//! (`y = x ⊙ t^{-ω}`), where the start point is the leading coefficient `c`
//! itself and all quantities stay of unit size. At `t = 1` the scaled and
//! original coordinates agree.

mod filter;
pub mod system;

use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::initsys::LeadingTerm;
use crate::linalg::{max_norm, solve_complex};

pub use filter::{refine_and_filter, DiscardReason, Discarded, FilterOutcome, Solution};
pub use system::{square_system, Evaluation, Homotopy, LinearHomotopy, ScaledFamily, SquareSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackerSettings {
    pub newton_tol: f64,
    pub max_newton_iters: u32,
    pub initial_step: f64,
    pub min_step: f64,
    pub step_expansion: f64,
    pub step_contraction: f64,
    pub max_steps: u64,
    pub endpoint_refine_iters: u32,
    /// Relative residual a successful endpoint must reach.
    pub residual_tol: f64,
    pub divergence_bound: f64,
    /// `ε` is searched over `2^-first, …, 2^-last`.
    pub epsilon_first_exponent: u32,
    pub epsilon_last_exponent: u32,
}

impl Default for TrackerSettings {
    fn default() -> Self {
        TrackerSettings {
            newton_tol: 1e-10,
            max_newton_iters: 5,
            initial_step: 1e-2,
            min_step: 1e-12,
            step_expansion: 1.5,
            step_contraction: 0.5,
            max_steps: 50_000,
            endpoint_refine_iters: 10,
            residual_tol: 1e-8,
            divergence_bound: 1e12,
            epsilon_first_exponent: 5,
            epsilon_last_exponent: 40,
        }
    }
}

impl TrackerSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("newton_tol", self.newton_tol),
            ("initial_step", self.initial_step),
            ("min_step", self.min_step),
            ("residual_tol", self.residual_tol),
            ("divergence_bound", self.divergence_bound),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidProblem(format!("tracker setting {name} must be positive")));
        }
        if self.max_newton_iters == 0 || self.max_steps == 0 {
            return Err(Error::InvalidProblem("tracker iteration limits must be positive".into()));
        }
        if self.min_step >= self.initial_step {
            return Err(Error::InvalidProblem("min_step must be below initial_step".into()));
        }
        if !(self.step_expansion > 1.0) || !(self.step_contraction > 0.0 && self.step_contraction < 1.0) {
            return Err(Error::InvalidProblem("step_expansion must exceed 1 and step_contraction lie in (0, 1)".into()));
        }
        if self.epsilon_first_exponent > self.epsilon_last_exponent || self.epsilon_last_exponent > 1000 {
            return Err(Error::InvalidProblem("epsilon exponent range is empty or too large".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStatus {
    Success,
    Diverged,
    StepUnderflow,
    NewtonFailure,
}

impl std::fmt::Display for PathStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PathStatus::Success => "success",
            PathStatus::Diverged => "diverged",
            PathStatus::StepUnderflow => "step_underflow",
            PathStatus::NewtonFailure => "newton_failure",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathResult {
    pub status: PathStatus,
    /// Point at `t = 1` (or where tracking stopped).
    pub endpoint: Vec<Complex64>,
    pub residual: f64,
    pub start: LeadingTerm,
    pub epsilon_used: Rational,
    pub steps_taken: u64,
}

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub point: Vec<Complex64>,
    pub converged: bool,
    pub iterations: u32,
    /// `‖point − start‖∞`.
    pub displacement: f64,
    pub residual_before: f64,
    pub residual_after: f64,
    /// Residual after the first step alone.
    pub residual_first_step: f64,
}

/// Newton on `H(·, t)`; converged once a step is below
/// `tol · max(1, ‖y‖∞)`.
pub fn newton<H: Homotopy + ?Sized>(h: &H, start: &[Complex64], t: f64, max_iters: u32, tol: f64) -> NewtonOutcome {
    let mut y = start.to_vec();
    let first = h.evaluate(&y, t);
    let residual_before = first.relative_residual();
    let mut eval = first;
    let mut converged = false;
    let mut iterations = 0;
    let mut residual_first_step = residual_before;
    while iterations < max_iters {
        let Some(delta) = solve_complex(eval.jacobian.clone(), &(-&eval.values)) else {
            break;
        };
        for (yi, d) in y.iter_mut().zip(delta.iter()) {
            *yi += d;
        }
        iterations += 1;
        eval = h.evaluate(&y, t);
        if iterations == 1 {
            residual_first_step = eval.relative_residual();
        }
        if !y.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            break;
        }
        if max_norm(delta.as_slice()) <= tol * max_norm(&y).max(1.0) {
            converged = true;
            break;
        }
    }
    let displacement = y.iter().zip(start).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    NewtonOutcome {
        residual_after: eval.relative_residual(),
        point: y,
        converged,
        iterations,
        displacement,
        residual_before,
        residual_first_step,
    }
}

/// `dy/dt = −H_y⁻¹ H_t`.
fn tangent<H: Homotopy + ?Sized>(h: &H, y: &[Complex64], t: f64) -> Option<DVector<Complex64>> {
    let e = h.evaluate(y, t);
    solve_complex(e.jacobian, &(-e.dt))
}

fn axpy(y: &[Complex64], a: f64, v: &DVector<Complex64>) -> Vec<Complex64> {
    y.iter().zip(v.iter()).map(|(yi, vi)| yi + vi * a).collect()
}

fn rk4<H: Homotopy + ?Sized>(h: &H, y: &[Complex64], t: f64, dt: f64) -> Option<Vec<Complex64>> {
    let k1 = tangent(h, y, t)?;
    let k2 = tangent(h, &axpy(y, dt / 2.0, &k1), t + dt / 2.0)?;
    let k3 = tangent(h, &axpy(y, dt / 2.0, &k2), t + dt / 2.0)?;
    let k4 = tangent(h, &axpy(y, dt, &k3), t + dt)?;
    let two = Complex64::new(2.0, 0.0);
    let incr = (k1 + k2 * two + k3 * two + k4) / Complex64::new(6.0, 0.0);
    Some(axpy(y, dt, &incr))
}

#[derive(Clone, Debug)]
pub struct SegmentOutcome {
    /// `None` when `t1` was reached.
    pub failure: Option<PathStatus>,
    pub point: Vec<Complex64>,
    pub t: f64,
    pub steps: u64,
}

/// Follows a solution of `H(·, t0)` to `t1 > t0`. With `relative` the
/// step never exceeds the current `t`, so that paths starting near
/// `t = 0` resolve the fast initial motion.
pub fn track_segment<H: Homotopy + ?Sized>(
    h: &H,
    start: &[Complex64],
    t0: f64,
    t1: f64,
    settings: &TrackerSettings,
    relative: bool,
) -> SegmentOutcome {
    let mut y = start.to_vec();
    let mut t = t0;
    let mut step = settings.initial_step;
    let mut streak = 0;
    let mut steps = 0u64;
    let mut attempts = 0u64;
    let fail = |status, y: Vec<Complex64>, t, steps| SegmentOutcome {
        failure: Some(status),
        point: y,
        t,
        steps,
    };
    while t < t1 {
        if attempts >= settings.max_steps {
            return fail(PathStatus::StepUnderflow, y, t, steps);
        }
        attempts += 1;
        let mut dt = step.min(t1 - t);
        if relative {
            dt = dt.min(t);
        }
        let t_next = if dt >= t1 - t { t1 } else { t + dt };
        let dt = t_next - t;
        let accepted = rk4(h, &y, t, dt).and_then(|pred| {
            let corr = newton(h, &pred, t_next, settings.max_newton_iters, settings.newton_tol);
            // a corrector that wanders far from the prediction may have jumped paths
            let scale = max_norm(&pred).max(1.0);
            let moved = corr.point.iter().zip(&pred).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            (corr.converged && moved <= 0.1 * scale).then_some(corr.point)
        });
        match accepted {
            Some(next) => {
                y = next;
                t = t_next;
                steps += 1;
                streak += 1;
                if streak >= 3 {
                    step *= settings.step_expansion;
                    streak = 0;
                }
                if max_norm(&y) > settings.divergence_bound {
                    return fail(PathStatus::Diverged, y, t, steps);
                }
            }
            None => {
                step *= settings.step_contraction;
                streak = 0;
                if step < settings.min_step {
                    return fail(PathStatus::StepUnderflow, y, t, steps);
                }
            }
        }
    }
    SegmentOutcome {
        failure: None,
        point: y,
        t,
        steps,
    }
}

/// Newton polish at `t`; returns the point and its relative residual.
pub fn refine_endpoint<H: Homotopy + ?Sized>(h: &H, y: &[Complex64], t: f64, settings: &TrackerSettings) -> (Vec<Complex64>, f64) {
    let out = newton(h, y, t, settings.endpoint_refine_iters, f64::EPSILON);
    if out.residual_after <= out.residual_before && out.point.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        (out.point, out.residual_after)
    } else {
        (y.to_vec(), out.residual_before)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonChoice {
    pub exponent: u32,
    pub epsilon: Rational,
    /// Corrected start point at `t = ε` in scaled coordinates.
    pub start: Vec<Complex64>,
}

pub fn power_of_two_inverse(k: u32) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(2).pow(k))
}

/// The largest `ε = 2^-k` at which Newton from `c` converges quickly and
/// stays within `0.01 · separation`, and whose first step reduces the
/// residual. `separation` is the smallest distance from `c` to another
/// start point of the same `ω`.
pub fn choose_epsilon(c: &[Complex64], h: &ScaledFamily, separation: Option<f64>, settings: &TrackerSettings) -> Result<EpsilonChoice> {
    let radius = 0.01 * separation.unwrap_or(1.0);
    for k in settings.epsilon_first_exponent..=settings.epsilon_last_exponent {
        let eps = 0.5f64.powi(k as i32);
        let out = newton(h, c, eps, settings.max_newton_iters, settings.newton_tol);
        let decreases = out.residual_first_step <= out.residual_before || out.residual_before <= settings.newton_tol;
        if out.converged && out.displacement <= radius && decreases {
            return Ok(EpsilonChoice {
                exponent: k,
                epsilon: power_of_two_inverse(k),
                start: out.point,
            });
        }
    }
    Err(Error::NoAdmissibleEpsilon {
        min_exponent: settings.epsilon_last_exponent,
    })
}

/// Tracks a chosen start from `ε` to `1` and polishes the endpoint.
pub fn track_path(h: &ScaledFamily, start: &LeadingTerm, choice: &EpsilonChoice, settings: &TrackerSettings) -> PathResult {
    let eps = 0.5f64.powi(choice.exponent as i32);
    let seg = track_segment(h, &choice.start, eps, 1.0, settings, true);
    let (status, endpoint, residual) = match seg.failure {
        Some(status) => {
            let r = h.evaluate(&seg.point, seg.t).relative_residual();
            (status, seg.point, r)
        }
        None => {
            let (y, r) = refine_endpoint(h, &seg.point, 1.0, settings);
            let status = if r <= settings.residual_tol { PathStatus::Success } else { PathStatus::NewtonFailure };
            (status, y, r)
        }
    };
    PathResult {
        status,
        endpoint,
        residual,
        start: start.clone(),
        epsilon_used: choice.epsilon.clone(),
        steps_taken: seg.steps,
    }
}

/// For each start, the distance to the nearest other start with the same `ω`.
pub fn start_separations(starts: &[LeadingTerm]) -> Vec<Option<f64>> {
    starts
        .iter()
        .enumerate()
        .map(|(i, a)| {
            starts
                .iter()
                .enumerate()
                .filter(|(j, b)| *j != i && b.omega == a.omega)
                .map(|(_, b)| a.c.iter().zip(&b.c).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max))
                .min_by(f64::total_cmp)
        })
        .collect()
}
