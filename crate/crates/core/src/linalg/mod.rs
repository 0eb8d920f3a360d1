//! Exact rational and integer linear algebra, plus the small dense complex
//! solves used by the numerical stages.

pub mod lattice;
pub mod lp;
pub mod rational;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Solves `A x = b` by LU with partial pivoting; `None` if `A` is singular.
pub fn solve_complex(a: DMatrix<Complex64>, b: &DVector<Complex64>) -> Option<DVector<Complex64>> {
    let x = a.lu().solve(b)?;
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(x)
}

pub fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}
