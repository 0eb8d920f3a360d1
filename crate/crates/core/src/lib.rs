//! Solver for systems `G = f₁ = ⋯ = f_r = 0` where the `fᵢ` are generic
//! members of linear systems of polynomials and `G` cuts out a variety `X`.
//!
//! The pipeline reformulates arbitrary supports into monomial ones with
//! slack variables, lifts the generic system into a one-parameter family
//! `f(t)`, intersects `trop(X)` with the tropical hypersurfaces of the
//! family, solves the initial systems at each intersection point for the
//! leading Puiseux coefficients, and tracks each start point from a small
//! `t = ε` to `t = 1`.

pub mod algebra;
pub mod error;
pub mod initsys;
pub mod intersect;
pub mod liftgen;
pub mod linalg;
pub mod pipeline;
pub mod reformulate;
pub mod tracker;
pub mod tropgeom;

pub use error::{Error, Result};
