//! `problem.v1` input and the JSON shapes of every output.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_poly, render_rational, ExponentVector, Rational};
use crate::error::{Error, Result};
use crate::intersect::IntersectionPoint;
use crate::reformulate::ProblemB;
use crate::tropgeom::io::JsonRational;

pub const PROBLEM_SCHEMA: &str = "problem.v1";
pub const REPORT_SCHEMA: &str = "report.v1";
pub const INTERSECTION_SCHEMA: &str = "intersection.v1";
pub const LIFT_SCHEMA: &str = "lift.v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub variables: Vec<String>,
    #[serde(rename = "G", default)]
    pub g: Vec<String>,
    pub supports: Vec<Vec<String>>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ProblemFile {
    pub fn to_problem(&self) -> Result<ProblemB> {
        if let Some(s) = &self.schema {
            if s != PROBLEM_SCHEMA {
                return Err(Error::Schema {
                    path: "schema".into(),
                    message: format!("expected {PROBLEM_SCHEMA:?}, found {s:?}"),
                });
            }
        }
        for (k, v) in self.variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::Schema {
                    path: format!("variables[{k}]"),
                    message: format!("{v:?} is not an identifier"),
                });
            }
            if self.variables[..k].contains(v) {
                return Err(Error::Schema {
                    path: format!("variables[{k}]"),
                    message: format!("duplicate variable {v:?}"),
                });
            }
        }
        let parse = |path: String, s: &str| {
            parse_poly(s, &self.variables).map_err(|e| Error::Schema {
                path,
                message: e.to_string(),
            })
        };
        let g = self
            .g
            .iter()
            .enumerate()
            .map(|(k, s)| parse(format!("G[{k}]"), s))
            .collect::<Result<Vec<_>>>()?;
        let supports = self
            .supports
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.iter()
                    .enumerate()
                    .map(|(k, s)| parse(format!("supports[{i}][{k}]"), s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ProblemB::new(self.variables.clone(), g, supports)
    }

    /// Canonical echo of a parsed problem.
    pub fn from_problem(p: &ProblemB) -> Self {
        ProblemFile {
            schema: Some(PROBLEM_SCHEMA.into()),
            variables: p.variables.clone(),
            g: p.equations.iter().map(|g| render_rational(g, &p.variables)).collect(),
            supports: p
                .supports
                .iter()
                .map(|f| f.iter().map(|s| render_rational(s, &p.variables)).collect())
                .collect(),
        }
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemB> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    file.to_problem()
}

pub fn read_problem(path: &std::path::Path) -> Result<ProblemB> {
    parse_problem(&std::fs::read_to_string(path)?)
}

/// `[re, im]`.
pub type JsonComplex = [f64; 2];

pub fn json_complex(z: &Complex64) -> JsonComplex {
    [z.re, z.im]
}

pub fn json_point(x: &[Complex64]) -> Vec<JsonComplex> {
    x.iter().map(json_complex).collect()
}

pub fn json_rationals(w: &[Rational]) -> Vec<JsonRational> {
    w.iter().map(JsonRational::from_rational).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub cell_index: usize,
    /// `[αᵢ, βᵢ]` exponent vectors.
    pub edge_pairs: Vec<[Vec<u32>; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub omega: Vec<JsonRational>,
    pub multiplicity: u64,
    pub certificate: CertificateJson,
}

impl PointJson {
    pub fn from_point(p: &IntersectionPoint) -> Self {
        let ev = |e: &ExponentVector| e.entries().to_vec();
        PointJson {
            omega: json_rationals(&p.omega),
            multiplicity: p.multiplicity,
            certificate: CertificateJson {
                cell_index: p.certificate.cell_index,
                edge_pairs: p.certificate.edge_pairs.iter().map(|(a, b)| [ev(a), ev(b)]).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftJson {
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient_seed: Option<u64>,
    pub lift_denominator: u64,
    pub lift_bound: u64,
    pub retries: u32,
    pub variables: Vec<String>,
    /// Per `F′ᵢ`, the exponent vectors.
    pub supports: Vec<Vec<Vec<u32>>>,
    pub coefficients: Vec<Vec<JsonComplex>>,
    pub lifts: Vec<Vec<JsonRational>>,
    /// `fᵢ(1)` rendered.
    pub generic_system: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionReport {
    pub schema: String,
    pub seed: u64,
    pub lift_denominator: u64,
    pub lift_bound: u64,
    pub retries: u32,
    pub points: Vec<PointJson>,
    pub total: u64,
    pub degeneracies: Vec<RetryJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetryJson {
    pub seed: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathJson {
    pub omega: Vec<JsonRational>,
    pub start: Vec<JsonComplex>,
    pub epsilon: JsonRational,
    pub status: crate::tracker::PathStatus,
    pub steps: u64,
    pub residual: f64,
    pub endpoint: Vec<JsonComplex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionJson {
    pub x: Vec<JsonComplex>,
    pub residual: f64,
    pub path: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscardJson {
    pub path: usize,
    pub reason: String,
    pub detail: String,
    pub endpoint: Vec<JsonComplex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSystemJson {
    pub omega: Vec<JsonRational>,
    pub method: String,
    pub roots: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub reformulate: f64,
    pub trop: f64,
    pub intersect: f64,
    pub initial_systems: f64,
    pub tracking: f64,
    pub filter: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    pub retries: Vec<RetryJson>,
    pub initial_systems: Vec<InitialSystemJson>,
    pub discarded: Vec<DiscardJson>,
    /// Random combination weights when `G′` was squared up.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squaring: Option<Vec<Vec<JsonComplex>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema: String,
    pub problem: ProblemFile,
    /// Variables after reformulation, slacks last.
    pub variables: Vec<String>,
    #[serde(rename = "G_prime")]
    pub g_prime: Vec<String>,
    pub lift: LiftJson,
    pub timings: Timings,
    pub intersection_points: Vec<PointJson>,
    pub total_count: u64,
    pub paths: Vec<PathJson>,
    pub solutions: Vec<SolutionJson>,
    pub diagnostics: Diagnostics,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    /// The report with all timings zeroed, for run-to-run comparison.
    pub fn without_timings(&self) -> Self {
        RunReport {
            timings: Timings::default(),
            ..self.clone()
        }
    }
}
