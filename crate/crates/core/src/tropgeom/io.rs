//! `tropical_complex.v1` JSON format.
//!
//! ```json
//! { "schema": "tropical_complex.v1", "ambient_dim": 3, "dim": 2,
//!   "variables": ["x", "y", "z1"],
//!   "cells": [ { "equations": { "matrix": [[[2,1],[0,1],[-1,1]]], "rhs": [[0,1]] },
//!                "inequalities": [ { "row": [[2,1],[-2,1],[0,1]], "bound": [0,1] } ],
//!                "multiplicity": 1,
//!                "initial_generators": ["-x^2 + z1"] } ] }
//! ```
//!
//! Rationals are `[numerator, denominator]` pairs; entries too large for a
//! 64-bit integer are written as decimal strings.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{TropicalCell, TropicalComplex};
use crate::algebra::{parse_poly, render_rational, Rational};
use crate::error::{Error, Result};

pub const COMPLEX_SCHEMA: &str = "tropical_complex.v1";

#[derive(Clone, Debug, PartialEq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Raw::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map(JsonInt)
                .map_err(|_| serde::de::Error::custom(format!("not an integer: {s:?}"))),
        }
    }
}

/// `[numerator, denominator]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonRational(pub JsonInt, pub JsonInt);

impl JsonRational {
    pub fn from_rational(q: &Rational) -> Self {
        JsonRational(JsonInt(q.numer().clone()), JsonInt(q.denom().clone()))
    }

    pub fn to_rational(&self) -> Result<Rational> {
        if self.1 .0.is_zero() {
            return Err(Error::InvalidComplex("zero denominator".into()));
        }
        Ok(Rational::new(self.0 .0.clone(), self.1 .0.clone()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    schema: String,
    ambient_dim: usize,
    dim: usize,
    variables: Vec<String>,
    cells: Vec<CellFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationsFile {
    matrix: Vec<Vec<JsonRational>>,
    rhs: Vec<JsonRational>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InequalityFile {
    row: Vec<JsonRational>,
    bound: JsonRational,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellFile {
    equations: EquationsFile,
    inequalities: Vec<InequalityFile>,
    multiplicity: u64,
    initial_generators: Vec<String>,
}

fn rationals(v: &[JsonRational]) -> Result<Vec<Rational>> {
    v.iter().map(|q| q.to_rational()).collect()
}

fn json_row(v: &[Rational]) -> Vec<JsonRational> {
    v.iter().map(JsonRational::from_rational).collect()
}

/// Parses and validates a complex.
pub fn ingest_complex(text: &str) -> Result<TropicalComplex> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ComplexFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    if file.schema != COMPLEX_SCHEMA {
        return Err(Error::Schema {
            path: "schema".into(),
            message: format!("expected {COMPLEX_SCHEMA:?}, found {:?}", file.schema),
        });
    }
    let mut cells = Vec::with_capacity(file.cells.len());
    for (k, c) in file.cells.iter().enumerate() {
        let ctx = |e: Error| Error::InvalidComplex(format!("cell {k}: {e}"));
        let initial_generators = c
            .initial_generators
            .iter()
            .map(|s| parse_poly(s, &file.variables))
            .collect::<Result<Vec<_>>>()
            .map_err(ctx)?;
        cells.push(TropicalCell {
            equations: c.equations.matrix.iter().map(|r| rationals(r)).collect::<Result<_>>().map_err(ctx)?,
            rhs: rationals(&c.equations.rhs).map_err(ctx)?,
            inequalities: c
                .inequalities
                .iter()
                .map(|i| Ok((rationals(&i.row)?, i.bound.to_rational()?)))
                .collect::<Result<_>>()
                .map_err(ctx)?,
            multiplicity: c.multiplicity,
            initial_generators,
        });
    }
    let complex = TropicalComplex {
        ambient_dim: file.ambient_dim,
        dim: file.dim,
        variables: file.variables,
        cells,
    };
    complex.validate()?;
    Ok(complex)
}

pub fn ingest_complex_file(path: &std::path::Path) -> Result<TropicalComplex> {
    ingest_complex(&std::fs::read_to_string(path)?)
}

pub fn serialize_complex(t: &TropicalComplex) -> String {
    let file = ComplexFile {
        schema: COMPLEX_SCHEMA.to_string(),
        ambient_dim: t.ambient_dim,
        dim: t.dim,
        variables: t.variables.clone(),
        cells: t
            .cells
            .iter()
            .map(|c| CellFile {
                equations: EquationsFile {
                    matrix: c.equations.iter().map(|r| json_row(r)).collect(),
                    rhs: json_row(&c.rhs),
                },
                inequalities: c
                    .inequalities
                    .iter()
                    .map(|(row, bound)| InequalityFile {
                        row: json_row(row),
                        bound: JsonRational::from_rational(bound),
                    })
                    .collect(),
                multiplicity: c.multiplicity,
                initial_generators: c
                    .initial_generators
                    .iter()
                    .map(|g| render_rational(g, &t.variables))
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("complex serializes")
}
