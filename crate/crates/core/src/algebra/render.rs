use std::fmt::Write;

use num_complex::Complex64;
use num_traits::{One, Signed};

use super::{ComplexPoly, ExponentVector, RationalPoly};

fn monomial_string<S: AsRef<str>>(e: &ExponentVector, vars: &[S]) -> String {
    let mut parts = Vec::new();
    for (&k, v) in e.entries().iter().zip(vars) {
        match k {
            0 => {}
            1 => parts.push(v.as_ref().to_string()),
            _ => parts.push(format!("{}^{k}", v.as_ref())),
        }
    }
    parts.join("*")
}

/// Canonical text: descending graded-lex, exact fractions, `1`/`-1`
/// coefficients elided.
pub fn render_rational<S: AsRef<str>>(p: &RationalPoly, vars: &[S]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().rev().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mono = monomial_string(e, vars);
        if mono.is_empty() {
            write!(out, "{mag}").unwrap();
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            write!(out, "{mag}*{mono}").unwrap();
        }
    }
    out
}

pub fn render_complex_number(c: &Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", c.re, sign, c.im.abs())
}

/// Canonical text for complex coefficients: `(re+im i)*monomial` terms.
pub fn render_complex<S: AsRef<str>>(p: &ComplexPoly, vars: &[S]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.terms()
        .rev()
        .map(|(e, c)| {
            let mono = monomial_string(e, vars);
            if mono.is_empty() {
                format!("({})", render_complex_number(c))
            } else {
                format!("({})*{mono}", render_complex_number(c))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
