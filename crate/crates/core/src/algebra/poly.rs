use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg};

use num_traits::Zero;

use super::ExponentVector;

/// Coefficient domain of a [`SparsePoly`].
pub trait Coefficient:
    Clone + PartialEq + Debug + Zero + Add<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone + PartialEq + Debug + Zero + Add<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Sparse polynomial: exponent vector → nonzero coefficient.
///
/// Terms are kept in ascending graded-lex order; rendering walks them in
/// descending order.
#[derive(Clone, PartialEq, Debug)]
pub struct SparsePoly<K> {
    nvars: usize,
    terms: BTreeMap<ExponentVector, K>,
}

impl<K: Coefficient> SparsePoly<K> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::from_terms(nvars, [(ExponentVector::zero(nvars), c)])
    }

    pub fn monomial(exponent: ExponentVector, c: K) -> Self {
        let nvars = exponent.len();
        Self::from_terms(nvars, [(exponent, c)])
    }

    pub fn variable(nvars: usize, var: usize) -> Self
    where
        K: num_traits::One,
    {
        Self::monomial(ExponentVector::unit(nvars, var), K::one())
    }

    /// Sums coefficients of repeated exponents and drops zeros.
    ///
    /// Panics if an exponent has the wrong length.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, K)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exponent: ExponentVector, c: K) {
        assert_eq!(exponent.len(), self.nvars, "exponent length mismatch");
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &K)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &ExponentVector) -> Option<&K> {
        self.terms.get(exponent)
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    pub fn map_coeffs<L: Coefficient, F: FnMut(&K) -> L>(&self, mut f: F) -> SparsePoly<L> {
        SparsePoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Re-reads the polynomial in `nvars ≥ self.nvars()` variables.
    pub fn embed(&self, nvars: usize) -> Self {
        SparsePoly::from_terms(nvars, self.terms.iter().map(|(e, c)| (e.embed(nvars), c.clone())))
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter_terms<F: FnMut(&ExponentVector, &K) -> bool>(&self, mut keep: F) -> Self {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, c)| keep(e, c))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &K) -> Self {
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.product(eb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self
    where
        K: num_traits::One,
    {
        let mut out = Self::constant(self.nvars, K::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}
