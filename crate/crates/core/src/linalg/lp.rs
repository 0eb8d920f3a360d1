//! Exact rational linear programming: two-phase dense simplex with Bland's
//! rule, free variables split as `x = x⁺ − x⁻`.

use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

/// `maximize c·x  s.t.  E x = e,  C x ≤ d`, `x` free.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    nvars: usize,
    equalities: Vec<(Vec<Rational>, Rational)>,
    inequalities: Vec<(Vec<Rational>, Rational)>,
    objective: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            objective: vec![Rational::zero(); nvars],
            ..Default::default()
        }
    }

    pub fn equality(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        assert_eq!(row.len(), self.nvars);
        self.equalities.push((row, rhs));
        self
    }

    /// `row·x ≤ bound`
    pub fn le(&mut self, row: Vec<Rational>, bound: Rational) -> &mut Self {
        assert_eq!(row.len(), self.nvars);
        self.inequalities.push((row, bound));
        self
    }

    /// `row·x ≥ bound`
    pub fn ge(&mut self, row: Vec<Rational>, bound: Rational) -> &mut Self {
        let neg = row.into_iter().map(|v| -v).collect();
        self.le(neg, -bound)
    }

    pub fn objective(&mut self, c: Vec<Rational>) -> &mut Self {
        assert_eq!(c.len(), self.nvars);
        self.objective = c;
        self
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self.clone().objective(vec![Rational::zero(); self.nvars]).solve(), LpOutcome::Infeasible)
    }

    pub fn solve(&self) -> LpOutcome {
        let n = self.nvars;
        let m_ineq = self.inequalities.len();
        let m = self.equalities.len() + m_ineq;
        let structural = 2 * n + m_ineq;
        let width = structural + m;

        let mut a: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut b: Vec<Rational> = Vec::with_capacity(m);
        let rows = self
            .equalities
            .iter()
            .map(|r| (r, None))
            .chain(self.inequalities.iter().enumerate().map(|(k, r)| (r, Some(k))));
        for (i, ((coeffs, rhs), slack)) in rows.enumerate() {
            let mut row = vec![Rational::zero(); width];
            for (j, c) in coeffs.iter().enumerate() {
                row[j] = c.clone();
                row[n + j] = -c.clone();
            }
            if let Some(k) = slack {
                row[2 * n + k] = Rational::one();
            }
            let mut rhs = rhs.clone();
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                rhs = -rhs;
            }
            row[structural + i] = Rational::one();
            a.push(row);
            b.push(rhs);
        }
        let mut basis: Vec<usize> = (structural..width).collect();

        // Phase I
        let mut cost = vec![Rational::zero(); width];
        for c in cost.iter_mut().skip(structural) {
            *c = -Rational::one();
        }
        let allowed_all: Vec<bool> = vec![true; width];
        if run_simplex(&mut a, &mut b, &mut basis, &cost, &allowed_all).is_none() {
            unreachable!("phase I objective is bounded");
        }
        let infeasibility: Rational = basis
            .iter()
            .zip(&b)
            .filter(|(&j, _)| j >= structural)
            .map(|(_, v)| v.clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < a.len() {
            if basis[i] >= structural {
                if let Some(j) = (0..structural).find(|&j| !a[i][j].is_zero()) {
                    pivot(&mut a, &mut b, &mut basis, i, j);
                    i += 1;
                } else {
                    a.remove(i);
                    b.remove(i);
                    basis.remove(i);
                }
            } else {
                i += 1;
            }
        }

        // Phase II
        let mut cost = vec![Rational::zero(); width];
        for (j, c) in self.objective.iter().enumerate() {
            cost[j] = c.clone();
            cost[n + j] = -c.clone();
        }
        let allowed: Vec<bool> = (0..width).map(|j| j < structural).collect();
        if run_simplex(&mut a, &mut b, &mut basis, &cost, &allowed).is_none() {
            return LpOutcome::Unbounded;
        }
        let mut z = vec![Rational::zero(); width];
        for (&j, v) in basis.iter().zip(&b) {
            z[j] = v.clone();
        }
        let point: Vec<Rational> = (0..n).map(|j| &z[j] - &z[n + j]).collect();
        let value = self
            .objective
            .iter()
            .zip(&point)
            .fold(Rational::zero(), |acc, (c, x)| acc + c * x);
        LpOutcome::Optimal { point, value }
    }
}

fn pivot(a: &mut [Vec<Rational>], b: &mut [Rational], basis: &mut [usize], row: usize, col: usize) {
    let inv = a[row][col].recip();
    for v in a[row].iter_mut() {
        *v *= &inv;
    }
    b[row] *= &inv;
    let prow = a[row].clone();
    let prhs = b[row].clone();
    for i in 0..a.len() {
        if i == row || a[i][col].is_zero() {
            continue;
        }
        let f = a[i][col].clone();
        for (v, p) in a[i].iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
        b[i] -= &f * &prhs;
    }
    basis[row] = col;
}

/// Maximizes `cost·z` from a canonical basis. `None` if unbounded.
fn run_simplex(
    a: &mut [Vec<Rational>],
    b: &mut [Rational],
    basis: &mut [usize],
    cost: &[Rational],
    allowed: &[bool],
) -> Option<()> {
    let width = cost.len();
    loop {
        let entering = (0..width).find(|&j| {
            if !allowed[j] || basis.contains(&j) {
                return false;
            }
            let mut r = cost[j].clone();
            for (i, &bj) in basis.iter().enumerate() {
                if !a[i][j].is_zero() {
                    r -= &cost[bj] * &a[i][j];
                }
            }
            r.is_positive()
        });
        let Some(j) = entering else {
            return Some(());
        };
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..a.len() {
            if a[i][j].is_positive() {
                let ratio = &b[i] / &a[i][j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let (row, _) = best?;
        pivot(a, b, basis, row, j);
    }
}
