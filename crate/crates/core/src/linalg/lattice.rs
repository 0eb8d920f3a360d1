//! Integer lattices: Smith and Hermite normal forms, kernel lattices and
//! lattice indices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntVector = Vec<BigInt>;

/// `P · A · Q = diag(d₁, …, d_k, 0, …)` with `P`, `Q` unimodular and
/// `d₁ | d₂ | ⋯ | d_k`, all positive.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub p: Vec<IntVector>,
    pub q: Vec<IntVector>,
    pub diagonal: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

fn identity(n: usize) -> Vec<IntVector> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(m: &mut [IntVector], dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    let s = m[src].clone();
    for (d, v) in m[dst].iter_mut().zip(&s) {
        *d -= f * v;
    }
}

fn col_axpy(m: &mut [IntVector], dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let v = row[src].clone();
        row[dst] -= f * v;
    }
}

fn swap_cols(m: &mut [IntVector], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(a: &[IntVector], cols: usize) -> SmithForm {
    let rows = a.len();
    let mut m: Vec<IntVector> = a.to_vec();
    for r in &m {
        assert_eq!(r.len(), cols);
    }
    let mut p = identity(rows);
    let mut q = identity(cols);
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        p.swap(t, bi);
        swap_cols(&mut m, t, bj);
        swap_cols(&mut q, t, bj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let f = &m[i][t] / &m[t][t];
                    row_axpy(&mut m, i, t, &f);
                    row_axpy(&mut p, i, t, &f);
                    clean &= m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let f = &m[t][j] / &m[t][t];
                    col_axpy(&mut m, j, t, &f);
                    col_axpy(&mut q, j, t, &f);
                    clean &= m[t][j].is_zero();
                }
            }
            if !clean {
                // a smaller remainder moved into row/column t: bring it to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    m.swap(t, best.0);
                    p.swap(t, best.0);
                }
                if best.1 != t {
                    swap_cols(&mut m, t, best.1);
                    swap_cols(&mut q, t, best.1);
                }
                continue;
            }
            let pivot = m[t][t].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut m, t, i, &minus_one);
                    row_axpy(&mut p, t, i, &minus_one);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for v in m[t].iter_mut() {
                *v = -v.clone();
            }
            for v in p[t].iter_mut() {
                *v = -v.clone();
            }
        }
        diagonal.push(m[t][t].clone());
    }
    SmithForm {
        p,
        q,
        diagonal,
        rows,
        cols,
    }
}

/// Basis (as vectors) of the integer kernel `{u ∈ ℤ^cols : A u = 0}`.
pub fn kernel_basis(a: &[IntVector], cols: usize) -> Vec<IntVector> {
    if a.is_empty() {
        return identity(cols);
    }
    let snf = smith_normal_form(a, cols);
    (snf.rank()..cols)
        .map(|j| snf.q.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Index `[ℤ^dim : ℤ⟨generators⟩]`, or `None` if the generators do not
/// span a full-rank lattice.
pub fn lattice_index(generators: &[IntVector], dim: usize) -> Option<BigInt> {
    if dim == 0 {
        return Some(BigInt::one());
    }
    let snf = smith_normal_form(generators, dim);
    (snf.rank() == dim).then(|| snf.diagonal.iter().product())
}

/// Row-style Hermite normal form of the lattice spanned by `rows`, zero
/// rows removed: upper echelon, positive pivots, entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[IntVector], cols: usize) -> Vec<IntVector> {
    let mut m: Vec<IntVector> = rows.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| m[i][c].abs()).expect("nonempty");
            m.swap(r, piv);
            let mut done = true;
            for i in r + 1..m.len() {
                if !m[i][c].is_zero() {
                    let f = m[i][c].div_floor(&m[r][c]);
                    row_axpy(&mut m, i, r, &f);
                    done &= m[i][c].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for v in m[r].iter_mut() {
                    *v = -v.clone();
                }
            }
            for i in 0..r {
                let f = m[i][c].div_floor(&m[r][c]);
                row_axpy(&mut m, i, r, &f);
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

pub fn int_vector(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
