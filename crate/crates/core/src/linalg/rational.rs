//! Exact Gauss–Jordan elimination over ℚ.

use num_traits::{One, Zero};

use crate::algebra::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    /// `particular + span(directions)`, directions nonempty.
    Affine {
        particular: Vec<Rational>,
        directions: Vec<Vec<Rational>>,
    },
    Inconsistent,
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let (src, dst) = if r < row {
                    let (a, b) = m.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &factor * s;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(ncols) = rows.first().map(|r| r.len()) else {
        return 0;
    };
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Solves `A x = b` for `x ∈ ℚ^ncols`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> LinearSolution {
    assert_eq!(a.len(), b.len());
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), ncols);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return LinearSolution::Inconsistent;
    }
    let mut particular = vec![Rational::zero(); ncols];
    for (row, &col) in pivots.iter().enumerate() {
        particular[col] = m[row][ncols].clone();
    }
    if pivots.len() == ncols {
        return LinearSolution::Unique(particular);
    }
    let directions = nullspace_from_rref(&m, &pivots, ncols);
    LinearSolution::Affine { particular, directions }
}

fn nullspace_from_rref(m: &[Vec<Rational>], pivots: &[usize], ncols: usize) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(a: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m, ncols);
    nullspace_from_rref(&m, &pivots, ncols)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integer, rational};

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| integer(x)).collect()
    }

    #[test]
    fn unique_solution() {
        let a = vec![row(&[2, 1]), row(&[1, 3])];
        let b = row(&[3, 4]);
        assert_eq!(solve(&a, &b, 2), LinearSolution::Unique(vec![integer(1), integer(1)]));
    }

    #[test]
    fn inconsistent_and_affine() {
        let a = vec![row(&[1, 1]), row(&[2, 2])];
        assert_eq!(solve(&a, &row(&[1, 3]), 2), LinearSolution::Inconsistent);
        match solve(&a, &row(&[1, 2]), 2) {
            LinearSolution::Affine { particular, directions } => {
                assert_eq!(directions.len(), 1);
                assert_eq!(dot(&a[0], &particular), integer(1));
                assert_eq!(dot(&a[0], &directions[0]), integer(0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rank_of_fractional_matrix() {
        let a = vec![
            vec![rational(1, 2), rational(1, 3), integer(0)],
            vec![integer(3), integer(2), integer(0)],
            vec![integer(0), integer(0), integer(1)],
        ];
        assert_eq!(rank(&a), 2);
        assert_eq!(rank(&[]), 0);
        assert_eq!(nullspace(&a, 3).len(), 1);
    }
}
