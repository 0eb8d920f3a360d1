//! Independent oracles shared by the integration tests. Nothing here calls
//! into the geometry or lattice code under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Point = Vec<i64>;

fn dedup(points: &[Point]) -> Vec<Point> {
    points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

fn minkowski(a: &[Point], b: &[Point]) -> Vec<Point> {
    let mut out = BTreeSet::new();
    for p in a {
        for q in b {
            out.insert(p.iter().zip(q).map(|(x, y)| x + y).collect::<Point>());
        }
    }
    out.into_iter().collect()
}

fn cross2(o: &Point, a: &Point, b: &Point) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain, counter-clockwise, collinear points dropped.
pub fn hull2(points: &[Point]) -> Vec<Point> {
    let pts = dedup(points);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area of the convex hull.
pub fn doubled_area(points: &[Point]) -> i64 {
    let h = hull2(points);
    if h.len() < 3 {
        return 0;
    }
    (0..h.len())
        .map(|i| {
            let (p, q) = (&h[i], &h[(i + 1) % h.len()]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<i64>()
        .abs()
}

fn sub(a: &Point, b: &Point) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross3(a: &Point, b: &Point) -> Point {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn det3(a: &Point, b: &Point, c: &Point) -> i64 {
    dot(a, &cross3(b, c))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn primitive(v: &[i64]) -> Point {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    v.iter().map(|x| x / g).collect()
}

/// Six times the volume of the convex hull in ℤ³, by brute-force facet
/// enumeration and coning from one hull point.
pub fn sextupled_volume(points: &[Point]) -> i64 {
    let pts = dedup(points);
    let n = pts.len();
    let mut facets: BTreeSet<(Point, i64)> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let normal = cross3(&sub(&pts[j], &pts[i]), &sub(&pts[k], &pts[i]));
                if normal.iter().all(|&x| x == 0) {
                    continue;
                }
                let normal = primitive(&normal);
                let offset = dot(&normal, &pts[i]);
                let (mut above, mut below) = (false, false);
                for p in &pts {
                    let s = dot(&normal, p) - offset;
                    above |= s > 0;
                    below |= s < 0;
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                if !above && !below {
                    return 0;
                }
                // orient outward
                let (normal, offset) = if above { (normal.iter().map(|x| -x).collect(), -offset) } else { (normal, offset) };
                facets.insert((normal, offset));
            }
        }
    }
    let apex = &pts[0];
    let mut total = 0;
    for (normal, offset) in &facets {
        let on: Vec<Point> = pts.iter().filter(|p| dot(normal, p) == *offset).cloned().collect();
        if dot(normal, apex) == *offset {
            continue;
        }
        // project along the largest normal component and order the facet polygon
        let drop = (0..3).max_by_key(|&c| normal[c].abs()).unwrap();
        let keep: Vec<usize> = (0..3).filter(|&c| c != drop).collect();
        let flat: Vec<Point> = on.iter().map(|p| vec![p[keep[0]], p[keep[1]]]).collect();
        let ring = hull2(&flat);
        let lifted: Vec<&Point> = ring
            .iter()
            .map(|q| on.iter().find(|p| p[keep[0]] == q[0] && p[keep[1]] == q[1]).unwrap())
            .collect();
        for w in 1..lifted.len() - 1 {
            let d = det3(&sub(lifted[0], apex), &sub(lifted[w], apex), &sub(lifted[w + 1], apex));
            total += d.abs();
        }
    }
    total
}

/// Normalized mixed volume `MV(P₁,…,P_n)` (the BKK root count) by
/// inclusion–exclusion over hull volumes, for n ∈ {1, 2, 3}.
pub fn mixed_volume(supports: &[Vec<Point>]) -> i64 {
    let n = supports.len();
    assert!((1..=3).contains(&n), "oracle covers n ≤ 3");
    let scale = match n {
        1 => 1,
        2 => 2,
        _ => 6,
    };
    let volume = |pts: &[Point]| -> i64 {
        match n {
            1 => {
                let xs: Vec<i64> = pts.iter().map(|p| p[0]).collect();
                xs.iter().max().unwrap() - xs.iter().min().unwrap()
            }
            2 => doubled_area(pts),
            _ => sextupled_volume(pts),
        }
    };
    let mut total = 0;
    for mask in 1u32..(1 << n) {
        let mut sum: Vec<Point> = vec![vec![0; n]];
        for (i, s) in supports.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum = minkowski(&sum, s);
            }
        }
        let sign = if (n as u32 - mask.count_ones()) % 2 == 0 { 1 } else { -1 };
        total += sign * volume(&sum);
    }
    assert_eq!(total % scale, 0);
    total / scale
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for k in 0..cols {
                    m[i][k] = m[i][k] * a - m[r][k] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

/// Edges of the convex hull of a full-dimensional point set in ℤⁿ: two
/// points span an edge when the facets through both have normals of rank
/// n − 1. Collinear points on one edge are counted once.
pub fn polytope_edges(points: &[Point]) -> usize {
    let pts = dedup(points);
    let n = pts[0].len();
    assert!(n >= 2);
    assert_eq!(rank(&pts.iter().map(|p| sub(p, &pts[0])).collect::<Vec<_>>()), n, "oracle needs a full-dimensional set");
    let mut facets: BTreeSet<(Point, i64)> = BTreeSet::new();
    for subset in combinations(pts.len(), n) {
        let diffs: Vec<Point> = subset[1..].iter().map(|&k| sub(&pts[k], &pts[subset[0]])).collect();
        let normal = cofactor_normal(&diffs, n);
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        let normal = primitive(&normal);
        let offset = dot(&normal, &pts[subset[0]]);
        let signs: Vec<i64> = pts.iter().map(|p| (dot(&normal, p) - offset).signum()).collect();
        if signs.iter().all(|&s| s >= 0) || signs.iter().all(|&s| s <= 0) {
            let flip = signs.iter().any(|&s| s > 0);
            let normal: Point = if flip { normal.iter().map(|x| -x).collect() } else { normal };
            let offset = dot(&normal, &pts[subset[0]]);
            facets.insert((normal, offset));
        }
    }
    let facets: Vec<(Point, i64)> = facets.into_iter().collect();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let through: Vec<usize> = (0..facets.len())
                .filter(|&f| dot(&facets[f].0, &pts[i]) == facets[f].1 && dot(&facets[f].0, &pts[j]) == facets[f].1)
                .collect();
            let normals: Vec<Point> = through.iter().map(|&f| facets[f].0.clone()).collect();
            if !normals.is_empty() && rank(&normals) == n - 1 {
                faces.insert(through);
            }
        }
    }
    faces.len()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Generalized cross product of n − 1 vectors in ℤⁿ.
fn cofactor_normal(rows: &[Point], n: usize) -> Point {
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = rows.iter().map(|r| (0..n).filter(|&k| k != c).map(|k| r[k]).collect()).collect();
            let d = leibniz_det(&minor);
            if c % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Determinant by the permutation expansion.
pub fn leibniz_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0;
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, m: &[Vec<i64>], total: &mut i64) {
    if k == perm.len() {
        let inversions = (0..perm.len())
            .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let prod: i64 = (0..perm.len()).map(|i| m[i][perm[i]]).product();
        *total += if inversions % 2 == 0 { prod } else { -prod };
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, m, total);
        perm.swap(k, i);
    }
}

/// Random supports with `2..=max_points` distinct points of total degree
/// at most `max_degree`, resampled until the mixed volume is positive.
pub fn random_supports(rng: &mut ChaCha8Rng, n: usize, max_points: usize, max_degree: i64) -> Vec<Vec<Point>> {
    loop {
        let supports: Vec<Vec<Point>> = (0..n)
            .map(|_| {
                let size = rng.gen_range(2..=max_points);
                let mut s = BTreeSet::new();
                while s.len() < size {
                    let p: Point = (0..n).map(|_| rng.gen_range(0..=max_degree)).collect();
                    if p.iter().sum::<i64>() <= max_degree {
                        s.insert(p);
                    }
                }
                s.into_iter().collect()
            })
            .collect();
        if mixed_volume(&supports) > 0 {
            return supports;
        }
    }
}

pub fn monomial_string(p: &[i64], vars: &[&str]) -> String {
    let factors: Vec<String> = p
        .iter()
        .zip(vars)
        .filter(|(e, _)| **e > 0)
        .map(|(e, v)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

/// Lowest-order coefficient in `t` of `Σ a_k t^{w_k} (c t^ω)^{α_k}`, and the
/// sum of the moduli of its contributions.
pub fn leading_order(terms: &[(Vec<u32>, Complex64, BigRational)], c: &[Complex64], omega: &[BigRational]) -> (Complex64, f64) {
    let order = |alpha: &[u32], w: &BigRational| -> BigRational {
        alpha.iter().zip(omega).fold(w.clone(), |acc, (&a, o)| acc + o * BigRational::from_integer(a.into()))
    };
    let min = terms.iter().map(|(a, _, w)| order(a, w)).min().expect("nonempty");
    let mut value = Complex64::zero();
    let mut scale = 0.0;
    for (alpha, coeff, w) in terms {
        if order(alpha, w) == min {
            let m = alpha.iter().zip(c).fold(*coeff, |acc, (&k, z)| acc * z.powu(k));
            value += m;
            scale += m.norm();
        }
    }
    (value, scale)
}

/// Greedy matching of two point multisets within `tol` in the max norm.
pub fn multisets_match(a: &[Vec<Complex64>], b: &[Vec<Complex64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|p| {
        let hit = (0..b.len()).find(|&j| {
            !used[j] && p.iter().zip(&b[j]).all(|(x, y)| (x - y).norm() <= tol * x.norm().max(1.0))
        });
        match hit {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}
