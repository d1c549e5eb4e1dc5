//! Small-dimension exact polyhedral routines.
//!
//! Cones and polytopes are given by inequalities `⟨row, x⟩ ≥ rhs`. Vertex
//! and ray enumeration intersect every `dim`-subset (or `dim - 1`-subset) of
//! the hyperplanes, which is fine for the lattice ranks used here (≤ 4).

use num_integer::Integer;
use num_traits::Zero;

use crate::rational::{ceil_i64, floor_i64, int, Rational};

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rational(a: &[Rational], b: &[i64]) -> Rational {
    a.iter().zip(b).map(|(x, &y)| x * int(y)).sum()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Determinant by cofactor expansion; intended for matrices up to 4×4.
pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0] as i128,
        2 => m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128,
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * det(&minor)
            })
            .sum(),
    }
}

/// Generalized cross product of `dim - 1` vectors in `Z^dim`: a vector
/// orthogonal to all of them, zero iff they are linearly dependent.
pub fn cross(rows: &[Vec<i64>], dim: usize) -> Vec<i64> {
    debug_assert_eq!(rows.len() + 1, dim);
    (0..dim)
        .map(|j| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            i64::try_from(sign * det(&minor)).expect("cofactor fits in i64")
        })
        .collect()
}

/// Divides out the gcd of the entries.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<i64>], dim: usize) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..dim {
        let Some(pivot) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot_row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| int(x)).collect();
            r.push(int(rhs));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut().skip(col) {
            *x /= &p;
        }
        let pivot_row = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Whether `x` satisfies `⟨row, x⟩ ≥ 0` for every row.
pub fn in_cone(facets: &[Vec<i64>], x: &[i64]) -> bool {
    facets.iter().all(|f| dot(f, x) >= 0)
}

/// Primitive generators of the extreme rays of `{x : ⟨f, x⟩ ≥ 0}`, sorted.
///
/// Returns `None` when the cone contains a line (facet rank below `dim`).
pub fn extreme_rays(facets: &[Vec<i64>], dim: usize) -> Option<Vec<Vec<i64>>> {
    if rank(facets, dim) < dim {
        return None;
    }
    let mut rays = Vec::new();
    for subset in combinations(facets.len(), dim - 1) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&i| facets[i].clone()).collect();
        let v = cross(&rows, dim);
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        for sign in [1, -1] {
            let cand: Vec<i64> = primitive(&v).iter().map(|x| sign * x).collect();
            if in_cone(facets, &cand) {
                rays.push(cand);
            }
        }
    }
    rays.sort();
    rays.dedup();
    Some(rays)
}

/// Vertices of the polytope `{x : ⟨row_i, x⟩ ≥ rhs_i}`, assumed bounded.
pub fn vertices(rows: &[Vec<i64>], rhs: &[i64], dim: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for subset in combinations(rows.len(), dim) {
        let a: Vec<Vec<i64>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<i64> = subset.iter().map(|&i| rhs[i]).collect();
        let Some(x) = solve(&a, &b) else { continue };
        let feasible = rows
            .iter()
            .zip(rhs)
            .all(|(row, &r)| dot_rational(&x, row) >= int(r));
        if feasible && !out.contains(&x) {
            out.push(x);
        }
    }
    out.sort();
    out
}

/// Integer bounding box `(lo, hi)` per coordinate of a set of points.
pub fn bounding_box(points: &[Vec<Rational>], dim: usize) -> Vec<(i64, i64)> {
    (0..dim)
        .map(|c| {
            let lo = points.iter().map(|p| &p[c]).min().unwrap();
            let hi = points.iter().map(|p| &p[c]).max().unwrap();
            (ceil_i64(lo), floor_i64(hi))
        })
        .collect()
}

/// Lattice points of the box in lexicographic order.
pub fn box_points(bbox: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(bbox.len())];
    for &(lo, hi) in bbox {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1).max(0) as usize);
        for prefix in &out {
            for x in lo..=hi {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        out = next;
    }
    out
}
