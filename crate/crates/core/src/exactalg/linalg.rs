//! Exact row reduction over the rationals.

use num_traits::{One, Zero};

use super::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row. Every row operation is mirrored on `companion` when given,
/// so `companion` ends up as the transform taking the input to the output.
pub fn rref_with(m: &mut Matrix, mut companion: Option<&mut Matrix>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        if let Some(t) = companion.as_deref_mut() {
            t.swap(r, p);
        }
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        if let Some(t) = companion.as_deref_mut() {
            for x in t[r].iter_mut() {
                *x *= &inv;
            }
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..cols {
                let d = &factor * &m[r][j];
                m[i][j] -= d;
            }
            if let Some(t) = companion.as_deref_mut() {
                for j in 0..t[r].len() {
                    let d = &factor * &t[r][j];
                    t[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut work = m.clone();
    rref_with(&mut work, None).len()
}

/// Solves `Σ_j x_j · columns[j] = target`, if solvable. Columns may have
/// different lengths; missing entries are zero.
pub fn solve_combination(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let len = columns
        .iter()
        .map(Vec::len)
        .chain(std::iter::once(target.len()))
        .max()
        .unwrap_or(0);
    let n = columns.len();
    let mut aug = zeros(len, n + 1);
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            aug[i][j] = v.clone();
        }
    }
    for (i, v) in target.iter().enumerate() {
        aug[i][n] = v.clone();
    }
    let pivots = rref_with(&mut aug, None);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Some(x)
}

/// Product `a · b`.
pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), 2);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn companion_tracks_transform() {
        let a = m(&[&[2, 1], &[4, 3]]);
        let mut work = a.clone();
        let mut t = identity(2);
        rref_with(&mut work, Some(&mut t));
        assert_eq!(work, identity(2));
        assert_eq!(mat_mul(&t, &a), identity(2));
    }

    #[test]
    fn combination_solve() {
        let cols = vec![vec![int(1), int(0)], vec![int(1), int(1)]];
        assert_eq!(solve_combination(&cols, &[int(3), int(2)]), Some(vec![int(1), int(2)]));
        let cols = vec![vec![int(1), int(1)]];
        assert_eq!(solve_combination(&cols, &[int(1), int(2)]), None);
    }
}
