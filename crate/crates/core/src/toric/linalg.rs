//! Small exact linear algebra over Z and Q.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactnum::BigRat;

/// Determinant of a square integer matrix (Bareiss fraction-free elimination).
pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn to_rat_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigRat>> {
    m.iter().map(|r| r.iter().map(|&x| BigRat::from_integer(BigInt::from(x))).collect()).collect()
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<BigRat>]) -> usize {
    let mut a = rows.to_vec();
    let mut r = 0;
    let ncols = a.first().map_or(0, Vec::len);
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for j in c..ncols {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
        }
        r += 1;
    }
    r
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn inverse(m: &[Vec<BigRat>]) -> Option<Vec<Vec<BigRat>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRat::one() } else { BigRat::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let pivot = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..2 * n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `sum_j t_j cols[j] = target` for a list of linearly independent
/// columns; `None` when the target is outside their span.
pub fn solve_in_span(cols: &[Vec<BigRat>], target: &[BigRat]) -> Option<Vec<BigRat>> {
    let m = target.len();
    let r = cols.len();
    // augmented rows: m equations in r unknowns
    let mut a: Vec<Vec<BigRat>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRat> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..r {
        let p = (row..m).find(|&i| !a[i][c].is_zero())?;
        a.swap(row, p);
        let pivot = a[row][c].clone();
        for x in a[row].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..m {
            if i == row || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..=r {
                let t = &f * &a[row][j];
                a[i][j] -= t;
            }
        }
        pivots.push(row);
        row += 1;
    }
    if a[row..].iter().any(|rw| !rw[r].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| a[i][r].clone()).collect())
}

pub fn rat_to_i64(x: &BigRat) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    if det(m).abs() != 1 {
        return None;
    }
    inverse(&to_rat_matrix(m))?.iter().map(|r| r.iter().map(rat_to_i64).collect()).collect()
}

/// Z-basis of the integer kernel `{x : A x = 0}` of an `m x n` matrix.
pub fn integer_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut w: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    // columns of u track the unimodular column transformation
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let col_op = |w: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        for row in w.iter_mut() {
            row[dst] -= f * row[src];
        }
        for row in u.iter_mut() {
            row[dst] -= f * row[src];
        }
    };
    let swap_cols = |w: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, x: usize, y: usize| {
        for row in w.iter_mut() {
            row.swap(x, y);
        }
        for row in u.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut c = 0;
    for i in 0..m {
        if c >= n {
            break;
        }
        // smallest nonzero entry of row i among columns c..n becomes the pivot
        while let Some(p) = (c..n).filter(|&j| w[i][j] != 0).min_by_key(|&j| w[i][j].abs()) {
            swap_cols(&mut w, &mut u, c, p);
            let mut done = true;
            for j in c + 1..n {
                if w[i][j] != 0 {
                    let f = w[i][j] / w[i][c];
                    col_op(&mut w, &mut u, j, c, f);
                    if w[i][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if w[i][c] != 0 {
            c += 1;
        }
    }
    (c..n).map(|j| (0..n).map(|i| u[i][j] as i64).collect()).collect()
}

/// Row-style Hermite normal form, pivots taken in `col_order`.
pub fn hnf_rows(rows: &[Vec<i64>], col_order: &[usize]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let m = a.len();
    let mut r = 0;
    for &c in col_order {
        if r >= m {
            break;
        }
        while let Some(p) = (r..m).filter(|&i| a[i][c] != 0).min_by_key(|&i| a[i][c].abs()) {
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if a[i][c] != 0 {
                    let f = a[i][c] / a[r][c];
                    let pivot_row = a[r].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                    if a[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m && a[r][c] != 0 {
            if a[r][c] < 0 {
                for x in a[r].iter_mut() {
                    *x = -*x;
                }
            }
            let pivot_row = a[r].clone();
            for row in a.iter_mut().take(r) {
                let f = row[c].div_euclid(pivot_row[c]);
                if f != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a.into_iter().map(|row| row.into_iter().map(|x| x as i64).collect()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
}
