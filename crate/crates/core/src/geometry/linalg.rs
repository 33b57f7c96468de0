//! Linear algebra over jets. A square jet matrix is invertible exactly when
//! its constant-term matrix is, so elimination pivots on entries with a
//! nonzero constant term and divides with [`Jet::reciprocal`].

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jet::{Jet, Rational};

pub(crate) fn rational_matrix_invertible(mut m: Vec<Vec<Rational>>) -> bool {
    let n = m.len();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return false;
        };
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    true
}

/// Solves `A X = B` for a square jet matrix `A` and `k` right-hand-side
/// columns, by Gauss-Jordan elimination with constant-term pivoting.
pub fn solve(mut a: Vec<Vec<Jet>>, mut b: Vec<Vec<Jet>>) -> Result<Vec<Vec<Jet>>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Mismatch("jet linear system is not square".into()));
    }
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[r][col].constant_term().is_zero())
            .ok_or_else(|| {
                Error::Singular(format!("jet matrix is singular at 0 (column {})", col + 1))
            })?;
        a.swap(col, p);
        b.swap(col, p);
        let inv = a[col][col].reciprocal()?;
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        for v in b[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] = &a[r][c] - &v;
            }
            for c in 0..b[r].len() {
                let v = &f * &b[col][c];
                b[r][c] = &b[r][c] - &v;
            }
        }
    }
    Ok(b)
}

/// Inverse of a square jet matrix.
pub fn inverse(a: Vec<Vec<Jet>>) -> Result<Vec<Vec<Jet>>> {
    let n = a.len();
    let (nvars, degree) = match a.first().and_then(|r| r.first()) {
        Some(j) => (j.nvars(), j.degree()),
        None => return Ok(Vec::new()),
    };
    let identity = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Jet::one(nvars, degree)
                    } else {
                        Jet::zero(nvars, degree)
                    }
                })
                .collect()
        })
        .collect();
    solve(a, identity)
}
