//! Fraction-free (Bareiss) elimination.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Determinant of a square matrix by Bareiss elimination with row pivoting.
pub fn determinant<S: Scalar>(matrix: &[Vec<S>]) -> Result<S> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(S::one());
    }
    let mut m = matrix.to_vec();
    let mut negate = false;
    let mut prev = S::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Ok(S::zero());
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num.div(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Rank of a rectangular matrix by fraction-free row reduction.
pub fn rank<S: Scalar>(matrix: &[Vec<S>]) -> Result<usize> {
    let Some(cols) = matrix.first().map(Vec::len) else {
        return Ok(0);
    };
    if matrix.iter().any(|row| row.len() != cols) {
        return Err(Error::Shape("ragged matrix".into()));
    }
    let mut m = matrix.to_vec();
    let rows = m.len();
    let mut r = 0;
    let mut prev = S::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = m[i][j].clone() * m[r][c].clone() - m[i][c].clone() * m[r][j].clone();
                m[i][j] = num.div(&prev)?;
            }
            m[i][c] = S::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_int, Q};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant::<Q>(&[]).unwrap(), q_int(1));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])).unwrap(), q_int(-1));
        assert_eq!(determinant(&mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])).unwrap(), q_int(6));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])).unwrap(), q_int(0));
        assert!(determinant(&mat(&[&[1, 2]])).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]])).unwrap(), 2);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]])).unwrap(), 0);
        assert_eq!(rank(&mat(&[&[0, 1, 0], &[1, 0, 0]])).unwrap(), 2);
    }
}
