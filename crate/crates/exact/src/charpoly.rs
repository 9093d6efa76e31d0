//! Division-free characteristic polynomial over the rationals
//! (Samuelson-Berkowitz).
//!
//! For an n x n matrix A the routine returns det(xI - A) as a coefficient
//! vector, low degree first, always monic of degree n. No pivoting or
//! division is performed, so exactness is unconditional.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type QMat = Vec<Vec<BigRational>>;

pub fn qmat_from_i64(rows: &[&[i64]]) -> QMat {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

/// Characteristic polynomial det(xI - A), low degree first.
pub fn charpoly(a: &QMat) -> Vec<BigRational> {
    let n = a.len();
    for row in a {
        assert_eq!(row.len(), n);
    }
    // Berkowitz iteration: p starts as the charpoly of the empty matrix.
    let mut p: Vec<BigRational> = vec![BigRational::one()];
    for r in 1..=n {
        // s_0 = 1, s_1 = -a[r-1][r-1], s_k = -(R * A^(k-2) * S) for k >= 2,
        // where R is the row a[r-1][0..r-1], S the column a[0..r-1][r-1],
        // and A the leading (r-1) x (r-1) block.
        let mut s: Vec<BigRational> = Vec::with_capacity(r + 1);
        s.push(BigRational::one());
        s.push(-a[r - 1][r - 1].clone());
        let mut v: Vec<BigRational> = (0..r - 1).map(|i| a[i][r - 1].clone()).collect();
        for _ in 2..=r {
            let mut dot = BigRational::zero();
            for (j, vj) in v.iter().enumerate() {
                dot += &a[r - 1][j] * vj;
            }
            s.push(-dot);
            // v <- A * v
            let mut nv = vec![BigRational::zero(); r - 1];
            for i in 0..r - 1 {
                for (j, vj) in v.iter().enumerate() {
                    nv[i] += &a[i][j] * vj;
                }
            }
            v = nv;
        }
        if r >= 2 {
            s.truncate(r + 1);
        }
        // p <- (s conv p) truncated to degree r (descending coefficients).
        let mut np = vec![BigRational::zero(); r + 1];
        for (i, si) in s.iter().enumerate() {
            if si.is_zero() {
                continue;
            }
            for (j, pj) in p.iter().enumerate() {
                if i + j <= r {
                    np[i + j] += si * pj;
                }
            }
        }
        p = np;
    }
    p.reverse();
    p
}

/// Evaluate a low-first coefficient vector at a rational point.
pub fn eval_poly(c: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for ci in c.iter().rev() {
        acc = acc * x + ci;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn two_by_two() {
        let a = qmat_from_i64(&[&[1, 2], &[3, 4]]);
        let p = charpoly(&a);
        // x^2 - 5x - 2
        assert_eq!(p, vec![int(-2), int(-5), int(1)]);
    }

    #[test]
    fn companion_retrieves_coefficients() {
        // Companion of x^4 + 3x^3 - 7x^2 + 2x - 9.
        let a = qmat_from_i64(&[
            &[0, 0, 0, 9],
            &[1, 0, 0, -2],
            &[0, 1, 0, 7],
            &[0, 0, 1, -3],
        ]);
        let p = charpoly(&a);
        assert_eq!(p, vec![int(-9), int(2), int(-7), int(3), int(1)]);
    }

    #[test]
    fn diagonal_and_eval() {
        let a = qmat_from_i64(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]]);
        let p = charpoly(&a);
        for r in [2i64, 3, 5] {
            assert!(eval_poly(&p, &int(r)).is_zero());
        }
        assert_eq!(eval_poly(&p, &int(0)), int(-30));
    }

    #[test]
    fn empty_matrix() {
        let a: QMat = vec![];
        assert_eq!(charpoly(&a), vec![BigRational::one()]);
    }
}
