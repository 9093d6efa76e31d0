//! Dense matrices over `BigInt`, with row-style Hermite normal form.
//!
//! Rows are the natural carriers here: a matrix is a list of generators of a
//! lattice or of a relation module, and `hnf` returns the canonical
//! row-reduced basis. `hnf_with_transform` also returns a unimodular `U` with
//! `U * A = H` (including the rows of `U` that witness the left kernel).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatZ {
    pub nrows: usize,
    pub ncols: usize,
    pub a: Vec<BigInt>,
}

impl MatZ {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        MatZ {
            nrows,
            ncols,
            a: vec![BigInt::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatZ::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut a = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols);
            a.extend(r);
        }
        MatZ { nrows, ncols, a }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        MatZ::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.a[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn transpose(&self) -> MatZ {
        let mut t = MatZ::zero(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &MatZ) -> MatZ {
        assert_eq!(self.ncols, other.nrows);
        let mut out = MatZ::zero(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let x = &self[(i, k)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let add = x * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.ncols {
            self.a.swap(i * self.ncols + c, j * self.ncols + c);
        }
    }

    /// row_i -= q * row_j
    fn row_submul(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.ncols {
            let t = q * &self[(j, c)];
            self[(i, c)] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.ncols {
            let t = -self[(i, c)].clone();
            self[(i, c)] = t;
        }
    }

    /// Row Hermite normal form together with a unimodular transform:
    /// returns `(h, u, rank)` with `u * self = h`, pivots positive, entries
    /// above each pivot reduced into `[0, pivot)`, zero rows at the bottom.
    pub fn hnf_with_transform(&self) -> (MatZ, MatZ, usize) {
        let mut h = self.clone();
        let mut u = MatZ::identity(self.nrows);
        let mut pivot_row = 0;
        for col in 0..self.ncols {
            if pivot_row == self.nrows {
                break;
            }
            // Euclid out the column below pivot_row.
            loop {
                let mut best: Option<usize> = None;
                for r in pivot_row..self.nrows {
                    if !h[(r, col)].is_zero() {
                        best = match best {
                            None => Some(r),
                            Some(b) => {
                                if h[(r, col)].abs() < h[(b, col)].abs() {
                                    Some(r)
                                } else {
                                    Some(b)
                                }
                            }
                        };
                    }
                }
                let Some(b) = best else { break };
                h.swap_rows(pivot_row, b);
                u.swap_rows(pivot_row, b);
                let mut done = true;
                for r in pivot_row + 1..self.nrows {
                    if !h[(r, col)].is_zero() {
                        let q = h[(r, col)].div_floor(&h[(pivot_row, col)]);
                        h.row_submul(r, pivot_row, &q);
                        u.row_submul(r, pivot_row, &q);
                        if !h[(r, col)].is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if h[(pivot_row, col)].is_zero() {
                continue;
            }
            if h[(pivot_row, col)].is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            // Reduce entries above the pivot.
            for r in 0..pivot_row {
                let q = h[(r, col)].div_floor(&h[(pivot_row, col)]);
                h.row_submul(r, pivot_row, &q);
                u.row_submul(r, pivot_row, &q);
            }
            pivot_row += 1;
        }
        (h, u, pivot_row)
    }

    pub fn hnf(&self) -> MatZ {
        let (h, _, rank) = self.hnf_with_transform();
        MatZ {
            nrows: rank,
            ncols: h.ncols,
            a: h.a[..rank * h.ncols].to_vec(),
        }
    }

    /// Basis of the left kernel `{v : v * self = 0}` as rows.
    pub fn left_kernel(&self) -> MatZ {
        let (_, u, rank) = self.hnf_with_transform();
        MatZ {
            nrows: self.nrows - rank,
            ncols: self.nrows,
            a: u.a[rank * self.nrows..].to_vec(),
        }
    }

    /// Integer solution `x` of `x * self = b`, if one exists.
    pub fn solve_row(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.ncols);
        let (h, u, rank) = self.hnf_with_transform();
        let mut rem = b.to_vec();
        let mut coeff = vec![BigInt::zero(); self.nrows];
        for r in 0..rank {
            let col = (0..h.ncols).find(|&c| !h[(r, c)].is_zero())?;
            if rem[col].is_zero() {
                continue;
            }
            let (q, s) = rem[col].div_rem(&h[(r, col)]);
            if !s.is_zero() {
                return None;
            }
            for c in 0..h.ncols {
                let t = &q * &h[(r, c)];
                rem[c] -= t;
            }
            coeff[r] = q;
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![BigInt::zero(); self.nrows];
        for r in 0..rank {
            if coeff[r].is_zero() {
                continue;
            }
            for c in 0..self.nrows {
                let t = &coeff[r] * &u[(r, c)];
                x[c] += t;
            }
        }
        Some(x)
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = t.div_rem(&prev).0;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }
}

impl std::ops::Index<(usize, usize)> for MatZ {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.a[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatZ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.a[i * self.ncols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_transform_is_consistent() {
        let a = MatZ::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (h, u, rank) = a.hnf_with_transform();
        assert_eq!(u.mul(&a), h);
        assert_eq!(rank, 3);
        assert_eq!(u.det().abs(), BigInt::one());
    }

    #[test]
    fn hnf_canonical_example() {
        let a = MatZ::from_i64(&[&[3, 3, 1, 4], &[0, 1, 0, 0], &[0, 0, 19, 16], &[0, 0, 0, 3]]);
        let h = a.hnf();
        let expect = MatZ::from_i64(&[&[3, 0, 1, 1], &[0, 1, 0, 0], &[0, 0, 19, 1], &[0, 0, 0, 3]]);
        assert_eq!(h, expect);
    }

    #[test]
    fn kernel_and_solve() {
        let a = MatZ::from_i64(&[&[1, 2], &[3, 6], &[2, 4]]);
        let k = a.left_kernel();
        assert_eq!(k.nrows, 2);
        for r in 0..k.nrows {
            let mut prod = vec![BigInt::zero(); 2];
            for c in 0..3 {
                for j in 0..2 {
                    let t = &k[(r, c)] * &a[(c, j)];
                    prod[j] += t;
                }
            }
            assert!(prod.iter().all(|x| x.is_zero()));
        }
        let b = [BigInt::from(5), BigInt::from(10)];
        let x = a.solve_row(&b).unwrap();
        let mut prod = vec![BigInt::zero(); 2];
        for c in 0..3 {
            for j in 0..2 {
                let t = &x[c] * &a[(c, j)];
                prod[j] += t;
            }
        }
        assert_eq!(prod.to_vec(), b.to_vec());
        assert!(a.solve_row(&[BigInt::from(1), BigInt::from(1)]).is_none());
    }

    #[test]
    fn determinants() {
        let a = MatZ::from_i64(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]]);
        assert_eq!(a.det(), BigInt::from(30));
        let b = MatZ::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(b.det(), BigInt::zero());
        let c = MatZ::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(c.det(), BigInt::from(-1));
    }
}
