//! Linear algebra over a prime field F_l: products, reduced row echelon
//! form, nullspaces, coordinates relative to an echelonized basis, and the
//! characteristic polynomial via Hessenberg reduction.

use crate::modpoly::FlPoly;
use crate::numutil::{invmod, mulmod};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlMat {
    pub l: u64,
    pub nrows: usize,
    pub ncols: usize,
    pub a: Vec<u64>,
}

impl FlMat {
    pub fn zero(l: u64, nrows: usize, ncols: usize) -> Self {
        FlMat {
            l,
            nrows,
            ncols,
            a: vec![0; nrows * ncols],
        }
    }

    pub fn from_rows(l: u64, rows: &[Vec<u64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut a = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols);
            a.extend(r.iter().map(|&x| x % l));
        }
        FlMat { l, nrows, ncols, a }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.ncols + j] = v % self.l;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.a[i * self.ncols..(i + 1) * self.ncols]
    }

    /// `v * self` for a row vector `v`.
    pub fn row_apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.nrows);
        let l = self.l;
        let mut out = vec![0u64; self.ncols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for j in 0..self.ncols {
                out[j] = (out[j] + mulmod(vi, self.get(i, j), l)) % l;
            }
        }
        out
    }

    pub fn mul(&self, o: &FlMat) -> FlMat {
        assert_eq!(self.ncols, o.nrows);
        let l = self.l;
        let mut out = FlMat::zero(l, self.nrows, o.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..o.ncols {
                    let t = (out.get(i, j) + mulmod(x, o.get(k, j), l)) % l;
                    out.set(i, j, t);
                }
            }
        }
        out
    }

    /// Characteristic polynomial, monic of degree `nrows`.
    pub fn charpoly(&self) -> FlPoly {
        assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let l = self.l;
        if n == 0 {
            return FlPoly::one(l);
        }
        // Reduce to upper Hessenberg form by similarity transforms.
        let mut h = self.clone();
        for k in 1..n.saturating_sub(1) {
            // Find a pivot in column k-1 at or below row k.
            let piv = (k..n).find(|&r| h.get(r, k - 1) != 0);
            let Some(p) = piv else { continue };
            if p != k {
                h.swap_rows(p, k);
                h.swap_cols(p, k);
            }
            let inv = invmod(h.get(k, k - 1), l);
            for r in k + 1..n {
                let factor = mulmod(h.get(r, k - 1), inv, l);
                if factor == 0 {
                    continue;
                }
                // row_r -= factor * row_k, then col_k += factor * col_r.
                for c in 0..n {
                    let t = (h.get(r, c) + l - mulmod(factor, h.get(k, c), l)) % l;
                    h.set(r, c, t);
                }
                for r2 in 0..n {
                    let t = (h.get(r2, k) + mulmod(factor, h.get(r2, r), l)) % l;
                    h.set(r2, k, t);
                }
            }
        }
        // Recurrence on leading principal Hessenberg minors.
        let mut polys: Vec<FlPoly> = vec![FlPoly::one(l)];
        for m in 1..=n {
            // p_m(x) = (x - h[m-1][m-1]) p_{m-1}(x)
            //          - sum_{i} h[i-1][m-1] * (prod of subdiagonal) * p_{i-1}(x)
            let lin = FlPoly::new(l, vec![(l - h.get(m - 1, m - 1) % l) % l, 1]);
            let mut p = polys[m - 1].mul(&lin);
            let mut beta = 1u64;
            for i in (1..m).rev() {
                beta = mulmod(beta, h.get(i, i - 1), l);
                if beta == 0 {
                    break;
                }
                let coef = mulmod(beta, h.get(i - 1, m - 1), l);
                if coef != 0 {
                    let term = FlPoly::new(
                        l,
                        polys[i - 1].c.iter().map(|&c| mulmod(c, coef, l)).collect(),
                    );
                    p = p.sub(&term);
                }
            }
            polys.push(p);
        }
        polys.pop().unwrap()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.ncols {
            self.a.swap(i * self.ncols + c, j * self.ncols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in 0..self.nrows {
            self.a.swap(r * self.ncols + i, r * self.ncols + j);
        }
    }
}

/// Reduced row echelon form; returns the echelon rows (zero rows dropped)
/// and the pivot column of each row.
pub fn rref(l: u64, rows: &[Vec<u64>]) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % l).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r0 = 0;
    for col in 0..ncols {
        let Some(p) = (r0..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(r0, p);
        let inv = invmod(m[r0][col], l);
        for x in m[r0].iter_mut() {
            *x = mulmod(*x, inv, l);
        }
        for r in 0..m.len() {
            if r != r0 && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..ncols {
                    m[r][c] = (m[r][c] + l - mulmod(f, m[r0][c], l)) % l;
                }
            }
        }
        pivots.push(col);
        r0 += 1;
        if r0 == m.len() {
            break;
        }
    }
    m.truncate(r0);
    (m, pivots)
}

/// Coordinates of `v` in the span of echelonized `basis` (from `rref`).
pub fn coords_in_rref(l: u64, basis: &[Vec<u64>], pivots: &[usize], v: &[u64]) -> Option<Vec<u64>> {
    let mut rem: Vec<u64> = v.iter().map(|&x| x % l).collect();
    let mut coords = vec![0u64; basis.len()];
    for (r, &pc) in pivots.iter().enumerate() {
        let c = rem[pc];
        if c != 0 {
            coords[r] = c;
            for j in 0..rem.len() {
                rem[j] = (rem[j] + l - mulmod(c, basis[r][j], l)) % l;
            }
        }
    }
    if rem.iter().all(|&x| x == 0) {
        Some(coords)
    } else {
        None
    }
}

/// Basis of the right nullspace `{x : m x = 0}` of the square matrix,
/// returned as rows.
pub fn nullspace(m: &FlMat) -> Vec<Vec<u64>> {
    let l = m.l;
    let rows: Vec<Vec<u64>> = (0..m.nrows).map(|i| m.row(i).to_vec()).collect();
    let (ech, pivots) = rref(l, &rows);
    let mut out = Vec::new();
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    for free in 0..m.ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; m.ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (l - ech[r][free]) % l;
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_companion() {
        // Companion matrix of x^3 + 2x + 5 over F_101.
        let l = 101;
        let m = FlMat::from_rows(
            l,
            &[vec![0, 0, l - 5], vec![1, 0, l - 2], vec![0, 1, 0]],
        );
        let p = m.charpoly();
        assert_eq!(p.c, vec![5, 2, 0, 1]);
    }

    #[test]
    fn charpoly_of_diagonal() {
        let l = 97;
        let m = FlMat::from_rows(l, &[vec![2, 0], vec![0, 3]]);
        let p = m.charpoly();
        // (x-2)(x-3) = x^2 - 5x + 6
        assert_eq!(p.c, vec![6, l - 5, 1]);
    }

    #[test]
    fn nullspace_and_coords() {
        let l = 13;
        let m = FlMat::from_rows(l, &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 1, 1]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for i in 0..3 {
                let mut acc = 0u64;
                for j in 0..3 {
                    acc = (acc + mulmod(m.get(i, j), v[j], l)) % l;
                }
                assert_eq!(acc, 0);
            }
        }
        let (ech, piv) = rref(l, &[vec![1, 2, 3], vec![0, 1, 1]]);
        let c = coords_in_rref(l, &ech, &piv, &[1, 3, 4]).unwrap();
        assert_eq!(c.len(), 2);
        assert!(coords_in_rref(l, &ech, &piv, &[0, 0, 1]).is_none());
    }
}
