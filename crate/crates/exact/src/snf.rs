//! Smith normal form over the integers.
//!
//! `smith` computes unimodular `u`, `v` with `u * a * v` diagonal, each
//! diagonal entry nonnegative and dividing the next. The right transform `v`
//! is what converts exponent vectors of an abelian group presentation into
//! coordinates along the invariant-factor decomposition.

use crate::matrix::MatZ;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub struct Smith {
    pub d: Vec<BigInt>,
    pub u: MatZ,
    pub v: MatZ,
}

pub fn smith(a: &MatZ) -> Smith {
    let mut m = a.clone();
    let mut u = MatZ::identity(a.nrows);
    let mut v = MatZ::identity(a.ncols);
    let n = a.nrows.min(a.ncols);

    for t in 0..n {
        loop {
            // Find the nonzero entry of least absolute value in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..a.nrows {
                for j in t..a.ncols {
                    if !m[(i, j)].is_zero() {
                        best = match best {
                            None => Some((i, j)),
                            Some((bi, bj)) => {
                                if m[(i, j)].abs() < m[(bi, bj)].abs() {
                                    Some((i, j))
                                } else {
                                    Some((bi, bj))
                                }
                            }
                        };
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(m, u, v, t);
            };
            swap_rows(&mut m, &mut u, t, bi);
            swap_cols(&mut m, &mut v, t, bj);

            let mut clean = true;
            for i in t + 1..a.nrows {
                if !m[(i, t)].is_zero() {
                    let q = m[(i, t)].div_floor(&m[(t, t)]);
                    row_submul(&mut m, &mut u, i, t, &q);
                    if !m[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..a.ncols {
                if !m[(t, j)].is_zero() {
                    let q = m[(t, j)].div_floor(&m[(t, t)]);
                    col_submul(&mut m, &mut v, j, t, &q);
                    if !m[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility: fold in any entry the pivot misses.
            let mut offender = None;
            'scan: for i in t + 1..a.nrows {
                for j in t + 1..a.ncols {
                    if !(&m[(i, j)] % &m[(t, t)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::from(-1);
                    row_submul(&mut m, &mut u, t, i, &one);
                }
                None => break,
            }
        }
        if m[(t, t)].is_negative() {
            for j in 0..a.ncols {
                let x = -m[(t, j)].clone();
                m[(t, j)] = x;
            }
            for j in 0..a.nrows {
                let x = -u[(t, j)].clone();
                u[(t, j)] = x;
            }
        }
    }
    finish(m, u, v, n)
}

fn finish(m: MatZ, u: MatZ, v: MatZ, rank: usize) -> Smith {
    let n = m.nrows.min(m.ncols);
    let mut d = Vec::with_capacity(n);
    for t in 0..n {
        d.push(if t < rank { m[(t, t)].abs() } else { BigInt::zero() });
    }
    Smith { d, u, v }
}

fn swap_rows(m: &mut MatZ, u: &mut MatZ, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..m.ncols {
        m.a.swap(i * m.ncols + c, j * m.ncols + c);
    }
    for c in 0..u.ncols {
        u.a.swap(i * u.ncols + c, j * u.ncols + c);
    }
}

fn swap_cols(m: &mut MatZ, v: &mut MatZ, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..m.nrows {
        m.a.swap(r * m.ncols + i, r * m.ncols + j);
    }
    for r in 0..v.nrows {
        v.a.swap(r * v.ncols + i, r * v.ncols + j);
    }
}

fn row_submul(m: &mut MatZ, u: &mut MatZ, i: usize, j: usize, q: &BigInt) {
    for c in 0..m.ncols {
        let t = q * &m[(j, c)];
        m[(i, c)] -= t;
    }
    for c in 0..u.ncols {
        let t = q * &u[(j, c)];
        u[(i, c)] -= t;
    }
}

/// col_i -= q * col_j, mirrored on the right transform.
fn col_submul(m: &mut MatZ, v: &mut MatZ, i: usize, j: usize, q: &BigInt) {
    for r in 0..m.nrows {
        let t = q * &m[(r, j)];
        m[(r, i)] -= t;
    }
    for r in 0..v.nrows {
        let t = q * &v[(r, j)];
        v[(r, i)] -= t;
    }
}
