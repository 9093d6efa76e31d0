//! Exact character tables of the finite quotients.
//!
//! The class sums of a finite group act on the centre of its group algebra
//! with integer structure constants `a_ijk`, and for an irreducible
//! character `chi` the scaled values `omega_i = |C_i| chi(z_i) / chi(1)`
//! form a simultaneous eigenvector of the matrices `(A_i)_jk = a_ijk`.
//! Choosing a prime `l = 1 mod exp(G)` with `l^2 > 4|G|` puts every
//! eigenvalue in `F_l`, so the common eigenvectors are found by repeatedly
//! splitting eigenspaces over `F_l`.  Degrees follow from
//!
//! ```text
//!     chi(1)^2 = |G| / sum_k omega_k omega_{k*} / |C_k|,
//! ```
//!
//! taking the square root below `l/2`, and the exact values are recovered by
//! Fourier inversion over the cyclic group generated by each representative:
//! the multiplicity of each root of unity is a nonnegative integer bounded
//! by the degree, hence determined by its residue.  Every lifted character
//! is checked to have exact norm one, and the degrees are checked to sum
//! their squares to the group order.

use crate::characters::primitive_root;
use crate::division::Quotient;
use exact::cyclotomic::{Cyc, CycCtx};
use exact::flmat::{coords_in_rref, nullspace, rref, FlMat};
use exact::modpoly::distinct_roots;
use exact::numutil::{invmod, is_prime, mulmod, powmod, sqrt_mod};

/// One irreducible character, valued on conjugacy classes.
pub struct Irrep {
    pub dim: u64,
    /// Exact value on each class, as a cyclotomic integer.
    pub values: Vec<Cyc>,
    /// The same values reduced modulo the working prime.
    pub values_mod: Vec<u64>,
}

pub struct CharacterTable {
    /// The working prime `l`.
    pub modulus: u64,
    pub id_class: usize,
    pub irreps: Vec<Irrep>,
}

fn col_apply(m: &FlMat, x: &[u64]) -> Vec<u64> {
    (0..m.nrows)
        .map(|j| {
            let mut acc = 0u64;
            for (k, &xk) in x.iter().enumerate() {
                acc = (acc + mulmod(m.get(j, k), xk, m.l)) % m.l;
            }
            acc
        })
        .collect()
}

/// Split an invariant subspace (given by basis rows) into the eigenspaces
/// of `a` restricted to it.
fn split_space(a: &FlMat, basis: &[Vec<u64>]) -> Vec<Vec<Vec<u64>>> {
    let l = a.l;
    let (ech, pivots) = rref(l, basis);
    let s = ech.len();
    let mut restricted = FlMat::zero(l, s, s);
    for (t, bt) in ech.iter().enumerate() {
        let image = col_apply(a, bt);
        let coords = coords_in_rref(l, &ech, &pivots, &image)
            .expect("class matrices preserve previously split eigenspaces");
        for (row, &c) in coords.iter().enumerate() {
            restricted.set(row, t, c);
        }
    }
    let roots = distinct_roots(&restricted.charpoly());
    if roots.len() <= 1 {
        return vec![ech];
    }
    roots
        .into_iter()
        .map(|lam| {
            let mut shifted = restricted.clone();
            for d in 0..s {
                shifted.set(d, d, (shifted.get(d, d) + l - lam % l) % l);
            }
            let kernel = nullspace(&shifted);
            assert!(!kernel.is_empty(), "eigenvalue with empty eigenspace");
            kernel
                .iter()
                .map(|c| {
                    let mut v = vec![0u64; ech[0].len()];
                    for (t, &ct) in c.iter().enumerate() {
                        for (j, vj) in v.iter_mut().enumerate() {
                            *vj = (*vj + mulmod(ct, ech[t][j], l)) % l;
                        }
                    }
                    v
                })
                .collect()
        })
        .collect()
}

pub fn character_table(g: &Quotient) -> CharacterTable {
    let r = g.class_count();
    let order = g.order() as u64;
    let exponent = g.exponent();
    let mut l = exponent + 1;
    while !(is_prime(l) && l * l > 4 * order && order % l != 0) {
        l += exponent;
    }
    let idc = g.class_of[g.id() as usize] as usize;
    let sizes = g.class_sizes();
    let reps: Vec<u32> = (0..r).map(|k| g.class_rep(k)).collect();
    let inv_class: Vec<usize> =
        (0..r).map(|k| g.class_of[g.inv(reps[k]) as usize] as usize).collect();

    // Simultaneous eigenspace splitting.
    let full: Vec<Vec<u64>> = (0..r)
        .map(|j| {
            let mut v = vec![0u64; r];
            v[j] = 1;
            v
        })
        .collect();
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![full];
    for i in 0..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        if i == idc {
            continue;
        }
        let rows: Vec<Vec<u64>> =
            g.class_matrix(i).into_iter().map(|row| row.into_iter().map(|x| x % l).collect()).collect();
        let a = FlMat::from_rows(l, &rows);
        spaces = spaces
            .into_iter()
            .flat_map(|s| if s.len() == 1 { vec![s] } else { split_space(&a, &s) })
            .collect();
    }
    assert!(spaces.iter().all(|s| s.len() == 1), "class matrices separate all characters");
    assert_eq!(spaces.len(), r, "square character table");

    // Normalise each eigenvector at the identity class and read off the
    // degree and the values modulo l.
    let mut mod_rows: Vec<(u64, Vec<u64>)> = Vec::new();
    for s in &spaces {
        let w = &s[0];
        assert!(w[idc] != 0, "omega is 1 on the identity class");
        let scale = invmod(w[idc], l);
        let omega: Vec<u64> = w.iter().map(|&x| mulmod(x, scale, l)).collect();
        let denom: u64 = omega
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &ok)| {
                let term = mulmod(mulmod(ok, omega[inv_class[k]], l), invmod(sizes[k] % l, l), l);
                (acc + term) % l
            });
        let dim_sq = mulmod(order % l, invmod(denom, l), l);
        let droot = sqrt_mod(dim_sq, l).expect("degree squared is a square");
        let dim = droot.min(l - droot);
        let values_mod: Vec<u64> = (0..r)
            .map(|k| mulmod(mulmod(dim, omega[k], l), invmod(sizes[k] % l, l), l))
            .collect();
        mod_rows.push((dim, values_mod));
    }
    mod_rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    assert_eq!(
        mod_rows.iter().map(|(d, _)| d * d).sum::<u64>(),
        order,
        "degrees sum their squares to the group order"
    );
    for (a, (_, va)) in mod_rows.iter().enumerate() {
        for (_, vb) in mod_rows.iter().skip(a + 1) {
            let dot = (0..r).fold(0u64, |acc, k| {
                (acc + mulmod(mulmod(sizes[k] % l, va[k], l), vb[inv_class[k]], l)) % l
            });
            assert_eq!(dot, 0, "distinct rows are orthogonal modulo l");
        }
    }

    // Exact lift by Fourier inversion on the cyclic group of each class
    // representative, with one fixed compatible system of roots of unity
    // modulo l.
    let groot = primitive_root(l, 1);
    let orders: Vec<u64> = (0..r).map(|k| g.element_order(reps[k])).collect();
    let powers: Vec<Vec<usize>> = (0..r)
        .map(|k| {
            (0..orders[k])
                .map(|e| g.class_of[g.power(reps[k], e) as usize] as usize)
                .collect()
        })
        .collect();
    let ctx = CycCtx::new();
    let mut irreps = Vec::new();
    for (dim, values_mod) in mod_rows {
        let mut values = Vec::with_capacity(r);
        for k in 0..r {
            let m = orders[k];
            let root = powmod(groot, (l - 1) / m, l);
            let minv = invmod(m % l, l);
            let mut value = Cyc::zero(m);
            let mut recheck = 0u64;
            for s in 0..m {
                let mut acc = 0u64;
                for (e, &cls) in powers[k].iter().enumerate() {
                    let phase = powmod(root, (l - 1) - s * (e as u64) % (l - 1), l);
                    acc = (acc + mulmod(values_mod[cls], phase, l)) % l;
                }
                let mult = mulmod(acc, minv, l);
                assert!(mult <= dim, "root multiplicity bounded by the degree");
                if mult > 0 {
                    value.add_root(s, mult as i128);
                    recheck = (recheck + mulmod(mult, powmod(root, s, l), l)) % l;
                }
            }
            assert_eq!(recheck, values_mod[k], "lift reduces back to the modular value");
            values.push(value);
        }
        // Exact norm: sum over classes of |C_k| chi(z_k) conj(chi(z_k))
        // equals |G| for an irreducible character.
        let mut norm = Cyc::from_int(0);
        for k in 0..r {
            let term = values[k].mul(&values[k].conj()).scale(sizes[k] as i128);
            let m = lcm(norm.m, term.m);
            norm = norm.lift_to(m).add(&term.lift_to(m));
        }
        assert_eq!(norm.as_int(&ctx), Some(order as i128), "character has norm one");
        irreps.push(Irrep { dim, values, values_mod });
    }

    let trivial = irreps.iter().filter(|ir| ir.values_mod.iter().all(|&v| v == 1)).count();
    assert_eq!(trivial, 1, "exactly one trivial character");

    CharacterTable { modulus: l, id_class: idc, irreps }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact::cyclotomic::CycCtx;

    #[test]
    fn dihedral_table_at_level_one() {
        let g = Quotient::new(3, 1).unwrap();
        let t = character_table(&g);
        let dims: Vec<u64> = t.irreps.iter().map(|ir| ir.dim).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn level_two_degrees() {
        let g = Quotient::new(3, 2).unwrap();
        let t = character_table(&g);
        let dims: Vec<u64> = t.irreps.iter().map(|ir| ir.dim).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 2, 4, 4, 4, 4]);
    }

    #[test]
    fn column_orthogonality_exact() {
        // Second orthogonality on a nonidentity column: the sum of
        // |chi(z)|^2 over all characters is the centraliser order.
        let g = Quotient::new(3, 2).unwrap();
        let t = character_table(&g);
        let ctx = CycCtx::new();
        let k = (0..g.class_count()).find(|&k| k != t.id_class).unwrap();
        let centraliser = g.order() as u64 / g.class_sizes()[k];
        let mut acc = Cyc::from_int(0);
        for ir in &t.irreps {
            let term = ir.values[k].mul(&ir.values[k].conj());
            let m = lcm(acc.m, term.m);
            acc = acc.lift_to(m).add(&term.lift_to(m));
        }
        assert_eq!(acc.as_int(&ctx), Some(centraliser as i128));
    }

    #[test]
    fn level_three_table_is_consistent() {
        // The internal norm, degree, and orthogonality assertions all run
        // during construction.
        let g = Quotient::new(3, 3).unwrap();
        let t = character_table(&g);
        assert_eq!(t.irreps.iter().map(|ir| ir.dim * ir.dim).sum::<u64>(), 216);
    }
}
