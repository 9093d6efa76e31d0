//! Function spaces on ideal classes and the maps between levels.
//!
//! Functions on the classes of an order carry the weighted pairing
//!
//! ```text
//!   <f, g> = sum_i f_i g_i / e_i,
//! ```
//!
//! under which every Brandt operator is self-adjoint. The Eisenstein part is
//! spanned by characters of the reduced norm: the all-ones vector always,
//! and the Legendre class of `nrd(I_i)` exactly when the unit norms of the
//! order miss the nonresidues. The cusp part is the orthocomplement of the
//! Eisenstein part, and for a suborder the pullback along `I -> I O'`
//! embeds the spaces of each superorder `O'`; what is orthogonal to all
//! such images inside the cusp part is new.

use crate::algebra::QuatAlgebra;
use crate::classset::{is_isomorphic, nrd_module, ClassSet};
use crate::lattice::Lattice;
use crate::GlobalError;
use exact::charpoly::QMat;
use exact::numutil::{jacobi, legendre};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Reduced row echelon form over the rationals, with pivot columns.
pub fn rref_q(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].recip();
        for x in m[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    m[r][c] = &m[r][c] - &f * &m[rank][c];
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    (m, pivots)
}

pub fn rank_q(rows: &[Vec<BigRational>]) -> usize {
    rref_q(rows).1.len()
}

/// Basis of `{ x in Q^n : sum_i c[i] x[i] = 0 for every constraint c }`.
pub fn nullspace_q(constraints: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let (r, pivots) = rref_q(constraints);
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); n];
        v[free] = BigRational::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[k][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Coordinates of `v` in the span described by `(rref, pivots)`, when it
/// lies there.
pub fn coords_in_span(
    rref: &[Vec<BigRational>],
    pivots: &[usize],
    v: &[BigRational],
) -> Option<Vec<BigRational>> {
    let mut residual = v.to_vec();
    let mut coords = vec![BigRational::zero(); rref.len()];
    for (k, &pc) in pivots.iter().enumerate() {
        let c = residual[pc].clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..residual.len() {
            residual[j] = &residual[j] - &c * &rref[k][j];
        }
        coords[k] = c;
    }
    if residual.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// Number of characters of `F_p^*` trivial on the norms of the units of the
/// order: 2 when every unit norm is a square residue, else 1.
pub fn norm_residue_dim(alg: &QuatAlgebra, order: &Lattice, p: u64) -> usize {
    let gram = order.gram_norm(alg);
    let mut diag = [0u64; 4];
    let mut cross = [[0u64; 4]; 4];
    let pb = BigInt::from(p);
    for i in 0..4 {
        let d = &gram[i][i];
        assert!(d.is_integer(), "norms on an order are integers");
        diag[i] = d.numer().mod_floor(&pb).to_u64().unwrap();
        for j in i + 1..4 {
            let t = &gram[i][j] + &gram[i][j];
            assert!(t.is_integer(), "polarized norm values are integers");
            cross[i][j] = t.numer().mod_floor(&pb).to_u64().unwrap();
        }
    }
    let mut y = [0u64; 4];
    loop {
        let mut q = 0u64;
        for i in 0..4 {
            q = (q + y[i] * y[i] % p * diag[i]) % p;
            for j in i + 1..4 {
                q = (q + y[i] * y[j] % p * cross[i][j]) % p;
            }
        }
        if q != 0 && legendre(q as i64, p) == -1 {
            return 1;
        }
        let mut k = 0;
        while k < 4 {
            y[k] += 1;
            if y[k] < p {
                break;
            }
            y[k] = 0;
            k += 1;
        }
        if k == 4 {
            return 2;
        }
    }
}

/// Legendre class of a nonzero rational coprime to `p`.
pub fn legclass(q: &BigRational, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let s = jacobi(q.numer(), &pb) * jacobi(q.denom(), &pb);
    assert!(s != 0, "class norms are coprime to the ramified prime");
    s as i64
}

/// The Eisenstein functionals of a class set: the all-ones vector, plus the
/// norm Legendre character when it descends to the classes.
pub fn eisenstein_vectors(
    alg: &QuatAlgebra,
    cs: &ClassSet,
) -> Result<Vec<Vec<BigRational>>, GlobalError> {
    let h = cs.h();
    let mut vs = vec![vec![BigRational::one(); h]];
    if norm_residue_dim(alg, &cs.order, cs.p) == 2 {
        let v2: Vec<BigRational> = cs
            .classes
            .iter()
            .map(|c| BigRational::from_integer(BigInt::from(legclass(&c.nrd, cs.p))))
            .collect();
        vs.push(v2);
    }
    if rank_q(&vs) != vs.len() {
        return Err(GlobalError::DependentEisenstein);
    }
    Ok(vs)
}

fn weighted_row(cs: &ClassSet, v: &[BigRational]) -> Vec<BigRational> {
    v.iter()
        .zip(&cs.classes)
        .map(|(x, c)| x / BigRational::from_integer(BigInt::from(c.unit_count)))
        .collect()
}

/// Basis of the orthocomplement of the Eisenstein functionals.
pub fn cusp_space(cs: &ClassSet, eis: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let constraints: Vec<Vec<BigRational>> = eis.iter().map(|v| weighted_row(cs, v)).collect();
    nullspace_q(&constraints, cs.h())
}

/// The map on classes induced by `I -> I O'` into the class set of a
/// superorder. Fails if some product lands in no class or in more than one.
pub fn class_map(
    alg: &QuatAlgebra,
    sub: &ClassSet,
    sup: &ClassSet,
) -> Result<Vec<usize>, GlobalError> {
    assert!(
        sub.order.subset_of(&sup.order),
        "degeneracy maps require a genuine superorder"
    );
    let mut map = Vec::with_capacity(sub.h());
    for c in &sub.classes {
        let prod = c
            .lattice
            .mul(alg, &sup.order)
            .expect("ideal extension is a full lattice");
        let nrd = nrd_module(alg, &prod);
        let matches: Vec<usize> = sup
            .classes
            .iter()
            .enumerate()
            .filter(|(_, d)| is_isomorphic(alg, &d.lattice, &d.nrd, &prod, &nrd))
            .map(|(j, _)| j)
            .collect();
        if matches.len() != 1 {
            return Err(GlobalError::Message(format!(
                "ideal extension matched {} classes instead of one",
                matches.len()
            )));
        }
        map.push(matches[0]);
    }
    for j in 0..sup.h() {
        assert!(
            map.contains(&j),
            "class extension must be surjective onto the superorder classes"
        );
    }
    Ok(map)
}

/// Matrix of the pullback of functions along a class map, acting on columns.
pub fn pullback_matrix(map: &[usize], h_sup: usize) -> QMat {
    let mut p = vec![vec![BigRational::zero(); h_sup]; map.len()];
    for (i, &j) in map.iter().enumerate() {
        p[i][j] = BigRational::one();
    }
    p
}

pub fn apply_qmat(m: &QMat, v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Split the cusp space against a family of pulled-back cusp vectors:
/// returns the rank of the old part and a basis of the new part.
pub fn new_space(
    cs: &ClassSet,
    eis: &[Vec<BigRational>],
    cusp_dim: usize,
    old_vectors: &[Vec<BigRational>],
) -> (usize, Vec<Vec<BigRational>>) {
    for v in old_vectors {
        for e in eis {
            let s: BigRational = v
                .iter()
                .zip(weighted_row(cs, e))
                .map(|(a, b)| a * b)
                .sum();
            assert!(s.is_zero(), "pulled-back cusp vectors stay cuspidal");
        }
    }
    let old_rank = rank_q(old_vectors);
    let mut constraints: Vec<Vec<BigRational>> =
        eis.iter().map(|v| weighted_row(cs, v)).collect();
    constraints.extend(old_vectors.iter().map(|v| weighted_row(cs, v)));
    let new = nullspace_q(&constraints, cs.h());
    assert_eq!(
        new.len(),
        cusp_dim - old_rank,
        "old and new parts fill the cusp space"
    );
    (old_rank, new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra_for_prime;
    use crate::brandt::{brandt_matrix, qmat_mul};
    use crate::classset::right_ideal_classes;
    use crate::order::{expected_mass, maximal_order, p_ideal, special_order, ExtType};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rational_linear_algebra() {
        let rows = vec![vec![q(2), q(4), q(6)], vec![q(1), q(2), q(4)]];
        let (r, piv) = rref_q(&rows);
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(r[0], vec![q(1), q(2), q(0)]);
        assert_eq!(r[1], vec![q(0), q(0), q(1)]);
        let ns = nullspace_q(&rows, 3);
        assert_eq!(ns.len(), 1);
        for c in &rows {
            let s: BigRational = c.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
        let v = vec![q(3), q(6), q(10)];
        let coords = coords_in_span(&r, &piv, &v).unwrap();
        assert_eq!(coords, vec![q(3), q(10)]);
        assert!(coords_in_span(&r, &piv, &[q(0), q(1), q(0)]).is_none());
    }

    #[test]
    fn residue_dimensions_by_order_type() {
        for p in [3u64, 5, 7] {
            let alg = algebra_for_prime(p).unwrap();
            let omax = maximal_order(&alg, p).unwrap();
            assert_eq!(norm_residue_dim(&alg, &omax, p), 1, "maximal at {p}");
            let pid = p_ideal(&alg, &omax, p).unwrap();
            let k2 = special_order(&alg, &omax, &pid, p, ExtType::K, 2).unwrap();
            assert_eq!(norm_residue_dim(&alg, &k2.lattice, p), 2, "level p^2 at {p}");
            let m3 = special_order(&alg, &omax, &pid, p, ExtType::M, 3).unwrap();
            assert_eq!(
                norm_residue_dim(&alg, &m3.lattice, p),
                1,
                "inert type at {p}"
            );
        }
    }

    #[test]
    fn eisenstein_and_cusp_split_at_maximal_level() {
        for (p, h) in [(11u64, 2usize), (23, 3), (31, 3)] {
            let alg = algebra_for_prime(p).unwrap();
            let omax = maximal_order(&alg, p).unwrap();
            let cs =
                right_ideal_classes(&alg, &omax, p, &expected_mass(p, ExtType::K, 1)).unwrap();
            assert_eq!(cs.h(), h);
            let eis = eisenstein_vectors(&alg, &cs).unwrap();
            assert_eq!(eis.len(), 1);
            let cusp = cusp_space(&cs, &eis);
            assert_eq!(cusp.len(), h - 1);
            let t2 = brandt_matrix(&alg, &cs, 2);
            let (r, piv) = rref_q(&cusp);
            for v in &cusp {
                let tv = apply_qmat(&t2.entries, v);
                assert!(coords_in_span(&r, &piv, &tv).is_some());
            }
        }
    }

    #[test]
    fn degeneracy_pullback_is_injective_and_equivariant() {
        let p = 3u64;
        let alg = algebra_for_prime(p).unwrap();
        let omax = maximal_order(&alg, p).unwrap();
        let pid = p_ideal(&alg, &omax, p).unwrap();
        let sup = right_ideal_classes(&alg, &omax, p, &expected_mass(p, ExtType::K, 1)).unwrap();
        let k2 = special_order(&alg, &omax, &pid, p, ExtType::K, 2).unwrap();
        let sub = right_ideal_classes(
            &alg,
            &k2.lattice,
            p,
            &expected_mass(p, ExtType::K, k2.level_exp),
        )
        .unwrap();
        let map = class_map(&alg, &sub, &sup).unwrap();
        let pb = pullback_matrix(&map, sup.h());
        assert_eq!(rank_q(&pb), sup.h());
        for l in [2u64, 5] {
            let t_sub = brandt_matrix(&alg, &sub, l);
            let t_sup = brandt_matrix(&alg, &sup, l);
            assert_eq!(
                qmat_mul(&t_sub.entries, &pb),
                qmat_mul(&pb, &t_sup.entries),
                "Hecke action commutes with pullback at {l}"
            );
        }
    }
}
