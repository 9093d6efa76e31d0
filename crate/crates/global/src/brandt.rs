//! Brandt matrices: Hecke operators on functions over the ideal classes.
//!
//! With right ideal classes `I_1, ..., I_h` and left-order unit counts
//! `e_j`, the integral Brandt numerator counts the degree-`n` module maps
//! `I_j -> I_i`, realized as lattice points in the transporter
//! `Hom(I_j, I_i) = I_i conj(I_j) / nrd(I_j)`:
//!
//! ```text
//!   r_ij(n) = # { alpha in I_i conj(I_j)  :  nrd(alpha) = n nrd(I_i) nrd(I_j) },
//!   T_n(i, j) = r_ij(n) / e_j.
//! ```
//!
//! Conjugation is a norm-preserving bijection `I_i conj(I_j) -> I_j conj(I_i)`
//! and the target is symmetric in `i, j`, so the numerator matrix is
//! symmetric and `T_n` is self-adjoint for the pairing weighted by `1 / e_i`.
//! Row sums of `T_n` for prime `n` coprime to the level equal `n + 1`, the
//! Eisenstein eigenvalue.

use crate::classset::ClassSet;
use crate::shortvec::QuadForm;
use exact::charpoly::QMat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrandtMatrix {
    pub n: u64,
    /// Symmetric lattice-point counts `r_ij(n)`.
    pub numerators: Vec<Vec<u64>>,
    /// The operator entries `r_ij(n) / e_j`.
    pub entries: QMat,
}

/// Compute the Brandt matrix `T_n` of a class set.
pub fn brandt_matrix(alg: &crate::algebra::QuatAlgebra, cs: &ClassSet, n: u64) -> BrandtMatrix {
    let h = cs.h();
    let mut numerators = vec![vec![0u64; h]; h];
    let nq = BigRational::from_integer(BigInt::from(n));
    let pairs: Vec<(usize, usize)> = (0..h)
        .flat_map(|i| (0..=i).map(move |j| (i, j)))
        .collect();
    let counts: Vec<u64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let ci = &cs.classes[i];
            let cj = &cs.classes[j];
            let x = ci
                .lattice
                .mul(alg, &cj.lattice.conjugate(alg))
                .expect("transporter is a full lattice");
            let target = &nq * &ci.nrd * &cj.nrd;
            let form = QuadForm::new(&x.gram_norm(alg)).expect("positive definite");
            form.count(&target)
        })
        .collect();
    for (&(i, j), &c) in pairs.iter().zip(&counts) {
        numerators[i][j] = c;
    }
    for i in 0..h {
        for j in i + 1..h {
            numerators[i][j] = numerators[j][i];
        }
    }
    let mut entries: QMat = vec![vec![BigRational::zero(); h]; h];
    for i in 0..h {
        for j in 0..h {
            entries[i][j] = BigRational::new(
                BigInt::from(numerators[i][j]),
                BigInt::from(cs.classes[j].unit_count),
            );
        }
    }
    BrandtMatrix {
        n,
        numerators,
        entries,
    }
}

pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = &out[i][j] + &a[i][t] * &b[t][j];
            }
        }
    }
    out
}

pub fn qmat_row_sums(a: &QMat) -> Vec<BigRational> {
    a.iter().map(|row| row.iter().sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra_for_prime;
    use crate::classset::right_ideal_classes;
    use crate::order::{expected_mass, maximal_order, ExtType};
    use num_traits::One;

    fn setup(p: u64) -> (crate::algebra::QuatAlgebra, ClassSet) {
        let alg = algebra_for_prime(p).unwrap();
        let omax = maximal_order(&alg, p).unwrap();
        let mass = expected_mass(p, ExtType::K, 1);
        let cs = right_ideal_classes(&alg, &omax, p, &mass).unwrap();
        (alg, cs)
    }

    #[test]
    fn identity_at_one() {
        let (alg, cs) = setup(11);
        let t1 = brandt_matrix(&alg, &cs, 1);
        for i in 0..cs.h() {
            for j in 0..cs.h() {
                let want = if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                assert_eq!(t1.entries[i][j], want);
            }
        }
    }

    #[test]
    fn row_sums_commutation_and_composition() {
        let (alg, cs) = setup(11);
        let t2 = brandt_matrix(&alg, &cs, 2);
        let t3 = brandt_matrix(&alg, &cs, 3);
        let t5 = brandt_matrix(&alg, &cs, 5);
        let t6 = brandt_matrix(&alg, &cs, 6);
        for (t, l) in [(&t2, 2u64), (&t3, 3), (&t5, 5)] {
            for s in qmat_row_sums(&t.entries) {
                assert_eq!(s, BigRational::from_integer(BigInt::from(l + 1)));
            }
        }
        let ab = qmat_mul(&t2.entries, &t3.entries);
        let ba = qmat_mul(&t3.entries, &t2.entries);
        assert_eq!(ab, ba);
        assert_eq!(ab, t6.entries);
        let c23 = qmat_mul(&t2.entries, &t5.entries);
        let c32 = qmat_mul(&t5.entries, &t2.entries);
        assert_eq!(c23, c32);
    }

    #[test]
    fn numerators_are_symmetric() {
        let (alg, cs) = setup(23);
        for n in [2u64, 3, 5, 7] {
            let t = brandt_matrix(&alg, &cs, n);
            for i in 0..cs.h() {
                for j in 0..cs.h() {
                    assert_eq!(t.numerators[i][j], t.numerators[j][i]);
                }
            }
        }
    }

    #[test]
    fn eigenvalues_at_eleven_match_the_elliptic_curve() {
        // The cusp form of level 11 has a_2 = -2, a_3 = -1, a_5 = 1; on a
        // two-class set the cusp eigenvalue is trace minus the Eisenstein
        // eigenvalue l + 1.
        let (alg, cs) = setup(11);
        for (l, a) in [(2u64, -2i64), (3, -1), (5, 1), (7, -2), (13, 4)] {
            let t = brandt_matrix(&alg, &cs, l);
            let trace = &t.entries[0][0] + &t.entries[1][1];
            let want = BigRational::from_integer(BigInt::from(l as i64 + 1 + a));
            assert_eq!(trace, want, "trace of T_{l}");
        }
    }
}
