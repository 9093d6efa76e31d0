//! Full rank-4 lattices inside a definite quaternion algebra.
//!
//! A lattice is stored as a positive denominator `den` and a 4 x 4 integer
//! matrix in row Hermite normal form; the lattice is spanned by the matrix
//! rows divided by `den`, and the pair is reduced so the representation is
//! unique. Equality of lattices is therefore structural equality.
//!
//! ```text
//!   L = (1/den) * rowspan_Z(basis),   basis in HNF,  gcd(den, content) = 1
//! ```
//!
//! Products, sums, conjugates, duals, and index computations stay exact; the
//! covolume of a lattice is `det(basis) / den^4` up to sign, and for orders
//! the reduced discriminant is the square root of the trace-pairing Gram
//! determinant.

use crate::algebra::{Quat, QuatAlgebra};
use crate::GlobalError;
use exact::charpoly::QMat;
use exact::matrix::MatZ;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub den: BigInt,
    pub basis: MatZ,
}

fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / a.gcd(b)
}

/// Exact inverse of a square rational matrix by Gauss-Jordan elimination.
pub fn qinv(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let mut w: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !w[r][col].is_zero())?;
        w.swap(col, piv);
        let inv = w[col][col].recip();
        for j in 0..2 * n {
            w[col][j] = &w[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !w[r][col].is_zero() {
                let f = w[r][col].clone();
                for j in 0..2 * n {
                    let s = &w[col][j] * &f;
                    w[r][j] = &w[r][j] - s;
                }
            }
        }
    }
    Some(w.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant of a square rational matrix by fraction-free style elimination.
pub fn qdet(m: &QMat) -> BigRational {
    let n = m.len();
    let mut w = m.clone();
    let mut det = BigRational::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !w[r][col].is_zero()) {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if piv != col {
            w.swap(col, piv);
            det = -det;
        }
        det *= w[col][col].clone();
        let inv = w[col][col].recip();
        for r in col + 1..n {
            if !w[r][col].is_zero() {
                let f = &w[r][col] * &inv;
                for j in col..n {
                    let s = &w[col][j] * &f;
                    w[r][j] = &w[r][j] - s;
                }
            }
        }
    }
    det
}

impl Lattice {
    /// Smallest lattice containing all the given quaternions; errors unless
    /// they span a full rank-4 subgroup.
    pub fn from_rows(gens: &[Quat]) -> Result<Lattice, GlobalError> {
        let mut den = BigInt::one();
        for g in gens {
            for c in g {
                den = lcm_big(&den, c.denom());
            }
        }
        let n = gens.len();
        let mut m = MatZ::zero(n, 4);
        for (r, g) in gens.iter().enumerate() {
            for (c, x) in g.iter().enumerate() {
                let scaled = x * BigRational::from_integer(den.clone());
                debug_assert!(scaled.denom().is_one());
                m[(r, c)] = scaled.numer().clone();
            }
        }
        let h = m.hnf();
        if h.nrows != 4 {
            return Err(GlobalError::DegenerateLattice);
        }
        let mut g = den.clone();
        for r in 0..4 {
            for c in 0..4 {
                g = g.gcd(&h[(r, c)]);
            }
        }
        if g > BigInt::one() {
            let mut basis = MatZ::zero(4, 4);
            for r in 0..4 {
                for c in 0..4 {
                    basis[(r, c)] = &h[(r, c)] / &g;
                }
            }
            Ok(Lattice {
                den: den / g,
                basis,
            })
        } else {
            Ok(Lattice { den, basis: h })
        }
    }

    pub fn standard() -> Lattice {
        Lattice {
            den: BigInt::one(),
            basis: MatZ::identity(4),
        }
    }

    /// Basis vectors as quaternions.
    pub fn rows(&self) -> Vec<Quat> {
        let d = BigRational::from_integer(self.den.clone());
        (0..4)
            .map(|r| {
                [0, 1, 2, 3].map(|c| BigRational::from_integer(self.basis[(r, c)].clone()) / &d)
            })
            .collect()
    }

    /// Integer coordinates of `x` over the basis, if `x` lies in the lattice.
    pub fn coords_of(&self, x: &Quat) -> Option<Vec<BigInt>> {
        let d = BigRational::from_integer(self.den.clone());
        let mut v = Vec::with_capacity(4);
        for c in x {
            let s = c * &d;
            if !s.denom().is_one() {
                return None;
            }
            v.push(s.numer().clone());
        }
        self.basis.solve_row(&v)
    }

    pub fn member(&self, x: &Quat) -> bool {
        self.coords_of(x).is_some()
    }

    pub fn subset_of(&self, other: &Lattice) -> bool {
        self.rows().iter().all(|r| other.member(r))
    }

    /// Signed-free covolume `|det(basis)| / den^4`.
    pub fn covolume(&self) -> BigRational {
        let d = self.basis.det().abs();
        let den4 = &self.den * &self.den * &self.den * &self.den;
        BigRational::new(d, den4)
    }

    /// Group index `[other : self]` for `self` a finite-index sublattice.
    pub fn index_in(&self, other: &Lattice) -> BigInt {
        debug_assert!(self.subset_of(other));
        let ratio = self.covolume() / other.covolume();
        assert!(ratio.denom().is_one(), "index must be integral");
        ratio.numer().clone()
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice, GlobalError> {
        let mut rows = self.rows();
        rows.extend(other.rows());
        Lattice::from_rows(&rows)
    }

    /// Product lattice spanned by all pairwise products of basis vectors.
    pub fn mul(&self, alg: &QuatAlgebra, other: &Lattice) -> Result<Lattice, GlobalError> {
        let mut rows = Vec::with_capacity(16);
        for x in self.rows() {
            for y in other.rows() {
                rows.push(alg.mul(&x, &y));
            }
        }
        Lattice::from_rows(&rows)
    }

    pub fn scale(&self, c: &BigRational) -> Lattice {
        assert!(!c.is_zero());
        let rows: Vec<Quat> = self
            .rows()
            .iter()
            .map(|r| [0, 1, 2, 3].map(|i| c * &r[i]))
            .collect();
        Lattice::from_rows(&rows).expect("scaling preserves rank")
    }

    pub fn conjugate(&self, alg: &QuatAlgebra) -> Lattice {
        let rows: Vec<Quat> = self.rows().iter().map(|r| alg.conj(r)).collect();
        Lattice::from_rows(&rows).expect("conjugation preserves rank")
    }

    /// Gram matrix of the trace pairing `trd(b_m b_n)` on the basis.
    pub fn gram_trace(&self, alg: &QuatAlgebra) -> QMat {
        let rows = self.rows();
        (0..4)
            .map(|m| (0..4).map(|n| alg.trace_pairing(&rows[m], &rows[n])).collect())
            .collect()
    }

    /// Gram matrix of the norm form: entries `trd(b_m conj(b_n)) / 2`, so the
    /// quadratic form `y G y^T` evaluates `nrd` on coordinates.
    pub fn gram_norm(&self, alg: &QuatAlgebra) -> QMat {
        let rows = self.rows();
        let two = BigRational::from_integer(BigInt::from(2));
        (0..4)
            .map(|m| {
                (0..4)
                    .map(|n| alg.norm_pairing(&rows[m], &rows[n]) / &two)
                    .collect()
            })
            .collect()
    }

    /// Reduced discriminant: the trace-pairing Gram determinant is, up to
    /// sign, a perfect square `d^2`; returns `d > 0`.
    pub fn reduced_discriminant(&self, alg: &QuatAlgebra) -> Result<BigInt, GlobalError> {
        let det = qdet(&self.gram_trace(alg)).abs();
        if !det.denom().is_one() {
            return Err(GlobalError::Message(format!(
                "trace Gram determinant {det} is not integral"
            )));
        }
        let n = det.numer().clone();
        let root = n.sqrt();
        if &root * &root != n {
            return Err(GlobalError::Message(format!(
                "trace Gram determinant {n} is not a perfect square"
            )));
        }
        Ok(root)
    }

    /// Generators of the trace-zero sublattice (rank 3 whenever some basis
    /// vector has nonzero reduced trace).
    pub fn trace_zero_gens(&self, alg: &QuatAlgebra) -> Vec<Quat> {
        let rows = self.rows();
        let mut col = MatZ::zero(4, 1);
        for (m, r) in rows.iter().enumerate() {
            let t = alg.trd(r) * BigRational::from_integer(self.den.clone());
            debug_assert!(t.denom().is_one());
            col[(m, 0)] = t.numer().clone();
        }
        let ker = col.left_kernel();
        (0..ker.nrows)
            .map(|i| {
                let mut q = crate::algebra::quat_zero();
                for (m, r) in rows.iter().enumerate() {
                    let c = BigRational::from_integer(ker[(i, m)].clone());
                    for t in 0..4 {
                        q[t] = &q[t] + &c * &r[t];
                    }
                }
                q
            })
            .collect()
    }

    /// Stable text form used for ordering classes and as a cache key part.
    pub fn canonical_key(&self) -> String {
        let mut s = format!("{}", self.den);
        for r in 0..4 {
            for c in 0..4 {
                s.push(' ');
                s.push_str(&self.basis[(r, c)].to_string());
            }
        }
        s
    }
}

/// The lattice `{x : x . c in Z for every constraint c}`, for constraint
/// vectors spanning a full lattice. This is the dual lattice machinery used
/// to compute left and right orders.
pub fn integral_dual(constraints: &[Quat]) -> Result<Lattice, GlobalError> {
    let span = Lattice::from_rows(constraints)?;
    let rows = span.rows();
    let m: QMat = rows
        .iter()
        .map(|r| r.iter().cloned().collect::<Vec<_>>())
        .collect();
    let inv = qinv(&m).ok_or(GlobalError::DegenerateLattice)?;
    let dual_rows: Vec<Quat> = (0..4)
        .map(|c| [0, 1, 2, 3].map(|r| inv[r][c].clone()))
        .collect();
    Lattice::from_rows(&dual_rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quat_i64;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hnf_representation_is_canonical() {
        let a = Lattice::from_rows(&[
            quat_i64([2, 0, 0, 0]),
            quat_i64([0, 1, 0, 0]),
            quat_i64([0, 0, 1, 0]),
            quat_i64([0, 0, 0, 1]),
            quat_i64([2, 1, 1, 1]),
        ])
        .unwrap();
        let b = Lattice::from_rows(&[
            quat_i64([2, 1, 0, 1]),
            quat_i64([0, 1, 0, 0]),
            quat_i64([0, 0, 1, 0]),
            quat_i64([0, 0, 0, 1]),
        ])
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.den, BigInt::one());
    }

    #[test]
    fn membership_and_index() {
        let full = Lattice::standard();
        let sub = full.scale(&rat(3, 1));
        assert!(sub.subset_of(&full));
        assert!(!full.subset_of(&sub));
        assert_eq!(sub.index_in(&full), BigInt::from(81));
        assert!(full.member(&quat_i64([5, -7, 0, 2])));
        let half = [rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)];
        assert!(!full.member(&half));
    }

    #[test]
    fn denominators_are_reduced() {
        let l = Lattice::from_rows(&[
            [rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)],
            [rat(0, 1), rat(1, 2), rat(0, 1), rat(0, 1)],
            [rat(0, 1), rat(0, 1), rat(1, 2), rat(0, 1)],
            [rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 2)],
        ])
        .unwrap();
        assert_eq!(l.den, BigInt::from(2));
        let doubled = l.scale(&rat(2, 1));
        assert_eq!(doubled, Lattice::standard());
    }

    #[test]
    fn discriminant_of_the_standard_lattice() {
        let alg = QuatAlgebra::new(-1, -11);
        let std = Lattice::standard();
        assert_eq!(std.reduced_discriminant(&alg).unwrap(), BigInt::from(44));
        let alg2 = QuatAlgebra::new(-2, -13);
        assert_eq!(
            std.reduced_discriminant(&alg2).unwrap(),
            BigInt::from(4 * 26)
        );
    }

    #[test]
    fn product_respects_scaling() {
        let alg = QuatAlgebra::new(-1, -3);
        let o = Lattice::standard();
        let s = o.scale(&rat(2, 1));
        let p = s.mul(&alg, &s).unwrap();
        assert_eq!(p, o.scale(&rat(4, 1)));
    }

    #[test]
    fn trace_zero_part_has_rank_three() {
        let alg = QuatAlgebra::new(-1, -7);
        let gens = Lattice::standard().trace_zero_gens(&alg);
        assert_eq!(gens.len(), 3);
        for g in &gens {
            assert!(alg.trd(g).is_zero());
        }
    }

    #[test]
    fn integral_dual_of_identity_scaled() {
        let rows: Vec<Quat> = vec![
            quat_i64([2, 0, 0, 0]),
            quat_i64([0, 2, 0, 0]),
            quat_i64([0, 0, 2, 0]),
            quat_i64([0, 0, 0, 2]),
        ];
        let d = integral_dual(&rows).unwrap();
        assert_eq!(d.den, BigInt::from(2));
        assert_eq!(d.covolume(), rat(1, 16));
    }

    #[test]
    fn qinv_and_qdet_agree_on_a_sample() {
        let m: QMat = vec![
            vec![rat(1, 1), rat(2, 1), rat(0, 1), rat(1, 1)],
            vec![rat(0, 1), rat(1, 1), rat(3, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1), rat(1, 1), rat(1, 2)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(1, 1)],
        ];
        let det = qdet(&m);
        assert!(!det.is_zero());
        let inv = qinv(&m).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = BigRational::zero();
                for t in 0..4 {
                    s += &m[i][t] * &inv[t][j];
                }
                let expect = if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                assert_eq!(s, expect);
            }
        }
    }
}
