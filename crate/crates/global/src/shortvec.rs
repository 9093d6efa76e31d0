//! Exact enumeration of integer vectors with a prescribed value of a positive
//! definite rational quadratic form.
//!
//! The form is preprocessed into completed-square shape
//!
//! ```text
//!   Q(y) = sum_i d_i (y_i + sum_{j>i} u_ij y_j)^2,    d_i > 0,
//! ```
//!
//! and vectors are enumerated coordinate by coordinate from the last index,
//! with interval bounds computed through integer square roots so that no
//! floating point enters. Counting all `y` with `Q(y) = t` is the workhorse
//! for unit groups, isometry testing of ideals, and Brandt matrix entries.

use crate::GlobalError;
use exact::charpoly::QMat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub struct QuadForm {
    n: usize,
    /// `q[i][i] = d_i` and `q[i][j] = u_ij` for `j > i`.
    q: QMat,
}

impl QuadForm {
    pub fn new(gram: &QMat) -> Result<QuadForm, GlobalError> {
        let n = gram.len();
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(GlobalError::Message("Gram matrix is not symmetric".into()));
                }
            }
        }
        let mut q = gram.clone();
        for i in 0..n {
            if !q[i][i].is_positive() {
                return Err(GlobalError::Message(
                    "quadratic form is not positive definite".into(),
                ));
            }
            for j in i + 1..n {
                q[j][i] = q[i][j].clone();
                let v = &q[i][j] / &q[i][i];
                q[i][j] = v;
            }
            for k in i + 1..n {
                for l in k..n {
                    let s = &q[k][i] * &q[i][l];
                    q[k][l] = &q[k][l] - s;
                }
            }
        }
        Ok(QuadForm { n, q })
    }

    pub fn evaluate(gram: &QMat, y: &[BigInt]) -> BigRational {
        let n = gram.len();
        let mut acc = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                acc += &gram[i][j] * BigRational::from_integer(&y[i] * &y[j]);
            }
        }
        acc
    }

    /// All integer vectors with `Q(y) = target`, including sign pairs.
    pub fn vectors(&self, target: &BigRational) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        self.walk(target, &mut |y| {
            out.push(y.to_vec());
            true
        });
        out
    }

    pub fn count(&self, target: &BigRational) -> u64 {
        let mut c = 0u64;
        self.walk(target, &mut |_| {
            c += 1;
            true
        });
        c
    }

    pub fn exists(&self, target: &BigRational) -> bool {
        let mut found = false;
        self.walk(target, &mut |_| {
            found = true;
            false
        });
        found
    }

    /// Depth-first enumeration; the visitor returns `false` to stop early.
    fn walk(&self, target: &BigRational, visit: &mut dyn FnMut(&[BigInt]) -> bool) {
        if target.is_negative() {
            return;
        }
        let mut y = vec![BigInt::zero(); self.n];
        self.descend(self.n, target.clone(), &mut y, visit);
    }

    fn descend(
        &self,
        level: usize,
        budget: BigRational,
        y: &mut Vec<BigInt>,
        visit: &mut dyn FnMut(&[BigInt]) -> bool,
    ) -> bool {
        if level == 0 {
            if budget.is_zero() {
                return visit(y);
            }
            return true;
        }
        let i = level - 1;
        let mut shift = BigRational::zero();
        for j in level..self.n {
            shift += &self.q[i][j] * BigRational::from_integer(y[j].clone());
        }
        let radius_sq = &budget / &self.q[i][i];
        let (lo, hi) = centered_interval(&shift, &radius_sq);
        let mut t = lo;
        while t <= hi {
            let s = BigRational::from_integer(t.clone()) + &shift;
            let used = &self.q[i][i] * &s * &s;
            let rest = &budget - used;
            if !rest.is_negative() {
                y[i] = t.clone();
                if !self.descend(i, rest, y, visit) {
                    return false;
                }
            }
            t += 1;
        }
        y[i] = BigInt::zero();
        true
    }
}

/// Integer interval containing `{t : (t + shift)^2 <= radius_sq}`. The bounds
/// are allowed to overshoot by one on each side; callers re-check each point
/// exactly, so only containment matters.
fn centered_interval(shift: &BigRational, radius_sq: &BigRational) -> (BigInt, BigInt) {
    if radius_sq.is_negative() {
        return (BigInt::one(), BigInt::zero());
    }
    let a = radius_sq.numer();
    let b = radius_sq.denom();
    let approx = BigRational::new((a * b).sqrt(), b.clone());
    let hi = (-shift + &approx).floor().to_integer() + 1;
    let lo = (-shift - &approx).ceil().to_integer() - 1;
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn identity_gram(n: usize) -> QMat {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { rat(1, 1) } else { rat(0, 1) })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn four_squares_representation_counts() {
        let f = QuadForm::new(&identity_gram(4)).unwrap();
        let expected = [(1i64, 8u64), (2, 24), (3, 32), (4, 24), (5, 48), (6, 96)];
        for (n, r) in expected {
            assert_eq!(f.count(&rat(n, 1)), r, "r4({n})");
        }
        assert_eq!(f.count(&rat(0, 1)), 1);
    }

    #[test]
    fn counts_match_brute_force_on_a_skew_form() {
        let gram: QMat = vec![
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
            vec![rat(1, 1), rat(3, 1), rat(1, 2)],
            vec![rat(0, 1), rat(1, 2), rat(5, 2)],
        ];
        let f = QuadForm::new(&gram).unwrap();
        for target_num in 1..=12i64 {
            let t = rat(target_num, 2);
            let mut brute = 0u64;
            for x in -8..=8i64 {
                for y in -8..=8i64 {
                    for z in -8..=8i64 {
                        let v = [BigInt::from(x), BigInt::from(y), BigInt::from(z)];
                        if QuadForm::evaluate(&gram, &v) == t {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(f.count(&t), brute, "target {t}");
        }
    }

    #[test]
    fn existence_short_circuits() {
        let f = QuadForm::new(&identity_gram(4)).unwrap();
        assert!(f.exists(&rat(12, 1)));
        assert!(!f.exists(&rat(1, 2)));
        let vs = f.vectors(&rat(1, 1));
        assert_eq!(vs.len(), 8);
        for v in vs {
            assert_eq!(QuadForm::evaluate(&identity_gram(4), &v), rat(1, 1));
        }
    }

    #[test]
    fn rejects_indefinite_forms() {
        let gram: QMat = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(-1, 1)]];
        assert!(QuadForm::new(&gram).is_err());
    }
}
