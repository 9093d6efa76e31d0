//! Rational quaternion algebras `(a, b | Q)` and their local invariants.
//!
//! The algebra has basis `1, i, j, k` with
//!
//! ```text
//!   i^2 = a,   j^2 = b,   k = ij = -ji,
//!   conj(x0 + x1 i + x2 j + x3 k) = x0 - x1 i - x2 j - x3 k,
//!   trd(x) = x + conj(x) = 2 x0,
//!   nrd(x) = x conj(x)  = x0^2 - a x1^2 - b x2^2 + ab x3^2.
//! ```
//!
//! For `a, b < 0` the norm form is positive definite, so the algebra is
//! ramified at infinity. The finite ramified places are computed from Hilbert
//! symbols, and `algebra_for_prime` picks coefficients ramified exactly at
//! `{p, infinity}` for an odd prime `p`.

use crate::GlobalError;
use exact::numutil::{factor, is_prime, legendre};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A quaternion with rational coordinates over the basis `1, i, j, k`.
pub type Quat = [BigRational; 4];

/// Build a quaternion from integer coordinates.
pub fn quat_i64(c: [i64; 4]) -> Quat {
    c.map(|v| BigRational::from_integer(BigInt::from(v)))
}

pub fn quat_zero() -> Quat {
    [
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ]
}

pub fn quat_one() -> Quat {
    let mut q = quat_zero();
    q[0] = BigRational::one();
    q
}

/// A definite quaternion algebra over Q with `i^2 = a < 0`, `j^2 = b < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatAlgebra {
    pub a: i64,
    pub b: i64,
}

impl QuatAlgebra {
    pub fn new(a: i64, b: i64) -> Self {
        assert!(a < 0 && b < 0, "only definite algebras are supported");
        QuatAlgebra { a, b }
    }

    pub fn mul(&self, x: &Quat, y: &Quat) -> Quat {
        let a = BigRational::from_integer(BigInt::from(self.a));
        let b = BigRational::from_integer(BigInt::from(self.b));
        let ab = &a * &b;
        [
            &x[0] * &y[0] + &a * &x[1] * &y[1] + &b * &x[2] * &y[2] - &ab * &x[3] * &y[3],
            &x[0] * &y[1] + &x[1] * &y[0] - &b * &x[2] * &y[3] + &b * &x[3] * &y[2],
            &x[0] * &y[2] + &x[2] * &y[0] + &a * &x[1] * &y[3] - &a * &x[3] * &y[1],
            &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
        ]
    }

    pub fn add(&self, x: &Quat, y: &Quat) -> Quat {
        [&x[0] + &y[0], &x[1] + &y[1], &x[2] + &y[2], &x[3] + &y[3]]
    }

    pub fn conj(&self, x: &Quat) -> Quat {
        [x[0].clone(), -x[1].clone(), -x[2].clone(), -x[3].clone()]
    }

    /// Reduced trace `x + conj(x)`.
    pub fn trd(&self, x: &Quat) -> BigRational {
        &x[0] + &x[0]
    }

    /// Reduced norm `x * conj(x)`, positive definite here.
    pub fn nrd(&self, x: &Quat) -> BigRational {
        let a = BigRational::from_integer(BigInt::from(self.a));
        let b = BigRational::from_integer(BigInt::from(self.b));
        let ab = &a * &b;
        &x[0] * &x[0] - &a * &x[1] * &x[1] - &b * &x[2] * &x[2] + &ab * &x[3] * &x[3]
    }

    /// Trace pairing `trd(x y)`, the bilinear form whose Gram determinant
    /// defines reduced discriminants of lattices.
    pub fn trace_pairing(&self, x: &Quat, y: &Quat) -> BigRational {
        self.trd(&self.mul(x, y))
    }

    /// Polarization `trd(x conj(y))` of the norm form: `B(x, x) = 2 nrd(x)`.
    pub fn norm_pairing(&self, x: &Quat, y: &Quat) -> BigRational {
        self.trd(&self.mul(x, &self.conj(y)))
    }

    pub fn scale(&self, c: &BigRational, x: &Quat) -> Quat {
        [c * &x[0], c * &x[1], c * &x[2], c * &x[3]]
    }

    /// The four basis quaternions.
    pub fn basis(&self) -> [Quat; 4] {
        [
            quat_i64([1, 0, 0, 0]),
            quat_i64([0, 1, 0, 0]),
            quat_i64([0, 0, 1, 0]),
            quat_i64([0, 0, 0, 1]),
        ]
    }

    /// Finite primes where the algebra is division, found by Hilbert symbols
    /// over every prime dividing `2ab`. The result is checked against the
    /// product formula: together with infinity the count must be even.
    pub fn ramified_primes(&self) -> Vec<u64> {
        let mut cand: Vec<u64> = vec![2];
        for (q, _) in factor(self.a.unsigned_abs()) {
            if !cand.contains(&q) {
                cand.push(q);
            }
        }
        for (q, _) in factor(self.b.unsigned_abs()) {
            if !cand.contains(&q) {
                cand.push(q);
            }
        }
        cand.sort_unstable();
        let ram: Vec<u64> = cand
            .into_iter()
            .filter(|&q| hilbert_symbol(self.a, self.b, q) == -1)
            .collect();
        let at_infinity = self.a < 0 && self.b < 0;
        assert!(
            (ram.len() + usize::from(at_infinity)) % 2 == 0,
            "Hilbert product formula violated"
        );
        ram
    }
}

fn split_valuation(n: i64, q: u64) -> (u32, i64) {
    let mut v = 0u32;
    let mut u = n;
    while u % q as i64 == 0 {
        u /= q as i64;
        v += 1;
    }
    (v, u)
}

/// `(u - 1)/2 mod 2` for odd `u`, possibly negative.
fn eps2(u: i64) -> u32 {
    if u.rem_euclid(4) == 1 {
        0
    } else {
        1
    }
}

/// `(u^2 - 1)/8 mod 2` for odd `u`, possibly negative.
fn omega2(u: i64) -> u32 {
    let m = u.rem_euclid(8);
    if m == 1 || m == 7 {
        0
    } else {
        1
    }
}

/// Hilbert symbol `(a, b)_q` at a finite prime `q`, for nonzero integers.
pub fn hilbert_symbol(a: i64, b: i64, q: u64) -> i32 {
    assert!(a != 0 && b != 0 && is_prime(q));
    let (alpha, u) = split_valuation(a, q);
    let (beta, w) = split_valuation(b, q);
    if q == 2 {
        let e = eps2(u) * eps2(w) + alpha * omega2(w) + beta * omega2(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut s = 1i32;
    if alpha % 2 == 1 && beta % 2 == 1 {
        s *= legendre(-1, q);
    }
    if beta % 2 == 1 {
        s *= legendre(u, q);
    }
    if alpha % 2 == 1 {
        s *= legendre(w, q);
    }
    s
}

/// The definite algebra ramified exactly at `{p, infinity}`:
///
/// ```text
///   p = 3 mod 4:  (-1, -p)
///   p = 5 mod 8:  (-2, -p)
///   p = 1 mod 8:  (-r, -p),  r the smallest prime with r = 3 mod 4
///                            and (r | p) = -1
/// ```
///
/// The chosen pair is re-verified symbol by symbol before being returned.
pub fn algebra_for_prime(p: u64) -> Result<QuatAlgebra, GlobalError> {
    if p == 2 || !is_prime(p) {
        return Err(GlobalError::InvalidPrime(p));
    }
    let a: i64 = if p % 4 == 3 {
        -1
    } else if p % 8 == 5 {
        -2
    } else {
        let mut r = 3u64;
        loop {
            if is_prime(r) && r % 4 == 3 && legendre(r as i64, p) == -1 {
                break -(r as i64);
            }
            r += 4;
        }
    };
    let alg = QuatAlgebra::new(a, -(p as i64));
    let ram = alg.ramified_primes();
    assert_eq!(ram, vec![p], "ramification locus must be exactly {{p, infinity}}");
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn multiplication_is_associative_on_a_spanning_set() {
        let alg = QuatAlgebra::new(-2, -13);
        let elems: Vec<Quat> = vec![
            quat_i64([1, 0, 0, 0]),
            quat_i64([0, 1, 0, 0]),
            quat_i64([0, 0, 1, 0]),
            quat_i64([0, 0, 0, 1]),
            quat_i64([1, -2, 3, 5]),
            quat_i64([-1, 1, 1, -4]),
        ];
        for x in &elems {
            for y in &elems {
                for z in &elems {
                    let lhs = alg.mul(&alg.mul(x, y), z);
                    let rhs = alg.mul(x, &alg.mul(y, z));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_and_conj_reverses_products() {
        let alg = QuatAlgebra::new(-1, -11);
        let x = quat_i64([2, -1, 3, 1]);
        let y = quat_i64([-1, 4, 0, 2]);
        let xy = alg.mul(&x, &y);
        assert_eq!(alg.nrd(&xy), alg.nrd(&x) * alg.nrd(&y));
        assert_eq!(alg.conj(&xy), alg.mul(&alg.conj(&y), &alg.conj(&x)));
        assert_eq!(alg.trd(&x), rat(4));
        let n = alg.nrd(&x);
        assert_eq!(n, rat(4 + 1 + 9 * 11 + 11));
    }

    #[test]
    fn basis_relations_hold() {
        let alg = QuatAlgebra::new(-1, -3);
        let [_, i, j, k] = alg.basis();
        assert_eq!(alg.mul(&i, &j), k);
        let mut neg_k = k.clone();
        neg_k = alg.scale(&rat(-1), &neg_k);
        assert_eq!(alg.mul(&j, &i), neg_k);
        assert_eq!(alg.mul(&i, &i), quat_i64([-1, 0, 0, 0]));
        assert_eq!(alg.mul(&k, &k), quat_i64([-3, 0, 0, 0]));
    }

    #[test]
    fn hilbert_symbols_match_hand_computations() {
        assert_eq!(hilbert_symbol(-1, -11, 11), -1);
        assert_eq!(hilbert_symbol(-1, -11, 2), 1);
        assert_eq!(hilbert_symbol(-2, -5, 5), -1);
        assert_eq!(hilbert_symbol(-2, -5, 2), 1);
        assert_eq!(hilbert_symbol(-1, -1, 2), -1);
        assert_eq!(hilbert_symbol(2, 3, 2), -1);
        assert_eq!(hilbert_symbol(3, 5, 5), -1);
        assert_eq!(hilbert_symbol(5, 7, 11), 1);
    }

    #[test]
    fn product_formula_over_random_pairs() {
        let pairs: [(i64, i64); 6] = [
            (-6, -35),
            (15, -14),
            (-30, 77),
            (-2, -2),
            (12, -9),
            (-105, 26),
        ];
        for &(a, b) in &pairs {
            let mut cand: Vec<u64> = vec![2];
            for (q, _) in factor(a.unsigned_abs() as u64) {
                if !cand.contains(&q) {
                    cand.push(q);
                }
            }
            for (q, _) in factor(b.unsigned_abs() as u64) {
                if !cand.contains(&q) {
                    cand.push(q);
                }
            }
            let mut prod = if a < 0 && b < 0 { -1 } else { 1 };
            for q in cand {
                prod *= hilbert_symbol(a, b, q);
            }
            assert_eq!(prod, 1, "product formula failed for ({a}, {b})");
        }
    }

    #[test]
    fn algebra_choices_for_required_primes() {
        assert_eq!(algebra_for_prime(11).unwrap(), QuatAlgebra::new(-1, -11));
        assert_eq!(algebra_for_prime(3).unwrap(), QuatAlgebra::new(-1, -3));
        assert_eq!(algebra_for_prime(7).unwrap(), QuatAlgebra::new(-1, -7));
        assert_eq!(algebra_for_prime(23).unwrap(), QuatAlgebra::new(-1, -23));
        assert_eq!(algebra_for_prime(31).unwrap(), QuatAlgebra::new(-1, -31));
        assert_eq!(algebra_for_prime(5).unwrap(), QuatAlgebra::new(-2, -5));
        assert_eq!(algebra_for_prime(13).unwrap(), QuatAlgebra::new(-2, -13));
        assert_eq!(algebra_for_prime(17).unwrap(), QuatAlgebra::new(-3, -17));
        assert!(matches!(
            algebra_for_prime(9),
            Err(GlobalError::InvalidPrime(9))
        ));
        assert!(matches!(
            algebra_for_prime(2),
            Err(GlobalError::InvalidPrime(2))
        ));
    }

    #[test]
    fn ramified_primes_of_the_lipschitz_algebra() {
        let alg = QuatAlgebra::new(-1, -1);
        assert_eq!(alg.ramified_primes(), vec![2]);
    }
}
