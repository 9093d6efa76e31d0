//! Number-theoretic utilities over `u64` and `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `a * b mod m` without overflow, for any `u64` inputs with `m > 0`.
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a^e mod m`.
pub fn powmod(a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = a % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`; panics unless `gcd(a, m) = 1`.
pub fn invmod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert!(r0 == 1, "invmod of non-unit {} mod {}", a, m);
    (s0.rem_euclid(m as i128)) as u64
}

/// Deterministic Miller-Rabin, correct for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n + 1;
    while !is_prime(k) {
        k += 1;
    }
    k
}

/// Legendre symbol of `a` modulo an odd prime `p`, in `{-1, 0, 1}`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = (a.rem_euclid(p as i64)) as u64;
    if r == 0 {
        return 0;
    }
    let s = powmod(r, (p - 1) / 2, p);
    if s == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive quadratic nonresidue modulo the odd prime `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    let mut u = 2;
    while legendre(u as i64, p) != -1 {
        u += 1;
    }
    u
}

/// Square root modulo an odd prime (Tonelli-Shanks); `None` for nonresidues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a as i64, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = least_nonresidue(p);
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// Trial-division factorization, smallest prime first.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `a` modulo `m`, requiring `gcd(a, m) = 1`.
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut ord = carmichael_exponent_bound(m);
    assert_eq!(powmod(a, ord, m), 1, "{} is not a unit mod {}", a, m);
    for (p, _) in factor(ord) {
        while ord % p == 0 && powmod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

fn carmichael_exponent_bound(m: u64) -> u64 {
    let mut l = 1u64;
    for (p, e) in factor(m) {
        let t = if p == 2 && e >= 3 {
            1u64 << (e - 2)
        } else {
            (p - 1) * p.pow(e - 1)
        };
        l = l.lcm(&t);
    }
    l
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    assert!(n.is_positive() && n.is_odd());
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i32;
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a /= &two;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// `(v, n / p^v)` where `v` is the `p`-adic valuation of the nonzero `n`.
pub fn valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    assert!(!n.is_zero());
    let mut v = 0;
    let mut m = n.clone();
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    (v, m)
}

pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n > 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_and_orders() {
        assert!(is_prime(2) && is_prime(13) && is_prime(4732 / 4 * 0 + 601));
        assert!(!is_prime(1) && !is_prime(4732));
        assert_eq!(next_prime(13), 17);
        assert_eq!(mult_order(2, 9), 6);
        assert_eq!(mult_order(4, 9), 3);
        assert_eq!(euler_phi(8112), 2496);
    }

    #[test]
    fn quadratic_residues() {
        assert_eq!(legendre(-1, 13), 1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(least_nonresidue(7), 3);
        assert_eq!(least_nonresidue(5), 2);
        for p in [3u64, 5, 7, 11, 13, 31] {
            for a in 1..p {
                if legendre(a as i64, p) == 1 {
                    let r = sqrt_mod(a, p).unwrap();
                    assert_eq!(mulmod(r, r, p), a);
                } else {
                    assert!(sqrt_mod(a, p).is_none());
                }
            }
        }
    }

    #[test]
    fn jacobi_matches_legendre() {
        for p in [3u64, 7, 11, 13] {
            for a in 1..20i64 {
                let j = jacobi(&BigInt::from(a), &BigInt::from(p));
                assert_eq!(j, legendre(a, p));
            }
        }
        assert_eq!(jacobi(&BigInt::from(2), &BigInt::from(15)), 1);
        assert_eq!(jacobi(&BigInt::from(7), &BigInt::from(15)), -1);
    }

    #[test]
    fn inverse_and_valuation() {
        for m in [5u64, 9, 169, 2048] {
            for a in 1..m {
                if num_integer::gcd(a, m) == 1 {
                    assert_eq!(mulmod(a, invmod(a, m), m), 1);
                }
            }
        }
        assert_eq!(valuation_u64(1944, 3), 5);
        let (v, u) = valuation(&BigInt::from(-2430), &BigInt::from(3));
        assert_eq!((v, u), (5, BigInt::from(-10)));
    }
}
