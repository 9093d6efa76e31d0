//! Dimension formulas for cusp forms of even weight on `Gamma_0(N)`.
//!
//! Everything reduces to the standard genus data of the modular curve:
//!
//! ```text
//!   mu    = N prod_{l | N} (1 + 1/l)                      (index)
//!   nu2   = 0 if 4 | N,  else prod_{l | N} (1 + (-1|l))   (order-2 points)
//!   nu3   = 0 if 9 | N,  else prod_{l | N} (1 + (-3|l))   (order-3 points)
//!   nuinf = sum_{d | N} phi(gcd(d, N/d))                  (cusps)
//!   g     = 1 + mu/12 - nu2/4 - nu3/3 - nuinf/2
//! ```
//!
//! For weight 2 the cusp dimension is `g`; for even `k >= 4` it is
//! `(k-1)(g-1) + (k/2-1) nuinf + floor(k/4) nu2 + floor(k/3) nu3`. New
//! subspace dimensions follow by the multiplicative sieve with kernel
//! `beta(l) = -2, beta(l^2) = 1, beta(l^e) = 0 for e >= 3`.

use crate::GlobalError;
use exact::numutil::{euler_phi, factor, legendre};

fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let mut next = Vec::new();
        for d in &ds {
            let mut pk = 1u64;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        ds = next;
    }
    ds.sort_unstable();
    ds
}

struct GenusData {
    nu2: u64,
    nu3: u64,
    nuinf: u64,
    genus: u64,
}

fn genus_data(n: u64) -> GenusData {
    assert!(n >= 1);
    let fac = factor(n);
    let mut mu = n;
    for (p, _) in &fac {
        mu = mu / p * (p + 1);
    }
    let nu2 = if n % 4 == 0 {
        0
    } else {
        fac.iter()
            .map(|&(p, _)| if p == 2 { 1 } else { (1 + legendre(-1, p)) as u64 })
            .product()
    };
    let nu3 = if n % 9 == 0 {
        0
    } else {
        fac.iter()
            .map(|&(p, _)| match p {
                2 => 0,
                3 => 1,
                _ => (1 + legendre(-3, p)) as u64,
            })
            .product()
    };
    let nuinf: u64 = divisors(n)
        .iter()
        .map(|&d| euler_phi(num_integer::gcd(d, n / d)))
        .sum();
    let g12 = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nuinf as i64;
    assert!(g12 >= 0 && g12 % 12 == 0, "genus formula must be integral");
    GenusData {
        nu2,
        nu3,
        nuinf,
        genus: (g12 / 12) as u64,
    }
}

/// `dim S_k(Gamma_0(N))` for even `k >= 2`.
pub fn cusp_dimension(n: u64, k: u64) -> Result<u64, GlobalError> {
    if n == 0 {
        return Err(GlobalError::Message("level must be positive".into()));
    }
    if k < 2 || k % 2 != 0 {
        return Err(GlobalError::Message(format!(
            "weight must be even and at least 2, got {k}"
        )));
    }
    let gd = genus_data(n);
    if k == 2 {
        return Ok(gd.genus);
    }
    let k = k as i64;
    let dim = (k - 1) * (gd.genus as i64 - 1)
        + (k / 2 - 1) * gd.nuinf as i64
        + (k / 4) * gd.nu2 as i64
        + (k / 3) * gd.nu3 as i64;
    assert!(dim >= 0);
    Ok(dim as u64)
}

/// `dim S_k^new(Gamma_0(N))` by the divisor sieve.
pub fn new_cusp_dimension(n: u64, k: u64) -> Result<u64, GlobalError> {
    let beta = |m: u64| -> i64 {
        let mut out = 1i64;
        for (_, e) in factor(m) {
            out *= match e {
                1 => -2,
                2 => 1,
                _ => 0,
            };
        }
        out
    };
    let mut acc = 0i64;
    for d in divisors(n) {
        let b = beta(d);
        if b != 0 {
            acc += b * cusp_dimension(n / d, k)? as i64;
        }
    }
    assert!(acc >= 0, "new-space dimension must be non-negative");
    Ok(acc as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_weight_two_dimensions() {
        let table = [
            (1u64, 0u64),
            (11, 1),
            (23, 2),
            (31, 2),
            (9, 0),
            (25, 0),
            (27, 1),
            (49, 1),
            (81, 4),
            (121, 6),
            (125, 8),
        ];
        for (n, d) in table {
            assert_eq!(cusp_dimension(n, 2).unwrap(), d, "dim S_2({n})");
        }
    }

    #[test]
    fn frozen_new_subspace_dimensions() {
        let table = [
            (11u64, 1u64),
            (23, 2),
            (31, 2),
            (27, 1),
            (49, 1),
            (81, 2),
            (121, 4),
            (125, 8),
        ];
        for (n, d) in table {
            assert_eq!(new_cusp_dimension(n, 2).unwrap(), d, "dim S_2^new({n})");
        }
    }

    #[test]
    fn higher_weight_samples() {
        assert_eq!(cusp_dimension(1, 12).unwrap(), 1);
        assert_eq!(cusp_dimension(1, 10).unwrap(), 0);
        assert_eq!(cusp_dimension(5, 4).unwrap(), 1);
        assert_eq!(cusp_dimension(2, 8).unwrap(), 1);
    }

    #[test]
    fn rejects_odd_or_tiny_weights() {
        assert!(cusp_dimension(11, 3).is_err());
        assert!(cusp_dimension(11, 0).is_err());
        assert!(cusp_dimension(0, 2).is_err());
    }

    #[test]
    fn old_new_decomposition_is_consistent() {
        let sigma0 = |m: u64| divisors(m).len() as u64;
        for n in 1..=200u64 {
            let total = cusp_dimension(n, 2).unwrap();
            let mut acc = 0u64;
            for m in divisors(n) {
                acc += sigma0(n / m) * new_cusp_dimension(m, 2).unwrap();
            }
            assert_eq!(total, acc, "level {n}");
        }
    }
}
