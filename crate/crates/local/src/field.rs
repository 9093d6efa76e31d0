//! Residue arithmetic for the quadratic extensions of `Q_p`.
//!
//! Elements are tracked at finite precision.  The unramified quadratic
//! extension `M = Q_p(sqrt(u))` is stored in the basis `1, sqrt(u)` with both
//! coordinates mod `p^k`.  A ramified extension `E` with uniformiser `w`
//! satisfying `w^2 = -cp` (`c = 1` for `K`, `c = u` for `L`) is stored in the
//! basis `1, w` at `p_E`-adic precision `m`: the first coordinate lives mod
//! `p^ceil(m/2)` and the second mod `p^floor(m/2)`.  Norms of units are then
//! well defined mod `p^ceil(m/2)`:
//!
//! `N(x + yw) = x^2 + c p y^2`,  `Tr(x + yw) = 2x`.

use crate::LocalError;
use exact::numutil::{invmod, is_prime, legendre, mulmod, sqrt_mod};

pub use exact::numutil::least_nonresidue;

pub fn check_odd_prime(p: u64) -> Result<(), LocalError> {
    if p < 3 || !is_prime(p) {
        return Err(LocalError::BadPrime(p));
    }
    Ok(())
}

/// Lift a square root of `a` from mod `p` to mod `p^k` by Hensel's lemma.
/// Requires `a` to be a unit square mod `p`.
pub fn hensel_sqrt(a: u64, p: u64, k: u32) -> Option<u64> {
    let pk = p.pow(k);
    let a = a % pk;
    let mut x = sqrt_mod(a % p, p)?;
    if x == 0 {
        return None;
    }
    let mut modulus = p;
    while modulus < pk {
        modulus = (modulus * modulus).min(pk);
        // Newton step x <- x - (x^2 - a) / (2x).
        let two_x_inv = invmod(2 * x % modulus, modulus);
        let x2 = mulmod(x, x, modulus);
        let diff = (x2 + modulus - a % modulus) % modulus;
        x = (x + modulus - mulmod(diff, two_x_inv, modulus)) % modulus;
    }
    debug_assert_eq!(mulmod(x, x, pk), a);
    Some(x)
}

/// The ring `o_M / p^k` for `M = Q_p(sqrt(u))`, elements `x0 + x1 sqrt(u)`.
#[derive(Clone, Debug)]
pub struct Unram {
    pub p: u64,
    pub u: u64,
    pub k: u32,
    pub pk: u64,
}

pub type MElt = (u64, u64);

impl Unram {
    pub fn new(p: u64, k: u32) -> Self {
        let u = least_nonresidue(p);
        Unram { p, u, k, pk: p.pow(k) }
    }

    pub fn add(&self, a: MElt, b: MElt) -> MElt {
        ((a.0 + b.0) % self.pk, (a.1 + b.1) % self.pk)
    }

    pub fn sub(&self, a: MElt, b: MElt) -> MElt {
        ((a.0 + self.pk - b.0) % self.pk, (a.1 + self.pk - b.1) % self.pk)
    }

    pub fn mul(&self, a: MElt, b: MElt) -> MElt {
        let pk = self.pk;
        let x = (mulmod(a.0, b.0, pk) + mulmod(self.u % pk, mulmod(a.1, b.1, pk), pk)) % pk;
        let y = (mulmod(a.0, b.1, pk) + mulmod(a.1, b.0, pk)) % pk;
        (x, y)
    }

    pub fn scale(&self, c: u64, a: MElt) -> MElt {
        (mulmod(c % self.pk, a.0, self.pk), mulmod(c % self.pk, a.1, self.pk))
    }

    pub fn sigma(&self, a: MElt) -> MElt {
        (a.0, (self.pk - a.1) % self.pk)
    }

    /// `N(a) = a0^2 - u a1^2` in `Z/p^k`.
    pub fn norm(&self, a: MElt) -> u64 {
        let pk = self.pk;
        let n = mulmod(a.0, a.0, pk) + pk - mulmod(self.u % pk, mulmod(a.1, a.1, pk), pk);
        n % pk
    }

    pub fn trace(&self, a: MElt) -> u64 {
        2 * a.0 % self.pk
    }

    pub fn is_unit(&self, a: MElt) -> bool {
        a.0 % self.p != 0 || a.1 % self.p != 0
    }

    pub fn inv(&self, a: MElt) -> Option<MElt> {
        if !self.is_unit(a) {
            return None;
        }
        let ninv = invmod(self.norm(a), self.pk);
        Some(self.scale(ninv, self.sigma(a)))
    }

    /// `sqrt(u)`-adic valuation is not needed; this is `min(v_p(a0), v_p(a1))`,
    /// capped at `k` for zero coordinates.
    pub fn val(&self, a: MElt) -> u32 {
        let v = |x: u64| -> u32 {
            if x == 0 {
                self.k
            } else {
                let mut x = x;
                let mut v = 0;
                while x % self.p == 0 {
                    x /= self.p;
                    v += 1;
                }
                v
            }
        };
        v(a.0).min(v(a.1))
    }
}

/// A unit `t = t0 + t1 sqrt(u)` of `o_M` with `N(t) = u` mod `p^k`, found by
/// an exhaustive search mod `p` followed by a Hensel lift of the first
/// coordinate.
pub fn hensel_norm_t(p: u64, k: u32) -> MElt {
    let u = least_nonresidue(p);
    let pk = p.pow(k);
    for t1 in 0..p {
        // Want t0^2 = u (1 + t1^2) mod p^k with the right side a unit square.
        let target = u * (1 + t1 * t1) % p;
        if target == 0 || legendre(target as i64, p) != 1 {
            continue;
        }
        let target_k = mulmod(u % pk, (1 + mulmod(t1, t1, pk)) % pk, pk);
        let t0 = hensel_sqrt(target_k, p, k).expect("unit square lifts");
        debug_assert_eq!(
            (mulmod(t0, t0, pk) + pk - mulmod(u % pk, mulmod(t1, t1, pk), pk)) % pk,
            u % pk
        );
        return (t0, t1);
    }
    unreachable!("norm map of the unramified extension is surjective on units")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtLabel {
    K,
    L,
    M,
}

impl ExtLabel {
    pub fn is_ramified(self) -> bool {
        !matches!(self, ExtLabel::M)
    }

    pub fn name(self) -> &'static str {
        match self {
            ExtLabel::K => "K",
            ExtLabel::L => "L",
            ExtLabel::M => "M",
        }
    }
}

/// `o_E / p_E^m` with packed-u64 elements.
///
/// Ramified `E`: element `x + y w`, `x` mod `p^mx`, `y` mod `p^my`,
/// packed as `x * p^my + y`.  Unramified `M`: `x + y sqrt(u)` with both mod
/// `p^m`, packed as `x * p^m + y`.
#[derive(Clone, Debug)]
pub struct QuadExt {
    pub label: ExtLabel,
    pub p: u64,
    pub u: u64,
    /// `p_E`-adic precision.
    pub m: u32,
    pub mx: u32,
    pub my: u32,
    pub pmx: u64,
    pub pmy: u64,
    /// `w^2 = -c p` for ramified `E`.
    pub c: u64,
}

impl QuadExt {
    pub fn new(label: ExtLabel, p: u64, m: u32) -> Result<Self, LocalError> {
        check_odd_prime(p)?;
        if m == 0 {
            return Err(LocalError::Precision { have: 0, need: 1 });
        }
        let u = least_nonresidue(p);
        let (mx, my, c) = match label {
            ExtLabel::K => (m.div_ceil(2), m / 2, 1),
            ExtLabel::L => (m.div_ceil(2), m / 2, u),
            ExtLabel::M => (m, m, 0),
        };
        Ok(QuadExt { label, p, u, m, mx, my, pmx: p.pow(mx), pmy: p.pow(my), c })
    }

    pub fn pack(&self, x: u64, y: u64) -> u64 {
        (x % self.pmx) * self.pmy + y % self.pmy
    }

    pub fn unpack(&self, a: u64) -> (u64, u64) {
        (a / self.pmy, a % self.pmy)
    }

    pub fn one(&self) -> u64 {
        self.pack(1, 0)
    }

    pub fn minus_one(&self) -> u64 {
        self.pack(self.pmx - 1, 0)
    }

    pub fn embed_base(&self, cval: u64) -> u64 {
        self.pack(cval % self.pmx, 0)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let (x, y) = self.unpack(a);
        let (x2, y2) = self.unpack(b);
        match self.label {
            ExtLabel::M => {
                let pk = self.pmx;
                let rx = (mulmod(x, x2, pk) + mulmod(self.u % pk, mulmod(y, y2, pk), pk)) % pk;
                let ry = (mulmod(x, y2, pk) + mulmod(y, x2, pk)) % pk;
                self.pack(rx, ry)
            }
            _ => {
                // (x + yw)(x2 + y2 w) = (x x2 - c p y y2) + (x y2 + y x2) w.
                let px = self.pmx;
                let cp = self.c % px * (self.p % px) % px;
                let rx = (mulmod(x, x2, px) + px - mulmod(cp, mulmod(y % px, y2 % px, px), px))
                    % px;
                let ry = (mulmod(x, y2, self.pmy) + mulmod(y, x2 % self.pmy, self.pmy)) % self.pmy;
                self.pack(rx, ry)
            }
        }
    }

    pub fn sigma(&self, a: u64) -> u64 {
        let (x, y) = self.unpack(a);
        self.pack(x, (self.pmy - y) % self.pmy)
    }

    /// Norm to the base field, mod `p^mx`.
    pub fn norm(&self, a: u64) -> u64 {
        let (x, y) = self.unpack(a);
        let px = self.pmx;
        match self.label {
            ExtLabel::M => {
                (mulmod(x, x, px) + px - mulmod(self.u % px, mulmod(y, y, px), px)) % px
            }
            _ => {
                let cp = self.c % px * (self.p % px) % px;
                (mulmod(x, x, px) + mulmod(cp, mulmod(y % px, y % px, px), px)) % px
            }
        }
    }

    pub fn norm_modulus(&self) -> u64 {
        self.pmx
    }

    pub fn trace(&self, a: u64) -> u64 {
        let (x, _) = self.unpack(a);
        2 * x % self.pmx
    }

    pub fn is_unit(&self, a: u64) -> bool {
        let (x, y) = self.unpack(a);
        match self.label {
            ExtLabel::M => x % self.p != 0 || y % self.p != 0,
            _ => x % self.p != 0,
        }
    }

    pub fn inv(&self, a: u64) -> Result<u64, LocalError> {
        if !self.is_unit(a) {
            return Err(LocalError::NotAUnit);
        }
        let ninv = invmod(self.norm(a), self.pmx);
        let (x, y) = self.unpack(self.sigma(a));
        Ok(self.pack(mulmod(ninv, x, self.pmx), mulmod(ninv % self.pmy, y, self.pmy)))
    }

    /// All units of `o_E / p_E^m`, packed, in increasing packed order.
    pub fn units(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for x in 0..self.pmx {
            for y in 0..self.pmy {
                let a = self.pack(x, y);
                if self.is_unit(a) {
                    out.push(a);
                }
            }
        }
        out
    }

    pub fn unit_count(&self) -> u64 {
        let q = self.p;
        match self.label {
            ExtLabel::M => (q * q - 1) * q.pow(2 * (self.m - 1)),
            _ => (q - 1) * q.pow(self.m - 1),
        }
    }

    /// The image of the unit norm map in `(Z/p^m)^x`, sorted.  For ramified
    /// `E` this is the subgroup of squares; the unramified norm is surjective
    /// on units, which this interface treats as an error.
    pub fn norm_unit_image(&self, fm: u32) -> Result<Vec<u64>, LocalError> {
        if self.label == ExtLabel::M {
            return Err(LocalError::UnramifiedNormImage);
        }
        if self.mx < fm {
            return Err(LocalError::Precision { have: self.mx, need: fm });
        }
        let modulus = self.p.pow(fm);
        let mut seen = std::collections::BTreeSet::new();
        for &a in &self.units() {
            seen.insert(self.norm(a) % modulus);
        }
        // The image of units under the ramified norm is the subgroup of
        // squares; check it exactly.
        let mut squares = std::collections::BTreeSet::new();
        for x in 1..modulus {
            if x % self.p != 0 {
                squares.insert(mulmod(x, x, modulus));
            }
        }
        assert_eq!(seen, squares);
        Ok(seen.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonresidues_are_smallest() {
        assert_eq!(least_nonresidue(3), 2);
        assert_eq!(least_nonresidue(5), 2);
        assert_eq!(least_nonresidue(7), 3);
        assert_eq!(least_nonresidue(11), 2);
        assert_eq!(least_nonresidue(13), 2);
    }

    #[test]
    fn hensel_t_has_norm_u() {
        for p in [3u64, 5, 7, 11, 13] {
            let k = 3;
            let m = Unram::new(p, k);
            let t = hensel_norm_t(p, k);
            assert!(m.is_unit(t));
            assert_eq!(m.norm(t), m.u % m.pk, "p = {p}");
        }
    }

    #[test]
    fn ramified_norms_are_squares() {
        let e = QuadExt::new(ExtLabel::K, 3, 4).unwrap();
        assert_eq!(e.norm_unit_image(2).unwrap(), vec![1, 4, 7]);
        let e = QuadExt::new(ExtLabel::L, 5, 2).unwrap();
        assert_eq!(e.norm_unit_image(1).unwrap(), vec![1, 4]);
    }

    #[test]
    fn unramified_norm_image_is_rejected() {
        let e = QuadExt::new(ExtLabel::M, 3, 2).unwrap();
        assert!(matches!(e.norm_unit_image(1), Err(LocalError::UnramifiedNormImage)));
    }

    #[test]
    fn uniformiser_norms() {
        // N(w_K) = p and N(w_L) = up, visible at precision 2 as norms of
        // (0, 1): N(0 + 1 w) = c p.
        for p in [3u64, 7] {
            let e = QuadExt::new(ExtLabel::K, p, 2).unwrap();
            assert_eq!(e.norm(e.pack(0, 1)), p % e.pmx);
            let e = QuadExt::new(ExtLabel::L, p, 2).unwrap();
            assert_eq!(e.norm(e.pack(0, 1)), e.u * p % e.pmx);
        }
    }

    #[test]
    fn unit_inverse_roundtrip() {
        for label in [ExtLabel::K, ExtLabel::L, ExtLabel::M] {
            let e = QuadExt::new(label, 5, 3).unwrap();
            let mut checked = 0;
            for &a in e.units().iter().step_by(7) {
                let b = e.inv(a).unwrap();
                assert_eq!(e.mul(a, b), e.one());
                checked += 1;
            }
            assert!(checked > 10);
        }
    }

    #[test]
    fn nonunit_inverse_errors() {
        let e = QuadExt::new(ExtLabel::K, 3, 2).unwrap();
        assert!(matches!(e.inv(e.pack(3, 1)), Err(LocalError::NotAUnit)));
    }

    #[test]
    fn unram_ring_norm_and_sigma() {
        let m = Unram::new(3, 2);
        let a = (2, 5);
        let s = m.sigma(a);
        let prod = m.mul(a, s);
        assert_eq!(prod.1, 0);
        assert_eq!(prod.0, m.norm(a));
        let inv = m.inv(a).unwrap();
        assert_eq!(m.mul(a, inv), (1, 0));
    }

    #[test]
    fn unit_counts_match_enumeration() {
        for label in [ExtLabel::K, ExtLabel::L, ExtLabel::M] {
            for m in 1..=3 {
                let e = QuadExt::new(label, 3, m).unwrap();
                assert_eq!(e.units().len() as u64, e.unit_count());
            }
        }
    }
}
