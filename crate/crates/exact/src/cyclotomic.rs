//! Exact arithmetic with integer linear combinations of roots of unity.
//!
//! A value of order `m` is stored as the coefficient vector of
//! `sum_s c_s zeta_m^s`, i.e. an element of `Z[x]/(x^m - 1)` evaluated at a
//! primitive m-th root. Addition and multiplication act on that circular
//! basis; zero and equality testing reduce modulo the m-th cyclotomic
//! polynomial, computed once per order and cached in a `CycCtx`.
//!
//! Coefficients are `i128`. Every quantity in this workspace that reaches
//! this module (character sums, Gauss sums, intersection-weighted averages)
//! is bounded well below 2^120.

use std::cell::RefCell;
use std::collections::HashMap;

/// Monic cyclotomic polynomial kept as (degree, nonzero coefficients).
#[derive(Clone, Debug)]
pub struct Phi {
    pub deg: usize,
    pub nz: Vec<(usize, i128)>,
}

#[derive(Default)]
pub struct CycCtx {
    cache: RefCell<HashMap<u64, Phi>>,
}

impl CycCtx {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phi(&self, m: u64) -> Phi {
        if let Some(p) = self.cache.borrow().get(&m) {
            return p.clone();
        }
        let dense = cyclotomic_poly(m);
        let deg = dense.len() - 1;
        let nz: Vec<(usize, i128)> = dense
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect();
        let p = Phi { deg, nz };
        self.cache.borrow_mut().insert(m, p.clone());
        p
    }
}

thread_local! {
    static PHI_DENSE: RefCell<HashMap<u64, Vec<i128>>> = RefCell::new(HashMap::new());
}

/// Dense coefficients of the m-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(m: u64) -> Vec<i128> {
    assert!(m >= 1);
    if let Some(f) = PHI_DENSE.with(|c| c.borrow().get(&m).cloned()) {
        return f;
    }
    // x^m - 1 divided by Phi_d for every proper divisor d.
    let mut f = vec![0i128; m as usize + 1];
    f[0] = -1;
    f[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let g = cyclotomic_poly(d);
            f = poly_divide_exact(&f, &g);
        }
    }
    PHI_DENSE.with(|c| c.borrow_mut().insert(m, f.clone()));
    f
}

/// Exact division of integer polynomials (panics on nonzero remainder).
pub fn poly_divide_exact(f: &[i128], g: &[i128]) -> Vec<i128> {
    let gd = g.len() - 1;
    assert_eq!(g[gd], 1, "divisor must be monic");
    let mut r = f.to_vec();
    let fd = r.len() - 1;
    let mut q = vec![0i128; fd - gd + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + gd];
        if c == 0 {
            continue;
        }
        q[k] = c;
        for (i, gi) in g.iter().enumerate() {
            if *gi != 0 {
                r[k + i] -= c * gi;
            }
        }
    }
    assert!(r.iter().all(|&c| c == 0), "division was not exact");
    q
}

/// An integer combination of m-th roots of unity.
#[derive(Clone, Debug)]
pub struct Cyc {
    pub m: u64,
    pub c: Vec<i128>,
}

impl Cyc {
    pub fn zero(m: u64) -> Self {
        Cyc {
            m,
            c: vec![0; m as usize],
        }
    }

    pub fn from_int(n: i128) -> Self {
        Cyc { m: 1, c: vec![n] }
    }

    /// `zeta_m^k`.
    pub fn root(m: u64, k: u64) -> Self {
        let mut z = Cyc::zero(m);
        z.c[(k % m) as usize] = 1;
        z
    }

    pub fn add_root(&mut self, k: u64, mult: i128) {
        let i = (k % self.m) as usize;
        self.c[i] += mult;
    }

    /// Rewrite in terms of M-th roots, for m | M.
    pub fn lift_to(&self, big: u64) -> Cyc {
        assert_eq!(big % self.m, 0);
        let step = (big / self.m) as usize;
        let mut out = Cyc::zero(big);
        for (s, &v) in self.c.iter().enumerate() {
            if v != 0 {
                out.c[s * step] += v;
            }
        }
        out
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let m = num_integer::lcm(self.m, other.m);
        let mut a = self.lift_to(m);
        let b = other.lift_to(m);
        for (x, y) in a.c.iter_mut().zip(b.c.iter()) {
            *x += *y;
        }
        a
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i128) -> Cyc {
        Cyc {
            m: self.m,
            c: self.c.iter().map(|&x| x * k).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let m = num_integer::lcm(self.m, other.m);
        let a = self.lift_to(m);
        let b = other.lift_to(m);
        let mut out = Cyc::zero(m);
        let nz: Vec<(usize, i128)> = a
            .c
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i, v))
            .collect();
        for (j, w) in b.c.iter().enumerate() {
            if *w == 0 {
                continue;
            }
            for &(i, v) in &nz {
                let k = (i + j) % m as usize;
                out.c[k] += v * w;
            }
        }
        out
    }

    /// Complex conjugation, `zeta -> zeta^(-1)`.
    pub fn conj(&self) -> Cyc {
        let m = self.m as usize;
        let mut out = Cyc::zero(self.m);
        for (s, &v) in self.c.iter().enumerate() {
            out.c[(m - s) % m] += v;
        }
        out
    }

    /// Galois twist `zeta -> zeta^t` for `gcd(t, m) = 1`.
    pub fn galois(&self, t: u64) -> Cyc {
        assert_eq!(num_integer::gcd(t, self.m), 1);
        let mut out = Cyc::zero(self.m);
        for (s, &v) in self.c.iter().enumerate() {
            out.c[((s as u64 * t) % self.m) as usize] += v;
        }
        out
    }

    /// Canonical coordinates in the power basis 1, zeta, ..., zeta^(phi(m)-1).
    pub fn reduced(&self, ctx: &CycCtx) -> Vec<i128> {
        let phi = ctx.phi(self.m);
        let mut r = self.c.clone();
        for k in (phi.deg..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            r[k] = 0;
            for &(i, gi) in &phi.nz {
                if i == phi.deg {
                    continue;
                }
                r[k - phi.deg + i] -= c * gi;
            }
        }
        r.truncate(phi.deg.max(1));
        r
    }

    pub fn is_zero(&self, ctx: &CycCtx) -> bool {
        self.reduced(ctx).iter().all(|&c| c == 0)
    }

    pub fn eq(&self, other: &Cyc, ctx: &CycCtx) -> bool {
        self.sub(other).is_zero(ctx)
    }

    /// The rational integer this value equals, if it is one.
    pub fn as_int(&self, ctx: &CycCtx) -> Option<i128> {
        let r = self.reduced(ctx);
        if r[1..].iter().all(|&c| c == 0) {
            Some(r[0])
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_poly(105);
        assert_eq!(p105.len() - 1, 48);
        assert!(p105.iter().any(|&c| c == -2));
    }

    #[test]
    fn root_of_unity_relations() {
        let ctx = CycCtx::new();
        // 1 + zeta_3 + zeta_3^2 = 0
        let s = Cyc::root(3, 0).add(&Cyc::root(3, 1)).add(&Cyc::root(3, 2));
        assert!(s.is_zero(&ctx));
        // zeta_6 = -zeta_3^2
        let a = Cyc::root(6, 1);
        let b = Cyc::root(3, 2).scale(-1);
        assert!(a.eq(&b, &ctx));
        // zeta_8^2 = zeta_4
        assert!(Cyc::root(8, 1).mul(&Cyc::root(8, 1)).eq(&Cyc::root(4, 1), &ctx));
        // conj(zeta_5) * zeta_5 = 1
        let z = Cyc::root(5, 1);
        assert_eq!(z.mul(&z.conj()).as_int(&ctx), Some(1));
    }

    #[test]
    fn quadratic_gauss_sum_squared() {
        let ctx = CycCtx::new();
        // g = sum_t (t|13) zeta_13^t satisfies g^2 = 13 since 13 = 1 mod 4.
        let mut g = Cyc::zero(13);
        for t in 1..13u64 {
            g.add_root(t, crate::numutil::legendre(t as i64, 13) as i128);
        }
        assert_eq!(g.mul(&g).as_int(&ctx), Some(13));
        // and for 7 = 3 mod 4, g^2 = -7.
        let mut h = Cyc::zero(7);
        for t in 1..7u64 {
            h.add_root(t, crate::numutil::legendre(t as i64, 7) as i128);
        }
        assert_eq!(h.mul(&h).as_int(&ctx), Some(-7));
    }

    #[test]
    fn galois_permutes_conjugates() {
        let ctx = CycCtx::new();
        let z = Cyc::root(9, 1).add(&Cyc::root(9, 8));
        let w = z.galois(2);
        let expect = Cyc::root(9, 2).add(&Cyc::root(9, 7));
        assert!(w.eq(&expect, &ctx));
    }
}
