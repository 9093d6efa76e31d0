//! Dense univariate polynomials over a prime field F_l, with the root
//! extraction needed by the character-table eigenvalue splitting: for a
//! polynomial known to split over F_l, `distinct_roots` returns its distinct
//! roots via gcd with x^l - x followed by seeded equal-degree splitting.

use crate::numutil::{invmod, mulmod};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlPoly {
    pub l: u64,
    /// Coefficients, low degree first, no trailing zeros (empty = zero poly).
    pub c: Vec<u64>,
}

impl FlPoly {
    pub fn new(l: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= l;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FlPoly { l, c }
    }

    pub fn zero(l: u64) -> Self {
        FlPoly { l, c: vec![] }
    }

    pub fn one(l: u64) -> Self {
        FlPoly { l, c: vec![1] }
    }

    pub fn x(l: u64) -> Self {
        FlPoly { l, c: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> usize {
        assert!(!self.is_zero());
        self.c.len() - 1
    }

    pub fn add(&self, o: &FlPoly) -> FlPoly {
        let l = self.l;
        let mut c = vec![0u64; self.c.len().max(o.c.len())];
        for (i, x) in self.c.iter().enumerate() {
            c[i] = *x;
        }
        for (i, y) in o.c.iter().enumerate() {
            c[i] = (c[i] + y) % l;
        }
        FlPoly::new(l, c)
    }

    pub fn sub(&self, o: &FlPoly) -> FlPoly {
        let l = self.l;
        self.add(&FlPoly::new(l, o.c.iter().map(|&y| (l - y) % l).collect()))
    }

    pub fn mul(&self, o: &FlPoly) -> FlPoly {
        if self.is_zero() || o.is_zero() {
            return FlPoly::zero(self.l);
        }
        let l = self.l;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(*x, *y, l)) % l;
            }
        }
        FlPoly::new(l, c)
    }

    pub fn rem(&self, o: &FlPoly) -> FlPoly {
        assert!(!o.is_zero());
        let l = self.l;
        let mut r = self.c.clone();
        let od = o.c.len() - 1;
        let inv_lead = invmod(o.c[od], l);
        while r.len() > od {
            let k = r.len() - 1 - od;
            let q = mulmod(*r.last().unwrap(), inv_lead, l);
            if q != 0 {
                for (i, y) in o.c.iter().enumerate() {
                    let t = mulmod(q, *y, l);
                    r[k + i] = (r[k + i] + l - t) % l;
                }
            }
            r.pop();
        }
        FlPoly::new(l, r)
    }

    pub fn monic(&self) -> FlPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invmod(*self.c.last().unwrap(), self.l);
        FlPoly::new(self.l, self.c.iter().map(|&x| mulmod(x, inv, self.l)).collect())
    }

    pub fn gcd(&self, o: &FlPoly) -> FlPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.c.iter().rev() {
            acc = (mulmod(acc, x, self.l) + c) % self.l;
        }
        acc
    }

    /// `base^e mod self` where `base` is reduced first.
    pub fn powmod_x(&self, base: &FlPoly, mut e: u64) -> FlPoly {
        let mut b = base.rem(self);
        let mut acc = FlPoly::one(self.l);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem(self);
            }
            b = b.mul(&b).rem(self);
            e >>= 1;
        }
        acc
    }
}

/// A small deterministic xorshift generator; splitting must not depend on
/// any global randomness source.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

/// Distinct roots in F_l of a polynomial all of whose roots lie in F_l.
/// The result is sorted.
pub fn distinct_roots(f: &FlPoly) -> Vec<u64> {
    let l = f.l;
    assert!(!f.is_zero());
    let xq = f.powmod_x(&FlPoly::x(l), l);
    let split = xq.sub(&FlPoly::x(l)).gcd(f);
    let mut roots = Vec::new();
    let mut rng = XorShift(0x9e3779b97f4a7c15);
    split_linear(&split, &mut rng, &mut roots);
    roots.sort();
    roots
}

fn split_linear(f: &FlPoly, rng: &mut XorShift, out: &mut Vec<u64>) {
    let l = f.l;
    if f.is_zero() || f.deg() == 0 {
        return;
    }
    if f.deg() == 1 {
        let root = mulmod(l - f.c[0] % l, invmod(f.c[1], l), l) % l;
        out.push(root);
        return;
    }
    // Strip a root at 0 if present, then split the rest.
    if f.c[0] == 0 {
        out.push(0);
        let g = FlPoly::new(l, f.c[1..].to_vec());
        split_linear(&g, rng, out);
        return;
    }
    loop {
        let delta = rng.next() % l;
        let shifted = FlPoly::new(l, vec![delta, 1]);
        let h = f.powmod_x(&shifted, (l - 1) / 2).sub(&FlPoly::one(l));
        let g = h.gcd(f);
        if !g.is_zero() && g.deg() > 0 && g.deg() < f.deg() {
            split_linear(&g, rng, out);
            split_linear(&poly_div(f, &g), rng, out);
            return;
        }
    }
}

fn poly_div(f: &FlPoly, g: &FlPoly) -> FlPoly {
    let l = f.l;
    let mut r = f.c.clone();
    let gd = g.c.len() - 1;
    let inv_lead = invmod(g.c[gd], l);
    let mut q = vec![0u64; r.len() - gd];
    while r.len() > gd {
        let k = r.len() - 1 - gd;
        let c = mulmod(*r.last().unwrap(), inv_lead, l);
        q[k] = c;
        if c != 0 {
            for (i, y) in g.c.iter().enumerate() {
                let t = mulmod(c, *y, l);
                r[k + i] = (r[k + i] + l - t) % l;
            }
        }
        r.pop();
    }
    FlPoly::new(l, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_identities() {
        let l = 101;
        let f = FlPoly::new(l, vec![1, 2, 3]);
        let g = FlPoly::new(l, vec![5, 7]);
        let prod = f.mul(&g);
        assert_eq!(prod.rem(&g).is_zero(), true);
        assert_eq!(prod.eval(3), mulmod(f.eval(3), g.eval(3), l));
    }

    #[test]
    fn root_extraction() {
        let l = 97;
        // (x - 3)(x - 10)(x - 50)(x - 96)
        let mut f = FlPoly::one(l);
        for r in [3u64, 10, 50, 96] {
            f = f.mul(&FlPoly::new(l, vec![(l - r) % l, 1]));
        }
        assert_eq!(distinct_roots(&f), vec![3, 10, 50, 96]);
        // Repeated roots and a root at zero.
        let g = f.mul(&f).mul(&FlPoly::x(l));
        assert_eq!(distinct_roots(&g), vec![0, 3, 10, 50, 96]);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let l = 13;
        let f = FlPoly::new(l, vec![1, 1]);
        let g = FlPoly::new(l, vec![2, 1]);
        let d = f.gcd(&g);
        assert_eq!(d.c, vec![1]);
    }
}
