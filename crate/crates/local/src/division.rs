//! Finite quotients of the unit group of the ramified quaternion algebra.
//!
//! The algebra is realised as `B = M + M j` over `Q_p` with `M` the
//! unramified quadratic extension, `j^2 = -p`, and `j b = sigma(b) j`.  Its
//! maximal order is `O = o_M + o_M j` with radical `P = O j`, so
//! `P^(2k) = p^k O` and `P^(2k+1) = p^k P`.  This module builds the finite
//! groups
//!
//! ```text
//!     G_n = B^x / Q_p^x (1 + P^n),          n >= 1,
//! ```
//!
//! of order `2 (p + 1) p^(2n - ceil(n/2) - 1)`, together with their conjugacy
//! structure and the images of the three quadratic tori.
//!
//! Writing `sa = ceil(n/2)` and `sb = floor(n/2)`, a coset represented by a
//! unit `a + b j` is determined by `a mod p^sa` and `b mod p^sb` up to one
//! common scalar in `(Z/p^sa)^x`, and every coset is either of that form or
//! such a coset times `j`.  Elements are stored in the normal form
//! `(a, b, w)` with `w` the parity of the `j`-power and with `a` scaled to
//! the smallest packed representative of its scalar orbit.  Since `j^2 = -p`
//! is central, products only track the parity:
//!
//! ```text
//!     (x, w) (y, w') = (x sigma'^w(y), w xor w'),
//!     sigma'(a + b j) = sigma(a) + sigma(b) j,
//!     (a + b j)(c + d j) = (ac - p b sigma(d)) + (ad + b sigma(c)) j.
//! ```

use crate::field::{check_odd_prime, hensel_norm_t, ExtLabel, MElt, QuadExt, Unram};
use crate::LocalError;
use std::collections::HashMap;

/// Refuse to enumerate quotients with more elements than this.
pub const DEFAULT_ELEMENT_LIMIT: u64 = 2_000_000;

/// The group `G_n` with its conjugacy classes and torus embeddings.
pub struct Quotient {
    pub p: u64,
    /// Least positive quadratic nonresidue, the `sqrt(u)` generator of `M`.
    pub u: u64,
    pub n: u32,
    pub sa: u32,
    pub sb: u32,
    pub pa: u64,
    pub pb: u64,
    /// Arithmetic in `o_M / p^sa`.
    pub ring: Unram,
    /// Packed normal forms; the position in this vector is the element id.
    pub elements: Vec<u64>,
    index: HashMap<u64, u32>,
    /// For each packed `a`: the packed canonical representative of its
    /// scalar orbit, or `u64::MAX` for non-units.
    canon: Vec<u64>,
    /// The scalar carrying each packed `a` to its canonical representative.
    canon_lambda: Vec<u64>,
    /// Canonical form of `s mod p^sa` under multiplication by unit squares.
    square_key: Vec<u64>,
    inv_tab: Vec<u32>,
    pub class_of: Vec<u32>,
    pub classes: Vec<Vec<u32>>,
    /// Largest `m <= n` such that the element lies in the image of
    /// `1 + P^m`; `None` for the cosets outside the unit subgroup.
    pub u_level: Vec<Option<u32>>,
}

/// The image of `E^x` in a quotient, with each group element paired with a
/// packed unit of `E` representing it modulo base-field scalars.
pub struct TorusEmbedding {
    pub label: ExtLabel,
    /// `E` at enough precision to evaluate characters on the listed units.
    pub ext: QuadExt,
    /// Image of the units of `E`, as `(group element, packed unit)`.
    pub members: Vec<(u32, u64)>,
    /// Image of `o_E^x varpi_E` for ramified `E`, with the packed unit part;
    /// absent for the unramified torus, whose uniformiser `p` is central.
    pub varpi_coset: Option<Vec<(u32, u64)>>,
}

fn val_cap(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while v < cap && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

impl Quotient {
    pub fn new(p: u64, n: u32) -> Result<Self, LocalError> {
        Self::with_limit(p, n, DEFAULT_ELEMENT_LIMIT)
    }

    pub fn with_limit(p: u64, n: u32, limit: u64) -> Result<Self, LocalError> {
        check_odd_prime(p)?;
        assert!(n >= 1, "the quotient needs a positive level");
        let sa = n.div_ceil(2);
        let sb = n / 2;
        let expected = 2 * (p + 1) * p.pow(2 * n - sa - 1);
        if expected > limit {
            return Err(LocalError::TooLarge(expected, limit));
        }
        let pa = p.pow(sa);
        let pb = p.pow(sb);
        let ring = Unram::new(p, sa);
        let u = ring.u;

        // Scalar-orbit canonicalisation of the a coordinate.
        let lambdas: Vec<u64> = (1..pa).filter(|l| l % p != 0).collect();
        let mut canon = vec![u64::MAX; (pa * pa) as usize];
        let mut canon_lambda = vec![0u64; (pa * pa) as usize];
        for a0 in 0..pa {
            for a1 in 0..pa {
                let idx = (a0 * pa + a1) as usize;
                if canon[idx] != u64::MAX || !ring.is_unit((a0, a1)) {
                    continue;
                }
                let mut best = u64::MAX;
                let mut lam_star = 1;
                for &l in &lambdas {
                    let m = (l * a0 % pa) * pa + l * a1 % pa;
                    if m < best {
                        best = m;
                        lam_star = l;
                    }
                }
                for &l in &lambdas {
                    let midx = ((l * a0 % pa) * pa + l * a1 % pa) as usize;
                    canon[midx] = best;
                    canon_lambda[midx] = lam_star * exact::numutil::invmod(l, pa) % pa;
                }
            }
        }
        let square_key: Vec<u64> = (0..pa)
            .map(|s| lambdas.iter().map(|&l| l * l % pa * s % pa).min().unwrap())
            .collect();

        let mut elements = Vec::with_capacity(expected as usize);
        for a0 in 0..pa {
            for a1 in 0..pa {
                let apack = a0 * pa + a1;
                if canon[apack as usize] != apack {
                    continue;
                }
                for b0 in 0..pb {
                    for b1 in 0..pb {
                        for w in 0..2 {
                            elements.push(((apack * pb + b0) * pb + b1) * 2 + w);
                        }
                    }
                }
            }
        }
        assert_eq!(elements.len() as u64, expected, "normal form census");
        let index: HashMap<u64, u32> =
            elements.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();

        let mut g = Quotient {
            p,
            u,
            n,
            sa,
            sb,
            pa,
            pb,
            ring,
            elements,
            index,
            canon,
            canon_lambda,
            square_key,
            inv_tab: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
            u_level: Vec::new(),
        };

        g.inv_tab = (0..g.elements.len() as u32).map(|i| g.compute_inv(i)).collect();
        for i in 0..g.elements.len() as u32 {
            assert_eq!(g.mul(i, g.inv_tab[i as usize]), g.id(), "inverse roundtrip");
        }
        g.check_generation();
        g.build_classes();
        g.u_level = (0..g.elements.len() as u32).map(|i| g.compute_u_level(i)).collect();
        for class in &g.classes {
            let lvl = g.u_level[class[0] as usize];
            let key = g.nrd_key(class[0]);
            for &e in class {
                assert_eq!(g.u_level[e as usize], lvl, "unit level is a class function");
                assert_eq!(g.nrd_key(e), key, "reduced norm class is a class function");
            }
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_rep(&self, c: usize) -> u32 {
        self.classes[c][0]
    }

    pub fn class_sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.len() as u64).collect()
    }

    pub fn pack(&self, a: MElt, b: MElt, w: u8) -> u64 {
        let apack = (a.0 % self.pa) * self.pa + a.1 % self.pa;
        ((apack * self.pb + b.0 % self.pb) * self.pb + b.1 % self.pb) * 2 + w as u64
    }

    pub fn unpack(&self, e: u64) -> (MElt, MElt, u8) {
        let w = (e % 2) as u8;
        let e = e / 2;
        let b1 = e % self.pb;
        let e = e / self.pb;
        let b0 = e % self.pb;
        let apack = e / self.pb;
        ((apack / self.pa, apack % self.pa), (b0, b1), w)
    }

    /// Id of the normal form of `(a + b j) j^w`, scaling `a` to canonical.
    pub fn canonical(&self, a: MElt, b: MElt, w: u8) -> u32 {
        let apack = ((a.0 % self.pa) * self.pa + a.1 % self.pa) as usize;
        let ca = self.canon[apack];
        assert!(ca != u64::MAX, "group elements have unit a coordinate");
        let lam = self.canon_lambda[apack] % self.pb.max(1);
        let b = (lam * (b.0 % self.pb) % self.pb, lam * (b.1 % self.pb) % self.pb);
        let key = ((ca * self.pb + b.0) * self.pb + b.1) * 2 + w as u64;
        self.index[&key]
    }

    pub fn id(&self) -> u32 {
        self.canonical((1, 0), (0, 0), 0)
    }

    pub fn mul(&self, gi: u32, hi: u32) -> u32 {
        let (a, b, w) = self.unpack(self.elements[gi as usize]);
        let (mut c, mut d, w2) = self.unpack(self.elements[hi as usize]);
        if w == 1 {
            c = self.ring.sigma(c);
            d = self.ring.sigma(d);
        }
        let na = self.ring.sub(
            self.ring.mul(a, c),
            self.ring.scale(self.p % self.pa, self.ring.mul(b, self.ring.sigma(d))),
        );
        let nb = self.ring.add(self.ring.mul(a, d), self.ring.mul(b, self.ring.sigma(c)));
        self.canonical(na, nb, w ^ w2)
    }

    pub fn inv(&self, gi: u32) -> u32 {
        self.inv_tab[gi as usize]
    }

    fn compute_inv(&self, gi: u32) -> u32 {
        let (a, b, w) = self.unpack(self.elements[gi as usize]);
        // (a + b j)^-1 = Nrd^-1 (sigma(a) - b j), and for w = 1 the inverse
        // of x j is sigma'(x^-1) j up to the central j^-2.
        let nrd = (self.ring.norm(a) + self.p % self.pa * self.ring.norm(b)) % self.pa;
        let ninv = exact::numutil::invmod(nrd, self.pa);
        let mut xa = self.ring.scale(ninv, self.ring.sigma(a));
        let mut xb = self.ring.scale(self.pa - ninv, b);
        if w == 1 {
            xa = self.ring.sigma(xa);
            xb = self.ring.sigma(xb);
        }
        self.canonical(xa, xb, w)
    }

    /// Generators: the residue field of `M` on the `a` side, one-unit
    /// generators at every level on both sides, and `j`.
    fn generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let modp = Unram::new(self.p, 1);
        let omega = (0..self.p * self.p)
            .map(|s| (s / self.p, s % self.p))
            .find(|&e| {
                if !modp.is_unit(e) {
                    return false;
                }
                let mut x = e;
                let mut ord = 1u64;
                while x != (1, 0) {
                    x = modp.mul(x, e);
                    ord += 1;
                }
                ord == self.p * self.p - 1
            })
            .expect("residue field generator");
        gens.push(self.canonical(omega, (0, 0), 0));
        for k in 1..self.sa {
            let pk = self.p.pow(k);
            gens.push(self.canonical((1 + pk, 0), (0, 0), 0));
            gens.push(self.canonical((1, pk), (0, 0), 0));
        }
        for k in 0..self.sb {
            let pk = self.p.pow(k);
            gens.push(self.canonical((1, 0), (pk, 0), 0));
            gens.push(self.canonical((1, 0), (0, pk), 0));
        }
        gens.push(self.canonical((1, 0), (0, 0), 1));
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    fn check_generation(&self) {
        let gens = self.generators();
        let mut seen = vec![false; self.order()];
        let mut stack = vec![self.id()];
        seen[self.id() as usize] = true;
        let mut count = 1usize;
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        assert_eq!(count, self.order(), "generators span the quotient");
    }

    fn build_classes(&mut self) {
        let gens = self.generators();
        let ginv: Vec<u32> = gens.iter().map(|&g| self.inv_tab[g as usize]).collect();
        let mut class_of = vec![u32::MAX; self.order()];
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for start in 0..self.order() as u32 {
            if class_of[start as usize] != u32::MAX {
                continue;
            }
            let c = classes.len() as u32;
            let mut members = vec![start];
            class_of[start as usize] = c;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for (&g, &gi) in gens.iter().zip(&ginv) {
                    let y = self.mul(self.mul(g, x), gi);
                    if class_of[y as usize] == u32::MAX {
                        class_of[y as usize] = c;
                        members.push(y);
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.class_of = class_of;
        self.classes = classes;
    }

    fn compute_u_level(&self, gi: u32) -> Option<u32> {
        let (a, b, w) = self.unpack(self.elements[gi as usize]);
        if w == 1 {
            return None;
        }
        // The scalar orbit of (a, b) meets 1 + P^m exactly when the sqrt(u)
        // part of a vanishes mod p^ceil(m/2) and b vanishes mod p^floor(m/2).
        let va = val_cap(a.1, self.p, self.sa);
        let vb = val_cap(b.0, self.p, self.sb).min(val_cap(b.1, self.p, self.sb));
        Some((2 * va).min(2 * vb + 1).min(self.n))
    }

    /// Elements in the image of `1 + P^m`.
    pub fn upper_unit_elements(&self, m: u32) -> Vec<u32> {
        (0..self.order() as u32)
            .filter(|&i| self.u_level[i as usize].is_some_and(|l| l >= m))
            .collect()
    }

    /// Square-class canonical form of the reduced norm, for unit cosets.
    pub fn nrd_key(&self, gi: u32) -> Option<u64> {
        let (a, b, w) = self.unpack(self.elements[gi as usize]);
        if w == 1 {
            return None;
        }
        let nrd = (self.ring.norm(a) + self.p % self.pa * self.ring.norm(b)) % self.pa;
        Some(self.square_key[nrd as usize])
    }

    pub fn element_order(&self, gi: u32) -> u64 {
        let mut x = gi;
        let mut ord = 1u64;
        while x != self.id() {
            x = self.mul(x, gi);
            ord += 1;
        }
        ord
    }

    pub fn exponent(&self) -> u64 {
        let mut e = 1u64;
        for c in &self.classes {
            let o = self.element_order(c[0]);
            e = e / gcd(e, o) * o;
        }
        e
    }

    pub fn power(&self, gi: u32, r: u64) -> u32 {
        let mut acc = self.id();
        let mut base = gi;
        let mut r = r;
        while r > 0 {
            if r & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            r >>= 1;
        }
        acc
    }

    /// Class multiplication coefficients: entry `[j][k]` counts the pairs
    /// `(x, y)` in `C_i x C_j` with `x y = z_k`.
    pub fn class_matrix(&self, i: usize) -> Vec<Vec<u64>> {
        let r = self.class_count();
        let mut mat = vec![vec![0u64; r]; r];
        for &x in &self.classes[i] {
            let xi = self.inv_tab[x as usize];
            for k in 0..r {
                let j = self.class_of[self.mul(xi, self.class_rep(k)) as usize] as usize;
                mat[j][k] += 1;
            }
        }
        mat
    }

    /// The image of `E^x`, each element paired with a representing unit.
    pub fn torus(&self, label: ExtLabel) -> TorusEmbedding {
        let emb = match label {
            ExtLabel::M => {
                let ext = QuadExt::new(ExtLabel::M, self.p, self.sa).unwrap();
                let mut members = Vec::new();
                for a0 in 0..self.pa {
                    for a1 in 0..self.pa {
                        let apack = a0 * self.pa + a1;
                        if self.canon[apack as usize] != apack {
                            continue;
                        }
                        members.push((self.canonical((a0, a1), (0, 0), 0), ext.pack(a0, a1)));
                    }
                }
                TorusEmbedding { label, ext, members, varpi_coset: None }
            }
            ExtLabel::K => {
                let ext = QuadExt::new(ExtLabel::K, self.p, 2 * self.sb + 1).unwrap();
                let members: Vec<(u32, u64)> = (0..self.pb)
                    .map(|y| (self.canonical((1, 0), (y, 0), 0), ext.pack(1, y)))
                    .collect();
                let vk = self.canonical((1, 0), (0, 0), 1);
                let coset = members.iter().map(|&(g, e)| (self.mul(g, vk), e)).collect();
                TorusEmbedding { label, ext, members, varpi_coset: Some(coset) }
            }
            ExtLabel::L => {
                let ext = QuadExt::new(ExtLabel::L, self.p, 2 * self.sb + 1).unwrap();
                let t = hensel_norm_t(self.p, self.sa);
                let members: Vec<(u32, u64)> = (0..self.pb)
                    .map(|y| (self.canonical((1, 0), self.ring.scale(y, t), 0), ext.pack(1, y)))
                    .collect();
                let vl = self.canonical(t, (0, 0), 1);
                let coset = members.iter().map(|&(g, e)| (self.mul(g, vl), e)).collect();
                TorusEmbedding { label, ext, members, varpi_coset: Some(coset) }
            }
        };
        self.check_torus(&emb);
        emb
    }

    fn check_torus(&self, emb: &TorusEmbedding) {
        let ids: Vec<u32> = emb.members.iter().map(|&(g, _)| g).collect();
        let expected = match emb.label {
            ExtLabel::M => (self.p + 1) * self.pa / self.p,
            _ => self.pb,
        };
        assert_eq!(ids.len() as u64, expected, "torus unit image size");
        let set: std::collections::HashSet<u32> = ids.iter().copied().collect();
        assert_eq!(set.len(), ids.len(), "torus image is faithful");
        for &x in &ids {
            for &y in &ids {
                assert!(set.contains(&self.mul(x, y)), "torus image is closed");
                assert_eq!(self.mul(x, y), self.mul(y, x), "torus image is abelian");
            }
        }
        if let Some(coset) = &emb.varpi_coset {
            assert_eq!(coset.len(), ids.len(), "coset size");
            for &(g, _) in coset {
                assert!(!set.contains(&g), "uniformiser coset avoids the units");
            }
        }
    }

    /// Which conjugacy classes meet the image of `E^x (1 + P^m)`.
    pub fn torus_support_classes(&self, label: ExtLabel, m: u32) -> Vec<bool> {
        let emb = self.torus(label);
        let upper = self.upper_unit_elements(m);
        let mut hit = vec![false; self.class_count()];
        let coset = emb.varpi_coset.iter().flatten();
        for &(g, _) in emb.members.iter().chain(coset) {
            for &v in &upper {
                hit[self.class_of[self.mul(g, v) as usize] as usize] = true;
            }
        }
        hit
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_at_level_one() {
        // G_1 is the normaliser picture of the residue torus: dihedral of
        // order 2(p + 1).
        let g = Quotient::new(3, 1).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.class_count(), 5);
        let mut sizes = g.class_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn order_matches_closed_form() {
        for (p, nmax) in [(3u64, 4u32), (5, 3), (7, 2), (11, 1), (13, 2)] {
            for n in 1..=nmax {
                let g = Quotient::new(p, n).unwrap();
                let sa = n.div_ceil(2);
                assert_eq!(g.order() as u64, 2 * (p + 1) * p.pow(2 * n - sa - 1));
            }
        }
    }

    #[test]
    fn level_two_class_count() {
        let g = Quotient::new(3, 2).unwrap();
        assert_eq!(g.order(), 72);
        assert_eq!(g.class_count(), 9);
    }

    #[test]
    fn associativity_spot_checks() {
        let g = Quotient::new(3, 3).unwrap();
        let n = g.order() as u32;
        let mut s = 1u64;
        for _ in 0..200 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let x = (s >> 33) as u32 % n;
            let y = (s >> 17) as u32 % n;
            let z = s as u32 % n;
            assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        }
    }

    #[test]
    fn unit_filtration_sizes() {
        let g = Quotient::new(3, 3).unwrap();
        let sizes: Vec<usize> = (0..=3).map(|m| g.upper_unit_elements(m).len()).collect();
        assert_eq!(sizes, vec![108, 27, 3, 1]);
    }

    #[test]
    fn torus_images_have_expected_sizes() {
        let g = Quotient::new(3, 3).unwrap();
        assert_eq!(g.torus(ExtLabel::K).members.len(), 3);
        assert_eq!(g.torus(ExtLabel::L).members.len(), 3);
        assert_eq!(g.torus(ExtLabel::M).members.len(), 12);
        let g = Quotient::new(5, 2).unwrap();
        assert_eq!(g.torus(ExtLabel::K).members.len(), 5);
        assert_eq!(g.torus(ExtLabel::M).members.len(), 6);
    }

    #[test]
    fn class_products_count_pairs() {
        let g = Quotient::new(3, 2).unwrap();
        let sizes = g.class_sizes();
        for i in 0..g.class_count() {
            let mat = g.class_matrix(i);
            for j in 0..g.class_count() {
                let total: u64 = (0..g.class_count()).map(|k| mat[j][k] * sizes[k]).sum();
                assert_eq!(total, sizes[i] * sizes[j]);
            }
        }
    }

    #[test]
    fn size_limit_is_enforced() {
        assert!(matches!(Quotient::with_limit(5, 4, 1000), Err(LocalError::TooLarge(_, _))));
    }

    #[test]
    fn central_identity_class() {
        let g = Quotient::new(5, 2).unwrap();
        let idc = g.class_of[g.id() as usize] as usize;
        assert_eq!(g.classes[idc].len(), 1);
        assert_eq!(g.u_level[g.id() as usize], Some(2));
    }
}
