//! Factorization in Z[x]: squarefree (Yun) decomposition, distinct-degree and
//! equal-degree factorization modulo a well-chosen small prime, quadratic
//! Hensel lifting past the Mignotte bound, and subset recombination.
//!
//! Inputs here are small (Hecke characteristic polynomials and test
//! polynomials of degree a few dozen), so clarity wins over asymptotics.

use crate::modpoly::{FlPoly, XorShift};
use crate::numutil::{invmod, is_prime, mulmod};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type ZPoly = Vec<BigInt>;

pub fn znormalize(mut c: ZPoly) -> ZPoly {
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
    c
}

pub fn zpoly_from_i64(v: &[i64]) -> ZPoly {
    znormalize(v.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    znormalize(out)
}

/// Division `a = q b + r` when it is exact (`r = 0`); `None` otherwise.
pub fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let a = znormalize(a.to_vec());
    let b = znormalize(b.to_vec());
    assert!(!b.is_empty());
    if a.is_empty() {
        return Some(vec![]);
    }
    if a.len() < b.len() {
        return None;
    }
    let mut r = a.clone();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let (c, rem) = r.last().unwrap().div_rem(b.last().unwrap());
        if !rem.is_zero() {
            return None;
        }
        q[k] = c.clone();
        for (i, bi) in b.iter().enumerate() {
            let t = &c * bi;
            r[k + i] -= t;
        }
        r = znormalize(r);
    }
    if r.is_empty() {
        Some(znormalize(q))
    } else {
        None
    }
}

pub fn content(f: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in f {
        g = g.gcd(c);
    }
    g
}

pub fn primitive_part(f: &[BigInt]) -> ZPoly {
    let f = znormalize(f.to_vec());
    if f.is_empty() {
        return f;
    }
    let mut c = content(&f);
    if f.last().unwrap().is_negative() {
        c = -c;
    }
    f.iter().map(|x| x / &c).collect()
}

fn to_q(f: &[BigInt]) -> Vec<BigRational> {
    f.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn from_q_primitive(f: &[BigRational]) -> ZPoly {
    let mut den = BigInt::one();
    for c in f {
        den = den.lcm(c.denom());
    }
    let ints: ZPoly = f.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    primitive_part(&ints)
}

/// Yun squarefree decomposition of a primitive polynomial:
/// returns [(g_1, 1), (g_2, 2), ...] with f = +- prod g_i^i, each g_i
/// squarefree and primitive (g_i of degree 0 omitted).
pub fn squarefree_decomposition(f: &[BigInt]) -> Vec<(ZPoly, u32)> {
    let fq = to_q(f);
    let dq = crate::sturm::derivative(&fq);
    let g = crate::sturm::poly_gcd(&fq, &dq);
    if g.len() <= 1 {
        return vec![(primitive_part(f), 1)];
    }
    let mut out = Vec::new();
    let mut w = crate::sturm::poly_div_exact(&fq, &g);
    let mut y = crate::sturm::poly_div_exact(&dq, &g);
    let mut i = 1u32;
    loop {
        let wd = crate::sturm::derivative(&w);
        let z: Vec<BigRational> = {
            let mut z = y.clone();
            for (k, c) in wd.iter().enumerate() {
                if k < z.len() {
                    z[k] -= c;
                } else {
                    z.push(-c.clone());
                }
            }
            crate::sturm::normalize(z)
        };
        if z.is_empty() {
            if w.len() > 1 {
                out.push((from_q_primitive(&w), i));
            }
            return out;
        }
        let gi = crate::sturm::poly_gcd(&w, &z);
        if gi.len() > 1 {
            out.push((from_q_primitive(&gi), i));
        }
        w = crate::sturm::poly_div_exact(&w, &gi);
        y = crate::sturm::poly_div_exact(&z, &gi);
        i += 1;
    }
}

fn fl_from_z(l: u64, f: &[BigInt]) -> FlPoly {
    let lb = BigInt::from(l);
    FlPoly::new(
        l,
        f.iter().map(|c| c.mod_floor(&lb).to_u64().unwrap()).collect(),
    )
}

fn powmod_big(modulus: &FlPoly, base: &FlPoly, e: &BigUint) -> FlPoly {
    let mut acc = FlPoly::one(modulus.l);
    let mut b = base.rem(modulus);
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = acc.mul(&b).rem(modulus);
        }
        b = b.mul(&b).rem(modulus);
    }
    acc
}

/// Monic irreducible factors of a squarefree monic polynomial over F_l.
fn factor_mod_l(f: &FlPoly) -> Vec<FlPoly> {
    let l = f.l;
    let mut out = Vec::new();
    let mut rest = f.monic();
    // Distinct-degree stage: x^(l^d) - x captures factors of degree d.
    let mut frob = FlPoly::x(l);
    let mut d = 0usize;
    while !rest.is_zero() && rest.deg() > 0 {
        d += 1;
        if 2 * d > rest.deg() {
            out.push(rest.clone());
            break;
        }
        frob = rest.powmod_x(&frob, l);
        let g = frob.sub(&FlPoly::x(l)).gcd(&rest);
        if !g.is_zero() && g.deg() > 0 {
            equal_degree_split(&g, d, &mut out);
            rest = divide(&rest, &g);
            frob = frob.rem(&rest);
        }
    }
    out.sort_by(|a, b| (a.deg(), &a.c).cmp(&(b.deg(), &b.c)));
    out
}

fn divide(f: &FlPoly, g: &FlPoly) -> FlPoly {
    let l = f.l;
    let mut r = f.c.clone();
    let gd = g.c.len() - 1;
    if r.len() <= gd {
        return FlPoly::zero(l);
    }
    let inv = invmod(g.c[gd], l);
    let mut q = vec![0u64; r.len() - gd];
    while r.len() > gd {
        let k = r.len() - 1 - gd;
        let c = mulmod(*r.last().unwrap(), inv, l);
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

fn equal_degree_split(f: &FlPoly, d: usize, out: &mut Vec<FlPoly>) {
    if f.deg() == d {
        out.push(f.monic());
        return;
    }
    let l = f.l;
    let mut rng = XorShift(0xd1b54a32d192ed03 ^ (f.deg() as u64) << 8 ^ d as u64);
    let e = (BigUint::from(l).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let deg = f.deg() - 1;
        let mut c: Vec<u64> = (0..=deg).map(|_| rng.next() % l).collect();
        if c.iter().all(|&x| x == 0) {
            c[0] = 1;
        }
        let h = FlPoly::new(l, c);
        let t = powmod_big(f, &h, &e).sub(&FlPoly::one(l));
        let g = t.gcd(f);
        if !g.is_zero() && g.deg() > 0 && g.deg() < f.deg() {
            equal_degree_split(&g, d, out);
            equal_degree_split(&divide(f, &g), d, out);
            return;
        }
    }
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Hensel lift: given f = g h mod m with g monic and s g + t h = 1 mod m,
/// produce the corresponding data mod m^2.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let md = |p: &[BigInt]| -> ZPoly { znormalize(p.iter().map(|c| c.mod_floor(&m2)).collect()) };
    let sub = |a: &[BigInt], b: &[BigInt]| -> ZPoly {
        let mut r = a.to_vec();
        for (i, c) in b.iter().enumerate() {
            if i < r.len() {
                r[i] -= c;
            } else {
                r.push(-c.clone());
            }
        }
        znormalize(r)
    };
    let e = md(&sub(f, &zmul(g, h)));
    let (q, r) = divrem_monic_mod(&zmul(t, &e), g, &m2);
    let g1 = md(&add(g, &r));
    let h1 = md(&add(&add(h, &zmul(s, &e)), &zmul(&q, h)));
    let b = md(&sub(&add(&zmul(s, &g1), &zmul(t, &h1)), &[BigInt::one()]));
    let (q2, r2) = divrem_monic_mod(&zmul(t, &b), &g1, &m2);
    let s1 = md(&sub(&sub(s, &zmul(s, &b)), &zmul(&q2, &h1)));
    let t1 = md(&sub(t, &r2));
    (g1, h1, s1, t1)
}

fn add(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut r = a.to_vec();
    for (i, c) in b.iter().enumerate() {
        if i < r.len() {
            r[i] += c;
        } else {
            r.push(c.clone());
        }
    }
    znormalize(r)
}

/// Division with remainder by a monic polynomial, coefficients mod m.
fn divrem_monic_mod(a: &[BigInt], g: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let g = znormalize(g.to_vec());
    assert!(g.last().unwrap().mod_floor(m).is_one());
    let mut r: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    r = znormalize(r);
    let dg = g.len() - 1;
    let mut q = vec![BigInt::zero(); r.len().saturating_sub(dg)];
    while r.len() > dg {
        let k = r.len() - 1 - dg;
        let c = r.last().unwrap().mod_floor(m);
        q[k] = c.clone();
        for (i, gi) in g.iter().enumerate() {
            let t = (&c * gi).mod_floor(m);
            r[k + i] = (&r[k + i] - t).mod_floor(m);
        }
        r = znormalize(r);
    }
    (znormalize(q), r)
}

/// Lift the pairwise-coprime monic factorization of the monic `f` from mod l
/// to mod l^(2^rounds) by a balanced factor tree.
fn hensel_lift_tree(f: &[BigInt], factors: &[FlPoly], l: u64, rounds: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let m = BigInt::from(l).pow(1 << rounds);
        return vec![znormalize(f.iter().map(|c| c.mod_floor(&m)).collect())];
    }
    let mid = factors.len() / 2;
    let lb = BigInt::from(l);
    let gm: FlPoly = factors[..mid]
        .iter()
        .fold(FlPoly::one(l), |acc, p| acc.mul(p));
    let hm: FlPoly = factors[mid..]
        .iter()
        .fold(FlPoly::one(l), |acc, p| acc.mul(p));
    let (sm, tm) = bezout(&gm, &hm);
    let mut g: ZPoly = gm.c.iter().map(|&c| BigInt::from(c)).collect();
    let mut h: ZPoly = hm.c.iter().map(|&c| BigInt::from(c)).collect();
    let mut s: ZPoly = sm.c.iter().map(|&c| BigInt::from(c)).collect();
    let mut t: ZPoly = tm.c.iter().map(|&c| BigInt::from(c)).collect();
    let mut m = lb.clone();
    for _ in 0..rounds {
        let (g1, h1, s1, t1) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = &m * &m;
    }
    let mut out = hensel_lift_tree(&g, &factors[..mid], l, rounds);
    out.extend(hensel_lift_tree(&h, &factors[mid..], l, rounds));
    out
}

fn bezout(g: &FlPoly, h: &FlPoly) -> (FlPoly, FlPoly) {
    // Extended Euclid over F_l: s g + t h = 1.
    let l = g.l;
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1) = (FlPoly::one(l), FlPoly::zero(l));
    let (mut t0, mut t1) = (FlPoly::zero(l), FlPoly::one(l));
    while !r1.is_zero() {
        let q = divide(&r0, &r1);
        let r = r0.sub(&q.mul(&r1));
        r0 = r1;
        r1 = r;
        let s = s0.sub(&q.mul(&s1));
        s0 = s1;
        s1 = s;
        let t = t0.sub(&q.mul(&t1));
        t0 = t1;
        t1 = t;
    }
    assert_eq!(r0.deg(), 0);
    let inv = invmod(r0.c[0], l);
    let scale = |p: &FlPoly| FlPoly::new(l, p.c.iter().map(|&c| mulmod(c, inv, l)).collect());
    (scale(&s0), scale(&t0))
}

fn norm2_squared(f: &[BigInt]) -> BigInt {
    f.iter().map(|c| c * c).sum()
}

/// Irreducible factors of a primitive squarefree polynomial, monic up to sign.
fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    // Monicize: g(y) = lc^(n-1) f(y / lc) is monic with integer coefficients.
    let lc = f.last().unwrap().clone();
    let monic: ZPoly = if lc.is_one() {
        f.clone()
    } else {
        (0..=n)
            .map(|i| {
                if i == n {
                    BigInt::one()
                } else {
                    &f[i] * lc.pow((n - 1 - i) as u32)
                }
            })
            .collect()
    };
    // A prime where the reduction stays squarefree of full degree.
    let mut l = 3u64;
    let flp = loop {
        if is_prime(l) && !(monic.last().unwrap().mod_floor(&BigInt::from(l))).is_zero() {
            let fl = fl_from_z(l, &monic);
            if fl.deg() == n {
                let der = FlPoly::new(
                    l,
                    fl.c.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(i, &c)| mulmod(c, i as u64 % l, l))
                        .collect(),
                );
                if fl.gcd(&der).deg() == 0 {
                    break fl;
                }
            }
        }
        l += 2;
    };
    let modular = factor_mod_l(&flp.monic());
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Lift beyond twice the Mignotte bound.
    let bound: BigInt = (norm2_squared(&monic).sqrt() + BigInt::one())
        * BigInt::from(2).pow(n as u32 + 1)
        * monic.last().unwrap().abs()
        * 2;
    let mut rounds = 0u32;
    let mut m = BigInt::from(l);
    while m < bound {
        m = &m * &m;
        rounds += 1;
    }
    let lifted = hensel_lift_tree(&monic, &modular, l, rounds);

    // Subset recombination against the monicized polynomial.
    let mut remaining: Vec<ZPoly> = lifted;
    let mut rest = monic.clone();
    let mut found_monic: Vec<ZPoly> = Vec::new();
    let mut card = 1usize;
    while 2 * card <= remaining.len() {
        let mut advanced = false;
        for subset in subsets(remaining.len(), card) {
            let mut prod: ZPoly = vec![rest.last().unwrap().clone()];
            for &i in &subset {
                prod = zmul(&prod, &remaining[i]);
                for c in prod.iter_mut() {
                    *c = c.mod_floor(&m);
                }
            }
            let cand: ZPoly = primitive_part(&prod.iter().map(|c| symmetric(c, &m)).collect::<Vec<_>>());
            if let Some(q) = zdiv_exact(&rest, &cand) {
                found_monic.push(cand);
                rest = primitive_part(&q);
                let keep: Vec<ZPoly> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, p)| p.clone())
                    .collect();
                remaining = keep;
                advanced = true;
                break;
            }
        }
        if !advanced {
            card += 1;
        }
    }
    if rest.len() > 1 {
        found_monic.push(rest);
    }
    // Undo the monicization substitution y = lc x.
    found_monic
        .into_iter()
        .map(|g| {
            if lc.is_one() {
                g
            } else {
                let scaled: Vec<BigInt> =
                    g.iter().enumerate().map(|(i, c)| c * lc.pow(i as u32)).collect();
                primitive_part(&scaled)
            }
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Full factorization of a nonzero integer polynomial: returns the integer
/// content (with sign) and the irreducible primitive factors with
/// multiplicities, sorted for determinism.
pub fn factor(f: &[BigInt]) -> (BigInt, Vec<(ZPoly, u32)>) {
    let f = znormalize(f.to_vec());
    assert!(!f.is_empty(), "cannot factor the zero polynomial");
    let mut cont = content(&f);
    if f.last().unwrap().is_negative() {
        cont = -cont;
    }
    let prim = primitive_part(&f);
    if prim.len() == 1 {
        return (cont, vec![]);
    }
    let mut out: Vec<(ZPoly, u32)> = Vec::new();
    for (g, mult) in squarefree_decomposition(&prim) {
        for irr in factor_squarefree(&g) {
            out.push((irr, mult));
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
    (cont, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_product(f: &[BigInt], cont: &BigInt, factors: &[(ZPoly, u32)]) {
        let mut prod: ZPoly = vec![cont.clone()];
        for (g, m) in factors {
            for _ in 0..*m {
                prod = zmul(&prod, g);
            }
        }
        assert_eq!(znormalize(f.to_vec()), prod);
    }

    #[test]
    fn quadratic_split() {
        let f = zpoly_from_i64(&[-1, 0, 1]); // x^2 - 1
        let (c, fs) = factor(&f);
        check_product(&f, &c, &fs);
        assert_eq!(fs.len(), 2);
    }

    #[test]
    fn irreducible_stays_whole() {
        let f = zpoly_from_i64(&[1, 0, 1]); // x^2 + 1
        let (c, fs) = factor(&f);
        check_product(&f, &c, &fs);
        assert_eq!(fs.len(), 1);
        let f2 = zpoly_from_i64(&[7, -2, 0, 0, 1]);
        let (c2, fs2) = factor(&f2);
        check_product(&f2, &c2, &fs2);
        assert_eq!(fs2.len(), 1);
    }

    #[test]
    fn multiplicities_and_content() {
        // 6 (x-2)^2 (x^2+x+1)
        let f = {
            let a = zpoly_from_i64(&[-2, 1]);
            let b = zpoly_from_i64(&[1, 1, 1]);
            let mut p = zmul(&zmul(&a, &a), &b);
            for c in p.iter_mut() {
                *c *= 6;
            }
            p
        };
        let (c, fs) = factor(&f);
        assert_eq!(c, BigInt::from(6));
        check_product(&f, &c, &fs);
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().any(|(_, m)| *m == 2));
    }

    #[test]
    fn cyclotomic_product() {
        // x^12 - 1 = prod of Phi_d over d | 12: six irreducible factors.
        let mut f = vec![BigInt::zero(); 13];
        f[0] = BigInt::from(-1);
        f[12] = BigInt::from(1);
        let (c, fs) = factor(&f);
        check_product(&f, &c, &fs);
        assert_eq!(fs.len(), 6);
    }

    #[test]
    fn non_monic_leading_coefficient() {
        // (2x + 1)(3x + 5)
        let f = zmul(&zpoly_from_i64(&[1, 2]), &zpoly_from_i64(&[5, 3]));
        let (c, fs) = factor(&f);
        check_product(&f, &c, &fs);
        assert_eq!(fs.len(), 2);
    }

    #[test]
    fn eigenvalue_style_polynomial() {
        // (x^2 - 2)(x + 1)^2, the shape of a doubled eigensystem check.
        let sq = zpoly_from_i64(&[-2, 0, 1]);
        let lin = zpoly_from_i64(&[1, 1]);
        let f = zmul(&sq, &zmul(&lin, &lin));
        let (c, fs) = factor(&f);
        check_product(&f, &c, &fs);
        let mults: Vec<u32> = fs.iter().map(|(_, m)| *m).collect();
        assert!(mults.contains(&2) && mults.contains(&1));
    }
}
