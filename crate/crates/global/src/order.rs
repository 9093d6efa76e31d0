//! Orders in a definite quaternion algebra: maximal orders, the ramified
//! two-sided ideal, and the special suborders attached to the three quadratic
//! extensions of the completion at the ramified prime.
//!
//! A maximal order is reached by saturating `Z<1, i, j, ij>` prime by prime:
//! at each prime dividing the reduced discriminant beyond its target value,
//! the order is enlarged either to the idealizer of (a lift of) the radical
//! of its reduction, or through a lifted idempotent when the reduction is
//! semisimple. Every enlargement is verified to be an order of strictly
//! smaller reduced discriminant, so termination and correctness are checked
//! rather than assumed.
//!
//! With `O` maximal and `P` the unique two-sided ideal with `P^2 = pO`, the
//! special order of parameter `r >= 1` attached to a quadratic extension `E`
//! of the completion is
//!
//! ```text
//!   O_r(E) = Z<1, alpha> + P^(r-1),    alpha^2 = Delta_E mod p^r,
//! ```
//!
//! where `Delta_E` is `u` (a least nonresidue) for the unramified extension
//! and `-p` or `-u p` for the two ramified ones. The element `alpha` is found
//! by a mod-`p` search followed by Hensel refinement on the pure part of the
//! relevant lattice. The realized level can collapse below `p^r` for the
//! unramified type at even `r`; it is always computed from the constructed
//! lattice and reported.

use crate::algebra::{quat_one, quat_zero, Quat, QuatAlgebra};
use crate::lattice::{integral_dual, qinv, Lattice};
use crate::GlobalError;
use exact::charpoly::QMat;
use exact::numutil::{factor, invmod, least_nonresidue, valuation};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// The three quadratic extensions of the local field at the ramified prime:
/// `K` ramified with discriminant `-p`, `L` ramified with discriminant `-up`,
/// `M` unramified with discriminant a nonresidue `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtType {
    K,
    L,
    M,
}

impl ExtType {
    pub fn letter(self) -> &'static str {
        match self {
            ExtType::K => "K",
            ExtType::L => "L",
            ExtType::M => "M",
        }
    }

    pub fn is_ramified(self) -> bool {
        !matches!(self, ExtType::M)
    }
}

impl std::fmt::Display for ExtType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.letter())
    }
}

/// Whether the lattice is closed under multiplication, contains 1, and has
/// integral reduced trace and norm on a basis.
pub fn is_order(alg: &QuatAlgebra, l: &Lattice) -> bool {
    if !l.member(&quat_one()) {
        return false;
    }
    let rows = l.rows();
    for r in &rows {
        if !alg.trd(r).denom().is_one() || !alg.nrd(r).denom().is_one() {
            return false;
        }
    }
    for x in &rows {
        for y in &rows {
            if !l.member(&alg.mul(x, y)) {
                return false;
            }
        }
    }
    true
}

/// Right order `{x : J x subset J}` of a full lattice.
pub fn right_order(alg: &QuatAlgebra, j: &Lattice) -> Result<Lattice, GlobalError> {
    order_of_side(alg, j, false)
}

/// Left order `{x : x J subset J}` of a full lattice.
pub fn left_order(alg: &QuatAlgebra, j: &Lattice) -> Result<Lattice, GlobalError> {
    order_of_side(alg, j, true)
}

fn order_of_side(alg: &QuatAlgebra, j: &Lattice, left: bool) -> Result<Lattice, GlobalError> {
    let jrows = j.rows();
    let bmat: QMat = jrows.iter().map(|r| r.to_vec()).collect();
    let binv = qinv(&bmat).ok_or(GlobalError::DegenerateLattice)?;
    let basis = alg.basis();
    let mut constraints: Vec<Quat> = Vec::with_capacity(16);
    for c in &jrows {
        // Coordinate matrix of t -> c * e_t (or e_t * c), composed with the
        // coordinate map of J; its columns are integrality constraints on x.
        let mut w: QMat = Vec::with_capacity(4);
        for e in &basis {
            let prod = if left {
                alg.mul(e, c)
            } else {
                alg.mul(c, e)
            };
            w.push(prod.to_vec());
        }
        for col in 0..4 {
            let mut cvec = quat_zero();
            for (t, wrow) in w.iter().enumerate() {
                let mut acc = BigRational::zero();
                for s in 0..4 {
                    acc += &wrow[s] * &binv[s][col];
                }
                cvec[t] = acc;
            }
            constraints.push(cvec);
        }
    }
    integral_dual(&constraints)
}

/// Structure constants of `O/lO` over the basis of `O`, plus the coordinates
/// of the identity.
struct FpAlgebra {
    l: u64,
    table: Vec<Vec<[u64; 4]>>,
    one: [u64; 4],
}

fn big_mod(x: &BigInt, l: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(l));
    m.to_u64().unwrap()
}

impl FpAlgebra {
    fn new(alg: &QuatAlgebra, o: &Lattice, l: u64) -> FpAlgebra {
        let rows = o.rows();
        let mut table = vec![vec![[0u64; 4]; 4]; 4];
        for s in 0..4 {
            for t in 0..4 {
                let prod = alg.mul(&rows[s], &rows[t]);
                let coords = o
                    .coords_of(&prod)
                    .expect("order must be closed under multiplication");
                for (c, v) in coords.iter().enumerate() {
                    table[s][t][c] = big_mod(v, l);
                }
            }
        }
        let one_coords = o.coords_of(&quat_one()).expect("order must contain 1");
        let mut one = [0u64; 4];
        for (c, v) in one_coords.iter().enumerate() {
            one[c] = big_mod(v, l);
        }
        FpAlgebra { l, table, one }
    }

    fn mul(&self, x: &[u64; 4], y: &[u64; 4]) -> [u64; 4] {
        let l = self.l;
        let mut out = [0u64; 4];
        for s in 0..4 {
            if x[s] == 0 {
                continue;
            }
            for t in 0..4 {
                if y[t] == 0 {
                    continue;
                }
                let f = (x[s] * y[t]) % l;
                for c in 0..4 {
                    out[c] = (out[c] + f * self.table[s][t][c]) % l;
                }
            }
        }
        out
    }
}

/// Reduced-echelon span of vectors in `F_l^4`.
#[derive(Clone)]
pub(crate) struct SpanFl {
    l: u64,
    rows: Vec<[u64; 4]>,
}

impl SpanFl {
    pub(crate) fn new(l: u64) -> SpanFl {
        SpanFl { l, rows: Vec::new() }
    }

    fn reduce(&self, mut v: [u64; 4]) -> [u64; 4] {
        for row in &self.rows {
            let piv = row.iter().position(|&x| x != 0).unwrap();
            if v[piv] != 0 {
                let f = v[piv];
                for c in 0..4 {
                    v[c] = (v[c] + (self.l - f % self.l) * row[c]) % self.l;
                }
            }
        }
        v
    }

    pub(crate) fn member(&self, v: &[u64; 4]) -> bool {
        self.reduce(*v) == [0; 4]
    }

    pub(crate) fn insert(&mut self, v: [u64; 4]) -> bool {
        let mut v = self.reduce(v);
        let piv = match v.iter().position(|&x| x != 0) {
            Some(p) => p,
            None => return false,
        };
        let inv = invmod(v[piv], self.l);
        for c in 0..4 {
            v[c] = (v[c] * inv) % self.l;
        }
        for row in self.rows.iter_mut() {
            if row[piv] != 0 {
                let f = row[piv];
                for c in 0..4 {
                    row[c] = (row[c] + (self.l - f) * v[c]) % self.l;
                }
            }
        }
        self.rows.push(v);
        self.rows.sort_by_key(|r| r.iter().position(|&x| x != 0));
        true
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Largest nilpotent two-sided ideal of `O/lO`, as an echelon basis. Found by
/// exhaustive subspace enumeration, which is affordable because the algebra
/// is 4-dimensional and `l` stays small during saturation.
fn brute_radical(a: &FpAlgebra) -> Vec<[u64; 4]> {
    let l = a.l;
    let unit_ids: [[u64; 4]; 4] = [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ];
    let mut best: Vec<[u64; 4]> = Vec::new();
    let enumerate_bases = |pivots: &[usize]| {
        let k = pivots.len();
        let free_positions: Vec<(usize, usize)> = {
            let mut fp = Vec::new();
            for (ri, &p) in pivots.iter().enumerate() {
                for c in p + 1..4 {
                    if !pivots.contains(&c) {
                        fp.push((ri, c));
                    }
                }
            }
            fp
        };
        let total = l.pow(free_positions.len() as u32);
        let mut out: Vec<Vec<[u64; 4]>> = Vec::new();
        for code in 0..total {
            let mut rows = vec![[0u64; 4]; k];
            for (ri, &p) in pivots.iter().enumerate() {
                rows[ri][p] = 1;
            }
            let mut c = code;
            for &(ri, col) in &free_positions {
                rows[ri][col] = c % l;
                c /= l;
            }
            out.push(rows);
        }
        out
    };
    let pivot_sets: Vec<Vec<usize>> = {
        let mut ps = Vec::new();
        for mask in 1u32..16 {
            let set: Vec<usize> = (0..4).filter(|&b| mask & (1 << b) != 0).collect();
            ps.push(set);
        }
        ps
    };
    for pivots in &pivot_sets {
        if pivots.len() <= best.len() {
            continue;
        }
        for rows in enumerate_bases(pivots) {
            let mut span = SpanFl::new(l);
            for r in &rows {
                span.insert(*r);
            }
            if span.dim() != rows.len() {
                continue;
            }
            let is_ideal = rows.iter().all(|v| {
                unit_ids
                    .iter()
                    .all(|e| span.member(&a.mul(e, v)) && span.member(&a.mul(v, e)))
            });
            if !is_ideal {
                continue;
            }
            // Nilpotency: powers of the ideal must reach zero.
            let mut current = rows.clone();
            let mut nilpotent = false;
            for _ in 0..5 {
                let mut next = SpanFl::new(l);
                for u in &rows {
                    for v in &current {
                        next.insert(a.mul(u, v));
                    }
                }
                if next.dim() == 0 {
                    nilpotent = true;
                    break;
                }
                if next.dim() >= current.len() {
                    break;
                }
                current = next.rows;
            }
            if nilpotent && rows.len() > best.len() {
                best = rows;
            }
        }
    }
    best
}

fn nontrivial_idempotents(a: &FpAlgebra) -> Vec<[u64; 4]> {
    let l = a.l;
    let mut out = Vec::new();
    let total = l.pow(4);
    for code in 0..total {
        let mut v = [0u64; 4];
        let mut c = code;
        for slot in v.iter_mut() {
            *slot = c % l;
            c /= l;
        }
        if v == [0; 4] || v == a.one {
            continue;
        }
        if a.mul(&v, &v) == v {
            out.push(v);
        }
    }
    out
}

fn lift_combination(o: &Lattice, coeffs: &[u64; 4]) -> Quat {
    let rows = o.rows();
    let mut q = quat_zero();
    for (m, r) in rows.iter().enumerate() {
        let c = BigRational::from_integer(BigInt::from(coeffs[m]));
        for t in 0..4 {
            q[t] = &q[t] + &c * &r[t];
        }
    }
    q
}

/// One enlargement step at the prime `l`: returns an order strictly between
/// the input and the algebra with smaller reduced discriminant.
fn enlarge_at(alg: &QuatAlgebra, o: &Lattice, l: u64) -> Result<Lattice, GlobalError> {
    let disc = o.reduced_discriminant(alg)?;
    let a = FpAlgebra::new(alg, o, l);
    let lq = BigRational::from_integer(BigInt::from(l));
    let mut candidates: Vec<Lattice> = Vec::new();
    let consider = |ideal_rows: Vec<Quat>, cands: &mut Vec<Lattice>| {
        if let Ok(j) = Lattice::from_rows(&ideal_rows) {
            for side in [false, true] {
                if let Ok(c) = order_of_side(alg, &j, side) {
                    if let Ok(d) = c.reduced_discriminant(alg) {
                        if d < disc && is_order(alg, &c) && o.subset_of(&c) {
                            cands.push(c);
                        }
                    }
                }
            }
        }
    };
    let rad = brute_radical(&a);
    if !rad.is_empty() {
        let mut rows: Vec<Quat> = o.rows().iter().map(|r| alg.scale(&lq, r)).collect();
        for v in &rad {
            rows.push(lift_combination(o, v));
        }
        consider(rows, &mut candidates);
    }
    if candidates.is_empty() {
        for e in nontrivial_idempotents(&a) {
            let ehat = lift_combination(o, &e);
            let mut rows: Vec<Quat> = o.rows().iter().map(|r| alg.scale(&lq, r)).collect();
            for x in o.rows() {
                for y in o.rows() {
                    rows.push(alg.mul(&alg.mul(&x, &ehat), &y));
                }
            }
            consider(rows, &mut candidates);
            if !candidates.is_empty() {
                break;
            }
        }
    }
    candidates
        .into_iter()
        .min_by_key(|c| {
            (
                c.reduced_discriminant(alg).unwrap(),
                c.canonical_key(),
            )
        })
        .ok_or_else(|| GlobalError::SaturationStalled(disc.to_string()))
}

/// A maximal order containing `Z<1, i, j, ij>`, verified by reaching reduced
/// discriminant exactly `p`.
pub fn maximal_order(alg: &QuatAlgebra, p: u64) -> Result<Lattice, GlobalError> {
    let pbig = BigInt::from(p);
    let mut o = Lattice::standard();
    for _ in 0..64 {
        let d = o.reduced_discriminant(alg)?;
        if d == pbig {
            assert!(is_order(alg, &o));
            return Ok(o);
        }
        let excess = &d / &pbig;
        assert!(
            (&excess * &pbig) == d,
            "reduced discriminant must be divisible by p"
        );
        let l = factor(excess.to_u64().expect("small discriminant"))
            .first()
            .map(|&(q, _)| q)
            .expect("excess discriminant has a prime factor");
        o = enlarge_at(alg, &o, l)?;
    }
    Err(GlobalError::SaturationStalled(
        o.reduced_discriminant(alg)?.to_string(),
    ))
}

fn kernel_mod_p(gram: &QMat, p: u64) -> Vec<[u64; 4]> {
    let rows: Vec<Vec<u64>> = gram
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    assert!(x.denom().is_one());
                    big_mod(x.numer(), p)
                })
                .collect()
        })
        .collect();
    let m = exact::flmat::FlMat::from_rows(p, &rows);
    exact::flmat::nullspace(&m)
        .into_iter()
        .map(|v| {
            let mut a = [0u64; 4];
            a.copy_from_slice(&v);
            a
        })
        .collect()
}

/// The two-sided ideal `P` of a maximal order with `P^2 = pO`, built from the
/// kernel of the norm-form polarization mod `p`. All defining identities are
/// asserted before returning.
pub fn p_ideal(alg: &QuatAlgebra, omax: &Lattice, p: u64) -> Result<Lattice, GlobalError> {
    let rows = omax.rows();
    let gram: QMat = (0..4)
        .map(|m| (0..4).map(|n| alg.norm_pairing(&rows[m], &rows[n])).collect())
        .collect();
    let ker = kernel_mod_p(&gram, p);
    assert_eq!(ker.len(), 2, "norm-form kernel must be 2-dimensional mod p");
    let pq = BigRational::from_integer(BigInt::from(p));
    let mut gens: Vec<Quat> = rows.iter().map(|r| alg.scale(&pq, r)).collect();
    for v in &ker {
        gens.push(lift_combination(omax, v));
    }
    let pid = Lattice::from_rows(&gens)?;
    assert_eq!(pid.index_in(omax), BigInt::from(p * p));
    let psq = pid.mul(alg, &pid)?;
    assert_eq!(psq, omax.scale(&pq), "P^2 must equal pO");
    assert_eq!(pid.mul(alg, omax)?, pid);
    assert_eq!(omax.mul(alg, &pid)?, pid);
    Ok(pid)
}

/// `P^k`, with `P^0 = O`.
pub fn p_ideal_power(
    alg: &QuatAlgebra,
    omax: &Lattice,
    pid: &Lattice,
    k: u32,
) -> Result<Lattice, GlobalError> {
    let mut out = omax.clone();
    for _ in 0..k {
        out = out.mul(alg, pid)?;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SpecialOrder {
    pub ext: ExtType,
    pub requested_r: u32,
    /// Exponent of the realized level `p^level_exp`, read off the lattice.
    pub level_exp: u32,
    pub lattice: Lattice,
}

fn rat_mod(x: &BigRational, m: &BigInt) -> BigInt {
    let den = x.denom().mod_floor(m);
    let g = den.gcd(m);
    assert!(g.is_one(), "denominator must be invertible in the modulus");
    let inv = modinv_big(&den, m);
    (x.numer() * inv).mod_floor(m)
}

fn modinv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Value and gradient bookkeeping for Hensel refinement of `Q(y) = target`.
fn hensel_quadratic(
    gram: &QMat,
    target: &BigInt,
    p: u64,
    precision: u32,
) -> Option<Vec<BigInt>> {
    let n = gram.len();
    let pbig = BigInt::from(p);
    let q_of = |y: &[BigInt]| -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                acc += &gram[i][j] * BigRational::from_integer(&y[i] * &y[j]);
            }
        }
        acc
    };
    let grad = |y: &[BigInt], m: usize| -> BigRational {
        let mut acc = BigRational::zero();
        for j in 0..n {
            acc += &gram[m][j] * BigRational::from_integer(y[j].clone());
        }
        &acc + &acc
    };
    // Base point: value correct mod p with a unit gradient coordinate.
    let mut base: Option<(Vec<BigInt>, usize)> = None;
    let mut counters = vec![0u64; n];
    'outer: loop {
        let y: Vec<BigInt> = counters.iter().map(|&c| BigInt::from(c)).collect();
        if rat_mod(&(q_of(&y) - BigRational::from_integer(target.clone())), &pbig).is_zero() {
            for m in 0..n {
                if !rat_mod(&grad(&y, m), &pbig).is_zero() {
                    base = Some((y, m));
                    break 'outer;
                }
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            counters[i] += 1;
            if counters[i] < p {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
    let (mut y, m0) = base?;
    let mut modulus = pbig.clone();
    for _ in 1..precision {
        let next = &modulus * &pbig;
        let err = rat_mod(
            &(BigRational::from_integer(target.clone()) - q_of(&y)),
            &next,
        );
        debug_assert!((&err % &modulus).is_zero());
        let e = err / &modulus;
        let g = rat_mod(&grad(&y, m0), &pbig);
        let t = (e * modinv_big(&g, &pbig)).mod_floor(&pbig);
        y[m0] += t * &modulus;
        modulus = next;
    }
    debug_assert!(rat_mod(
        &(q_of(&y) - BigRational::from_integer(target.clone())),
        &modulus
    )
    .is_zero());
    Some(y)
}

/// The special order `Z<1, alpha> + P^(r-1)` for extension type `ext`.
pub fn special_order(
    alg: &QuatAlgebra,
    omax: &Lattice,
    pid: &Lattice,
    p: u64,
    ext: ExtType,
    r: u32,
) -> Result<SpecialOrder, GlobalError> {
    assert!(r >= 1);
    if r == 1 {
        return Ok(SpecialOrder {
            ext,
            requested_r: 1,
            level_exp: 1,
            lattice: omax.clone(),
        });
    }
    let u = least_nonresidue(p);
    let (ambient, scale_div, target): (&Lattice, u64, BigInt) = match ext {
        ExtType::M => (omax, 1, -BigInt::from(u)),
        ExtType::K => (pid, p, BigInt::one()),
        ExtType::L => (pid, p, BigInt::from(u)),
    };
    let pure = ambient.trace_zero_gens(alg);
    assert_eq!(pure.len(), 3, "pure part of the ambient lattice has rank 3");
    let two = BigRational::from_integer(BigInt::from(2));
    let divq = BigRational::from_integer(BigInt::from(scale_div));
    let gram: QMat = (0..3)
        .map(|m| {
            (0..3)
                .map(|n| alg.norm_pairing(&pure[m], &pure[n]) / &two / &divq)
                .collect()
        })
        .collect();
    let y = hensel_quadratic(&gram, &target, p, r).ok_or(GlobalError::NoSquareRoot)?;
    let mut alpha = quat_zero();
    for (m, g) in pure.iter().enumerate() {
        let c = BigRational::from_integer(y[m].clone());
        for t in 0..4 {
            alpha[t] = &alpha[t] + &c * &g[t];
        }
    }
    // alpha is pure, so alpha^2 = -nrd(alpha) is a rational integer; the
    // Hensel step has arranged nrd(alpha) = -Delta_E mod p^r.
    let pk = p_ideal_power(alg, omax, pid, r - 1)?;
    let mut gens = vec![quat_one(), alpha];
    gens.extend(pk.rows());
    let lattice = Lattice::from_rows(&gens)?;
    if !is_order(alg, &lattice) {
        return Err(GlobalError::NotAnOrder(format!(
            "special order candidate for ({p}, {ext}, {r})"
        )));
    }
    let d = lattice.reduced_discriminant(alg)?;
    let (exp, rest) = valuation(&d, &BigInt::from(p));
    if !rest.is_one() {
        return Err(GlobalError::Message(format!(
            "level {d} is not a power of p"
        )));
    }
    let expected = match ext {
        ExtType::K | ExtType::L => r,
        ExtType::M => {
            if r % 2 == 1 {
                r
            } else {
                r - 1
            }
        }
    };
    assert_eq!(exp, expected, "realized level disagrees with the local model");
    assert_eq!(
        lattice.index_in(omax),
        BigInt::from(p).pow(exp - 1),
        "index in the maximal order must match the level"
    );
    Ok(SpecialOrder {
        ext,
        requested_r: r,
        level_exp: exp,
        lattice,
    })
}

/// Index of the local unit group of the order inside the units of the
/// maximal local order, as a function of the realized level exponent.
pub fn local_unit_index(p: u64, ext: ExtType, level_exp: u32) -> BigInt {
    let pb = BigInt::from(p);
    if level_exp == 1 {
        BigInt::one()
    } else if ext.is_ramified() {
        (&pb + 1) * pb.pow(level_exp - 2)
    } else {
        pb.pow(level_exp - 1)
    }
}

/// Eichler mass of the order: `(p - 1)/24` times the local unit index.
pub fn expected_mass(p: u64, ext: ExtType, level_exp: u32) -> BigRational {
    let idx = local_unit_index(p, ext, level_exp);
    BigRational::new((BigInt::from(p) - 1) * idx, BigInt::from(24))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra_for_prime;

    fn setup(p: u64) -> (QuatAlgebra, Lattice, Lattice) {
        let alg = algebra_for_prime(p).unwrap();
        let omax = maximal_order(&alg, p).unwrap();
        let pid = p_ideal(&alg, &omax, p).unwrap();
        (alg, omax, pid)
    }

    #[test]
    fn maximal_orders_reach_discriminant_p() {
        for p in [3u64, 5, 7, 11, 13, 17, 23, 31] {
            let alg = algebra_for_prime(p).unwrap();
            let o = maximal_order(&alg, p).unwrap();
            assert_eq!(o.reduced_discriminant(&alg).unwrap(), BigInt::from(p));
            assert!(is_order(&alg, &o));
            assert!(Lattice::standard().subset_of(&o));
            let again = maximal_order(&alg, p).unwrap();
            assert_eq!(o, again, "saturation must be deterministic");
        }
    }

    #[test]
    fn ramified_ideal_identities() {
        for p in [3u64, 5, 7, 11] {
            let (_alg, _omax, _pid) = setup(p);
        }
    }

    #[test]
    fn special_orders_have_expected_levels() {
        let (alg, omax, pid) = setup(3);
        let o1 = special_order(&alg, &omax, &pid, 3, ExtType::K, 1).unwrap();
        assert_eq!(o1.lattice, omax);
        let o3 = special_order(&alg, &omax, &pid, 3, ExtType::K, 3).unwrap();
        assert_eq!(o3.level_exp, 3);
        assert_eq!(o3.lattice.index_in(&omax), BigInt::from(9));
        let m2 = special_order(&alg, &omax, &pid, 3, ExtType::M, 2).unwrap();
        assert_eq!(m2.level_exp, 1, "unramified type collapses at even r");
        assert_eq!(m2.lattice, omax);
        let m3 = special_order(&alg, &omax, &pid, 3, ExtType::M, 3).unwrap();
        assert_eq!(m3.level_exp, 3);
    }

    #[test]
    fn ramified_types_merge_at_level_two() {
        for p in [3u64, 5, 7] {
            let (alg, omax, pid) = setup(p);
            let k2 = special_order(&alg, &omax, &pid, p, ExtType::K, 2).unwrap();
            let l2 = special_order(&alg, &omax, &pid, p, ExtType::L, 2).unwrap();
            assert_eq!(
                k2.lattice, l2.lattice,
                "level p^2 orders agree for both ramified types"
            );
            assert_eq!(k2.lattice.index_in(&omax), BigInt::from(p));
        }
    }

    #[test]
    fn distinct_ramified_orders_at_level_cubed() {
        let (alg, omax, pid) = setup(3);
        let k3 = special_order(&alg, &omax, &pid, 3, ExtType::K, 3).unwrap();
        let l3 = special_order(&alg, &omax, &pid, 3, ExtType::L, 3).unwrap();
        assert_ne!(k3.lattice, l3.lattice);
        let k2 = special_order(&alg, &omax, &pid, 3, ExtType::K, 2).unwrap();
        assert!(k3.lattice.subset_of(&k2.lattice));
        assert!(l3.lattice.subset_of(&k2.lattice));
        let m3 = special_order(&alg, &omax, &pid, 3, ExtType::M, 3).unwrap();
        assert!(!m3.lattice.subset_of(&k2.lattice));
        assert!(m3.lattice.subset_of(&omax));
    }

    #[test]
    fn masses_match_frozen_values() {
        let cases = [
            (11u64, ExtType::K, 1u32, (5i64, 12i64)),
            (3, ExtType::K, 2, (1, 3)),
            (3, ExtType::K, 3, (1, 1)),
            (3, ExtType::M, 3, (3, 4)),
            (3, ExtType::K, 4, (3, 1)),
            (5, ExtType::K, 2, (1, 1)),
            (5, ExtType::K, 3, (5, 1)),
            (5, ExtType::M, 3, (25, 6)),
            (7, ExtType::K, 2, (2, 1)),
        ];
        for (p, ext, exp, (num, den)) in cases {
            assert_eq!(
                expected_mass(p, ext, exp),
                BigRational::new(BigInt::from(num), BigInt::from(den)),
                "mass at ({p}, {ext}, {exp})"
            );
        }
    }
}
