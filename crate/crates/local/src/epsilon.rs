//! Exact epsilon factors via Gauss sums over `p`-adic unit groups.
//!
//! The additive character `psi` of the base field is trivial on the integers
//! and restricts to `x -> exp(2 pi i x)` on `p`-power denominators; shifted
//! versions `psi_n(x) = psi(p^n x)` realise every conductor `n`.  For a
//! multiplicative character `chi` of conductor `f >= 1` the factor is the
//! normalised Gauss sum
//!
//! ```text
//!   eps(chi, psi_n) = q^(-f/2) * sum_u chi^(-1)(u g) psi_n(u g),
//! ```
//!
//! where `u` runs over units modulo the `f`-th power of the maximal ideal
//! and `g` has valuation `-(f + n)`.  The sum is independent of the choice
//! of `g` at that valuation because replacing `g` by a unit multiple only
//! reparametrises the `u`.  Values are stored as exact cyclotomic integers
//! with the power `q^(f/2)` carried alongside, so every identity below is
//! checked with no rounding at all.
//!
//! Over a ramified quadratic extension generated by `w` with `w^2 = -c p`,
//! the additive character is `psi_n` composed with the trace and has
//! conductor `1 + 2n`.  With `g = w^(-(f + 1 + 2n))` the trace of
//! `(x + y w) g` has an explicit fractional part and the sum collapses to
//! `p`-power roots of unity indexed by one coordinate of the unit:
//!
//! ```text
//!   f = 2k - 1:  psi-part = zeta(p^k) ^ (2 x (-c)^(-(k+n)))
//!   f = 2k:      psi-part = zeta(p^k) ^ (2 y (-c)^(-(k+n)))
//! ```
//!
//! Twisting by an unramified character multiplies the factor by the value
//! of that character at the uniformiser raised to `a + n d`, with `a` the
//! conductor and `d` the dimension of the thing being twisted.  For a
//! two-dimensional representation induced from a regular character `kappa`
//! of a ramified quadratic extension, twisting by the quadratic character
//! of the other ramified extension transfers to an unramified sign on the
//! inducing field, and the factor moves by that sign raised to
//! `f(kappa) + 1`.  Restriction multiplicities to a quadratic torus come
//! out of a product of two such factors, and the checks at the bottom of
//! this module confirm that they complement the multiplicities counted
//! directly inside the division-quotient character tables.

use crate::characters::{
    enumerate_characters, is_galois_fixed, galois_orbits, primitive_root, CentralCondition,
    TorusChar, UnitGroup,
};
use crate::field::{check_odd_prime, ExtLabel, QuadExt};
use crate::reps::{torus_multiplicity, LocalRep, LocalTable, RepKind};
use crate::LocalError;
use exact::cyclotomic::{Cyc, CycCtx};
use exact::numutil::{invmod, legendre, mulmod, powmod};

fn gcdu(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcdu(b, a % b)
    }
}

fn lcmu(a: u64, b: u64) -> u64 {
    a / gcdu(a, b) * b
}

/// Root of unity as an exponent pair `(e, o)` meaning `zeta(o)^e`, kept in
/// lowest terms.
fn root_reduce(e: u64, o: u64) -> (u64, u64) {
    let e = e % o;
    if e == 0 {
        return (0, 1);
    }
    let g = gcdu(e, o);
    (e / g, o / g)
}

fn root_mul(a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
    let o = lcmu(a.1, b.1);
    root_reduce((a.0 * (o / a.1) + b.0 * (o / b.1)) % o, o)
}

fn root_pow(a: (u64, u64), k: u64) -> (u64, u64) {
    root_reduce(mulmod(a.0, k % a.1, a.1), a.1)
}

/// An epsilon factor `num / q^(half/2)` with `num` an exact cyclotomic
/// integer.
#[derive(Clone, Debug)]
pub struct EpsilonValue {
    pub num: Cyc,
    /// The factor is `num` divided by `q` to the power `half/2`.
    pub half: u32,
    pub q: u64,
}

impl EpsilonValue {
    /// Checks `num * conj(num) = q^half`, the exact form of the statement
    /// that the factor of a unitary character has absolute value one.
    pub fn assert_unit_modulus(&self, ctx: &CycCtx) {
        let prod = self.num.mul(&self.num.conj());
        assert_eq!(
            prod.as_int(ctx),
            Some((self.q as i128).pow(self.half)),
            "epsilon numerator of modulus q^(f/2)"
        );
    }
}

/// A ramified character of the base field at exact conductor `f`, described
/// through a discrete logarithm table for a fixed primitive root modulo
/// `p^f` together with a root-of-unity value at `p`.
#[derive(Clone, Debug)]
pub struct BaseChar {
    pub p: u64,
    pub f: u32,
    pub pf: u64,
    /// Order of the unit group modulo `p^f`.
    pub order: u64,
    /// The fixed primitive root maps to `zeta(order)^unit_exp`.
    pub unit_exp: u64,
    /// Value at `p` is `zeta(varpi_ord)^varpi_exp`.
    pub varpi_exp: u64,
    pub varpi_ord: u64,
    dlog: Vec<u64>,
}

impl BaseChar {
    pub fn new(
        p: u64,
        f: u32,
        unit_exp: u64,
        varpi_exp: u64,
        varpi_ord: u64,
    ) -> Result<BaseChar, LocalError> {
        check_odd_prime(p)?;
        assert!(f >= 1, "ramified characters only");
        let pf = p.pow(f);
        let order = (p - 1) * (pf / p);
        let g = primitive_root(p, f);
        let mut dlog = vec![u64::MAX; pf as usize];
        let mut x = 1u64;
        for a in 0..order {
            dlog[x as usize] = a;
            x = mulmod(x, g, pf);
        }
        let exact = if f == 1 {
            unit_exp % order != 0
        } else {
            unit_exp % p != 0
        };
        assert!(exact, "unit exponent must give conductor exactly f");
        assert!(varpi_ord >= 1 && varpi_exp < varpi_ord);
        Ok(BaseChar {
            p,
            f,
            pf,
            order,
            unit_exp,
            varpi_exp,
            varpi_ord,
            dlog,
        })
    }

    /// Exponent `e` with value `zeta(order)^e` at the unit `x`.
    fn unit_value(&self, x: u64) -> u64 {
        let d = self.dlog[(x % self.pf) as usize];
        assert!(d != u64::MAX, "character evaluated at a non-unit");
        mulmod(d, self.unit_exp % self.order, self.order)
    }

    /// The same character multiplied by the unramified character sending
    /// `p` to `zeta(o)^e`.
    pub fn twist_by_unramified(&self, e: u64, o: u64) -> BaseChar {
        let (ve, vo) = root_mul((self.varpi_exp, self.varpi_ord), (e % o, o));
        BaseChar {
            varpi_exp: ve,
            varpi_ord: vo,
            ..self.clone()
        }
    }
}

/// The Gauss sum realisation of the epsilon factor of a ramified base-field
/// character against `psi_n`; the result carries `half = f`.
pub fn base_epsilon(ch: &BaseChar, n_psi: u32) -> EpsilonValue {
    let big = lcmu(ch.order, ch.pf);
    let mut num = Cyc::zero(big);
    for u in 1..ch.pf {
        if u % ch.p == 0 {
            continue;
        }
        let inv = (ch.order - ch.unit_value(u)) % ch.order;
        let e = (mulmod(inv, big / ch.order, big) + mulmod(u, big / ch.pf, big)) % big;
        num.add_root(e, 1);
    }
    let (pe, po) = root_pow((ch.varpi_exp, ch.varpi_ord), (ch.f + n_psi) as u64);
    EpsilonValue {
        num: num.mul(&Cyc::root(po, pe)),
        half: ch.f,
        q: ch.p,
    }
}

/// The value an unramified twist contributes to an epsilon factor: the
/// twist's value at the uniformiser, given as `zeta(o)^e`, raised to the
/// conductor of the twisted representation plus `n(psi)` times its
/// dimension.
pub fn unramified_twist(chi_p: (u64, u64), a_sigma: u32, dim: u32, n_psi: u32) -> Cyc {
    let (e, o) = root_pow(chi_p, (a_sigma + n_psi * dim) as u64);
    Cyc::root(o, e)
}

/// Epsilon factor of a character of a ramified quadratic extension against
/// the pullback of `psi_n` along the trace, evaluated by the coordinate
/// collapse described in the module notes.  The unit group must be built at
/// precision equal to the conductor of `kappa`, and the conductor must be
/// exact.
pub fn ext_epsilon(ug: &UnitGroup, kappa: &TorusChar, n_psi: u32) -> EpsilonValue {
    let ext = &ug.ext;
    assert!(ext.label.is_ramified(), "trace collapse needs a ramified extension");
    assert_eq!(ext.label, kappa.label);
    let f = kappa.f;
    assert!(f >= 1, "ramified characters only");
    assert_eq!(ext.m, f, "unit precision must equal the conductor");
    assert_eq!(ug.conductor(&kappa.unit), f, "conductor must be exact");
    let (k, use_y) = if f % 2 == 1 { ((f + 1) / 2, false) } else { (f / 2, true) };
    let pk = ext.p.pow(k);
    debug_assert_eq!(pk, if use_y { ext.pmy } else { ext.pmx });
    let minus_c = (pk - ext.c % pk) % pk;
    let scale = mulmod(2, invmod(powmod(minus_c, (k + n_psi) as u64, pk), pk), pk);
    let vo = kappa.value_order();
    let big = lcmu(vo, pk);
    let mut num = Cyc::zero(big);
    for &unit in &ug.fab.elements {
        let (e, m) = kappa.value_exp(ug, unit, 0);
        debug_assert_eq!(m, vo);
        let inv = (vo - e) % vo;
        let (x, y) = ext.unpack(unit);
        let coord = if use_y { y } else { x };
        let psi_e = mulmod(coord % pk, scale, pk);
        let tot = (mulmod(inv, big / vo, big) + mulmod(psi_e, big / pk, big)) % big;
        num.add_root(tot, 1);
    }
    let pre = kappa.value(ug, ext.one(), (f + 1 + 2 * n_psi) as i64);
    EpsilonValue {
        num: num.mul(&pre),
        half: f,
        q: ext.p,
    }
}

/// Value at `y * p^v` (unit part `y`) of the quadratic character of the
/// base field cut out by the quadratic extension with the given label.
/// Ramified labels evaluate units by the residue symbol and send `p` to the
/// residue symbol of the constant `c` from the uniformiser relation
/// `w^2 = -c p`, because the norm of `w` is `c p`.  The unramified label
/// gives the character that is trivial on units and `-1` at `p`.
fn quad_char_value(p: u64, u_nonsquare: u64, label: ExtLabel, y: i64, v: u32) -> i64 {
    let (unit, at_p) = match label {
        ExtLabel::M => (1, -1),
        ExtLabel::K => (legendre(y, p) as i64, 1),
        ExtLabel::L => (legendre(y, p) as i64, legendre(u_nonsquare as i64, p) as i64),
    };
    if v % 2 == 0 {
        unit
    } else {
        unit * at_p
    }
}

/// Multiplies the uniformiser value of `kappa` by `zeta(o)^e`, leaving the
/// unit part alone.  This is twisting by the unramified character of the
/// extension with that value at the extension's uniformiser.
fn varpi_root_twist(kappa: &TorusChar, e: u64, o: u64) -> TorusChar {
    let (ve, vo) = root_mul((kappa.varpi_exp, kappa.varpi_ord), (e % o, o));
    TorusChar {
        varpi_exp: ve,
        varpi_ord: vo,
        ..kappa.clone()
    }
}

fn sign_twist(kappa: &TorusChar, sign: i64) -> TorusChar {
    assert!(sign == 1 || sign == -1);
    if sign == 1 {
        kappa.clone()
    } else {
        varpi_root_twist(kappa, 1, 2)
    }
}

/// Validates a character that induces a two-dimensional representation with
/// trivial central character: it must live on a ramified extension at exact
/// conductor equal to the unit precision, restrict to base units as the
/// residue character, take the residue symbol of `c` at `p`, and not be
/// fixed by the nontrivial automorphism.
pub fn check_induced(ug: &UnitGroup, kappa: &TorusChar) {
    let ext = &ug.ext;
    assert!(kappa.label.is_ramified(), "induction here is from a ramified extension");
    assert_eq!(kappa.label, ext.label);
    assert_eq!(ext.m, kappa.f, "unit precision must equal the conductor");
    assert_eq!(ug.conductor(&kappa.unit), kappa.f, "conductor must be exact");
    let (ge, gm) = kappa.value_exp(ug, ug.base_gen, 0);
    assert!(
        ge != 0 && 2 * ge % gm == 0,
        "restriction to base units must be the residue character"
    );
    let mc = ext.embed_base(ext.pmx - ext.c % ext.pmx);
    let (ce, cm) = kappa.value_exp(ug, mc, 0);
    let wsq = root_pow((kappa.varpi_exp, kappa.varpi_ord), 2);
    let at_p = root_mul(wsq, ((cm - ce) % cm, cm));
    let want = if legendre(ext.c as i64, ext.p) == 1 { (0, 1) } else { (1, 2) };
    assert_eq!(at_p, want, "value at p must match the extension's quadratic character");
    assert!(!is_galois_fixed(ug, kappa), "inducing character must be regular");
}

/// Sign picked up by the epsilon factor of the induced representation when
/// twisting by the quadratic character of the ramified extension with the
/// given label, computed as an outright quotient of two Gauss sums.  The
/// twist transfers to an unramified character of the inducing extension
/// because unit norms are squares, and that fact is verified on every unit
/// before being used.
pub fn twist_sign(ug: &UnitGroup, kappa: &TorusChar, twist: ExtLabel, ctx: &CycCtx) -> i64 {
    check_induced(ug, kappa);
    assert!(twist.is_ramified(), "twists here are by ramified quadratic characters");
    let ext = &ug.ext;
    let p = ext.p;
    for &unit in &ug.fab.elements {
        assert_eq!(
            legendre((ext.norm(unit) % p) as i64, p),
            1,
            "unit norms land in the squares"
        );
    }
    let tv = quad_char_value(p, ext.u, twist, ext.c as i64, 1);
    let base = ext_epsilon(ug, kappa, 0);
    let twisted = ext_epsilon(ug, &sign_twist(kappa, tv), 0);
    if twisted.num.eq(&base.num, ctx) {
        1
    } else {
        assert!(
            twisted.num.eq(&base.num.scale(-1), ctx),
            "quotient of paired factors must be a sign"
        );
        -1
    }
}

/// Multiplicity, zero or one, of the trivial or unramified-sign character
/// of a quadratic torus in the restriction of the principal-series member
/// attached to the induced representation of `kappa`.
///
/// Writing the torus character as a norm composition splits the pairing
/// into two unramified twists of `kappa`; the product of their factors is a
/// rational sign times `q^f`, and after the transfer constants contribute
/// their squares the multiplicity is `(1 + sign)/2`.  A product that fails
/// to be `q^f` up to sign means the input was not self-dual, which the
/// conductor and centre checks rule out here.
pub fn epsilon_multiplicity(
    ug: &UnitGroup,
    kappa: &TorusChar,
    e: ExtLabel,
    chi_is_sign: bool,
    ctx: &CycCtx,
) -> u64 {
    check_induced(ug, kappa);
    assert!(
        !(e == ExtLabel::M && chi_is_sign),
        "the sign character of the unramified torus is nontrivial on the centre"
    );
    let ext = &ug.ext;
    let p = ext.p;
    let phi1 = if chi_is_sign {
        quad_char_value(p, ext.u, ExtLabel::M, ext.c as i64, 1)
    } else {
        1
    };
    let phi2 = phi1 * quad_char_value(p, ext.u, e, ext.c as i64, 1);
    let e1 = ext_epsilon(ug, &sign_twist(kappa, phi1), 0);
    let e2 = ext_epsilon(ug, &sign_twist(kappa, phi2), 0);
    let prod = e1.num.mul(&e2.num);
    let qf = (p as i128).pow(kappa.f);
    let t = prod.as_int(ctx).expect("non-self-dual input");
    assert!(t == qf || t == -qf, "non-self-dual input");
    let s_e = quad_char_value(p, ext.u, e, -1, 0);
    let s_own = quad_char_value(p, ext.u, ext.label, -1, 0);
    let sign = (t / qf) as i64 * s_e * s_own;
    ((1 + sign) / 2) as u64
}

/// Checks the unramified twisting rule on a grid of base-field characters
/// and of induced two-dimensional representations, with both sides of each
/// instance evaluated as outright Gauss sums.  Returns the number of
/// instances verified.
pub fn verify_unramified_twist_rule(p: u64, ctx: &CycCtx) -> Result<usize, LocalError> {
    let chis: [(u64, u64); 3] = [(1, 2), (1, 4), (1, 3)];
    let mut count = 0;
    for f in 1..=3u32 {
        let mut exps = vec![1, if f == 1 { (p - 1) / 2 } else { 2 }];
        exps.dedup();
        for &j in &exps {
            let ch = BaseChar::new(p, f, j, 0, 1)?;
            for &(ce, co) in &chis {
                for n in 0..=1u32 {
                    let lhs = base_epsilon(&ch.twist_by_unramified(ce, co), n);
                    let rhs = base_epsilon(&ch, n);
                    rhs.assert_unit_modulus(ctx);
                    let want = rhs.num.mul(&unramified_twist((ce, co), f, 1, n));
                    assert!(
                        lhs.num.eq(&want, ctx),
                        "one-dimensional twist rule at p={p} f={f}"
                    );
                    count += 1;
                }
            }
        }
    }
    for label in [ExtLabel::K, ExtLabel::L] {
        for f in [1u32, 2] {
            if f == 1 && p % 4 == 1 {
                continue;
            }
            let ug = UnitGroup::new(QuadExt::new(label, p, f)?)?;
            let kappa = enumerate_characters(&ug, f, CentralCondition::MatchesW)
                .into_iter()
                .find(|k| !is_galois_fixed(&ug, k))
                .expect("a regular inducing character exists");
            for &(ce, co) in &chis[..2] {
                for n in 0..=1u32 {
                    let twisted = varpi_root_twist(&kappa, ce, co);
                    let lhs = ext_epsilon(&ug, &twisted, n);
                    let rhs = ext_epsilon(&ug, &kappa, n);
                    let want = rhs.num.mul(&unramified_twist((ce, co), 1 + f, 2, n));
                    assert!(
                        lhs.num.eq(&want, ctx),
                        "two-dimensional twist rule at p={p} f={f}"
                    );
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Runs `twist_sign` over every admissible inducing character of conductor
/// at most `f_max` on both ramified extensions, twisting by both ramified
/// quadratic characters, and checks the resulting sign table: `+1` at
/// conductor one or when the twist matches the inducing extension, `-1`
/// otherwise.  Odd conductors above one admit no such characters and that
/// emptiness is asserted along the way.  Returns the number of pairs
/// checked.
pub fn verify_twist_signs(p: u64, f_max: u32, ctx: &CycCtx) -> Result<usize, LocalError> {
    let mut count = 0;
    for label in [ExtLabel::K, ExtLabel::L] {
        for f in 1..=f_max {
            let ug = UnitGroup::new(QuadExt::new(label, p, f)?)?;
            let kappas: Vec<TorusChar> = enumerate_characters(&ug, f, CentralCondition::MatchesW)
                .into_iter()
                .filter(|k| !is_galois_fixed(&ug, k))
                .collect();
            if f == 1 {
                assert_eq!(
                    !kappas.is_empty(),
                    p % 4 == 3,
                    "tame regular characters exist exactly when -1 is a nonresidue"
                );
            }
            if f > 1 && f % 2 == 1 {
                assert!(kappas.is_empty(), "no admissible characters at odd conductor above one");
            }
            for kappa in &kappas {
                for twist in [ExtLabel::K, ExtLabel::L] {
                    let s = twist_sign(&ug, kappa, twist, ctx);
                    let want = if f == 1 || twist == label { 1 } else { -1 };
                    assert_eq!(s, want, "sign table at p={p} f={f}");
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Outcome of pairing every higher-dimensional representation of a local
/// table against every quadratic torus and admissible torus character.
#[derive(Debug)]
pub struct DichotomyReport {
    /// Higher-dimensional representations examined.
    pub representations: usize,
    /// Triples of representation, torus, and torus character checked.
    pub triples: usize,
    /// Human-readable descriptions of any triple where the two
    /// multiplicities fail to sum to one.
    pub failures: Vec<String>,
}

/// For every odd-conductor representation of dimension above one in the
/// table, every quadratic torus, and every torus character trivial on the
/// base field, compares the multiplicity counted inside the quotient
/// character table with the one produced by the epsilon factor machinery.
/// Exactly one of the two sides should be nonzero each time; any triple
/// breaking that is reported by name.
pub fn dichotomy_check(table: &LocalTable) -> Result<DichotomyReport, LocalError> {
    let g = &table.group;
    let p = table.p;
    let ctx = CycCtx::new();
    let labels = [ExtLabel::K, ExtLabel::L, ExtLabel::M];
    let embs = labels.map(|l| g.torus(l));
    let mut emb_ugs = Vec::new();
    for emb in &embs {
        emb_ugs.push(UnitGroup::new(emb.ext.clone())?);
    }
    let mut phis: Vec<Vec<TorusChar>> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let mut cs = enumerate_characters(&emb_ugs[i], 0, CentralCondition::TrivialOnF);
        cs.sort_by_key(|c| c.varpi_ord);
        assert_eq!(cs.len(), if l.is_ramified() { 2 } else { 1 });
        phis.push(cs);
    }
    let mut report = DichotomyReport {
        representations: 0,
        triples: 0,
        failures: Vec::new(),
    };
    let mut c = 3u32;
    while c <= table.c_max {
        for label in [ExtLabel::K, ExtLabel::L] {
            let f = c - 1;
            let ug = UnitGroup::new(QuadExt::new(label, p, f)?)?;
            let kappas: Vec<TorusChar> = enumerate_characters(&ug, f, CentralCondition::MatchesW)
                .into_iter()
                .filter(|k| !is_galois_fixed(&ug, k))
                .collect();
            let orbits = galois_orbits(&ug, &kappas);
            assert!(
                orbits.iter().all(|&(_, n)| n == 2),
                "regular characters pair with their conjugates"
            );
            let reps: Vec<&LocalRep> = table
                .reps
                .iter()
                .filter(|r| r.conductor == c && r.kind == RepKind::Dihedral(label))
                .collect();
            assert_eq!(
                orbits.len(),
                reps.len(),
                "one inducing orbit per representation at conductor {c}"
            );
            for (ei, e) in labels.iter().enumerate() {
                for phi in &phis[ei] {
                    let chi_is_sign = phi.varpi_ord == 2;
                    if *e == ExtLabel::M && chi_is_sign {
                        continue;
                    }
                    let ms: Vec<u64> = orbits
                        .iter()
                        .map(|(k, _)| epsilon_multiplicity(&ug, k, *e, chi_is_sign, &ctx))
                        .collect();
                    let m_eps = ms[0];
                    assert!(
                        ms.iter().all(|&m| m == m_eps),
                        "factor multiplicity is constant across inducing orbits"
                    );
                    for r in &reps {
                        let m_b = torus_multiplicity(g, &embs[ei], &emb_ugs[ei], phi, &r.values, &ctx);
                        report.triples += 1;
                        if m_b + m_eps != 1 {
                            report.failures.push(format!(
                                "p={p} conductor {c} induced from {}: torus {} {} character gives {m_b} + {m_eps}",
                                label.name(),
                                e.name(),
                                if chi_is_sign { "sign" } else { "trivial" }
                            ));
                        }
                    }
                }
            }
            report.representations += reps.len();
        }
        c += 2;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::local_table;

    #[test]
    fn base_gauss_sums_are_unitary() {
        let ctx = CycCtx::new();
        for p in [3u64, 5, 7] {
            for f in 1..=2u32 {
                let ch = BaseChar::new(p, f, 1, 0, 1).unwrap();
                for n in 0..=1 {
                    base_epsilon(&ch, n).assert_unit_modulus(&ctx);
                }
            }
        }
    }

    #[test]
    fn quadratic_base_sum_squares_to_signed_prime() {
        let ctx = CycCtx::new();
        for p in [3u64, 5, 7, 11] {
            let ch = BaseChar::new(p, 1, (p - 1) / 2, 0, 1).unwrap();
            let e = base_epsilon(&ch, 0);
            let sq = e.num.mul(&e.num).as_int(&ctx).unwrap();
            assert_eq!(sq, legendre(-1, p) as i128 * p as i128);
        }
    }

    #[test]
    fn twist_rule_holds_on_grid() {
        let ctx = CycCtx::new();
        assert!(verify_unramified_twist_rule(3, &ctx).unwrap() >= 20);
        assert!(verify_unramified_twist_rule(5, &ctx).unwrap() >= 20);
    }

    #[test]
    fn twist_rule_frozen_instances() {
        let ctx = CycCtx::new();
        assert_eq!(unramified_twist((0, 1), 3, 1, 0).as_int(&ctx), Some(1));
        assert_eq!(unramified_twist((1, 2), 3, 1, 0).as_int(&ctx), Some(-1));
        assert_eq!(unramified_twist((1, 2), 2, 2, 1).as_int(&ctx), Some(1));
        let ch = BaseChar::new(3, 3, 1, 0, 1).unwrap();
        let lhs = base_epsilon(&ch.twist_by_unramified(1, 2), 0);
        let rhs = base_epsilon(&ch, 0);
        assert!(lhs.num.eq(&rhs.num.scale(-1), &ctx));
    }

    #[test]
    fn extension_sums_pair_with_inverses() {
        let ctx = CycCtx::new();
        for p in [3u64, 5] {
            for label in [ExtLabel::K, ExtLabel::L] {
                let ug = UnitGroup::new(QuadExt::new(label, p, 2).unwrap()).unwrap();
                for kappa in enumerate_characters(&ug, 2, CentralCondition::MatchesW) {
                    let e = ext_epsilon(&ug, &kappa, 0);
                    e.assert_unit_modulus(&ctx);
                    let ei = ext_epsilon(&ug, &kappa.inverse(), 0);
                    assert!(e.num.eq(&ei.num, &ctx), "conjugation symmetry");
                    let sq = e.num.mul(&ei.num).as_int(&ctx).unwrap();
                    assert_eq!(sq, legendre(-1, p) as i128 * (p * p) as i128);
                }
            }
        }
    }

    #[test]
    fn twist_signs_match_conductor_parity() {
        let ctx = CycCtx::new();
        assert_eq!(verify_twist_signs(3, 2, &ctx).unwrap(), 24);
        assert_eq!(verify_twist_signs(5, 2, &ctx).unwrap(), 32);
    }

    #[test]
    fn restriction_multiplicities_by_residue_class() {
        let ctx = CycCtx::new();
        for p in [3u64, 5, 7] {
            let own = if p % 4 == 1 { 1 } else { 0 };
            for label in [ExtLabel::K, ExtLabel::L] {
                let ug = UnitGroup::new(QuadExt::new(label, p, 2).unwrap()).unwrap();
                let other = if label == ExtLabel::K { ExtLabel::L } else { ExtLabel::K };
                let kappas: Vec<TorusChar> =
                    enumerate_characters(&ug, 2, CentralCondition::MatchesW)
                        .into_iter()
                        .filter(|k| !is_galois_fixed(&ug, k))
                        .collect();
                assert!(!kappas.is_empty());
                for kappa in &kappas {
                    for sign in [false, true] {
                        assert_eq!(epsilon_multiplicity(&ug, kappa, label, sign, &ctx), own);
                        assert_eq!(epsilon_multiplicity(&ug, kappa, other, sign, &ctx), 1 - own);
                    }
                    assert_eq!(epsilon_multiplicity(&ug, kappa, ExtLabel::M, false, &ctx), 0);
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "centre")]
    fn unramified_sign_restriction_is_rejected() {
        let ctx = CycCtx::new();
        let ug = UnitGroup::new(QuadExt::new(ExtLabel::K, 3, 2).unwrap()).unwrap();
        let kappa = enumerate_characters(&ug, 2, CentralCondition::MatchesW)
            .into_iter()
            .find(|k| !is_galois_fixed(&ug, k))
            .unwrap();
        epsilon_multiplicity(&ug, &kappa, ExtLabel::M, true, &ctx);
    }

    #[test]
    fn dichotomy_against_the_quotient_tables() {
        for (p, reps, triples) in [(3u64, 4usize, 20usize), (5, 8, 40)] {
            let t = local_table(p, 3).unwrap();
            let r = dichotomy_check(&t).unwrap();
            assert_eq!(r.representations, reps);
            assert_eq!(r.triples, triples);
            assert!(r.failures.is_empty(), "{:?}", r.failures);
        }
    }
}
