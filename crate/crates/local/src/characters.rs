//! Characters of `E^x` at finite conductor with exact root-of-unity values.
//!
//! A character of `E^x = pi^Z x o_E^x` is stored as a character of the finite
//! unit quotient `(o_E/p_E^m)^x` together with the value at the uniformiser.
//! The central restriction to `Q_p^x` is pinned down on the embedded units
//! and on `p`; for ramified `E` the square of the uniformiser value is forced
//! by `w^2 = -cp`, leaving exactly two extensions per admissible unit part.

use crate::field::{ExtLabel, QuadExt};
use crate::LocalError;
use exact::abelian::{AbelianChar, FiniteAbelian};
use exact::cyclotomic::Cyc;
use exact::numutil::{mulmod, powmod};

/// How a character must restrict to `Q_p^x` inside `E^x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralCondition {
    /// Trivial on all of `Q_p^x`.
    TrivialOnF,
    /// Equal to the quadratic character attached to `E/Q_p`; on units this is
    /// the Legendre pattern for ramified `E` and trivial for unramified `E`.
    MatchesW,
    Unrestricted,
}

/// A primitive root mod `p^k` for an odd prime `p`.
pub fn primitive_root(p: u64, k: u32) -> u64 {
    let pk = p.pow(k);
    let mut g = (2..p)
        .find(|&g| {
            let order_divisors: Vec<u64> =
                exact::numutil::factor(p - 1).iter().map(|&(q, _)| (p - 1) / q).collect();
            order_divisors.iter().all(|&d| powmod(g, d, p) != 1)
        })
        .expect("primitive root exists");
    if k > 1 && powmod(g, p - 1, p * p) == 1 {
        g += p;
    }
    debug_assert_eq!(exact::numutil::mult_order(g, pk), (p - 1) * pk / p);
    g
}

/// The unit group `(o_E/p_E^m)^x` with discrete-log coordinates.
pub struct UnitGroup {
    pub ext: QuadExt,
    pub fab: FiniteAbelian<u64>,
    /// Indices of the units congruent to 1 mod `p_E^r`, for `r = 0..=m`.
    level_members: Vec<Vec<usize>>,
    /// Packed image of a primitive root of `(Z/p^mx)^x`.
    pub base_gen: u64,
    /// Packed image of `sigma` applied to each unit, as fab indices.
    sigma_to: Vec<usize>,
}

impl UnitGroup {
    pub fn new(ext: QuadExt) -> Result<Self, LocalError> {
        let p = ext.p;
        let mut gens: Vec<u64> = Vec::new();
        match ext.label {
            ExtLabel::M => {
                // A Teichmueller-style generator: any unit whose order mod p
                // is q^2 - 1, then one pair of one-unit generators per level.
                let modp = QuadExt::new(ExtLabel::M, p, 1)?;
                let omega = (0..p * p)
                    .map(|s| (s / p, s % p))
                    .find(|&(a, b)| {
                        let e = modp.pack(a, b);
                        modp.is_unit(e) && unit_order(&modp, e) == p * p - 1
                    })
                    .expect("multiplicative generator of the residue field");
                gens.push(ext.pack(omega.0, omega.1));
                for i in 1..ext.m {
                    let pi = p.pow(i);
                    gens.push(ext.pack(1 + pi, 0));
                    gens.push(ext.pack(1, pi));
                }
            }
            _ => {
                gens.push(ext.pack(primitive_root(p, ext.mx), 0));
                for i in 1..ext.m {
                    // 1 + w^i with w^(2k) = (-cp)^k and w^(2k+1) = (-cp)^k w.
                    let k = i / 2;
                    let unit = powmod(ext.pmx - ext.c % ext.pmx, k as u64, ext.pmx);
                    let scaled = mulmod(unit, powmod(p, k as u64, ext.pmx), ext.pmx);
                    if i % 2 == 0 {
                        gens.push(ext.pack(1 + scaled, 0));
                    } else {
                        gens.push(ext.pack(1, scaled));
                    }
                }
            }
        }
        let fab = FiniteAbelian::generate(ext.one(), &gens, |a, b| ext.mul(*a, *b));
        assert_eq!(fab.order(), ext.unit_count(), "generators must span the unit group");

        let mut level_members: Vec<Vec<usize>> = vec![Vec::new(); ext.m as usize + 1];
        for (i, &e) in fab.elements.iter().enumerate() {
            for r in 0..=one_unit_level(&ext, e) {
                level_members[r as usize].push(i);
            }
        }
        let base_gen = ext.embed_base(primitive_root(p, ext.mx));
        let sigma_to = fab.elements.iter().map(|&e| fab.index_of(&ext.sigma(e))).collect();
        Ok(UnitGroup { ext, fab, level_members, base_gen, sigma_to })
    }

    /// Conductor of a unit character: the least `r` with trivial restriction
    /// to `1 + p_E^r`.
    pub fn conductor(&self, ch: &AbelianChar) -> u32 {
        for r in 0..=self.ext.m {
            if self.level_members[r as usize]
                .iter()
                .all(|&i| ch.eval(&self.fab.coords[i]) == 0)
            {
                return r;
            }
        }
        unreachable!("level m subgroup is trivial")
    }

    pub fn eval_packed(&self, ch: &AbelianChar, x: u64) -> u64 {
        ch.eval(&self.fab.coords[self.fab.index_of(&x)])
    }

    fn galois_fingerprint(&self, ch: &AbelianChar) -> Vec<u64> {
        self.sigma_to.iter().map(|&j| ch.eval(&self.fab.coords[j])).collect()
    }

    fn fingerprint(&self, ch: &AbelianChar) -> Vec<u64> {
        self.fab.coords.iter().map(|c| ch.eval(c)).collect()
    }
}

fn unit_order(ext: &QuadExt, e: u64) -> u64 {
    let mut n = 1;
    let mut x = e;
    while x != ext.one() {
        x = ext.mul(x, e);
        n += 1;
    }
    n
}

/// Largest `r <= m` with `x = 1 mod p_E^r`.
fn one_unit_level(ext: &QuadExt, x: u64) -> u32 {
    let (a, b) = ext.unpack(x);
    let vala = |mut t: u64, cap: u32, p: u64| -> u32 {
        if t == 0 {
            return cap;
        }
        let mut v = 0;
        while t % p == 0 {
            t /= p;
            v += 1;
        }
        v
    };
    let one = (a + ext.pmx - 1) % ext.pmx;
    let va = vala(one, ext.mx, ext.p);
    let vb = vala(b, ext.my, ext.p);
    match ext.label {
        ExtLabel::M => va.min(vb).min(ext.m),
        // v_E(x - 1) = min(2 v(a - 1), 2 v(b) + 1).
        _ => (2 * va).min(2 * vb + 1).min(ext.m),
    }
}

/// A character of `E^x` with exact conductor `f` on units and a chosen value
/// at the uniformiser (`zeta_varpi_ord^varpi_exp`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusChar {
    pub label: ExtLabel,
    pub unit: AbelianChar,
    pub f: u32,
    pub varpi_exp: u64,
    pub varpi_ord: u64,
}

impl TorusChar {
    /// Common order for all values of the character.
    pub fn value_order(&self) -> u64 {
        num_lcm(self.unit.value_order, self.varpi_ord)
    }

    /// Value on `unit * varpi^v` as an exact cyclotomic number.
    pub fn value(&self, ug: &UnitGroup, unit_packed: u64, v: i64) -> Cyc {
        let m = self.value_order();
        let ue = ug.eval_packed(&self.unit, unit_packed) * (m / self.unit.value_order) % m;
        let vper = self.varpi_exp * (m / self.varpi_ord) % m;
        let ve = mulmod(vper, v.rem_euclid(m as i64) as u64, m);
        Cyc::root(m, (ue + ve) % m)
    }

    /// Exponent form of the same value: `(e, m)` meaning `zeta_m^e`.
    pub fn value_exp(&self, ug: &UnitGroup, unit_packed: u64, v: i64) -> (u64, u64) {
        let m = self.value_order();
        let ue = ug.eval_packed(&self.unit, unit_packed) * (m / self.unit.value_order) % m;
        let vper = self.varpi_exp * (m / self.varpi_ord) % m;
        let ve = mulmod(vper, v.rem_euclid(m as i64) as u64, m);
        ((ue + ve) % m, m)
    }

    pub fn inverse(&self) -> TorusChar {
        let mut inv = self.clone();
        for (i, a) in inv.unit.a.iter_mut().enumerate() {
            *a = (inv.unit.invariants[i] - *a) % inv.unit.invariants[i];
        }
        inv.varpi_exp = (inv.varpi_ord - inv.varpi_exp) % inv.varpi_ord;
        inv
    }
}

fn num_lcm(a: u64, b: u64) -> u64 {
    a / num_gcd(a, b) * b
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// All characters of `E^x` with exact unit conductor `f` obeying the central
/// condition.  Each admissible unit part contributes two uniformiser values.
pub fn enumerate_characters(
    ug: &UnitGroup,
    f: u32,
    central: CentralCondition,
) -> Vec<TorusChar> {
    let ext = &ug.ext;
    let mut out = Vec::new();
    let minus_c_embed = match ext.label {
        ExtLabel::M => 0,
        _ => ext.embed_base(ext.pmx - ext.c % ext.pmx),
    };
    for ch in ug.fab.characters() {
        if ug.conductor(&ch) != f {
            continue;
        }
        let m = ch.value_order;
        let on_g = ug.eval_packed(&ch, ug.base_gen);
        match central {
            CentralCondition::TrivialOnF => {
                if on_g != 0 {
                    continue;
                }
            }
            CentralCondition::MatchesW if ext.label.is_ramified() => {
                // Legendre pattern on units: value -1 at a primitive root.
                if 2 * on_g % m != 0 || on_g == 0 {
                    continue;
                }
            }
            CentralCondition::MatchesW => {
                // w of the unramified extension is unramified.
                if on_g != 0 {
                    continue;
                }
            }
            CentralCondition::Unrestricted => {}
        }
        match ext.label {
            ExtLabel::M => {
                // The uniformiser of M is p itself, so the central condition
                // fixes the value at p outright.
                match central {
                    CentralCondition::TrivialOnF => {
                        out.push(TorusChar {
                            label: ext.label,
                            unit: ch.clone(),
                            f,
                            varpi_exp: 0,
                            varpi_ord: 1,
                        });
                    }
                    CentralCondition::MatchesW => {
                        out.push(TorusChar {
                            label: ext.label,
                            unit: ch.clone(),
                            f,
                            varpi_exp: 1,
                            varpi_ord: 2,
                        });
                    }
                    CentralCondition::Unrestricted => {
                        for (e, o) in [(0, 1), (1, 2)] {
                            out.push(TorusChar {
                                label: ext.label,
                                unit: ch.clone(),
                                f,
                                varpi_exp: e,
                                varpi_ord: o,
                            });
                        }
                    }
                }
            }
            _ => {
                // kappa(w)^2 = kappa(w^2) = kappa(-cp).  Under either central
                // condition kappa(p) is pinned, so the square is the unit
                // value at -c times the required kappa(p).
                let sq_from_unit = ug.eval_packed(&ch, minus_c_embed);
                let kappa_p_num = match central {
                    CentralCondition::TrivialOnF => 0u64,
                    CentralCondition::MatchesW => {
                        if ext.label == ExtLabel::K {
                            0
                        } else {
                            m / 2
                        }
                    }
                    CentralCondition::Unrestricted => 0,
                };
                let reps = if central == CentralCondition::Unrestricted { 2 } else { 1 };
                for extra in 0..reps {
                    // Square of the uniformiser value as zeta_m^s.
                    let s = (sq_from_unit + kappa_p_num + extra * (m / 2).max(1)) % m;
                    // Two square roots zeta_{2m}^s and zeta_{2m}^{s+m}.
                    for root in [s, s + m] {
                        let (e, o) = reduce_root(root % (2 * m), 2 * m);
                        out.push(TorusChar {
                            label: ext.label,
                            unit: ch.clone(),
                            f,
                            varpi_exp: e,
                            varpi_ord: o,
                        });
                    }
                }
            }
        }
    }
    out
}

fn reduce_root(e: u64, m: u64) -> (u64, u64) {
    if e == 0 {
        return (0, 1);
    }
    let g = num_gcd(e, m);
    (e / g, m / g)
}

/// Value vector of a character on all units plus the uniformiser value, all
/// as exponents of a fixed root of unity of order `2 * exponent`, so that
/// characters of `E^x` compare equal exactly when their fingerprints do.
pub fn own_fingerprint(ug: &UnitGroup, ch: &TorusChar) -> (Vec<u64>, u64) {
    let big = 2 * ug.fab.exponent();
    let unit_fp = ug
        .fingerprint(&ch.unit)
        .iter()
        .map(|&e| e * (big / ch.unit.value_order) % big)
        .collect();
    (unit_fp, ch.varpi_exp * (big / ch.varpi_ord) % big)
}

/// Fingerprint of `kappa^sigma`, where `kappa^sigma(x) = kappa(sigma x)` and
/// `kappa^sigma(w) = kappa(-w) = kappa(-1) kappa(w)`.
pub fn galois_conjugate_fingerprint(ug: &UnitGroup, ch: &TorusChar) -> (Vec<u64>, u64) {
    let big = 2 * ug.fab.exponent();
    let scale = big / ch.unit.value_order;
    let unit_fp = ug
        .galois_fingerprint(&ch.unit)
        .iter()
        .map(|&e| e * scale % big)
        .collect();
    let minus_one = ug.eval_packed(&ch.unit, ug.ext.minus_one()) * scale % big;
    let ve = ch.varpi_exp * (big / ch.varpi_ord) % big;
    (unit_fp, (minus_one + ve) % big)
}

/// Whether `kappa^sigma = kappa` as characters of `E^x`.
pub fn is_galois_fixed(ug: &UnitGroup, ch: &TorusChar) -> bool {
    own_fingerprint(ug, ch) == galois_conjugate_fingerprint(ug, ch)
}

/// Group characters into Galois orbits; returns one representative per orbit
/// together with the orbit size (1 or 2).
pub fn galois_orbits(ug: &UnitGroup, chars: &[TorusChar]) -> Vec<(TorusChar, usize)> {
    let mut seen: Vec<(Vec<u64>, u64)> = Vec::new();
    let mut out = Vec::new();
    for ch in chars {
        let own = own_fingerprint(ug, ch);
        if seen.contains(&own) {
            continue;
        }
        let conj = galois_conjugate_fingerprint(ug, ch);
        let size = if conj == own { 1 } else { 2 };
        seen.push(own);
        seen.push(conj);
        out.push((ch.clone(), size));
    }
    out
}

///// Whether `kappa` is minimal: no twist by a base-field character of small
/// conductor lowers the conductor.  The twisting range is
/// `f(phi) <= ceil(f/e) + 1` with `e` the ramification degree; the unit group
/// must be built at enough precision for the norms to determine those values.
pub fn is_minimal(ug: &UnitGroup, ch: &TorusChar) -> bool {
    let ext = &ug.ext;
    let e = if ext.label.is_ramified() { 2 } else { 1 };
    let fphi_max = ch.f.div_ceil(e) + 1;
    assert!(
        fphi_max <= ext.mx,
        "minimality at conductor {} needs unit precision mx >= {}, have {}",
        ch.f,
        fphi_max,
        ext.mx
    );
    let base_mod = ext.p.pow(fphi_max);
    let fab = FiniteAbelian::generate(1u64, &[primitive_root(ext.p, fphi_max)], |a, b| {
        mulmod(*a, *b, base_mod)
    });
    for phi in fab.characters() {
        if phi.a.iter().all(|&x| x == 0) {
            continue;
        }
        // Conductor of kappa * (phi o N) on units, computed pointwise.
        let twisted_conductor = (0..=ext.m)
            .find(|&r| {
                ug.level_members[r as usize].iter().all(|&i| {
                    let x = ug.fab.elements[i];
                    let ke = ug.eval_packed(&ch.unit, x);
                    let km = ch.unit.value_order;
                    let pe = phi.eval(fab.coords_of(&(ext.norm(x) % base_mod)));
                    let pm = phi.value_order;
                    let m = num_lcm(km, pm);
                    (ke * (m / km) + pe * (m / pm)) % m == 0
                })
            })
            .unwrap();
        if twisted_conductor < ch.f {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::least_nonresidue;

    fn ug(label: ExtLabel, p: u64, m: u32) -> UnitGroup {
        UnitGroup::new(QuadExt::new(label, p, m).unwrap()).unwrap()
    }

    #[test]
    fn unit_group_orders() {
        assert_eq!(ug(ExtLabel::K, 3, 2).fab.order(), 6);
        assert_eq!(ug(ExtLabel::L, 5, 3).fab.order(), 100);
        assert_eq!(ug(ExtLabel::M, 3, 2).fab.order(), 72);
        assert_eq!(ug(ExtLabel::M, 7, 1).fab.order(), 48);
    }

    #[test]
    fn trivial_central_unramified_characters_of_ramified_e() {
        // Characters of E^x / F^x o_E^x: exactly two, differing by the sign
        // of the uniformiser value.
        for label in [ExtLabel::K, ExtLabel::L] {
            let g = ug(label, 5, 2);
            let chars = enumerate_characters(&g, 0, CentralCondition::TrivialOnF);
            assert_eq!(chars.len(), 2);
            let mut vals: Vec<u64> = chars
                .iter()
                .map(|c| if c.varpi_ord == 1 { 1 } else { 2 })
                .collect();
            vals.sort();
            assert_eq!(vals, vec![1, 2]);
        }
    }

    #[test]
    fn conductor_two_count_matches_index() {
        // Characters of (o_K/p_K^2)^x trivial on the embedded base units with
        // exact conductor 2: the quotient has order q, so q - 1 of them.
        let g = ug(ExtLabel::K, 3, 2);
        let count = g
            .fab
            .characters()
            .iter()
            .filter(|ch| {
                g.conductor(ch) == 2 && g.eval_packed(ch, g.base_gen) == 0
            })
            .count();
        assert_eq!(count, 2);
    }

    #[test]
    fn admissible_kappa_counts() {
        // Unit parts extending the Legendre pattern with exact conductor 2:
        // q - 1 of them; each has two uniformiser values.
        for (p, expect) in [(3u64, 2usize), (5, 4), (7, 6)] {
            let g = ug(ExtLabel::K, p, 2);
            let chars = enumerate_characters(&g, 2, CentralCondition::MatchesW);
            assert_eq!(chars.len(), 2 * expect, "p = {p}");
            // All are regular, and the Galois orbits pair them up.
            assert!(chars.iter().all(|c| !is_galois_fixed(&g, c)));
            assert_eq!(galois_orbits(&g, &chars).len(), expect);
        }
    }

    #[test]
    fn uniformiser_value_squares_correctly() {
        // kappa(w)^2 must equal the Legendre symbol of -1 for both ramified
        // extensions under the determinant-matching condition.
        for p in [3u64, 5, 7, 11, 13] {
            for label in [ExtLabel::K, ExtLabel::L] {
                let g = ug(label, p, 2);
                for ch in enumerate_characters(&g, 2, CentralCondition::MatchesW) {
                    let sq = ch.value(&g, g.ext.one(), 2);
                    let ctx = exact::cyclotomic::CycCtx::new();
                    let expect = if exact::numutil::legendre(-1, p) == 1 {
                        Cyc::from_int(1)
                    } else {
                        Cyc::from_int(-1)
                    };
                    assert!(sq.eq(&expect, &ctx), "p = {p} {label:?}");
                }
            }
        }
    }

    #[test]
    fn tame_kappa_exists_and_counts() {
        // f = 1 admissible characters: the Legendre pattern itself, two
        // uniformiser values.
        let g = ug(ExtLabel::K, 7, 1);
        let chars = enumerate_characters(&g, 1, CentralCondition::MatchesW);
        assert_eq!(chars.len(), 2);
    }

    #[test]
    fn minimality_of_small_conductor_characters() {
        // Conductor-two characters of a ramified quadratic are minimal: any
        // twist by a base character moves the conductor by an even amount.
        let g = ug(ExtLabel::K, 3, 4);
        let chars = enumerate_characters(&g, 2, CentralCondition::MatchesW);
        assert!(!chars.is_empty());
        for ch in chars {
            assert!(is_minimal(&g, &ch));
        }
    }

    #[test]
    fn unramified_u_is_nonresidue() {
        for p in [3u64, 5, 7, 11, 13, 17, 19] {
            let u = least_nonresidue(p);
            assert_eq!(exact::numutil::legendre(u as i64, p), -1);
        }
    }
}
