//! The irreducible representations of a quotient, organised by conductor.
//!
//! The conductor of a representation trivial on the centre is `1 + n0` where
//! `n0` is the least level with `1 + P^n0` inside the kernel.  Conductor one
//! and two give the four one-dimensional characters and the tame
//! two-dimensional representations; beyond that every representation comes
//! from a character of a quadratic torus, and the classification recovers
//! the torus from the support of the character: the trace vanishes off the
//! image of `E^x (1 + P^m)`, with `E` ramified in odd conductor and `E = M`
//! unramified in even conductor.
//!
//! For each representation the module records the dimension of the vectors
//! fixed by the unit groups `o_K^x`, `o_L^x`, `o_M^x`, computed as exact
//! character averages, and exposes multiplicities `dim Hom_{E^x}(pi, phi)`
//! for characters `phi` of a torus.

use crate::characters::{TorusChar, UnitGroup};
use crate::division::{Quotient, TorusEmbedding};
use crate::dixon::{character_table, Irrep};
use crate::field::ExtLabel;
use crate::LocalError;
use exact::cyclotomic::{Cyc, CycCtx};
use exact::numutil::legendre;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    /// A character of the quotient, factoring through the reduced norm.
    Character,
    /// Trace supported on the image of `E^x` times a congruence subgroup.
    Dihedral(ExtLabel),
}

fn kind_rank(k: RepKind) -> u8 {
    match k {
        RepKind::Character => 0,
        RepKind::Dihedral(ExtLabel::K) => 1,
        RepKind::Dihedral(ExtLabel::L) => 2,
        RepKind::Dihedral(ExtLabel::M) => 3,
    }
}

pub struct LocalRep {
    pub dim: u64,
    pub conductor: u32,
    pub kind: RepKind,
    /// Whether no quadratic twist lowers the conductor.
    pub minimal: bool,
    /// Fixed-space dimensions under the unit groups of `K`, `L`, `M`.
    pub invariants: [u64; 3],
    pub values: Vec<Cyc>,
    pub values_mod: Vec<u64>,
}

pub struct LocalTable {
    pub p: u64,
    pub c_max: u32,
    pub group: Quotient,
    pub modulus: u64,
    pub reps: Vec<LocalRep>,
}

/// Conductor from the unit filtration: `1 +` the least level on which the
/// character is constantly equal to the dimension.
fn conductor_of(g: &Quotient, values: &[Cyc], values_mod: &[u64], dim: u64, ctx: &CycCtx) -> u32 {
    let dimc = Cyc::from_int(dim as i128);
    'levels: for cprime in 0..=g.n {
        for k in 0..g.class_count() {
            let lvl = g.u_level[g.class_rep(k) as usize];
            if !lvl.is_some_and(|l| l >= cprime) {
                continue;
            }
            if values_mod[k] != dim || !values[k].eq(&dimc, ctx) {
                continue 'levels;
            }
        }
        return cprime + 1;
    }
    unreachable!("the top level subgroup is trivial")
}

/// Conductor after twisting by a ramified quadratic character of the base
/// field composed with the reduced norm.  Both ramified twists agree on the
/// unit classes, which are the only ones the conductor sees.
fn twisted_conductor(g: &Quotient, values: &[Cyc], dim: u64, ctx: &CycCtx) -> u32 {
    let dimc = Cyc::from_int(dim as i128);
    'levels: for cprime in 0..=g.n {
        for k in 0..g.class_count() {
            let lvl = g.u_level[g.class_rep(k) as usize];
            if !lvl.is_some_and(|l| l >= cprime) {
                continue;
            }
            let key = g.nrd_key(g.class_rep(k)).expect("unit class has a reduced norm");
            let sign = legendre(key as i64, g.p);
            let twisted = values[k].scale(sign as i128);
            if !twisted.eq(&dimc, ctx) {
                continue 'levels;
            }
        }
        return cprime + 1;
    }
    unreachable!("the top level subgroup is trivial")
}

fn support_inside(g: &Quotient, values: &[Cyc], hit: &[bool], ctx: &CycCtx) -> bool {
    (0..g.class_count()).all(|k| hit[k] || values[k].is_zero(ctx))
}

type SupportCache = std::collections::HashMap<(ExtLabel, u32), Vec<bool>>;

fn cached_support<'c>(
    g: &Quotient,
    cache: &'c mut SupportCache,
    label: ExtLabel,
    m: u32,
) -> &'c Vec<bool> {
    cache.entry((label, m)).or_insert_with(|| g.torus_support_classes(label, m))
}

fn classify(
    g: &Quotient,
    cache: &mut SupportCache,
    values: &[Cyc],
    dim: u64,
    conductor: u32,
    minimal: bool,
    ctx: &CycCtx,
) -> RepKind {
    if dim == 1 {
        return RepKind::Character;
    }
    if conductor % 2 == 1 {
        for m in [conductor.div_ceil(2), conductor / 2] {
            let hk = cached_support(g, cache, ExtLabel::K, m).clone();
            let hl = cached_support(g, cache, ExtLabel::L, m);
            let in_l = support_inside(g, values, hl, ctx);
            let in_k = support_inside(g, values, &hk, ctx);
            match (in_k, in_l) {
                (true, false) => return RepKind::Dihedral(ExtLabel::K),
                (false, true) => return RepKind::Dihedral(ExtLabel::L),
                _ => continue,
            }
        }
        panic!("support separates the two ramified tori in odd conductor");
    }
    assert!(minimal, "even conductor representations here admit no conductor-lowering twist");
    let m = conductor / 2 - 1;
    let hm = cached_support(g, cache, ExtLabel::M, m).clone();
    assert!(
        support_inside(g, values, &hm, ctx),
        "even conductor trace is supported on the unramified torus"
    );
    RepKind::Dihedral(ExtLabel::M)
}

/// Dimension of the subspace fixed by the image of `o_E^x`.
fn fixed_dim(g: &Quotient, emb: &TorusEmbedding, values: &[Cyc], ctx: &CycCtx) -> u64 {
    let mut sum = Cyc::from_int(0);
    for &(gid, _) in &emb.members {
        sum = sum.add(&values[g.class_of[gid as usize] as usize]);
    }
    let total = sum.as_int(ctx).expect("subgroup character sum is an integer");
    let size = emb.members.len() as i128;
    assert!(total >= 0 && total % size == 0, "fixed dimension is a nonnegative integer");
    (total / size) as u64
}

/// `dim Hom_{E^x}(pi, phi)` for a character `phi` of `E^x` trivial on the
/// base field.  The unit group must be built on the same model of `E` that
/// the embedding uses.
pub fn torus_multiplicity(
    g: &Quotient,
    emb: &TorusEmbedding,
    ug: &UnitGroup,
    phi: &TorusChar,
    values: &[Cyc],
    ctx: &CycCtx,
) -> u64 {
    assert_eq!(ug.ext.label, emb.label, "character and embedding live on the same torus");
    assert_eq!(ug.ext.m, emb.ext.m, "character precision matches the embedding");
    let mut sum = Cyc::from_int(0);
    for &(gid, e) in &emb.members {
        let term = values[g.class_of[gid as usize] as usize].mul(&phi.value(ug, e, 0).conj());
        sum = sum.add(&term);
    }
    let mut size = emb.members.len() as i128;
    if let Some(coset) = &emb.varpi_coset {
        for &(gid, e) in coset {
            let term = values[g.class_of[gid as usize] as usize].mul(&phi.value(ug, e, 1).conj());
            sum = sum.add(&term);
        }
        size *= 2;
    }
    let total = sum.as_int(ctx).expect("multiplicity sum is an integer");
    assert!(total >= 0 && total % size == 0, "multiplicity is a nonnegative integer");
    (total / size) as u64
}

/// Reference dimensions of the `o_E^x`-fixed subspaces by conductor parity
/// and torus label, for the three tori in the order `K`, `L`, `M`.
pub fn predicted_invariants(p: u64, dim: u64, conductor: u32, kind: RepKind) -> [u64; 3] {
    if dim == 1 {
        return [1, 1, if conductor == 1 { 1 } else { 0 }];
    }
    match kind {
        RepKind::Dihedral(e0) if conductor % 2 == 1 => {
            let own = if p % 4 == 3 { 2 } else { 0 };
            let other = 2 - own;
            match e0 {
                ExtLabel::K => [own, other, 1],
                ExtLabel::L => [other, own, 1],
                ExtLabel::M => unreachable!("odd conductor is ramified dihedral"),
            }
        }
        _ => [2, 2, 0],
    }
}

/// Number of irreducible representations of each conductor, and their
/// common dimension, for the quotients at odd `p`.
fn census_expected(p: u64, c: u32) -> (u64, Vec<u64>) {
    match c {
        1 => (2, vec![1, 1]),
        2 => {
            let tame = (p - 1) / 2;
            let mut dims = vec![1, 1];
            dims.extend(std::iter::repeat(2).take(tame as usize));
            (2 + tame, dims)
        }
        _ if c % 2 == 1 => {
            let count = 2 * (p - 1) * p.pow((c - 3) / 2);
            let dim = p.pow((c - 3) / 2) * (p + 1);
            (count, vec![dim; count as usize])
        }
        _ => {
            let count = (p * p - 1) / 2 * p.pow((c - 4) / 2);
            let dim = 2 * p.pow(c / 2 - 1);
            (count, vec![dim; count as usize])
        }
    }
}

/// Build the full table of irreducible representations of conductor up to
/// `c_max`, classified and decorated with torus invariants.
pub fn local_table(p: u64, c_max: u32) -> Result<LocalTable, LocalError> {
    assert!(c_max >= 1, "need at least conductor one");
    let n = c_max.saturating_sub(1).max(1);
    let g = Quotient::new(p, n)?;
    let t = character_table(&g);
    let ctx = CycCtx::new();
    let embs =
        [g.torus(ExtLabel::K), g.torus(ExtLabel::L), g.torus(ExtLabel::M)];
    let mut cache = SupportCache::new();
    let mut reps: Vec<LocalRep> = Vec::with_capacity(t.irreps.len());
    for Irrep { dim, values, values_mod } in t.irreps {
        let conductor = conductor_of(&g, &values, &values_mod, dim, &ctx);
        let minimal = twisted_conductor(&g, &values, dim, &ctx) >= conductor;
        let kind = classify(&g, &mut cache, &values, dim, conductor, minimal, &ctx);
        let invariants = [
            fixed_dim(&g, &embs[0], &values, &ctx),
            fixed_dim(&g, &embs[1], &values, &ctx),
            fixed_dim(&g, &embs[2], &values, &ctx),
        ];
        reps.push(LocalRep { dim, conductor, kind, minimal, invariants, values, values_mod });
    }

    for c in 1..=n + 1 {
        let (count, mut dims) = census_expected(p, c);
        let mut got: Vec<u64> =
            reps.iter().filter(|r| r.conductor == c).map(|r| r.dim).collect();
        got.sort_unstable();
        dims.sort_unstable();
        assert_eq!(got.len() as u64, count, "representation count at conductor {c}");
        assert_eq!(got, dims, "dimensions at conductor {c}");
        if c % 2 == 1 && c >= 3 {
            let k = reps
                .iter()
                .filter(|r| r.conductor == c && r.kind == RepKind::Dihedral(ExtLabel::K))
                .count() as u64;
            let l = reps
                .iter()
                .filter(|r| r.conductor == c && r.kind == RepKind::Dihedral(ExtLabel::L))
                .count() as u64;
            assert_eq!(k, count / 2, "half the odd conductor representations per torus");
            assert_eq!(l, count / 2, "half the odd conductor representations per torus");
        }
    }
    assert!(reps.iter().all(|r| (r.dim == 1) == (r.kind == RepKind::Character)));
    assert!(reps.iter().all(|r| r.dim > 1 || r.conductor <= 2));

    reps.sort_by(|a, b| {
        (a.conductor, a.dim, kind_rank(a.kind), &a.values_mod).cmp(&(
            b.conductor,
            b.dim,
            kind_rank(b.kind),
            &b.values_mod,
        ))
    });
    Ok(LocalTable { p, c_max, group: g, modulus: t.modulus, reps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_at_three_is_frozen() {
        let t = local_table(3, 3).unwrap();
        let summary: Vec<(u32, u64, u8, [u64; 3], bool)> = t
            .reps
            .iter()
            .map(|r| (r.conductor, r.dim, kind_rank(r.kind), r.invariants, r.minimal))
            .collect();
        assert_eq!(
            summary,
            vec![
                (1, 1, 0, [1, 1, 1], true),
                (1, 1, 0, [1, 1, 1], true),
                (2, 1, 0, [1, 1, 0], false),
                (2, 1, 0, [1, 1, 0], false),
                (2, 2, 3, [2, 2, 0], true),
                (3, 4, 1, [2, 0, 1], true),
                (3, 4, 1, [2, 0, 1], true),
                (3, 4, 2, [0, 2, 1], true),
                (3, 4, 2, [0, 2, 1], true),
            ]
        );
    }

    #[test]
    fn census_holds_at_five() {
        let t = local_table(5, 3).unwrap();
        assert_eq!(t.reps.len(), 2 + 2 + 2 + 8);
        assert!(t.reps.iter().filter(|r| r.conductor == 3).all(|r| r.dim == 6));
    }

    #[test]
    fn even_conductor_invariants() {
        let t = local_table(3, 4).unwrap();
        for r in t.reps.iter().filter(|r| r.conductor == 4) {
            assert_eq!(r.dim, 6);
            assert_eq!(r.kind, RepKind::Dihedral(ExtLabel::M));
            assert_eq!(r.invariants, [2, 2, 0]);
        }
    }

    #[test]
    fn trivial_character_pairs_with_trivial_torus_character() {
        use crate::characters::{enumerate_characters, CentralCondition};
        let t = local_table(3, 3).unwrap();
        let g = &t.group;
        let emb = g.torus(ExtLabel::K);
        let ug = UnitGroup::new(emb.ext.clone()).unwrap();
        let chars = enumerate_characters(&ug, 0, CentralCondition::TrivialOnF);
        let ctx = CycCtx::new();
        let trivial_rep = &t.reps[0];
        let mut seen = Vec::new();
        for phi in &chars {
            seen.push(torus_multiplicity(g, &emb, &ug, phi, &trivial_rep.values, &ctx));
        }
        // The trivial representation contains the trivial character of the
        // torus once and the unramified quadratic zero times.
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1]);
    }

    #[test]
    fn predicted_invariants_reference_values() {
        assert_eq!(predicted_invariants(3, 1, 1, RepKind::Character), [1, 1, 1]);
        assert_eq!(predicted_invariants(3, 1, 2, RepKind::Character), [1, 1, 0]);
        assert_eq!(
            predicted_invariants(3, 4, 3, RepKind::Dihedral(ExtLabel::K)),
            [2, 0, 1]
        );
        assert_eq!(
            predicted_invariants(5, 6, 3, RepKind::Dihedral(ExtLabel::L)),
            [2, 0, 1]
        );
        assert_eq!(
            predicted_invariants(5, 2, 2, RepKind::Dihedral(ExtLabel::M)),
            [2, 2, 0]
        );
    }
}
