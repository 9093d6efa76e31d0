//! Right ideal classes of an order, enumerated through neighbor graphs and
//! certified complete by the Eichler mass formula.
//!
//! For a right `O`-ideal `I` and a prime `l` coprime to `p` and the level,
//! the `l`-neighbors of `I` are the sublattices `J` with `lI < J < I` that
//! are again right `O`-modules; there are exactly `l + 1` of them and each
//! has `nrd(J) = l nrd(I)`. Starting from `I = O` the search walks this
//! graph, keeping one representative per isomorphism class, where
//!
//! ```text
//!   I ~ J   iff   some alpha in I conj(J) has nrd(alpha) = nrd(I) nrd(J),
//! ```
//!
//! a short-vector existence problem in a positive definite quaternary form.
//! The walk is complete when the accumulated mass `sum_i 1 / e_i` (with
//! `e_i` the unit count of the left order of the i-th class) reaches the
//! Eichler mass of `O`; if one prime's graph closes early, the next
//! admissible prime is added to the generating set rather than trusting the
//! partial orbit.

use crate::algebra::{Quat, QuatAlgebra};
use crate::lattice::Lattice;
use crate::order::{left_order, SpanFl};
use crate::shortvec::QuadForm;
use crate::GlobalError;
use exact::numutil::is_prime;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct IdealClass {
    /// Primitive integral representative of the class.
    pub lattice: Lattice,
    pub nrd: BigRational,
    pub left_order: Lattice,
    /// Number of units of the left order, twice the size of the reduced
    /// automorphism group.
    pub unit_count: u64,
}

#[derive(Debug, Clone)]
pub struct ClassSet {
    pub p: u64,
    pub order: Lattice,
    pub classes: Vec<IdealClass>,
    pub mass: BigRational,
    pub neighbor_primes: Vec<u64>,
}

impl ClassSet {
    pub fn h(&self) -> usize {
        self.classes.len()
    }

    pub fn unit_counts(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.unit_count).collect()
    }

    /// Weighted pairing `<f, g> = sum_i f_i g_i / e_i` on functions over the
    /// classes.
    pub fn pairing(&self, f: &[BigRational], g: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, c) in self.classes.iter().enumerate() {
            acc += &f[i] * &g[i] / BigRational::from_integer(BigInt::from(c.unit_count));
        }
        acc
    }
}

fn rat_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    BigRational::new(num, a.denom() * b.denom())
}

/// The fractional ideal `nrd(L)`: the Z-module generated by all reduced
/// norms of lattice elements, as a positive rational generator.
pub fn nrd_module(alg: &QuatAlgebra, l: &Lattice) -> BigRational {
    let rows = l.rows();
    let mut g = BigRational::zero();
    for (i, x) in rows.iter().enumerate() {
        g = rat_gcd(&g, &alg.nrd(x));
        for y in rows.iter().skip(i + 1) {
            g = rat_gcd(&g, &alg.norm_pairing(x, y));
        }
    }
    g
}

/// Whether `I` and `J` are isomorphic as right modules over their common
/// order, given their norms.
pub fn is_isomorphic(
    alg: &QuatAlgebra,
    i: &Lattice,
    nrd_i: &BigRational,
    j: &Lattice,
    nrd_j: &BigRational,
) -> bool {
    if i == j {
        return true;
    }
    let prod = i
        .mul(alg, &j.conjugate(alg))
        .expect("ideal products are full lattices");
    let gram = prod.gram_norm(alg);
    let form = QuadForm::new(&gram).expect("norm form is positive definite");
    form.exists(&(nrd_i * nrd_j))
}

fn unit_count(alg: &QuatAlgebra, order: &Lattice) -> u64 {
    let form = QuadForm::new(&order.gram_norm(alg)).expect("positive definite");
    form.count(&BigRational::one())
}

/// Scale a lattice by a positive rational so that it becomes integral and
/// primitive; the reduced norm scales by the square of the factor.
fn primitive_rep(l: &Lattice, nrd: &BigRational) -> (Lattice, BigRational) {
    let mut content = BigInt::zero();
    for r in 0..4 {
        for c in 0..4 {
            content = content.gcd(&l.basis[(r, c)]);
        }
    }
    let factor = BigRational::new(l.den.clone(), content);
    let scaled = l.scale(&factor);
    let nrd_scaled = nrd * &factor * &factor;
    (scaled, nrd_scaled)
}

/// The `l + 1` neighbors of `I` at the prime `l`, as primitive pairs
/// `(lattice, nrd)`.
fn neighbors(
    alg: &QuatAlgebra,
    order: &Lattice,
    i: &Lattice,
    nrd_i: &BigRational,
    l: u64,
) -> Vec<(Lattice, BigRational)> {
    let irows = i.rows();
    let orows = order.rows();
    // Right action of the order basis on I / lI.
    let mut action = Vec::with_capacity(4);
    for c in &orows {
        let mut mat = [[0u64; 4]; 4];
        for (t, b) in irows.iter().enumerate() {
            let prod = alg.mul(b, c);
            let coords = i
                .coords_of(&prod)
                .expect("I is a right module over its order");
            for (s, v) in coords.iter().enumerate() {
                mat[t][s] = v.mod_floor(&BigInt::from(l)).to_u64().unwrap();
            }
        }
        action.push(mat);
    }
    let apply = |v: &[u64; 4], mat: &[[u64; 4]; 4]| -> [u64; 4] {
        let mut out = [0u64; 4];
        for t in 0..4 {
            if v[t] == 0 {
                continue;
            }
            for s in 0..4 {
                out[s] = (out[s] + v[t] * mat[t][s]) % l;
            }
        }
        out
    };
    let lq = BigRational::from_integer(BigInt::from(l));
    let mut found = Vec::new();
    // Two-dimensional subspaces in reduced echelon form, ordered by pivot
    // columns then free entries.
    for c1 in 0..4usize {
        for c2 in c1 + 1..4 {
            let free: Vec<(usize, usize)> = {
                let mut f = Vec::new();
                for col in c1 + 1..4 {
                    if col != c2 {
                        f.push((0, col));
                    }
                }
                for col in c2 + 1..4 {
                    f.push((1, col));
                }
                f
            };
            let total = l.pow(free.len() as u32);
            for code in 0..total {
                let mut rows = [[0u64; 4]; 2];
                rows[0][c1] = 1;
                rows[1][c2] = 1;
                let mut rem = code;
                for &(ri, col) in &free {
                    rows[ri][col] = rem % l;
                    rem /= l;
                }
                if rows[0][c2] != 0 {
                    continue;
                }
                let mut span = SpanFl::new(l);
                span.insert(rows[0]);
                span.insert(rows[1]);
                let stable = rows
                    .iter()
                    .all(|w| action.iter().all(|m| span.member(&apply(w, m))));
                if !stable {
                    continue;
                }
                let mut gens: Vec<Quat> = irows.iter().map(|r| alg.scale(&lq, r)).collect();
                for w in &rows {
                    let mut q = crate::algebra::quat_zero();
                    for (t, b) in irows.iter().enumerate() {
                        let cq = BigRational::from_integer(BigInt::from(w[t]));
                        for x in 0..4 {
                            q[x] = &q[x] + &cq * &b[x];
                        }
                    }
                    gens.push(q);
                }
                let j = Lattice::from_rows(&gens).expect("neighbor is a full lattice");
                debug_assert_eq!(j.index_in(i), BigInt::from(l * l));
                let nrd_j = nrd_i * &lq;
                debug_assert_eq!(nrd_module(alg, &j), nrd_j);
                found.push(primitive_rep(&j, &nrd_j));
            }
        }
    }
    assert_eq!(
        found.len(),
        l as usize + 1,
        "an l-neighbor graph must branch l + 1 ways"
    );
    found
}

fn smallest_admissible_prime(p: u64, used: &[u64]) -> u64 {
    let mut l = 2;
    loop {
        if is_prime(l) && l != 2 && l != p && !used.contains(&l) {
            return l;
        }
        l += 1;
    }
}

/// Enumerate the right ideal classes of `order`, certified against
/// `expected_mass`. `start_prime` overrides the default (smallest admissible)
/// neighbor prime, which exists to let tests confirm the invariance of the
/// result under that choice.
pub fn right_ideal_classes_with(
    alg: &QuatAlgebra,
    order: &Lattice,
    p: u64,
    expected_mass: &BigRational,
    start_prime: Option<u64>,
) -> Result<ClassSet, GlobalError> {
    let first = match start_prime {
        Some(l) => {
            assert!(is_prime(l) && l != 2 && l != p);
            l
        }
        None => smallest_admissible_prime(p, &[]),
    };
    let mut primes = vec![first];
    let mut classes: Vec<IdealClass> = Vec::new();
    let e0 = unit_count(alg, order);
    classes.push(IdealClass {
        lattice: order.clone(),
        nrd: BigRational::one(),
        left_order: order.clone(),
        unit_count: e0,
    });
    let mut queue: std::collections::VecDeque<usize> = [0].into();
    loop {
        while let Some(idx) = queue.pop_front() {
            let (ilat, inrd) = (classes[idx].lattice.clone(), classes[idx].nrd.clone());
            for &l in primes.clone().iter() {
                for (j, nrd_j) in neighbors(alg, order, &ilat, &inrd, l) {
                    let known = classes
                        .iter()
                        .any(|c| is_isomorphic(alg, &c.lattice, &c.nrd, &j, &nrd_j));
                    if !known {
                        let lo = left_order(alg, &j)?;
                        let e = unit_count(alg, &lo);
                        classes.push(IdealClass {
                            lattice: j,
                            nrd: nrd_j,
                            left_order: lo,
                            unit_count: e,
                        });
                        queue.push_back(classes.len() - 1);
                    }
                }
            }
        }
        let mass: BigRational = classes
            .iter()
            .map(|c| BigRational::new(BigInt::one(), BigInt::from(c.unit_count)))
            .sum();
        if &mass == expected_mass {
            break;
        }
        if &mass > expected_mass {
            return Err(GlobalError::MassMismatch {
                found: mass.to_string(),
                expected: expected_mass.to_string(),
            });
        }
        if primes.len() >= 5 {
            return Err(GlobalError::MassMismatch {
                found: mass.to_string(),
                expected: expected_mass.to_string(),
            });
        }
        // The orbit under the current primes closed early: widen the
        // generating set and resume from every known class.
        primes.push(smallest_admissible_prime(p, &primes));
        for i in 0..classes.len() {
            queue.push_back(i);
        }
    }
    let mass: BigRational = classes
        .iter()
        .map(|c| BigRational::new(BigInt::one(), BigInt::from(c.unit_count)))
        .sum();
    let mut tail: Vec<IdealClass> = classes.split_off(1);
    tail.sort_by_key(|c| c.lattice.canonical_key());
    classes.extend(tail);
    Ok(ClassSet {
        p,
        order: order.clone(),
        classes,
        mass,
        neighbor_primes: primes,
    })
}

pub fn right_ideal_classes(
    alg: &QuatAlgebra,
    order: &Lattice,
    p: u64,
    expected_mass: &BigRational,
) -> Result<ClassSet, GlobalError> {
    right_ideal_classes_with(alg, order, p, expected_mass, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra_for_prime;
    use crate::order::{expected_mass, maximal_order, p_ideal, special_order, ExtType};

    fn maximal_class_set(p: u64, start: Option<u64>) -> ClassSet {
        let alg = algebra_for_prime(p).unwrap();
        let omax = maximal_order(&alg, p).unwrap();
        let mass = expected_mass(p, ExtType::K, 1);
        right_ideal_classes_with(&alg, &omax, p, &mass, start).unwrap()
    }

    #[test]
    fn class_numbers_and_unit_orders_at_maximal_level() {
        let cs11 = maximal_class_set(11, None);
        assert_eq!(cs11.h(), 2);
        let mut e = cs11.unit_counts();
        e.sort_unstable();
        assert_eq!(e, vec![4, 6]);
        assert_eq!(
            cs11.mass,
            BigRational::new(BigInt::from(5), BigInt::from(12))
        );

        let cs3 = maximal_class_set(3, None);
        assert_eq!(cs3.h(), 1);
        assert_eq!(cs3.unit_counts(), vec![12]);

        let cs5 = maximal_class_set(5, None);
        assert_eq!(cs5.h(), 1);
        assert_eq!(cs5.unit_counts(), vec![6]);

        let cs7 = maximal_class_set(7, None);
        assert_eq!(cs7.h(), 1);
        assert_eq!(cs7.unit_counts(), vec![4]);

        let cs23 = maximal_class_set(23, None);
        assert_eq!(cs23.h(), 3);
        let mut e23 = cs23.unit_counts();
        e23.sort_unstable();
        assert_eq!(e23, vec![2, 4, 6]);
    }

    #[test]
    fn neighbor_prime_does_not_change_the_invariants() {
        let a = maximal_class_set(11, None);
        let b = maximal_class_set(11, Some(5));
        assert_eq!(a.h(), b.h());
        let mut ea = a.unit_counts();
        let mut eb = b.unit_counts();
        ea.sort_unstable();
        eb.sort_unstable();
        assert_eq!(ea, eb);
        assert_eq!(a.mass, b.mass);
        assert_ne!(a.neighbor_primes, b.neighbor_primes);
    }

    #[test]
    fn special_order_class_sets_meet_their_mass() {
        let p = 3;
        let alg = algebra_for_prime(p).unwrap();
        let omax = maximal_order(&alg, p).unwrap();
        let pid = p_ideal(&alg, &omax, p).unwrap();
        for (ext, r) in [(ExtType::K, 2u32), (ExtType::K, 3), (ExtType::M, 3)] {
            let so = special_order(&alg, &omax, &pid, p, ext, r).unwrap();
            let mass = expected_mass(p, ext, so.level_exp);
            let cs = right_ideal_classes(&alg, &so.lattice, p, &mass).unwrap();
            assert_eq!(cs.mass, mass, "mass certified for ({ext}, {r})");
            for c in &cs.classes {
                assert!(c.unit_count >= 2);
                assert_eq!(c.unit_count % 2, 0);
            }
        }
    }
}
