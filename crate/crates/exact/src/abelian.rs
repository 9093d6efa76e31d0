//! Structure of a finite abelian group presented by black-box generators.
//!
//! Elements are discovered by breadth-first closure from the generators. Each
//! element keeps one exponent vector over the generators, and every product
//! edge `x * g_i = y` contributes the relation `v_x + e_i - v_y` to the
//! relation lattice. Reducing that lattice to Smith form yields the invariant
//! factors d_1 | d_2 | ... | d_k and a change of basis converting exponent
//! vectors into coordinates in prod Z/d_i, so characters can be enumerated
//! and evaluated exactly.

use crate::matrix::MatZ;
use crate::snf::smith;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::collections::HashMap;
use std::hash::Hash;

pub struct FiniteAbelian<T> {
    pub elements: Vec<T>,
    index: HashMap<T, usize>,
    /// Invariant factors, ascending, trivial factors dropped.
    pub invariants: Vec<u64>,
    /// Coordinates of each element in `prod Z/invariants[i]`.
    pub coords: Vec<Vec<u64>>,
}

impl<T: Hash + Eq + Clone> FiniteAbelian<T> {
    pub fn generate(identity: T, gens: &[T], mul: impl Fn(&T, &T) -> T) -> Self {
        let k = gens.len();
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);
        let mut exps: Vec<Vec<i64>> = vec![vec![0; k]];
        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            for (i, g) in gens.iter().enumerate() {
                let y = mul(&elements[head], g);
                let mut v = exps[head].clone();
                v[i] += 1;
                match index.get(&y) {
                    Some(&j) => {
                        let rel: Vec<BigInt> = (0..k)
                            .map(|c| BigInt::from(v[c] - exps[j][c]))
                            .collect();
                        relations.push(rel);
                    }
                    None => {
                        index.insert(y.clone(), elements.len());
                        elements.push(y);
                        exps.push(v);
                    }
                }
            }
            head += 1;
        }

        // The relation rows span the full kernel of Z^k -> A; compress before Smith.
        let rel = MatZ::from_rows(relations).hnf();
        assert_eq!(rel.nrows, k, "relation lattice must have full rank");
        let s = smith(&rel);
        let dims: Vec<u64> = s.d.iter().map(|d| d.to_u64().unwrap()).collect();
        let order: u64 = dims.iter().product();
        assert_eq!(order as usize, elements.len());

        let invariants: Vec<u64> = dims.iter().copied().filter(|&d| d > 1).collect();
        let keep: Vec<usize> = (0..k).filter(|&i| dims[i] > 1).collect();
        let coords: Vec<Vec<u64>> = exps
            .iter()
            .map(|v| {
                keep.iter()
                    .map(|&c| {
                        let mut acc = BigInt::from(0);
                        for (r, &e) in v.iter().enumerate() {
                            acc += BigInt::from(e) * &s.v[(r, c)];
                        }
                        acc.mod_floor(&BigInt::from(dims[c])).to_u64().unwrap()
                    })
                    .collect()
            })
            .collect();

        FiniteAbelian {
            elements,
            index,
            invariants,
            coords,
        }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn index_of(&self, x: &T) -> usize {
        self.index[x]
    }

    pub fn coords_of(&self, x: &T) -> &[u64] {
        &self.coords[self.index[x]]
    }

    /// Exponent of the group: the last (largest) invariant factor.
    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    /// All characters, as exponent tuples against the invariant factors.
    pub fn characters(&self) -> Vec<AbelianChar> {
        let mut out = Vec::new();
        let mut a = vec![0u64; self.invariants.len()];
        loop {
            out.push(AbelianChar {
                invariants: self.invariants.clone(),
                a: a.clone(),
                value_order: self.exponent(),
            });
            let mut i = 0;
            loop {
                if i == a.len() {
                    return out;
                }
                a[i] += 1;
                if a[i] < self.invariants[i] {
                    break;
                }
                a[i] = 0;
                i += 1;
            }
        }
    }
}

/// A character of a finite abelian group with invariant factors `d_i`,
/// sending the `i`-th basis vector to `zeta^(a_i * m / d_i)` where
/// `m = value_order` is the group exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianChar {
    pub invariants: Vec<u64>,
    pub a: Vec<u64>,
    pub value_order: u64,
}

impl AbelianChar {
    /// Exponent `e` with value `zeta_value_order^e` on the given coordinates.
    pub fn eval(&self, coords: &[u64]) -> u64 {
        let m = self.value_order;
        let mut acc: u128 = 0;
        for i in 0..self.a.len() {
            acc += (self.a[i] as u128) * (coords[i] as u128) % m as u128 * ((m / self.invariants[i]) as u128);
            acc %= m as u128;
        }
        acc as u64
    }

    /// Order of the character (least n with the n-th power trivial).
    pub fn order(&self) -> u64 {
        let mut n = 1u64;
        for i in 0..self.a.len() {
            let d = self.invariants[i];
            let o = d / num_integer::gcd(self.a[i], d);
            n = n.lcm(&o);
        }
        n
    }

    pub fn is_trivial_on(&self, coords_list: &[&[u64]]) -> bool {
        coords_list.iter().all(|c| self.eval(c) == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numutil::mulmod;

    #[test]
    fn units_mod_nine_are_cyclic_of_order_six() {
        let gens: Vec<u64> = (1..9).filter(|x| x % 3 != 0).collect();
        let g = FiniteAbelian::generate(1u64, &gens, |a, b| mulmod(*a, *b, 9));
        assert_eq!(g.order(), 6);
        assert_eq!(g.invariants, vec![6]);
    }

    #[test]
    fn units_mod_fifteen() {
        let gens: Vec<u64> = vec![2, 7, 11];
        let g = FiniteAbelian::generate(1u64, &gens, |a, b| mulmod(*a, *b, 15));
        assert_eq!(g.order(), 8);
        assert_eq!(g.invariants, vec![2, 4]);
    }

    #[test]
    fn characters_separate_points_and_sum_to_zero() {
        let gens: Vec<u64> = vec![2, 7, 11];
        let g = FiniteAbelian::generate(1u64, &gens, |a, b| mulmod(*a, *b, 15));
        let chars = g.characters();
        assert_eq!(chars.len(), 8);
        // Column orthogonality at a nontrivial element: sum of values vanishes,
        // which in exponent form means each value-exponent class is hit equally.
        let x = g.coords_of(&2u64);
        let mut seen = HashMap::new();
        for ch in &chars {
            *seen.entry(ch.eval(x)).or_insert(0u32) += 1;
        }
        let counts: Vec<u32> = seen.values().copied().collect();
        assert!(counts.iter().all(|&c| c == counts[0]));
        assert!(seen.len() > 1);
        // Exactly one trivial character.
        let trivial = chars
            .iter()
            .filter(|ch| g.coords.iter().all(|c| ch.eval(c) == 0))
            .count();
        assert_eq!(trivial, 1);
    }

    #[test]
    fn character_orders() {
        let gens: Vec<u64> = (1..9).filter(|x| x % 3 != 0).collect();
        let g = FiniteAbelian::generate(1u64, &gens, |a, b| mulmod(*a, *b, 9));
        let orders: Vec<u64> = {
            let mut o: Vec<u64> = g.characters().iter().map(|c| c.order()).collect();
            o.sort();
            o
        };
        assert_eq!(orders, vec![1, 2, 3, 3, 6, 6]);
    }
}
