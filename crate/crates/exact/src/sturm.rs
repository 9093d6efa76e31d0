//! Exact real root counting via Sturm sequences over the rationals, plus the
//! root-squaring transform used for two-sided eigenvalue bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Trim trailing zeros; the zero polynomial becomes the empty vector.
pub fn normalize(mut c: Vec<BigRational>) -> Vec<BigRational> {
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
    c
}

pub fn derivative(c: &[BigRational]) -> Vec<BigRational> {
    normalize(
        c.iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

pub fn eval(c: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for ci in c.iter().rev() {
        acc = acc * x + ci;
    }
    acc
}

pub fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    normalize(out)
}

/// Remainder of polynomial division.
pub fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let b = normalize(b.to_vec());
    assert!(!b.is_empty());
    let mut r = normalize(a.to_vec());
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = r.last().unwrap() / b.last().unwrap();
        for (i, bi) in b.iter().enumerate() {
            let t = &q * bi;
            r[k + i] -= t;
        }
        r = normalize(r);
    }
    r
}

pub fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut f = normalize(a.to_vec());
    let mut g = normalize(b.to_vec());
    while !g.is_empty() {
        let r = poly_rem(&f, &g);
        f = g;
        g = r;
    }
    if f.is_empty() {
        return f;
    }
    let lead = f.last().unwrap().clone();
    f.iter().map(|c| c / &lead).collect()
}

/// The squarefree part f / gcd(f, f').
pub fn squarefree_part(f: &[BigRational]) -> Vec<BigRational> {
    let g = poly_gcd(f, &derivative(f));
    if g.len() <= 1 {
        return normalize(f.to_vec());
    }
    poly_div_exact(f, &g)
}

pub fn poly_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let b = normalize(b.to_vec());
    let mut r = normalize(a.to_vec());
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / b.last().unwrap();
        q[k] = c.clone();
        for (i, bi) in b.iter().enumerate() {
            let t = &c * bi;
            r[k + i] -= t;
        }
        r = normalize(r);
    }
    assert!(r.is_empty(), "division was not exact");
    q
}

fn sturm_chain(f: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut chain = vec![normalize(f.to_vec()), derivative(f)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            return chain;
        }
        let r = poly_rem(&chain[n - 2], &chain[n - 1]);
        chain.push(r.iter().map(|c| -c).collect());
    }
}

fn sign_changes(chain: &[Vec<BigRational>], x: &BigRational) -> usize {
    let mut signs = Vec::new();
    for p in chain {
        let v = eval(p, x);
        if !v.is_zero() {
            signs.push(v.is_positive());
        }
    }
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of a squarefree `f` in the interval `(a, b]`.
pub fn count_roots_in(f: &[BigRational], a: &BigRational, b: &BigRational) -> usize {
    let chain = sturm_chain(f);
    sign_changes(&chain, a) - sign_changes(&chain, b)
}

/// Number of distinct real roots of a squarefree `f`.
pub fn count_real_roots(f: &[BigRational]) -> usize {
    let bound = cauchy_bound(f);
    count_roots_in(f, &(-bound.clone()), &bound)
}

/// A rational `M` with all complex roots of `f` of absolute value `< M`.
pub fn cauchy_bound(f: &[BigRational]) -> BigRational {
    let f = normalize(f.to_vec());
    assert!(!f.is_empty());
    let lead = f.last().unwrap().abs();
    let mut max = BigRational::zero();
    for c in &f[..f.len() - 1] {
        let t = c.abs() / &lead;
        if t > max {
            max = t;
        }
    }
    max + BigRational::one()
}

/// Polynomial whose roots are the squares of the roots of `f`:
/// with f(x) = e(x^2) + x o(x^2), returns +-(e(y)^2 - y o(y)^2) normalized
/// to positive leading coefficient.
pub fn root_square_transform(f: &[BigRational]) -> Vec<BigRational> {
    let f = normalize(f.to_vec());
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (i, c) in f.iter().enumerate() {
        if i % 2 == 0 {
            even.push(c.clone());
        } else {
            odd.push(c.clone());
        }
    }
    let e2 = poly_mul(&even, &even);
    let mut yo2 = poly_mul(&odd, &odd);
    yo2.insert(0, BigRational::zero());
    let mut g: Vec<BigRational> = Vec::with_capacity(e2.len().max(yo2.len()));
    for i in 0..e2.len().max(yo2.len()) {
        let a = e2.get(i).cloned().unwrap_or_else(BigRational::zero);
        let b = yo2.get(i).cloned().unwrap_or_else(BigRational::zero);
        g.push(a - b);
    }
    let mut g = normalize(g);
    if g.last().map_or(false, |c| c.is_negative()) {
        for c in g.iter_mut() {
            let t = -c.clone();
            *c = t;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect()
    }

    #[test]
    fn counts_roots_of_cubic() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let f = poly(&[6, -7, 0, 1]);
        assert_eq!(count_real_roots(&f), 3);
        assert_eq!(
            count_roots_in(&f, &poly(&[0])[0].clone(), &poly(&[5])[0].clone()),
            2
        );
    }

    #[test]
    fn no_real_roots() {
        let f = poly(&[1, 0, 1]);
        assert_eq!(count_real_roots(&f), 0);
    }

    #[test]
    fn squarefree_and_square_transform() {
        // f = (x-2)^2 (x+1); squarefree part has roots {2, -1}.
        let f = poly_mul(&poly_mul(&poly(&[-2, 1]), &poly(&[-2, 1])), &poly(&[1, 1]));
        let sf = squarefree_part(&f);
        assert_eq!(sf.len(), 3);
        assert_eq!(count_real_roots(&sf), 2);
        // Root squares are {4, 1}.
        let g = root_square_transform(&sf);
        let three = BigRational::from_integer(BigInt::from(3));
        let five = BigRational::from_integer(BigInt::from(5));
        let zero = BigRational::zero();
        assert_eq!(count_roots_in(&g, &three, &five), 1);
        assert_eq!(count_roots_in(&g, &zero, &five), 2);
    }

    #[test]
    fn eigenvalue_bound_style_check() {
        // Charpoly of T_2 on weight-2 level-11 cusp forms is x + 2; the root
        // square 4 does not exceed the Ramanujan bound 4 * 2 = 8.
        let f = poly(&[2, 1]);
        let g = root_square_transform(&f);
        let bound = BigRational::from_integer(BigInt::from(8));
        let big = cauchy_bound(&g);
        assert_eq!(count_roots_in(&g, &bound, &big), 0);
    }
}
