//! Checksummed disk cache for class sets and Brandt numerators.
//!
//! Entries are plain text files named by the SHA-256 of their logical key:
//!
//! ```text
//!   qalg-cache 1
//!   sha256 <hex digest of the payload>
//!   key <logical key string>
//!   <payload lines>
//! ```
//!
//! A version bump, a key collision, or a corrupted payload is detected on
//! load and answered by recomputing and rewriting the entry, never by
//! trusting stale bytes. Writes go through a temporary file and a rename so
//! a crash cannot leave a half-written entry behind.

use crate::algebra::QuatAlgebra;
use crate::brandt::{brandt_matrix, BrandtMatrix};
use crate::classset::{right_ideal_classes, ClassSet, IdealClass};
use crate::lattice::Lattice;
use crate::GlobalError;
use exact::matrix::MatZ;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use sha2::{Digest, Sha256};
use std::path::PathBuf;

const FORMAT_LINE: &str = "qalg-cache 1";

#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: Option<PathBuf>,
}

impl DiskCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        DiskCache { dir }
    }

    pub fn disabled() -> Self {
        DiskCache { dir: None }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn file_for(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| {
            let digest = Sha256::digest(key.as_bytes());
            let mut name = String::with_capacity(68);
            for b in digest {
                name.push_str(&format!("{b:02x}"));
            }
            name.push_str(".txt");
            d.join(name)
        })
    }

    fn load_payload(&self, key: &str) -> Option<String> {
        let path = self.file_for(key)?;
        let text = std::fs::read_to_string(&path).ok()?;
        let rest = match text.strip_prefix(FORMAT_LINE) {
            Some(r) => r.strip_prefix('\n')?,
            None => {
                eprintln!("cache: version mismatch for {key}, recomputing");
                return None;
            }
        };
        let (sum_line, rest) = rest.split_once('\n')?;
        let (key_line, payload) = rest.split_once('\n')?;
        if key_line != format!("key {key}") {
            eprintln!("cache: key mismatch for {key}, recomputing");
            return None;
        }
        let want = sum_line.strip_prefix("sha256 ")?;
        let got = format!("{:x}", Sha256::digest(payload.as_bytes()));
        if want != got {
            eprintln!("cache: checksum mismatch for {key}, recomputing");
            return None;
        }
        Some(payload.to_string())
    }

    fn store_payload(&self, key: &str, payload: &str) {
        let Some(path) = self.file_for(key) else {
            return;
        };
        if let Some(dir) = path.parent() {
            if std::fs::create_dir_all(dir).is_err() {
                return;
            }
        }
        let digest = format!("{:x}", Sha256::digest(payload.as_bytes()));
        let text = format!("{FORMAT_LINE}\nsha256 {digest}\nkey {key}\n{payload}");
        let tmp = path.with_extension("tmp");
        if std::fs::write(&tmp, text).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }

    /// Class set of `order`, read from disk when a valid entry exists.
    pub fn class_set(
        &self,
        alg: &QuatAlgebra,
        order: &Lattice,
        p: u64,
        expected_mass: &BigRational,
        key: &str,
    ) -> Result<ClassSet, GlobalError> {
        if let Some(payload) = self.load_payload(key) {
            match parse_class_set(&payload, order) {
                Some(cs) if cs.p == p && &cs.mass == expected_mass => return Ok(cs),
                _ => eprintln!("cache: stale class set for {key}, recomputing"),
            }
        }
        let cs = right_ideal_classes(alg, order, p, expected_mass)?;
        self.store_payload(key, &render_class_set(&cs));
        Ok(cs)
    }

    /// Brandt matrix `T_n`, with numerators read from disk when possible.
    pub fn brandt(&self, alg: &QuatAlgebra, cs: &ClassSet, n: u64, key: &str) -> BrandtMatrix {
        if let Some(payload) = self.load_payload(key) {
            if let Some(b) = parse_brandt(&payload, cs, n) {
                return b;
            }
            eprintln!("cache: stale Brandt entry for {key}, recomputing");
        }
        let b = brandt_matrix(alg, cs, n);
        self.store_payload(key, &render_brandt(&b));
        b
    }
}

fn push_lattice(out: &mut String, l: &Lattice) {
    out.push_str(&l.den.to_string());
    for r in 0..4 {
        for c in 0..4 {
            out.push(' ');
            out.push_str(&l.basis[(r, c)].to_string());
        }
    }
}

fn render_class_set(cs: &ClassSet) -> String {
    let mut out = format!("p {}\nprimes", cs.p);
    for l in &cs.neighbor_primes {
        out.push_str(&format!(" {l}"));
    }
    out.push_str(&format!("\nmass {}\ncount {}\n", cs.mass, cs.h()));
    for c in &cs.classes {
        out.push_str("class ");
        push_lattice(&mut out, &c.lattice);
        out.push_str(&format!(" {} {} ", c.nrd, c.unit_count));
        push_lattice(&mut out, &c.left_order);
        out.push('\n');
    }
    out
}

fn take_lattice<'a>(toks: &mut impl Iterator<Item = &'a str>) -> Option<Lattice> {
    let den: BigInt = toks.next()?.parse().ok()?;
    let mut rows = Vec::with_capacity(4);
    for _ in 0..4 {
        let mut row = Vec::with_capacity(4);
        for _ in 0..4 {
            row.push(toks.next()?.parse().ok()?);
        }
        rows.push(row);
    }
    if den <= BigInt::zero() {
        return None;
    }
    Some(Lattice {
        den,
        basis: MatZ::from_rows(rows),
    })
}

fn parse_rational(tok: &str) -> Option<BigRational> {
    match tok.split_once('/') {
        Some((n, d)) => Some(BigRational::new(n.parse().ok()?, d.parse().ok()?)),
        None => Some(BigRational::from_integer(tok.parse().ok()?)),
    }
}

fn parse_class_set(payload: &str, order: &Lattice) -> Option<ClassSet> {
    let mut lines = payload.lines();
    let p: u64 = lines.next()?.strip_prefix("p ")?.parse().ok()?;
    let primes: Vec<u64> = lines
        .next()?
        .strip_prefix("primes")?
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .ok()?;
    let mass = parse_rational(lines.next()?.strip_prefix("mass ")?)?;
    let count: usize = lines.next()?.strip_prefix("count ")?.parse().ok()?;
    let mut classes = Vec::with_capacity(count);
    for _ in 0..count {
        let line = lines.next()?;
        let mut toks = line.strip_prefix("class ")?.split_whitespace();
        let lattice = take_lattice(&mut toks)?;
        let nrd = parse_rational(toks.next()?)?;
        let unit_count: u64 = toks.next()?.parse().ok()?;
        let left_order = take_lattice(&mut toks)?;
        if toks.next().is_some() {
            return None;
        }
        classes.push(IdealClass {
            lattice,
            nrd,
            left_order,
            unit_count,
        });
    }
    if classes.is_empty() {
        return None;
    }
    Some(ClassSet {
        p,
        order: order.clone(),
        classes,
        mass,
        neighbor_primes: primes,
    })
}

fn render_brandt(b: &BrandtMatrix) -> String {
    let mut out = format!("n {}\nh {}\n", b.n, b.numerators.len());
    for row in &b.numerators {
        out.push_str("row");
        for v in row {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

fn parse_brandt(payload: &str, cs: &ClassSet, n: u64) -> Option<BrandtMatrix> {
    let mut lines = payload.lines();
    let got_n: u64 = lines.next()?.strip_prefix("n ")?.parse().ok()?;
    let h: usize = lines.next()?.strip_prefix("h ")?.parse().ok()?;
    if got_n != n || h != cs.h() {
        return None;
    }
    let mut numerators = Vec::with_capacity(h);
    for _ in 0..h {
        let row: Vec<u64> = lines
            .next()?
            .strip_prefix("row")?
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .ok()?;
        if row.len() != h {
            return None;
        }
        numerators.push(row);
    }
    let mut entries = Vec::with_capacity(h);
    for i in 0..h {
        let mut row = Vec::with_capacity(h);
        for j in 0..h {
            row.push(BigRational::new(
                BigInt::from(numerators[i][j]),
                BigInt::from(cs.classes[j].unit_count),
            ));
        }
        entries.push(row);
    }
    Some(BrandtMatrix {
        n,
        numerators,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra_for_prime;
    use crate::order::{expected_mass, maximal_order, ExtType};

    #[test]
    fn round_trip_and_corruption_recovery() {
        let dir = std::env::temp_dir().join(format!("qalg-cache-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let cache = DiskCache::new(Some(dir.clone()));
        let p = 11;
        let alg = algebra_for_prime(p).unwrap();
        let omax = maximal_order(&alg, p).unwrap();
        let mass = expected_mass(p, ExtType::K, 1);
        let key = "qalg-v1 classset p=11 ord=max";
        let cold = cache.class_set(&alg, &omax, p, &mass, key).unwrap();
        let warm = cache.class_set(&alg, &omax, p, &mass, key).unwrap();
        assert_eq!(cold.h(), warm.h());
        assert_eq!(cold.mass, warm.mass);
        for (a, b) in cold.classes.iter().zip(&warm.classes) {
            assert_eq!(a.lattice, b.lattice);
            assert_eq!(a.nrd, b.nrd);
            assert_eq!(a.unit_count, b.unit_count);
            assert_eq!(a.left_order, b.left_order);
        }

        let bkey = "qalg-v1 brandt p=11 ord=max n=2";
        let b_cold = cache.brandt(&alg, &cold, 2, bkey);
        let b_warm = cache.brandt(&alg, &warm, 2, bkey);
        assert_eq!(b_cold, b_warm);

        let file = cache.file_for(key).unwrap();
        let mut text = std::fs::read_to_string(&file).unwrap();
        text = text.replace("class", "klass");
        std::fs::write(&file, text).unwrap();
        let healed = cache.class_set(&alg, &omax, p, &mass, key).unwrap();
        assert_eq!(healed.h(), cold.h());
        let reread = cache.load_payload(key).unwrap();
        assert!(reread.contains("class"));

        let disabled = DiskCache::disabled();
        let direct = disabled.class_set(&alg, &omax, p, &mass, key).unwrap();
        assert_eq!(direct.h(), cold.h());
        let _ = std::fs::remove_dir_all(&dir);
    }
}
