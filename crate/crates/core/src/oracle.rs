//! Brute-force cross-checks, kept deliberately independent of the deciders
//! they audit. Nothing here is clever: images are compared by exhaustive
//! conjugator search over word balls, and wreath conjugacy by trying every
//! shift in a window and reading off the unique candidate corrector.

use std::collections::{BTreeMap, HashSet};

use crate::groups::evaluate_at_coordinate;
use crate::params::ParameterTables;
use crate::perm::Permutation;
use crate::words::Word;
use crate::wreath::{self, alpha_inf, beta_inf, WreathElement};

/// Exact image of a word in the truncated product: one permutation per stored
/// coordinate in scan order (1,1), (1,2), ..., (n_max, m_{n_max}), plus the
/// infinite coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProductImage {
    perms: Vec<Permutation>,
    inf: WreathElement,
}

impl ProductImage {
    pub fn identity(tables: &ParameterTables) -> Self {
        let mut perms = Vec::new();
        for n in 1..=tables.n_max() {
            for m in 1..=tables.m_n(n) {
                perms.push(Permutation::identity(tables.d(n, m) as usize));
            }
        }
        ProductImage { perms, inf: WreathElement::identity() }
    }

    pub fn of_word(word: &Word, tables: &ParameterTables) -> Self {
        let mut perms = Vec::new();
        for n in 1..=tables.n_max() {
            for m in 1..=tables.m_n(n) {
                perms.push(evaluate_at_coordinate(word, tables.d(n, m), tables.r(n)));
            }
        }
        ProductImage { perms, inf: word.evaluate(&alpha_inf(), &beta_inf()) }
    }

    pub fn multiply(&self, other: &ProductImage) -> ProductImage {
        let perms = self
            .perms
            .iter()
            .zip(&other.perms)
            .map(|(p, q)| p.compose(q))
            .collect();
        ProductImage { perms, inf: self.inf.multiply(&other.inf) }
    }

    pub fn inverse(&self) -> ProductImage {
        ProductImage {
            perms: self.perms.iter().map(Permutation::inverse).collect(),
            inf: self.inf.inverse(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.inf.is_identity() && self.perms.iter().all(Permutation::is_identity)
    }

    /// c self c^-1 where c is `by`.
    pub fn conjugated_by(&self, by: &ProductImage) -> ProductImage {
        by.multiply(self).multiply(&by.inverse())
    }

    /// Order-insensitive fingerprint used to intersect large conjugate sets
    /// without keeping the images around. Two FNV-1a streams with different
    /// salts; a collision would need both to agree, so at the scales the
    /// oracle runs (tens of millions of digests) a false match is negligible,
    /// and any such fluke would surface as a decider disagreement anyway.
    pub fn digest(&self) -> u128 {
        let mut bytes = Vec::new();
        for p in &self.perms {
            bytes.extend_from_slice(&(p.degree() as u32).to_le_bytes());
            for &i in p.images() {
                bytes.extend_from_slice(&i.to_le_bytes());
            }
        }
        bytes.extend_from_slice(&self.inf.shift().to_le_bytes());
        for (&x, &v) in self.inf.support() {
            bytes.extend_from_slice(&x.to_le_bytes());
            bytes.push(v);
        }
        let lo = fnv1a(0xcbf2_9ce4_8422_2325, &bytes);
        let hi = fnv1a(0x6c62_272e_07bb_0142, &bytes);
        ((hi as u128) << 64) | lo as u128
    }
}

fn fnv1a(offset: u64, bytes: &[u8]) -> u64 {
    let mut h = offset;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Distinct images of all words of length at most `radius`, breadth-first;
/// index 0 is the identity and the order is reproducible.
pub fn ball_images(tables: &ParameterTables, radius: u64) -> Vec<ProductImage> {
    let a = ProductImage::of_word(&"a".parse().unwrap(), tables);
    let b = ProductImage::of_word(&"b".parse().unwrap(), tables);
    let gens = [a.inverse(), b.inverse(), a, b];

    let mut seen = HashSet::new();
    let mut out = vec![ProductImage::identity(tables)];
    seen.insert(out[0].clone());
    let mut frontier = out.clone();
    for _ in 0..radius {
        let mut next = Vec::new();
        for e in &frontier {
            for g in &gens {
                let img = e.multiply(g);
                if seen.insert(img.clone()) {
                    next.push(img);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Conjugacy by exhaustion: element i and element j are reported conjugate
/// when some c in the conjugator ball has c e_i c^-1 = e_j, checked by
/// intersecting the digest sets of {c e_i c^-1} and {c^-1 e_j c}. With the
/// ball closed under inversion the two formulations agree; splitting per side
/// halves the conjugator length needed to reach a given total.
pub struct ConjugacyOracle {
    up: Vec<Vec<u128>>,
    down: Vec<Vec<u128>>,
}

impl ConjugacyOracle {
    pub fn new(elements: &[ProductImage], conjugators: &[ProductImage]) -> Self {
        let inverses: Vec<ProductImage> = conjugators.iter().map(ProductImage::inverse).collect();
        let mut up = Vec::with_capacity(elements.len());
        let mut down = Vec::with_capacity(elements.len());
        for e in elements {
            let mut ups = Vec::with_capacity(conjugators.len());
            let mut downs = Vec::with_capacity(conjugators.len());
            for (c, cinv) in conjugators.iter().zip(&inverses) {
                ups.push(c.multiply(e).multiply(cinv).digest());
                downs.push(cinv.multiply(e).multiply(c).digest());
            }
            ups.sort_unstable();
            ups.dedup();
            downs.sort_unstable();
            downs.dedup();
            up.push(ups);
            down.push(downs);
        }
        ConjugacyOracle { up, down }
    }

    /// True when c1 e_i c1^-1 = c2^-1 e_j c2 for some pair of conjugators,
    /// i.e. (c2 c1) e_i (c2 c1)^-1 = e_j.
    pub fn conjugate_within(&self, i: usize, j: usize) -> bool {
        sorted_intersect(&self.up[i], &self.down[j])
    }
}

fn sorted_intersect(a: &[u128], b: &[u128]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Wreath conjugacy restricted to conjugators (h, s) with |s| <= window and
/// supp(h) inside [-window, window]. Exact for that restricted question: for
/// each shift the corrector h is forced (per-class partial sums), so it is
/// enough to read it off and test whether it fits the window.
pub fn wreath_conjugate_bounded(e1: &WreathElement, e2: &WreathElement, window: i64) -> bool {
    if e1.shift() != e2.shift() {
        return false;
    }
    let t = e1.shift();
    if t == 0 {
        return match wreath::translation_offset(e1, e2) {
            Some(s) => s.abs() <= window,
            None => false,
        };
    }
    let modulus = t.unsigned_abs() as i64;
    for s in -window..=window {
        // u = g - tau_s f, the defect the corrector must absorb.
        let mut u: BTreeMap<i64, u8> = e2.support().clone();
        for (&x, &v) in e1.support() {
            let y = x + s;
            let nv = (u.get(&y).copied().unwrap_or(0) + 3 - v) % 3;
            if nv == 0 {
                u.remove(&y);
            } else {
                u.insert(y, nv);
            }
        }
        let mut sums: BTreeMap<i64, u8> = BTreeMap::new();
        for (&x, &v) in &u {
            let e = sums.entry(x.rem_euclid(modulus)).or_insert(0);
            *e = (*e + v) % 3;
        }
        if sums.values().any(|&v| v != 0) {
            continue;
        }
        let h = wreath::solve_band(&u, t);
        if h.keys().all(|&x| -window <= x && x <= window) {
            let c = WreathElement::from_support(h, s);
            debug_assert_eq!(c.multiply(e1).multiply(&c.inverse()), *e2);
            return true;
        }
    }
    false
}
