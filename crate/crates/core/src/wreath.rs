//! The restricted wreath product Z_3 wr Z and its finite folds Z_3 wr Z_k.
//!
//! An element is a finitely supported function Z -> Z_3 plus an integer
//! shift, multiplied by `(f,t)(g,s) = (f + tau_t g, t+s)` where
//! `(tau_t g)(x) = g(x-t)`. Conjugacy is decided by an invariant rather than
//! search: conjugating `(f,t)` by `(h,s)` yields `(h + tau_s f - tau_t h, t)`,
//! and for `t != 0` the sums of `f` over residue classes mod |t| are unchanged
//! by the `h` part and cyclically rotated by `s`. For `t = 0` conjugation can
//! only translate the support. The same invariant, with residues taken mod
//! gcd(t, k), decides conjugacy in the fold Z_3 wr Z_k.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::words::{Gen, GroupElement, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WreathError {
    #[error("class sums are only defined for a nonzero shift")]
    ZeroShift,
}

/// Element of Z_3 wr Z. Support values are 1 or 2; zeros are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct WreathElement {
    support: BTreeMap<i64, u8>,
    shift: i64,
}

impl WreathElement {
    pub fn identity() -> Self {
        WreathElement::default()
    }

    pub fn from_support<I: IntoIterator<Item = (i64, u8)>>(support: I, shift: i64) -> Self {
        let mut e = WreathElement {
            support: BTreeMap::new(),
            shift,
        };
        for (x, v) in support {
            e.add_at(x, v);
        }
        e
    }

    fn add_at(&mut self, x: i64, v: u8) {
        let v = v % 3;
        if v == 0 {
            return;
        }
        let entry = self.support.entry(x).or_insert(0);
        *entry = (*entry + v) % 3;
        if *entry == 0 {
            self.support.remove(&x);
        }
    }

    pub fn support(&self) -> &BTreeMap<i64, u8> {
        &self.support
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn multiply(&self, other: &WreathElement) -> WreathElement {
        let mut out = self.clone();
        out.shift = self.shift + other.shift;
        for (&x, &v) in &other.support {
            out.add_at(x + self.shift, v);
        }
        out
    }

    pub fn inverse(&self) -> WreathElement {
        let mut out = WreathElement {
            support: BTreeMap::new(),
            shift: -self.shift,
        };
        for (&x, &v) in &self.support {
            out.add_at(x - self.shift, 3 - v);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.support.is_empty()
    }

    /// Sums of the support over residue classes mod |shift|.
    pub fn class_sums(&self) -> Result<Vec<u8>, WreathError> {
        if self.shift == 0 {
            return Err(WreathError::ZeroShift);
        }
        let t = self.shift.unsigned_abs() as usize;
        let mut sums = vec![0u8; t];
        for (&x, &v) in &self.support {
            let i = x.rem_euclid(self.shift.abs()) as usize;
            sums[i] = (sums[i] + v) % 3;
        }
        Ok(sums)
    }

    /// Fold positions mod k and the shift mod k. A homomorphism onto
    /// Z_3 wr Z_k.
    pub fn project_mod_k(&self, k: usize) -> FiniteWreathElement {
        assert!(k >= 1, "fold modulus must be positive");
        let mut values = vec![0u8; k];
        for (&x, &v) in &self.support {
            let i = x.rem_euclid(k as i64) as usize;
            values[i] = (values[i] + v) % 3;
        }
        FiniteWreathElement {
            values,
            shift: self.shift.rem_euclid(k as i64) as usize,
        }
    }
}

/// The shift generator: empty support, shift 1.
pub fn alpha_inf() -> WreathElement {
    WreathElement::from_support([], 1)
}

/// The lamp generator: value 1 at position 0, shift 0.
pub fn beta_inf() -> WreathElement {
    WreathElement::from_support([(0, 1)], 0)
}

impl GroupElement for WreathElement {
    fn identity_like(&self) -> Self {
        WreathElement::identity()
    }

    fn combine(&self, other: &Self) -> Self {
        self.multiply(other)
    }

    fn inverse(&self) -> Self {
        WreathElement::inverse(self)
    }

    fn is_identity(&self) -> bool {
        WreathElement::is_identity(self)
    }
}

impl fmt::Display for WreathElement {
    /// `(0:1, 3:2 | 1)`: position:value pairs, then the shift.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (x, v)) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}:{v}")?;
        }
        write!(f, " | {})", self.shift)
    }
}

impl fmt::Debug for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Wreath{self}")
    }
}

fn rotations_match(cs1: &[u8], cs2: &[u8]) -> Option<usize> {
    let t = cs1.len();
    (0..t).find(|&s| (0..t).all(|i| cs2[i] == cs1[(i + t - s) % t]))
}

/// The unique finitely supported h with h - tau_t h = u, for t > 0 given as
/// per-class marching. Caller guarantees every class of u sums to zero.
pub(crate) fn solve_band(u: &BTreeMap<i64, u8>, t: i64) -> BTreeMap<i64, u8> {
    if t < 0 {
        // h - tau_t h = u  <=>  h - tau_{-t} h = u' with u'(y) = -u(y + t).
        let flipped: BTreeMap<i64, u8> = u.iter().map(|(&x, &v)| (x - t, 3 - v)).collect();
        return solve_band(&flipped, -t);
    }
    let mut classes: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for &x in u.keys() {
        classes.entry(x.rem_euclid(t)).or_default().push(x);
    }
    let mut h = BTreeMap::new();
    for xs in classes.values() {
        let (first, last) = (xs[0], *xs.last().expect("nonempty class"));
        let mut running = 0u8;
        let mut x = first;
        while x <= last {
            running = (running + u.get(&x).copied().unwrap_or(0)) % 3;
            if running != 0 {
                h.insert(x, running);
            }
            x += t;
        }
        debug_assert_eq!(running, 0, "class sums must vanish");
    }
    h
}

pub fn is_conjugate_wreath(e1: &WreathElement, e2: &WreathElement) -> bool {
    if e1.shift != e2.shift {
        return false;
    }
    if e1.shift == 0 {
        return translation_offset(e1, e2).is_some();
    }
    let cs1 = e1.class_sums().expect("nonzero shift");
    let cs2 = e2.class_sums().expect("nonzero shift");
    rotations_match(&cs1, &cs2).is_some()
}

pub(crate) fn translation_offset(e1: &WreathElement, e2: &WreathElement) -> Option<i64> {
    if e1.support.len() != e2.support.len() {
        return None;
    }
    if e1.support.is_empty() {
        return Some(0);
    }
    let s = e2.support.keys().next().unwrap() - e1.support.keys().next().unwrap();
    let translated: BTreeMap<i64, u8> = e1.support.iter().map(|(&x, &v)| (x + s, v)).collect();
    (translated == e2.support).then_some(s)
}

/// A conjugator c with c e1 c^-1 = e2, or None. The witness is (h, s) where s
/// realizes the class-sum rotation (a plain translation when the shift is
/// zero) and h repairs the base part.
pub fn find_conjugator_wreath(e1: &WreathElement, e2: &WreathElement) -> Option<WreathElement> {
    if e1.shift != e2.shift {
        return None;
    }
    let t = e1.shift;
    if t == 0 {
        let s = translation_offset(e1, e2)?;
        return Some(WreathElement::from_support([], s));
    }
    let cs1 = e1.class_sums().expect("nonzero shift");
    let cs2 = e2.class_sums().expect("nonzero shift");
    let s = rotations_match(&cs1, &cs2)? as i64;
    // Need h - tau_t h = e2 - tau_s e1 on the base.
    let mut u = WreathElement::from_support([], 0);
    for (&x, &v) in &e2.support {
        u.add_at(x, v);
    }
    for (&x, &v) in &e1.support {
        u.add_at(x + s, 3 - v);
    }
    let h = solve_band(&u.support, t);
    let c = WreathElement { support: h, shift: s };
    debug_assert_eq!(&c.multiply(e1).multiply(&c.inverse()), e2);
    Some(c)
}

/// Express an element as a word in the standard generators:
/// product of a^x b^v a^-x over the support, then a^shift.
pub fn element_to_word(e: &WreathElement) -> Word {
    let mut blocks = Vec::new();
    for (&x, &v) in &e.support {
        blocks.push((Gen::A, x));
        blocks.push((Gen::B, v as i64));
        blocks.push((Gen::A, -x));
    }
    blocks.push((Gen::A, e.shift));
    Word::from_blocks(blocks)
}

/// Element of the fold Z_3 wr Z_k; modulus is the length of `values`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteWreathElement {
    values: Vec<u8>,
    shift: usize,
}

impl FiniteWreathElement {
    pub fn identity(k: usize) -> Self {
        assert!(k >= 1);
        FiniteWreathElement {
            values: vec![0; k],
            shift: 0,
        }
    }

    pub fn from_parts(values: Vec<u8>, shift: usize) -> Self {
        assert!(!values.is_empty());
        let k = values.len();
        FiniteWreathElement {
            values: values.into_iter().map(|v| v % 3).collect(),
            shift: shift % k,
        }
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn multiply(&self, other: &FiniteWreathElement) -> FiniteWreathElement {
        let k = self.modulus();
        assert_eq!(k, other.modulus(), "modulus mismatch");
        let mut values = self.values.clone();
        for (x, &v) in other.values.iter().enumerate() {
            let i = (x + self.shift) % k;
            values[i] = (values[i] + v) % 3;
        }
        FiniteWreathElement {
            values,
            shift: (self.shift + other.shift) % k,
        }
    }

    pub fn inverse(&self) -> FiniteWreathElement {
        let k = self.modulus();
        let mut values = vec![0u8; k];
        for (x, &v) in self.values.iter().enumerate() {
            values[(x + k - self.shift) % k] = (3 - v) % 3;
        }
        FiniteWreathElement {
            values,
            shift: (k - self.shift) % k,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.values.iter().all(|&v| v == 0)
    }
}

impl GroupElement for FiniteWreathElement {
    fn identity_like(&self) -> Self {
        FiniteWreathElement::identity(self.modulus())
    }

    fn combine(&self, other: &Self) -> Self {
        self.multiply(other)
    }

    fn inverse(&self) -> Self {
        FiniteWreathElement::inverse(self)
    }

    fn is_identity(&self) -> bool {
        FiniteWreathElement::is_identity(self)
    }
}

impl fmt::Debug for FiniteWreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteWreath[{:?} | {}]", self.values, self.shift)
    }
}

/// Order of Z_3 wr Z_k: 3^k * k.
pub fn finite_wreath_order(k: usize) -> BigUint {
    BigUint::from(3u32).pow(k as u32) * BigUint::from(k)
}

/// Conjugacy in the fold. Shifts must agree, and the class sums taken mod
/// gcd(shift, k) must agree up to a cyclic rotation; rotations arise from the
/// shift part of a conjugator, which acts on residues mod the gcd.
pub fn is_conjugate_finite(q1: &FiniteWreathElement, q2: &FiniteWreathElement) -> bool {
    let k = q1.modulus();
    assert_eq!(k, q2.modulus(), "modulus mismatch");
    if q1.shift != q2.shift {
        return false;
    }
    let g = gcd(q1.shift, k);
    let sums = |q: &FiniteWreathElement| {
        let mut cs = vec![0u8; g];
        for (x, &v) in q.values.iter().enumerate() {
            cs[x % g] = (cs[x % g] + v) % 3;
        }
        cs
    };
    rotations_match(&sums(q1), &sums(q2)).is_some()
}

fn gcd(a: usize, b: usize) -> usize {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}
