//! Reduced words over two generators, and their evaluation in any group.
//!
//! A word is stored as a run of blocks `(generator, nonzero exponent)` with
//! adjacent blocks on distinct generators; constructors reduce eagerly, so a
//! `Word` is always in normal form and word length is just the sum of the
//! absolute exponents. Evaluation substitutes images for `a` and `b` and uses
//! fast exponentiation per block, which matters once tables hand us exponents
//! the size of the coordinate degree.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse word token {0:?}")]
    Parse(String),
    #[error("w_word requires d > 3r, got r={r} d={d}")]
    ParameterViolation { r: u64, d: u64 },
}

/// Minimal group interface for word evaluation. `identity_like` exists so
/// carriers with runtime shape (a permutation degree, a folding modulus) can
/// produce a compatible identity.
pub trait GroupElement: Clone + PartialEq {
    fn identity_like(&self) -> Self;
    fn combine(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;

    fn pow(&self, exp: i64) -> Self {
        let (mut base, mut e) = if exp < 0 {
            (self.inverse(), exp.unsigned_abs())
        } else {
            (self.clone(), exp as u64)
        };
        let mut acc = self.identity_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.combine(&base);
            }
            if e > 1 {
                base = base.combine(&base);
            }
            e >>= 1;
        }
        acc
    }

    fn is_identity(&self) -> bool {
        *self == self.identity_like()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Gen {
    A,
    B,
}

/// A reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    blocks: Vec<(Gen, i64)>,
}

fn push_block(blocks: &mut Vec<(Gen, i64)>, gen: Gen, exp: i64) {
    if exp == 0 {
        return;
    }
    if let Some(last) = blocks.last_mut() {
        if last.0 == gen {
            last.1 += exp;
            if last.1 == 0 {
                blocks.pop();
            }
            return;
        }
    }
    blocks.push((gen, exp));
}

impl Word {
    pub fn empty() -> Self {
        Word { blocks: Vec::new() }
    }

    /// Reduce an arbitrary block sequence; cancellation cascades.
    pub fn from_blocks<I: IntoIterator<Item = (Gen, i64)>>(iter: I) -> Self {
        let mut blocks = Vec::new();
        for (gen, exp) in iter {
            push_block(&mut blocks, gen, exp);
        }
        Word { blocks }
    }

    pub fn blocks(&self) -> &[(Gen, i64)] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Word length: sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.blocks.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut blocks = self.blocks.clone();
        for &(gen, exp) in &other.blocks {
            push_block(&mut blocks, gen, exp);
        }
        Word { blocks }
    }

    pub fn inverse(&self) -> Word {
        Word {
            blocks: self.blocks.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    /// u v u^-1 v^-1.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.multiply(v).multiply(&u.inverse()).multiply(&v.inverse())
    }

    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.multiply(self).multiply(&u.inverse())
    }

    pub fn evaluate<T: GroupElement>(&self, a: &T, b: &T) -> T {
        let mut acc = a.identity_like();
        for &(gen, exp) in &self.blocks {
            let img = match gen {
                Gen::A => a,
                Gen::B => b,
            };
            acc = acc.combine(&img.pow(exp));
        }
        acc
    }

    /// All freely reduced words of length at most `max_len`, shortest first.
    /// Within a length the order is the lexicographic extension order over
    /// the letters a, a^-1, b, b^-1, so the listing is stable across runs.
    /// Counts are 1, 4, 12, 36, ... (4 * 3^(L-1) words of each exact length).
    pub fn enumerate_reduced(max_len: u64) -> Vec<Word> {
        const LETTERS: [(Gen, i64); 4] = [(Gen::A, 1), (Gen::A, -1), (Gen::B, 1), (Gen::B, -1)];
        let mut out = vec![Word::empty()];
        let mut frontier: Vec<Vec<(Gen, i64)>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for stem in &frontier {
                for &(gen, sign) in &LETTERS {
                    if let Some(&(last_gen, last_sign)) = stem.last() {
                        if last_gen == gen && last_sign == -sign {
                            continue;
                        }
                    }
                    let mut letters = stem.clone();
                    letters.push((gen, sign));
                    out.push(Word::from_blocks(letters.iter().copied()));
                    next.push(letters);
                }
            }
            frontier = next;
        }
        out
    }
}

impl fmt::Display for Word {
    /// `a^3 b^-1 a^7`; unit exponents print bare; the empty word prints `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "e");
        }
        for (i, &(gen, exp)) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let letter = match gen {
                Gen::A => 'a',
                Gen::B => 'b',
            };
            if exp == 1 {
                write!(f, "{letter}")?;
            } else {
                write!(f, "{letter}^{exp}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{self}]")
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        let mut blocks = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "e" {
                continue;
            }
            let (letter, exp) = match tok.split_once('^') {
                None => (tok, 1i64),
                Some((base, e)) => (
                    base,
                    e.parse::<i64>().map_err(|_| WordError::Parse(tok.to_string()))?,
                ),
            };
            let gen = match letter {
                "a" => Gen::A,
                "b" => Gen::B,
                _ => return Err(WordError::Parse(tok.to_string())),
            };
            push_block(&mut blocks, gen, exp);
        }
        Ok(Word { blocks })
    }
}

/// v_r = [a^r b^-1 a^-r, b^-1], the commutator that separates one table row
/// from all the others. Reduced length 4r+4 for r >= 1.
pub fn v_word(r: u64) -> Word {
    let r = r as i64;
    Word::from_blocks([
        (Gen::A, r),
        (Gen::B, -1),
        (Gen::A, -r),
        (Gen::B, -1),
        (Gen::A, r),
        (Gen::B, 1),
        (Gen::A, -r),
        (Gen::B, 1),
    ])
}

/// w_{r,d} = [a^{d-3r} v_r a^{-(d-3r)}, v_r]. Needs d > 3r so the shift is
/// positive.
pub fn w_word(r: u64, d: u64) -> Result<Word, WordError> {
    if d <= 3 * r {
        return Err(WordError::ParameterViolation { r, d });
    }
    let shift = Word::from_blocks([(Gen::A, (d - 3 * r) as i64)]);
    let v = v_word(r);
    Ok(Word::commutator(&v.conjugate_by(&shift), &v))
}

/// g1 = a^3 b^-1 v_r b^-1.
pub fn g1_word(r: u64) -> Word {
    Word::from_blocks([(Gen::A, 3), (Gen::B, -1)])
        .multiply(&v_word(r))
        .multiply(&Word::from_blocks([(Gen::B, -1)]))
}

/// g2 = a^3 b v_r.
pub fn g2_word(r: u64) -> Word {
    Word::from_blocks([(Gen::A, 3), (Gen::B, 1)]).multiply(&v_word(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{make_alpha, make_beta};

    #[test]
    fn reduction_cancels_and_cascades() {
        let w = Word::from_blocks([(Gen::A, 3), (Gen::A, -3)]);
        assert!(w.is_empty());
        // a^2 b b^-1 a^-2 collapses to nothing.
        let w = Word::from_blocks([(Gen::A, 2), (Gen::B, 1), (Gen::B, -1), (Gen::A, -2)]);
        assert!(w.is_empty());
        assert_eq!(w.length(), 0);
    }

    #[test]
    fn enumeration_counts_and_stays_reduced() {
        // 1 + 4 + 12 + 36 + 108 words of length <= 4, no duplicates.
        let words = Word::enumerate_reduced(4);
        assert_eq!(words.len(), 161);
        let mut seen = std::collections::BTreeSet::new();
        for w in &words {
            assert!(w.length() <= 4);
            assert!(seen.insert(w.to_string()), "duplicate {w}");
        }
        assert_eq!(words[0], Word::empty());
        // Exact-length counts match the 4 * 3^(L-1) formula.
        for len in 1..=4u64 {
            let count = words.iter().filter(|w| w.length() == len).count() as u64;
            assert_eq!(count, 4 * 3u64.pow(len as u32 - 1));
        }
    }

    #[test]
    fn multiply_reduces_at_the_seam() {
        let u: Word = "a^2 b".parse().unwrap();
        let v: Word = "b^-1 a".parse().unwrap();
        assert_eq!(u.multiply(&v).to_string(), "a^3");
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let u: Word = "a^2 b^-1 a".parse().unwrap();
        assert_eq!(u.inverse().to_string(), "a^-1 b a^-2");
        assert!(u.multiply(&u.inverse()).is_empty());
    }

    #[test]
    fn commutator_of_generators() {
        let a: Word = "a".parse().unwrap();
        let b: Word = "b".parse().unwrap();
        let c = Word::commutator(&a, &b);
        assert_eq!(c.to_string(), "a b a^-1 b^-1");
        assert_eq!(c.length(), 4);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["a^3 b^-1 a^7", "b a b^-1", "e", "a^-4"] {
            let w: Word = s.parse().unwrap();
            assert_eq!(w.to_string(), s);
        }
        // Unreduced input parses to reduced form.
        let w: Word = "a a a b b^-1 a^-1".parse().unwrap();
        assert_eq!(w.to_string(), "a^2");
        assert!("c^2".parse::<Word>().is_err());
        assert!("a^x".parse::<Word>().is_err());
    }

    #[test]
    fn family_lengths() {
        for r in [1u64, 7, 25] {
            assert_eq!(v_word(r).length(), 4 * r + 4);
            assert_eq!(g1_word(r).length(), 4 * r + 7);
            assert_eq!(g2_word(r).length(), 4 * r + 8);
        }
        assert!(v_word(0).is_empty());
    }

    #[test]
    fn w_word_needs_room_for_the_shift() {
        assert!(w_word(7, 31).is_ok());
        assert_eq!(
            w_word(7, 21),
            Err(WordError::ParameterViolation { r: 7, d: 21 })
        );
    }

    #[test]
    fn evaluate_matches_direct_computation() {
        let alpha = make_alpha(5);
        let w: Word = "a^-1".parse().unwrap();
        let beta = make_beta(1, 5).unwrap();
        assert_eq!(w.evaluate(&alpha, &beta), alpha.inverse());
        let w: Word = "a^7".parse().unwrap();
        assert_eq!(w.evaluate(&alpha, &beta), alpha.pow(7));
        let w = Word::commutator(&"a".parse().unwrap(), &"b".parse().unwrap());
        let expect = alpha
            .compose(&beta)
            .compose(&alpha.inverse())
            .compose(&beta.inverse());
        assert_eq!(w.evaluate(&alpha, &beta), expect);
    }

    #[test]
    fn v_word_image_is_a_double_transposition() {
        // v evaluates to (0 3r)(r 2r) whenever 4r < d.
        let (r, d) = (7u64, 31usize);
        let img = v_word(r).evaluate(&make_alpha(d), &make_beta(r, d).unwrap());
        let r = r as usize;
        assert_eq!(img.apply(0), 3 * r);
        assert_eq!(img.apply(3 * r), 0);
        assert_eq!(img.apply(r), 2 * r);
        assert_eq!(img.apply(2 * r), r);
        assert_eq!(img.cycle_type().lengths, vec![2, 2]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_word(max_blocks: usize, max_exp: i64) -> impl Strategy<Value = Word> {
            prop::collection::vec(
                (prop::bool::ANY, -max_exp..=max_exp),
                0..max_blocks,
            )
            .prop_map(|raw| {
                Word::from_blocks(
                    raw.into_iter()
                        .map(|(is_a, e)| (if is_a { Gen::A } else { Gen::B }, e)),
                )
            })
        }

        proptest! {
            #[test]
            fn evaluation_is_a_homomorphism(u in arb_word(8, 6), v in arb_word(8, 6)) {
                let alpha = make_alpha(11);
                let beta = make_beta(2, 11).unwrap();
                let lhs = u.multiply(&v).evaluate(&alpha, &beta);
                let rhs = u.evaluate(&alpha, &beta).compose(&v.evaluate(&alpha, &beta));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn inverse_evaluates_to_inverse(u in arb_word(8, 6)) {
                let alpha = make_alpha(11);
                let beta = make_beta(2, 11).unwrap();
                let lhs = u.inverse().evaluate(&alpha, &beta);
                prop_assert_eq!(lhs, u.evaluate(&alpha, &beta).inverse());
            }

            #[test]
            fn reduction_is_idempotent(u in arb_word(10, 5)) {
                let again = Word::from_blocks(u.blocks().iter().copied());
                prop_assert_eq!(&again, &u);
                // Round trip through text as well.
                let parsed: Word = u.to_string().parse().unwrap();
                prop_assert_eq!(parsed, u);
            }
        }
    }
}
