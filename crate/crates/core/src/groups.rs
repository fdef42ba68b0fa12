//! The truncated two-generator groups: lazy coordinate projections and the
//! locality-based word-problem and conjugacy deciders.
//!
//! An element is a reduced word w. Its image at coordinate (n,m) is
//! w(alpha_d, beta_{r,d}) with d = d(n,m), r = r(n); its infinity image is
//! w(alpha_inf, beta_inf). A word of length L acts trivially at every
//! coordinate with r >= 2L+1 and d - 2r >= 2L+1 exactly when its infinity
//! image is trivial, so triviality is decided by the infinity coordinate
//! plus the finite complement of that condition (the sensitive set).
//! Conjugacy reduces the same way after absorbing a wreath conjugator.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::params::{validate, ParameterTables};
use crate::perm::{find_conjugator_alt, Permutation};
use crate::words::{Gen, Word};
use crate::wreath::{alpha_inf, beta_inf, element_to_word, find_conjugator_wreath, WreathElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("row {n} has depth {m_n}; nothing to delete")]
    CannotDelete { n: u32, m_n: u32 },
    #[error("tables invalid after deleting top of row {n}: {reason}")]
    InvalidAfterDelete { n: u32, reason: String },
}

/// Evaluate a word at the coordinate with modulus d and offset r. Exponent
/// blocks become permutations directly (a^e is a rotation table, b^e moves
/// three points), so the cost is O(blocks * d) rather than repeated-squaring
/// compositions.
pub fn evaluate_at_coordinate(word: &Word, d: u64, r: u64) -> Permutation {
    let du = d as usize;
    let mut acc = Permutation::identity(du);
    for &(gen, e) in word.blocks() {
        let block = match gen {
            Gen::A => {
                let shift = e.rem_euclid(d as i64) as u64;
                Permutation::from_images(
                    (0..d).map(|x| ((x + shift) % d) as u32).collect(),
                )
                .expect("rotation is a bijection")
            }
            Gen::B => {
                let pts = [0, (r % d) as u32, (2 * r % d) as u32];
                let e3 = e.rem_euclid(3) as usize;
                let mut images: Vec<u32> = (0..d as u32).collect();
                for i in 0..3 {
                    images[pts[i] as usize] = pts[(i + e3) % 3];
                }
                Permutation::from_images(images).expect("three-point cycle is a bijection")
            }
        };
        acc = acc.compose(&block);
    }
    acc
}

/// Image of a single point under the word's coordinate action, walking the
/// blocks right to left. O(blocks), no tables.
pub fn point_image_at_coordinate(word: &Word, d: u64, r: u64, x: u64) -> u64 {
    let pts = [0, r % d, 2 * r % d];
    let mut x = x;
    for &(gen, e) in word.blocks().iter().rev() {
        match gen {
            Gen::A => {
                x = (x + e.rem_euclid(d as i64) as u64) % d;
            }
            Gen::B => {
                if let Some(i) = pts.iter().position(|&p| p == x) {
                    x = pts[(i + e.rem_euclid(3) as usize) % 3];
                }
            }
        }
    }
    x
}

/// Whether the word acts trivially at the coordinate; stops at the first
/// moved point.
pub fn word_trivial_at_coordinate(word: &Word, d: u64, r: u64) -> bool {
    (0..d).all(|x| point_image_at_coordinate(word, d, r, x) == x)
}

/// Coordinates (n,m) failing r >= threshold and d - 2r >= threshold; only
/// these can disagree with the infinity coordinate for words the threshold
/// covers.
pub fn sensitive_coords(tables: &ParameterTables, threshold: u64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for n in 1..=tables.n_max() {
        let r = tables.r(n);
        for m in 1..=tables.m_n(n) {
            let d = tables.d(n, m);
            let headroom = d as i128 - 2 * r as i128;
            if (r as i128) < threshold as i128 || headroom < threshold as i128 {
                out.push((n, m));
            }
        }
    }
    out
}

/// A group element given by its defining word, with lazily filled
/// coordinate images.
pub struct TruncatedElement<'a> {
    word: Word,
    tables: &'a ParameterTables,
    perm_cache: Mutex<BTreeMap<(u32, u32), Arc<Permutation>>>,
    inf_cache: OnceLock<WreathElement>,
}

impl<'a> TruncatedElement<'a> {
    pub fn new(word: Word, tables: &'a ParameterTables) -> Self {
        TruncatedElement {
            word,
            tables,
            perm_cache: Mutex::new(BTreeMap::new()),
            inf_cache: OnceLock::new(),
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// Image at coordinate (n,m); m is clamped to m_n since rows stabilize.
    pub fn projection(&self, n: u32, m: u32) -> Arc<Permutation> {
        assert!(
            (1..=self.tables.n_max()).contains(&n),
            "coordinate row {n} outside 1..={}",
            self.tables.n_max()
        );
        let m = m.clamp(1, self.tables.m_n(n));
        let mut cache = self.perm_cache.lock().expect("cache lock");
        cache
            .entry((n, m))
            .or_insert_with(|| {
                Arc::new(evaluate_at_coordinate(
                    &self.word,
                    self.tables.d(n, m),
                    self.tables.r(n),
                ))
            })
            .clone()
    }

    pub fn projection_inf(&self) -> &WreathElement {
        self.inf_cache
            .get_or_init(|| self.word.evaluate(&alpha_inf(), &beta_inf()))
    }
}

/// Word problem. The infinity image must vanish, and so must the images at
/// the sensitive coordinates for threshold 2L+1; all other coordinates
/// follow the infinity answer.
pub fn is_identity_element(word: &Word, tables: &ParameterTables) -> bool {
    let e = TruncatedElement::new(word.clone(), tables);
    if !e.projection_inf().is_identity() {
        return false;
    }
    let threshold = 2 * word.length() + 1;
    sensitive_coords(tables, threshold)
        .iter()
        .all(|&(n, m)| word_trivial_at_coordinate(word, tables.d(n, m), tables.r(n)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyDecision {
    pub conjugate: bool,
    /// A word conjugating the first element to the second, when one can be
    /// assembled from the wreath conjugator alone. Conjugacy that also needs
    /// per-coordinate corrections is still reported true, without a witness.
    pub witness: Option<Word>,
}

impl ConjugacyDecision {
    fn no() -> Self {
        ConjugacyDecision {
            conjugate: false,
            witness: None,
        }
    }
}

/// Conjugacy. Step one: the infinity images must be conjugate; take a wreath
/// conjugator g_0 and its word w_0. Step two: u = w_0 w_1 w_0^-1 w_2^-1 has
/// trivial infinity image by construction, so at every coordinate the
/// threshold 2|u|+1 covers, the images of w_0 w_1 w_0^-1 and w_2 agree and
/// those coordinates are conjugate for free. Step three: decide Alt
/// conjugacy at the remaining (sensitive) coordinates directly.
pub fn is_conjugate_element(
    w1: &Word,
    w2: &Word,
    tables: &ParameterTables,
) -> ConjugacyDecision {
    let e1 = TruncatedElement::new(w1.clone(), tables);
    let e2 = TruncatedElement::new(w2.clone(), tables);
    let g0 = match find_conjugator_wreath(e1.projection_inf(), e2.projection_inf()) {
        Some(g0) => g0,
        None => return ConjugacyDecision::no(),
    };
    let w0 = element_to_word(&g0);
    let u = w0
        .multiply(w1)
        .multiply(&w0.inverse())
        .multiply(&w2.inverse());
    let threshold = 2 * u.length() + 1;
    for (n, m) in sensitive_coords(tables, threshold) {
        let p1 = e1.projection(n, m);
        let p2 = e2.projection(n, m);
        let witness = find_conjugator_alt(&p1, &p2)
            .expect("images of two-generator words are even permutations");
        if witness.is_none() {
            return ConjugacyDecision::no();
        }
    }
    let witness = is_identity_element(&u, tables).then_some(w0);
    ConjugacyDecision {
        conjugate: true,
        witness,
    }
}

/// Drop the stabilized top modulus of row n, so the row now stabilizes one
/// step earlier. The result is checked again (growth floor aside, removing
/// a modulus can only remove constraints).
pub fn delete_top_coordinate(
    tables: &ParameterTables,
    n: u32,
) -> Result<ParameterTables, GroupError> {
    let m_n = tables.m_n(n);
    if m_n < 2 {
        return Err(GroupError::CannotDelete { n, m_n });
    }
    let mut out = tables.clone();
    let row = &mut out.rows[n as usize - 1];
    row.d.pop();
    row.m_n -= 1;
    let report = validate(&out, true);
    if !report.all_passed() {
        return Err(GroupError::InvalidAfterDelete {
            n,
            reason: report.first_failure(),
        });
    }
    Ok(out)
}
