//! Permutations of {0, .., d-1} with the conjugacy machinery needed for
//! alternating groups.
//!
//! Composition acts on the left: `(p.compose(&q)).apply(x) == p.apply(q.apply(x))`.
//! Conjugation is `h p h^-1`. Alternating-group conjugacy uses the classical
//! splitting criterion: a symmetric-group class splits into two Alt classes
//! exactly when all cycle lengths (fixed points included) are distinct and odd,
//! and in that case every Sym-conjugator between two fixed elements has the
//! same parity.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("images do not form a bijection on 0..{degree}")]
    NotABijection { degree: usize },
    #[error("degenerate 3-cycle: 0, {r}, {two_r} are not pairwise distinct mod {d}")]
    DegenerateThreeCycle { r: u64, two_r: u64, d: u64 },
    #[error("permutation is not a single cycle of full length")]
    NotSingleCycle,
    #[error("expected an even permutation")]
    OddInput,
}

/// Dense image table. `images[x]` is where `x` goes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &y in &images {
            if (y as usize) >= d || seen[y as usize] {
                return Err(PermError::NotABijection { degree: d });
            }
            seen[y as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// Left-action composition: `self` after `other`.
    ///
    /// Panics on degree mismatch; mixing degrees is a programming error here,
    /// not a data condition.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.degree(),
            other.degree(),
            "degree mismatch in compose"
        );
        Permutation {
            images: other.images.iter().map(|&y| self.images[y as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u32;
        }
        Permutation { images }
    }

    /// `h self h^-1`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        h.compose(self).compose(&h.inverse())
    }

    /// Cycles of length >= 2, each starting at its smallest point, sorted by
    /// that point. Fixed points are omitted.
    pub fn cycle_decomposition(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut cycles = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut cycle = vec![start];
            let mut y = self.apply(start);
            while y != start {
                seen[y] = true;
                cycle.push(y);
                y = self.apply(y);
            }
            if cycle.len() >= 2 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Number of cycles counting fixed points as cycles of length 1.
    pub fn cycle_count(&self) -> usize {
        let moved = self.cycle_decomposition();
        let in_cycles: usize = moved.iter().map(|c| c.len()).sum();
        moved.len() + (self.degree() - in_cycles)
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut lengths: Vec<usize> = self
            .cycle_decomposition()
            .iter()
            .map(|c| c.len())
            .collect();
        lengths.sort_unstable();
        CycleType {
            degree: self.degree(),
            lengths,
        }
    }

    /// True for even permutations. Parity is (degree - cycle count) mod 2.
    pub fn is_even(&self) -> bool {
        (self.degree() - self.cycle_count()) % 2 == 0
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let (mut base, mut e) = if exp < 0 {
            (self.inverse(), exp.unsigned_abs())
        } else {
            (self.clone(), exp as u64)
        };
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, fixed points omitted: `(0 7 14)(1 2)`. Identity prints `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycle_decomposition();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{self}]")
    }
}

impl crate::words::GroupElement for Permutation {
    fn identity_like(&self) -> Self {
        Permutation::identity(self.degree())
    }

    fn combine(&self, other: &Self) -> Self {
        self.compose(other)
    }

    fn inverse(&self) -> Self {
        Permutation::inverse(self)
    }

    fn pow(&self, exp: i64) -> Self {
        Permutation::pow(self, exp)
    }

    fn is_identity(&self) -> bool {
        Permutation::is_identity(self)
    }
}

/// Multiset of cycle lengths >= 2 together with the degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleType {
    pub degree: usize,
    pub lengths: Vec<usize>,
}

impl CycleType {
    pub fn fixed_points(&self) -> usize {
        self.degree - self.lengths.iter().sum::<usize>()
    }

    /// All cycle lengths distinct and odd, fixed points counted as length 1.
    /// This is exactly the condition for the Sym class to split in Alt.
    pub fn splits_in_alt(&self) -> bool {
        if self.fixed_points() > 1 {
            return false;
        }
        let mut prev = if self.fixed_points() == 1 { Some(1) } else { None };
        for &len in &self.lengths {
            if len % 2 == 0 || Some(len) == prev {
                return false;
            }
            prev = Some(len);
        }
        true
    }
}

/// The d-cycle x -> x+1 mod d.
pub fn make_alpha(d: usize) -> Permutation {
    Permutation {
        images: (0..d as u32).map(|x| (x + 1) % d as u32).collect(),
    }
}

/// The 3-cycle (0, r, 2r) with entries taken mod d.
pub fn make_beta(r: u64, d: usize) -> Result<Permutation, PermError> {
    let b = r % d as u64;
    let c = (2 * r) % d as u64;
    if b == 0 || c == 0 || b == c {
        return Err(PermError::DegenerateThreeCycle { r, two_r: 2 * r, d: d as u64 });
    }
    let mut images: Vec<u32> = (0..d as u32).collect();
    images[0] = b as u32;
    images[b as usize] = c as u32;
    images[c as usize] = 0;
    Ok(Permutation { images })
}

/// A Sym-conjugator h with h p h^-1 = q, built by matching cycles of equal
/// length in a fixed order. Requires equal cycle types.
pub fn find_conjugator_sym(p: &Permutation, q: &Permutation) -> Option<Permutation> {
    assert_eq!(p.degree(), q.degree(), "degree mismatch in find_conjugator_sym");
    if p.cycle_type() != q.cycle_type() {
        return None;
    }
    let d = p.degree();
    let mut cp = all_cycles(p);
    let mut cq = all_cycles(q);
    // Stable order: by length, then by smallest point. Lengths match by type.
    cp.sort_by_key(|c| (c.len(), c[0]));
    cq.sort_by_key(|c| (c.len(), c[0]));
    let mut images = vec![u32::MAX; d];
    for (a, b) in cp.iter().zip(cq.iter()) {
        debug_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            images[*x] = *y as u32;
        }
    }
    let h = Permutation { images };
    debug_assert_eq!(&p.conjugate_by(&h), q);
    Some(h)
}

/// All cycles including fixed points, each rotated to start at its minimum.
fn all_cycles(p: &Permutation) -> Vec<Vec<usize>> {
    let d = p.degree();
    let mut seen = vec![false; d];
    let mut cycles = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut cycle = vec![start];
        let mut y = p.apply(start);
        while y != start {
            seen[y] = true;
            cycle.push(y);
            y = p.apply(y);
        }
        cycles.push(cycle);
    }
    cycles
}

/// An element of the centralizer of p that is odd, if one exists. There is
/// one exactly when the class of p does not split in Alt: either p has a
/// cycle of even length (that cycle itself is odd), or two cycles of the same
/// odd length (swapping them pointwise is a product of that many
/// transpositions).
fn odd_centralizer_element(p: &Permutation) -> Option<Permutation> {
    let d = p.degree();
    let mut cycles = all_cycles(p);
    for cycle in &cycles {
        if cycle.len() % 2 == 0 {
            let mut images: Vec<u32> = (0..d as u32).collect();
            for w in 0..cycle.len() {
                images[cycle[w]] = cycle[(w + 1) % cycle.len()] as u32;
            }
            return Some(Permutation { images });
        }
    }
    cycles.sort_by_key(|c| (c.len(), c[0]));
    for pair in cycles.windows(2) {
        if pair[0].len() == pair[1].len() {
            let mut images: Vec<u32> = (0..d as u32).collect();
            for (x, y) in pair[0].iter().zip(pair[1].iter()) {
                images[*x] = *y as u32;
                images[*y] = *x as u32;
            }
            return Some(Permutation { images });
        }
    }
    None
}

/// Even conjugator h with h p h^-1 = q, or None when p and q are not
/// conjugate in the alternating group. Errors if either input is odd.
pub fn find_conjugator_alt(
    p: &Permutation,
    q: &Permutation,
) -> Result<Option<Permutation>, PermError> {
    assert_eq!(p.degree(), q.degree(), "degree mismatch in find_conjugator_alt");
    if !p.is_even() || !q.is_even() {
        return Err(PermError::OddInput);
    }
    let ct = p.cycle_type();
    if ct != q.cycle_type() {
        return Ok(None);
    }
    let sigma = find_conjugator_sym(p, q).expect("equal cycle types");
    if sigma.is_even() {
        return Ok(Some(sigma));
    }
    if ct.splits_in_alt() {
        // Every Sym-conjugator has sigma's parity: the centralizer of p is
        // generated by its own (odd-length, hence even) cycles.
        return Ok(None);
    }
    let c = odd_centralizer_element(p).expect("non-split class has an odd centralizer element");
    let h = sigma.compose(&c);
    debug_assert!(h.is_even());
    debug_assert_eq!(&p.conjugate_by(&h), q);
    Ok(Some(h))
}

pub fn is_conjugate_alt(p: &Permutation, q: &Permutation) -> Result<bool, PermError> {
    Ok(find_conjugator_alt(p, q)?.is_some())
}

/// For p, q single cycles of full length: the unique conjugator h with
/// h(basepoint) = basepoint, determined by h(p^k b) = q^k b.
pub fn canonical_conjugator_single_cycle(
    p: &Permutation,
    q: &Permutation,
    basepoint: usize,
) -> Result<Permutation, PermError> {
    assert_eq!(p.degree(), q.degree(), "degree mismatch");
    let d = p.degree();
    if p.cycle_count() != 1 || q.cycle_count() != 1 {
        return Err(PermError::NotSingleCycle);
    }
    let mut images = vec![u32::MAX; d];
    let (mut x, mut y) = (basepoint, basepoint);
    for _ in 0..d {
        images[x] = y as u32;
        x = p.apply(x);
        y = q.apply(y);
    }
    Ok(Permutation { images })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[u32]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn alpha_is_the_shift_cycle() {
        let a = make_alpha(5);
        assert_eq!(a.apply(4), 0);
        assert_eq!(a.apply(0), 1);
        assert_eq!(a.to_string(), "(0 1 2 3 4)");
        assert_eq!(make_alpha(1), Permutation::identity(1));
    }

    #[test]
    fn beta_is_the_three_cycle() {
        let b = make_beta(7, 31).unwrap();
        assert_eq!(b.apply(0), 7);
        assert_eq!(b.apply(7), 14);
        assert_eq!(b.apply(14), 0);
        assert_eq!(b.apply(1), 1);
        assert!(b.is_even());
    }

    #[test]
    fn beta_rejects_degenerate_points() {
        // 2r = 4 = 0 mod 4.
        assert_eq!(
            make_beta(2, 4),
            Err(PermError::DegenerateThreeCycle { r: 2, two_r: 4, d: 4 })
        );
        assert!(make_beta(5, 5).is_err());
    }

    #[test]
    fn compose_acts_on_the_left() {
        let a = make_alpha(5);
        let b = make_beta(1, 5).unwrap();
        let ab = a.compose(&b);
        // b first, then a.
        assert_eq!(ab.apply(0), a.apply(b.apply(0)));
        assert_eq!(ab.apply(0), 2);
    }

    #[test]
    fn inverse_round_trips() {
        let p = perm(&[2, 0, 1, 4, 3]);
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(p.inverse().compose(&p).is_identity());
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert_eq!(
            Permutation::from_images(vec![0, 0, 1]),
            Err(PermError::NotABijection { degree: 3 })
        );
        assert_eq!(
            Permutation::from_images(vec![0, 3]),
            Err(PermError::NotABijection { degree: 2 })
        );
    }

    #[test]
    #[should_panic(expected = "degree mismatch")]
    fn compose_panics_on_degree_mismatch() {
        let _ = make_alpha(4).compose(&make_alpha(5));
    }

    #[test]
    fn cycle_type_and_parity() {
        let p = perm(&[1, 0, 3, 2, 4]);
        assert_eq!(p.cycle_type().lengths, vec![2, 2]);
        assert_eq!(p.cycle_type().fixed_points(), 1);
        assert!(p.is_even());
        let t = perm(&[1, 0, 2]);
        assert!(!t.is_even());
        assert_eq!(t.cycle_count(), 2);
    }

    #[test]
    fn pow_matches_repeated_composition() {
        let a = make_alpha(7);
        assert_eq!(a.pow(3).apply(6), 2);
        assert_eq!(a.pow(-2), a.inverse().compose(&a.inverse()));
        assert!(a.pow(7).is_identity());
        assert!(a.pow(0).is_identity());
    }

    #[test]
    fn sym_conjugator_respects_cycle_structure() {
        let p = perm(&[1, 2, 0, 3, 4]);
        let q = perm(&[0, 1, 3, 4, 2]);
        let h = find_conjugator_sym(&p, &q).unwrap();
        assert_eq!(p.conjugate_by(&h), q);
        assert!(find_conjugator_sym(&p, &perm(&[1, 0, 2, 3, 4])).is_none());
    }

    // Oracle: exhaustive search over all even sigma of the given degree.
    fn alt_conjugate_brute(p: &Permutation, q: &Permutation) -> bool {
        let d = p.degree();
        let mut idx: Vec<u32> = (0..d as u32).collect();
        let mut found = false;
        permute_all(&mut idx, 0, &mut |images| {
            let s = Permutation { images: images.to_vec() };
            if s.is_even() && &p.conjugate_by(&s) == q {
                found = true;
            }
        });
        found
    }

    fn permute_all(items: &mut [u32], k: usize, visit: &mut impl FnMut(&[u32])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute_all(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    #[test]
    fn three_cycles_split_in_alt_3() {
        // (0 1 2) and (0 2 1) share a cycle type but are not Alt(3)-conjugate.
        let p = perm(&[1, 2, 0]);
        let q = perm(&[2, 0, 1]);
        assert!(!alt_conjugate_brute(&p, &q));
        assert!(!is_conjugate_alt(&p, &q).unwrap());
        assert!(is_conjugate_alt(&p, &p).unwrap());
    }

    #[test]
    fn alt_conjugacy_matches_brute_force_exhaustively_to_degree_5() {
        for d in 1..=5usize {
            let mut evens = Vec::new();
            let mut idx: Vec<u32> = (0..d as u32).collect();
            permute_all(&mut idx, 0, &mut |images| {
                let s = Permutation { images: images.to_vec() };
                if s.is_even() {
                    evens.push(s);
                }
            });
            for p in &evens {
                for q in &evens {
                    let expect = alt_conjugate_brute(p, q);
                    match find_conjugator_alt(p, q).unwrap() {
                        Some(h) => {
                            assert!(expect, "claimed conjugate, oracle disagrees: {p} {q}");
                            assert!(h.is_even());
                            assert_eq!(&p.conjugate_by(&h), q);
                        }
                        None => assert!(!expect, "missed conjugacy: {p} {q}"),
                    }
                }
            }
        }
    }

    #[test]
    fn alt_conjugacy_matches_brute_force_sampled_degrees_6_to_9() {
        use rand::prelude::*;
        use rand::seq::SliceRandom;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5ebf);
        for d in 6..=9usize {
            for _ in 0..40 {
                let p = random_even(&mut rng, d);
                // Half the time, test against a conjugate of p.
                let q = if rng.gen_bool(0.5) {
                    let mut imgs: Vec<u32> = (0..d as u32).collect();
                    imgs.shuffle(&mut rng);
                    let s = Permutation { images: imgs };
                    p.conjugate_by(&s)
                } else {
                    random_even(&mut rng, d)
                };
                assert_eq!(
                    is_conjugate_alt(&p, &q).unwrap(),
                    alt_conjugate_brute(&p, &q),
                    "degree {d}: {p} vs {q}"
                );
            }
        }
    }

    fn random_even(rng: &mut impl rand::Rng, d: usize) -> Permutation {
        use rand::seq::SliceRandom;
        loop {
            let mut imgs: Vec<u32> = (0..d as u32).collect();
            imgs.shuffle(rng);
            let p = Permutation { images: imgs };
            if p.is_even() {
                return p;
            }
        }
    }

    #[test]
    fn odd_inputs_are_rejected() {
        let t = perm(&[1, 0, 2]);
        assert_eq!(find_conjugator_alt(&t, &t), Err(PermError::OddInput));
    }

    #[test]
    fn canonical_conjugator_fixes_basepoint() {
        // p = (0 1 2), q = (0 2 1): h maps p^k(0) to q^k(0), so h = (1 2).
        let p = perm(&[1, 2, 0]);
        let q = perm(&[2, 0, 1]);
        let h = canonical_conjugator_single_cycle(&p, &q, 0).unwrap();
        assert_eq!(h, perm(&[0, 2, 1]));
        assert_eq!(p.conjugate_by(&h), q);
        assert_eq!(
            canonical_conjugator_single_cycle(&p, &perm(&[0, 2, 1]), 0),
            Err(PermError::NotSingleCycle)
        );
    }

    #[test]
    fn display_prints_cycles() {
        assert_eq!(Permutation::identity(4).to_string(), "()");
        let b = make_beta(7, 15).unwrap();
        assert_eq!(b.to_string(), "(0 7 14)");
    }
}
