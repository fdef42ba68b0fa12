//! Named verification suites shared by the command line tool and the
//! integration tests. Each one runs a battery of mechanical checks and
//! reports the case count plus any failures, with enough context per failure
//! to rerun it by hand.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::depth::{conj_pair_witness, conj_upper, rf_lower_witness, rf_upper, QuotientKind};
use crate::groups::{evaluate_at_coordinate, is_identity_element, word_trivial_at_coordinate};
use crate::params::{is_prime_u64, ParameterTables};
use crate::perm::{canonical_conjugator_single_cycle, is_conjugate_alt, Permutation};
use crate::words::{g1_word, g2_word, v_word, w_word, Gen, Word};
use crate::wreath::{alpha_inf, beta_inf};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.to_string(), cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "suite {}: {} cases, pass", self.suite, self.cases)
        } else {
            writeln!(
                f,
                "suite {}: {} cases, FAIL ({} failures)",
                self.suite,
                self.cases,
                self.failures.len()
            )?;
            for line in self.failures.iter().take(10) {
                writeln!(f, "  {line}")?;
            }
            if self.failures.len() > 10 {
                writeln!(f, "  ... and {} more", self.failures.len() - 10)?;
            }
            Ok(())
        }
    }
}

/// Knobs for the randomized suites; the exact ones ignore what they don't use.
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub max_len: u64,
    pub trials: u64,
    pub seed: u64,
    pub n_cap: u32,
    pub r_max: u64,
    pub d_cap: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_len: 10, trials: 300, seed: 0x5eed, n_cap: 8, r_max: 31, d_cap: 200 }
    }
}

pub const SUITE_NAMES: [&str; 6] =
    ["cycle-structure", "locality", "commute", "alt-containment", "d-invariance", "witnesses"];

/// Dispatch by name; the cycle-structure scan is the only suite that runs without
/// parameter tables.
pub fn run_suite(
    name: &str,
    tables: Option<&ParameterTables>,
    opts: &SuiteOptions,
) -> Result<SuiteReport, String> {
    let need_tables = || tables.ok_or_else(|| format!("suite {name} needs parameter tables"));
    match name {
        "cycle-structure" => Ok(cycle_structure_suite(opts.r_max, opts.d_cap)),
        "locality" => Ok(locality_suite(need_tables()?, opts.max_len, opts.trials, opts.seed)),
        "commute" => Ok(commute_suite(need_tables()?, opts.n_cap)),
        "alt-containment" => Ok(alt_containment_suite(need_tables()?, opts.n_cap)),
        "d-invariance" => Ok(d_invariance_suite(need_tables()?, opts.max_len, opts.trials, opts.seed)),
        "witnesses" => Ok(witness_suite(need_tables()?, opts.n_cap)),
        _ => Err(format!("unknown suite {name}; expected one of {}", SUITE_NAMES.join(", "))),
    }
}

/// Cycle structure of the two cycle words over every admissible prime
/// modulus in range: single d-cycles conjugate by an even canonical map when
/// d is 1 mod 6, three cycles against one and no conjugacy when d is
/// 5 mod 6.
pub fn cycle_structure_suite(r_max: u64, d_cap: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("cycle-structure");
    let mut r = 7;
    while r <= r_max {
        let g1 = g1_word(r);
        let g2 = g2_word(r);
        let mut d = 4 * r + 1;
        while d <= d_cap {
            if is_prime_u64(d) {
                rep.cases += 1;
                let p1 = evaluate_at_coordinate(&g1, d, r);
                let p2 = evaluate_at_coordinate(&g2, d, r);
                let c1 = p1.cycle_count();
                let c2 = p2.cycle_count();
                let conj = is_conjugate_alt(&p1, &p2).expect("cycle words are even");
                match d % 6 {
                    1 => {
                        if c1 != 1 || c2 != 1 {
                            rep.failures
                                .push(format!("r={r} d={d}: expected single cycles, got {c1}/{c2}"));
                        } else if !conj {
                            rep.failures.push(format!("r={r} d={d}: expected conjugate pair"));
                        } else {
                            let h = canonical_conjugator_single_cycle(&p1, &p2, 0)
                                .expect("single full cycles");
                            if !h.is_even() {
                                rep.failures
                                    .push(format!("r={r} d={d}: canonical conjugator is odd"));
                            }
                        }
                    }
                    5 => {
                        if c1 != 3 || c2 != 1 {
                            rep.failures
                                .push(format!("r={r} d={d}: expected 3/1 cycles, got {c1}/{c2}"));
                        }
                        if conj {
                            rep.failures.push(format!("r={r} d={d}: expected non-conjugate pair"));
                        }
                    }
                    _ => rep.failures.push(format!("r={r} d={d}: impossible residue")),
                }
            }
            d += 2;
        }
        r += 6;
    }
    rep
}

/// Seeded reduced word of length at most max_len.
fn random_word(rng: &mut ChaCha8Rng, max_len: u64) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<(Gen, i64)> = Vec::with_capacity(len as usize);
    for _ in 0..len {
        loop {
            let (g, s) = match rng.gen_range(0..4) {
                0 => (Gen::A, 1),
                1 => (Gen::A, -1),
                2 => (Gen::B, 1),
                _ => (Gen::B, -1),
            };
            if let Some(&(lg, ls)) = letters.last() {
                if lg == g && ls == -s {
                    continue;
                }
            }
            letters.push((g, s));
            break;
        }
    }
    Word::from_blocks(letters)
}

/// Random words vanish at a wide coordinate exactly when they vanish at the
/// infinite one; the full identity decision must agree with a complete scan.
pub fn locality_suite(tables: &ParameterTables, max_len: u64, trials: u64, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("locality");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let w = random_word(&mut rng, max_len);
        let len = w.length();
        let z_trivial = w.evaluate(&alpha_inf(), &beta_inf()).is_identity();
        let mut all_trivial = z_trivial;
        for n in 1..=tables.n_max() {
            let r = tables.r(n);
            for m in 1..=tables.m_n(n) {
                let d = tables.d(n, m);
                let trivial = word_trivial_at_coordinate(&w, d, r);
                all_trivial &= trivial;
                let wide = r >= 2 * len + 1 && d as i128 - 2 * r as i128 >= (2 * len + 1) as i128;
                if wide {
                    rep.cases += 1;
                    if trivial != z_trivial {
                        rep.failures.push(format!(
                            "word {w} at (n={n}, m={m}): coordinate {} but infinite {}",
                            verdict(trivial),
                            verdict(z_trivial)
                        ));
                    }
                }
            }
        }
        rep.cases += 1;
        if is_identity_element(&w, tables) != all_trivial {
            rep.failures.push(format!("word {w}: identity decision disagrees with full scan"));
        }
    }
    rep
}

fn verdict(trivial: bool) -> &'static str {
    if trivial {
        "vanishes"
    } else {
        "acts"
    }
}

/// The commutator word of row m vanishes at row n exactly when m and n
/// differ.
pub fn commute_suite(tables: &ParameterTables, n_cap: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("commute");
    let top = n_cap.min(tables.n_max());
    for m in 1..=top {
        let w = v_word(tables.r(m));
        for n in 1..=top {
            for i in 1..=tables.m_n(n) {
                rep.cases += 1;
                let trivial = word_trivial_at_coordinate(&w, tables.d(n, i), tables.r(n));
                if trivial != (m != n) {
                    rep.failures.push(format!(
                        "v(r({m})) at (n={n}, i={i}) {}",
                        verdict(trivial)
                    ));
                }
            }
        }
    }
    rep
}

/// The pinning words land exactly on their target 3-cycle and vanish at the
/// infinite coordinate, at every other row, and above their own modulus.
pub fn alt_containment_suite(tables: &ParameterTables, n_cap: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("alt-containment");
    let top = n_cap.min(tables.n_max());
    for n in 1..=top {
        let r = tables.r(n);
        for m in 1..=tables.m_n(n) {
            rep.cases += 1;
            let d = tables.d(n, m);
            let w = match w_word(r, d) {
                Ok(w) => w,
                Err(e) => {
                    rep.failures.push(format!("w(n={n}, m={m}): {e}"));
                    continue;
                }
            };
            let image = evaluate_at_coordinate(&w, d, r);
            if image != target_three_cycle(d, r) {
                rep.failures.push(format!("w(n={n}, m={m}): image is {image}"));
            }
            if !w.evaluate(&alpha_inf(), &beta_inf()).is_identity() {
                rep.failures.push(format!("w(n={n}, m={m}): acts at the infinite coordinate"));
            }
            for l in 1..=tables.n_max() {
                for i in 1..=tables.m_n(l) {
                    let expect_trivial = l != n || i > m;
                    if l == n && i <= m {
                        continue;
                    }
                    let trivial = word_trivial_at_coordinate(&w, tables.d(l, i), tables.r(l));
                    if trivial != expect_trivial {
                        rep.failures.push(format!(
                            "w(n={n}, m={m}) at (l={l}, i={i}) {}",
                            verdict(trivial)
                        ));
                    }
                }
            }
        }
    }
    rep
}

/// The 3-cycle 0 -> d-3r -> 3r -> 0.
fn target_three_cycle(d: u64, r: u64) -> Permutation {
    let d = d as usize;
    let r = r as usize;
    let mut images: Vec<u32> = (0..d as u32).collect();
    images[0] = (d - 3 * r) as u32;
    images[d - 3 * r] = (3 * r) as u32;
    images[3 * r] = 0;
    Permutation::from_images(images).expect("three distinct points")
}

/// Within a row, triviality of a word cannot depend on which modulus it is
/// read at, once the modulus clears the word's reach.
pub fn d_invariance_suite(
    tables: &ParameterTables,
    max_len: u64,
    trials: u64,
    seed: u64,
) -> SuiteReport {
    let mut rep = SuiteReport::new("d-invariance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let w = random_word(&mut rng, max_len);
        let reach = (2 * w.length() + 2) as i128;
        for n in 1..=tables.n_max() {
            let r = tables.r(n);
            let verdicts: Vec<bool> = (1..=tables.m_n(n))
                .filter(|&m| tables.d(n, m) as i128 - 2 * r as i128 >= reach)
                .map(|m| word_trivial_at_coordinate(&w, tables.d(n, m), r))
                .collect();
            if verdicts.len() < 2 {
                continue;
            }
            rep.cases += 1;
            if verdicts.windows(2).any(|p| p[0] != p[1]) {
                rep.failures.push(format!("word {w} splits row {n}: {verdicts:?}"));
            }
        }
    }
    rep
}

/// The certified lower bounds coincide with the computed upper bounds, row
/// by row, for both the word-problem and the conjugacy witnesses.
pub fn witness_suite(tables: &ParameterTables, n_cap: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("witnesses");
    let top = n_cap.min(tables.n_max());
    for n in 1..=top {
        let r = tables.r(n);
        rep.cases += 1;
        match (rf_lower_witness(n, tables), rf_upper(&v_word(r), tables)) {
            (Ok(lower), Ok(upper)) => {
                if lower.value.kind != upper.value.kind || lower.witness != upper.witness {
                    rep.failures.push(format!(
                        "row {n}: word witness mismatch {:?} vs {:?}",
                        lower.value.kind, upper.value.kind
                    ));
                }
                if lower.value.kind != (QuotientKind::Alt { degree: tables.d(n, 1) }) {
                    rep.failures.push(format!("row {n}: word witness at the wrong factor"));
                }
                let norm = lower.norm.expect("lower bounds carry norms");
                if norm.word_norm != 4 * r + 4 || norm.linear_bound != 148 * n as u64 + 4 {
                    rep.failures.push(format!("row {n}: word witness norm {norm:?}"));
                }
            }
            (l, u) => rep.failures.push(format!("row {n}: word witness failed: {l:?} / {u:?}")),
        }

        rep.cases += 1;
        match (conj_pair_witness(n, tables), conj_upper(&g1_word(r), &g2_word(r), tables)) {
            (Ok(lower), Ok(upper)) => {
                if lower.value.kind != upper.value.kind || lower.witness != upper.witness {
                    rep.failures.push(format!(
                        "row {n}: pair witness mismatch {:?} vs {:?}",
                        lower.value.kind, upper.value.kind
                    ));
                }
                let m_top = tables.m_n(n);
                if lower.value.kind != (QuotientKind::Alt { degree: tables.d(n, m_top) }) {
                    rep.failures.push(format!("row {n}: pair witness at the wrong factor"));
                }
                let norm = lower.norm.expect("lower bounds carry norms");
                if norm.word_norm != 4 * r + 8 || norm.linear_bound != 148 * n as u64 + 9 {
                    rep.failures.push(format!("row {n}: pair witness norm {norm:?}"));
                }
            }
            (l, u) => rep.failures.push(format!("row {n}: pair witness failed: {l:?} / {u:?}")),
        }
    }
    rep
}
