//! End-to-end acceptance gates. Each test prints one verdict line; run
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see the
//! lines for passing gates too. A gate fails loudly with the offending cases
//! in the panic message.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sepgrowth::checks::{
    alt_containment_suite, commute_suite, cycle_structure_suite, d_invariance_suite,
    locality_suite, witness_suite, SuiteReport,
};
use sepgrowth::depth::{growth_tables, GrowthMode};
use sepgrowth::groups::is_conjugate_element;
use sepgrowth::oracle::{ball_images, wreath_conjugate_bounded, ConjugacyOracle, ProductImage};
use sepgrowth::params::{
    build_double_index, preset_growth_specs, validate, Constants, GrowthSpec, ParameterTables,
    Row, TableMode,
};
use sepgrowth::words::Word;
use sepgrowth::wreath::{is_conjugate_wreath, WreathElement};

fn verdict(label: &str, start: Instant, budget: Option<Duration>, mut failures: Vec<String>) {
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        if elapsed > b {
            failures.push(format!("ran {elapsed:.1?}, budget {b:?}"));
        }
    }
    let ok = failures.is_empty();
    let line = format!(
        "acceptance {label}: {} ({elapsed:.1?})",
        if ok { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    if !ok {
        panic!("{line}\n{}", failures.join("\n"));
    }
}

fn suite_failures(rep: &SuiteReport) -> Vec<String> {
    if rep.passed() {
        Vec::new()
    } else {
        vec![rep.to_string()]
    }
}

/// Twenty built rows, explicit growth tables. Stabilization depth varies
/// between 2 and 4 across rows, which is what the off-row and off-modulus
/// gates need.
fn twenty_rows() -> ParameterTables {
    let f1 = GrowthSpec::explicit((1..=20).map(|n| 150 * n).collect()).unwrap();
    let f2 = GrowthSpec::explicit((1..=20).map(|n| 3000 + 600 * n).collect()).unwrap();
    build_double_index(&f1, &f2, 20, Constants::default()).expect("twenty-row build")
}

fn hand_rows(spec: &[(u64, &[u64])]) -> ParameterTables {
    let rows = spec
        .iter()
        .enumerate()
        .map(|(i, &(r, d))| Row {
            n: i as u32 + 1,
            r,
            m_n: d.len() as u32,
            d: d.to_vec(),
        })
        .collect();
    let mode = if spec.iter().all(|(_, d)| d.len() == 1) {
        TableMode::SingleIndex
    } else {
        TableMode::DoubleIndex
    };
    ParameterTables::from_rows(mode, Constants::default(), rows).unwrap()
}

#[test]
fn a01_cycle_structure_of_the_pair_family() {
    let start = Instant::now();
    let rep = cycle_structure_suite(31, 200);
    let mut failures = suite_failures(&rep);
    // five offsets 7, 13, 19, 25, 31; prime windows (4r, 200] hold
    // 37 + 31 + 25 + 21 + 16 moduli.
    if rep.cases != 130 {
        failures.push(format!("expected 130 (r, d) cases, saw {}", rep.cases));
    }
    verdict(
        "01 cycle structure and conjugacy split",
        start,
        Some(Duration::from_secs(10)),
        failures,
    );
}

#[test]
fn a02_wide_coordinates_mirror_infinity() {
    let start = Instant::now();
    // every row stays wide for words up to length 12: r >= 25 and d - 2r >= 25
    let tables = hand_rows(&[
        (25, &[211]),
        (31, &[223]),
        (37, &[227]),
        (43, &[263]),
        (55, &[337]),
        (67, &[409]),
    ]);
    let rep = locality_suite(&tables, 12, 2000, 0xAC02);
    let mut failures = suite_failures(&rep);
    if rep.cases != 2000 * 7 {
        failures.push(format!("expected 14000 cases, saw {}", rep.cases));
    }
    verdict(
        "02 triviality matches the infinite coordinate on wide rows",
        start,
        Some(Duration::from_secs(30)),
        failures,
    );
}

#[test]
fn a03_commutator_words_vanish_exactly_off_row() {
    let start = Instant::now();
    let tables = twenty_rows();
    let rep = commute_suite(&tables, 20);
    let mut failures = suite_failures(&rep);
    let coords: u64 = (1..=20).map(|n| tables.m_n(n) as u64).sum();
    if rep.cases != 20 * coords {
        failures.push(format!("expected {} cases, saw {}", 20 * coords, rep.cases));
    }
    verdict("03 off-row vanishing of the v family", start, None, failures);
}

#[test]
fn a04_pinning_words_hit_their_three_cycles() {
    let start = Instant::now();
    let tables = twenty_rows();
    let rep = alt_containment_suite(&tables, 10);
    let mut failures = suite_failures(&rep);
    let coords: u64 = (1..=10).map(|n| tables.m_n(n) as u64).sum();
    if rep.cases != coords {
        failures.push(format!("expected {coords} cases, saw {}", rep.cases));
    }
    verdict("04 three-cycle pinning per coordinate", start, None, failures);
}

#[test]
fn a05_row_internal_triviality_ignores_the_modulus() {
    let start = Instant::now();
    let tables = twenty_rows();
    let rep = d_invariance_suite(&tables, 10, 1000, 0xAC05);
    let mut failures = suite_failures(&rep);
    // every coordinate of every row clears d - 2r >= 22, so each of the 1000
    // words contributes one case per row
    if rep.cases != 1000 * 20 {
        failures.push(format!("expected 20000 cases, saw {}", rep.cases));
    }
    verdict("05 modulus-independent triviality within rows", start, None, failures);
}

#[test]
fn a06_decider_agrees_with_bounded_conjugator_search() {
    let start = Instant::now();
    // two rows, image group Alt(5) x Alt(7) x wreath: finite part has order
    // 60 * 2520 = 151200
    let tables = hand_rows(&[(1, &[5]), (5, &[7])]);
    let finite_order: u64 = (3..=5).product::<u64>() / 2 * ((3..=7).product::<u64>() / 2);
    assert!(finite_order < 10_000_000, "toy is meant to be small");

    let words = Word::enumerate_reduced(5);
    let mut seen: HashMap<ProductImage, usize> = HashMap::new();
    let mut reps: Vec<&Word> = Vec::new();
    let mut images: Vec<ProductImage> = Vec::new();
    for w in &words {
        let im = ProductImage::of_word(w, &tables);
        if !seen.contains_key(&im) {
            seen.insert(im.clone(), reps.len());
            reps.push(w);
            images.push(im);
        }
    }

    // conjugators of length up to 16, split as two half-ball factors
    let ball = ball_images(&tables, 8);
    let oracle = ConjugacyOracle::new(&images, &ball);

    let mut failures = Vec::new();
    let mut checked = 0u64;
    for j in 0..reps.len() {
        for i in 0..=j {
            let decided = is_conjugate_element(reps[i], reps[j], &tables).conjugate;
            let found = oracle.conjugate_within(i, j);
            checked += 1;
            if decided != found && failures.len() < 8 {
                failures.push(format!(
                    "words {:?} and {:?}: decided {decided}, search {found}",
                    reps[i], reps[j]
                ));
            }
        }
    }
    // identical images agree on both sides for free, so covering every pair
    // of distinct images covers every pair of the 485 words
    let mut failures = failures;
    if words.len() != 485 {
        failures.push(format!("expected 485 words, saw {}", words.len()));
    }
    let expect = (reps.len() * (reps.len() + 1) / 2) as u64;
    if checked != expect || reps.len() < 250 {
        failures.push(format!(
            "checked {checked} pairs over {} images, expected {expect}",
            reps.len()
        ));
    }
    verdict(
        "06 conjugacy decider versus conjugator search",
        start,
        Some(Duration::from_secs(300)),
        failures,
    );
}

fn bounded_lamp_elements() -> Vec<WreathElement> {
    let mut out = Vec::with_capacity(3usize.pow(7) * 7);
    for shift in -3i64..=3 {
        for code in 0..3u32.pow(7) {
            let mut c = code;
            let mut support = Vec::new();
            for pos in -3i64..=3 {
                let v = (c % 3) as u8;
                c /= 3;
                if v != 0 {
                    support.push((pos, v));
                }
            }
            out.push(WreathElement::from_support(support, shift));
        }
    }
    out
}

/// Conjugation preserves the shift; for nonzero shift the residue-class sums
/// travel by cyclic rotation, for zero shift the support translates rigidly.
/// The minimal rotation (or the support anchored at its first point) is
/// therefore a complete invariant on this bounded family.
fn lamp_conjugacy_key(e: &WreathElement) -> (i64, Vec<u8>) {
    let t = e.shift();
    if t == 0 {
        match e.support().iter().next() {
            None => (0, Vec::new()),
            Some((&first, _)) => {
                let mut values = vec![0u8; 7];
                for (&p, &v) in e.support() {
                    values[(p - first) as usize] = v;
                }
                (0, values)
            }
        }
    } else {
        let sums = e.class_sums().expect("nonzero shift");
        let best = (0..sums.len())
            .map(|s| {
                let mut rot = sums.clone();
                rot.rotate_left(s);
                rot
            })
            .min()
            .unwrap();
        (t, best)
    }
}

#[test]
fn a07_lamp_decider_agrees_with_bounded_search() {
    let start = Instant::now();
    let elements = bounded_lamp_elements();
    let mut classes: HashMap<(i64, Vec<u8>), Vec<usize>> = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        classes.entry(lamp_conjugacy_key(e)).or_default().push(i);
    }

    let mut failures = Vec::new();
    // inside a class both sides must say yes against the representative
    for members in classes.values() {
        let rep = &elements[members[0]];
        for &i in members {
            let e = &elements[i];
            if !is_conjugate_wreath(rep, e) && failures.len() < 8 {
                failures.push(format!("decider rejects {rep:?} ~ {e:?}"));
            }
            if !wreath_conjugate_bounded(rep, e, 8) && failures.len() < 8 {
                failures.push(format!("search misses {rep:?} ~ {e:?}"));
            }
        }
    }
    // across the family both sides must agree pair by pair
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC07);
    for _ in 0..60_000 {
        let i = rng.gen_range(0..elements.len());
        let j = rng.gen_range(0..elements.len());
        let decided = is_conjugate_wreath(&elements[i], &elements[j]);
        let found = wreath_conjugate_bounded(&elements[i], &elements[j], 8);
        if decided != found && failures.len() < 8 {
            failures.push(format!(
                "pair {:?} / {:?}: decided {decided}, search {found}",
                elements[i], elements[j]
            ));
        }
    }
    verdict(
        "07 lamp conjugacy decider versus bounded search",
        start,
        None,
        failures,
    );
}

#[test]
fn a08_depth_witnesses_meet_their_upper_bounds() {
    let start = Instant::now();
    let tables = twenty_rows();
    let rep = witness_suite(&tables, 8);
    let mut failures = suite_failures(&rep);
    if rep.cases != 16 {
        failures.push(format!("expected 16 cases, saw {}", rep.cases));
    }
    verdict("08 depth witnesses and norm certificates", start, None, failures);
}

#[test]
fn a09_preset_families_build_validate_and_sandwich() {
    let start = Instant::now();
    let consts = Constants::default();
    let (s1, s2) = preset_growth_specs();
    let mut failures = Vec::new();

    for n in 1..=200u32 {
        let (a, b) = (s1.f(n, &consts).unwrap(), s2.f(n, &consts).unwrap());
        if b < a {
            failures.push(format!("f2({n}) = {b} below f1({n}) = {a}"));
        }
    }

    let tables = build_double_index(&s1, &s2, 200, consts.clone()).expect("preset build");
    let report = validate(&tables, false);
    if !report.all_passed() {
        failures.push(report.first_failure());
    }
    for n in 1..=200u32 {
        let r = tables.r(n);
        if r < n as u64 || r >= 37 * n as u64 {
            failures.push(format!("r({n}) = {r} outside [n, 37n)"));
        }
    }

    // factorial sandwich: F^(1/2) <= f!/2 <= F^(3/2) in logarithms, for both
    // families once n reaches 10. One pass of a running log-factorial covers
    // every target.
    let mut targets: Vec<(u64, usize)> = Vec::new();
    let mut ln_big = Vec::new();
    for spec in [&s1, &s2] {
        for n in 10..=200u32 {
            targets.push((spec.f(n, &consts).unwrap(), ln_big.len()));
            ln_big.push(spec.log_big_f(n, &consts).unwrap());
        }
    }
    targets.sort();
    let mut ln_fact = vec![0f64; ln_big.len()];
    let mut sum = 0f64;
    let mut next = targets.iter().peekable();
    for k in 1..=targets.last().unwrap().0 {
        sum += (k as f64).ln();
        while next.peek().is_some_and(|&&(f, _)| f == k) {
            let &(_, slot) = next.next().unwrap();
            ln_fact[slot] = sum;
        }
    }
    for (slot, &lf) in ln_big.iter().enumerate() {
        let half_order = ln_fact[slot] - std::f64::consts::LN_2;
        if half_order < 0.5 * lf || half_order > 1.5 * lf {
            failures.push(format!(
                "slot {slot}: ln(f!/2) = {half_order:.1} outside [{:.1}, {:.1}]",
                0.5 * lf,
                1.5 * lf
            ));
        }
    }

    verdict("09 preset build to depth 200", start, None, failures);
}

#[test]
fn a10_growth_tables_are_ordered_and_reproducible() {
    let start = Instant::now();
    let tables = hand_rows(&[(1, &[7]), (3, &[13])]);
    let run = |mode| growth_tables(&tables, 6, mode, 0xAC10, 2000).expect("growth table");
    let rf = run(GrowthMode::Rf);
    let conj = run(GrowthMode::Conj);

    let mut failures = Vec::new();
    for (a, b) in rf.rows.iter().zip(&conj.rows) {
        if b.log10_depth < a.log10_depth - 1e-9 {
            failures.push(format!(
                "length {}: conjugacy depth {} under plain depth {}",
                a.n, b.log10_depth, a.log10_depth
            ));
        }
    }
    for table in [&rf, &conj] {
        for pair in table.rows.windows(2) {
            if pair[1].log10_depth < pair[0].log10_depth - 1e-9 {
                failures.push(format!(
                    "{} table drops between lengths {} and {}",
                    table.mode, pair[0].n, pair[1].n
                ));
            }
        }
    }
    let rf2 = run(GrowthMode::Rf);
    let conj2 = run(GrowthMode::Conj);
    if rf.to_csv() != rf2.to_csv() || rf.to_json() != rf2.to_json() {
        failures.push("plain growth table is not reproducible".into());
    }
    if conj.to_csv() != conj2.to_csv() || conj.to_json() != conj2.to_json() {
        failures.push("conjugacy growth table is not reproducible".into());
    }
    verdict("10 growth tables ordered and reproducible", start, None, failures);
}
