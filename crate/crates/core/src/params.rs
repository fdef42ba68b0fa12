//! Parameter tables: the prime-valued coordinate sizes d(n,m) with their
//! stabilization points m_n, and the offsets r(n) chosen by a greedy
//! congruence-avoiding scan.
//!
//! The double-index builder works row by row. d_1(n) is the least prime
//! congruent to 1 mod 6 above the first growth function, d_2(n) the least
//! prime congruent to 5 mod 6 above both the second growth function and
//! 2*d_1(n); both sequences are forced non-decreasing. Within row n the
//! entries at least double until d_2(n) is within a branch factor, at which
//! point the row stabilizes at d_2(n). The greedy r-scan then picks, for each
//! n in turn, the least candidate in [n, 37n) that is 1 mod 6, stays below
//! d(n,1)/6, and avoids +-r(l), +-2r(l) modulo every earlier modulus (and
//! conversely). Failures are reported, never widened away.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("residue {residue} is not invertible mod {modulus}")]
    BadResidueClass { residue: u64, modulus: u64 },
    #[error("no prime found in {residue} mod {modulus} within {scanned} candidates above {lower}")]
    PrimeScanCap {
        lower: u64,
        residue: u64,
        modulus: u64,
        scanned: u64,
    },
    #[error("explicit growth table has {got} entries, need {needed}")]
    ExplicitTooShort { needed: u32, got: usize },
    #[error("explicit growth table decreases at entry {index}")]
    ExplicitDecreasing { index: usize },
    #[error("growth function too small at n={n}: f(n)={f} below required {bound}")]
    GrowthTooSmall { n: u32, f: u64, bound: u64 },
    #[error("second growth function dips below the first at n={n} ({f2} < {f1})")]
    SecondBelowFirst { n: u32, f1: u64, f2: u64 },
    #[error("no admissible r(n) at n={n}: window [{n}, {hi}) exhausted")]
    WindowExhausted { n: u32, hi: u64 },
    #[error("row {n} cannot stabilize: entry {entry} overshoots d_2={d2}")]
    StabilizationOvershoot { n: u32, entry: u64, d2: u64 },
    #[error("built tables failed self-validation: {0}")]
    PostValidation(String),
    #[error("row list malformed: {0}")]
    MalformedRows(String),
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut e: u64| {
        let mut acc = 1u64;
        base %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    // This base set decides primality exactly below 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const PRIME_SCAN_CAP: u64 = 10_000_000;

/// Least prime p > lower with p = residue mod modulus.
pub fn next_prime_congruent(lower: u64, residue: u64, modulus: u64) -> Result<u64, ParamError> {
    assert!(modulus >= 1 && lower >= 2);
    if gcd(residue % modulus, modulus) != 1 && modulus > 1 {
        return Err(ParamError::BadResidueClass { residue, modulus });
    }
    let start = lower + 1;
    let offset = (residue % modulus + modulus - start % modulus) % modulus;
    let mut candidate = start + offset;
    let mut scanned = 0u64;
    while scanned < PRIME_SCAN_CAP {
        if is_prime_u64(candidate) {
            return Ok(candidate);
        }
        candidate += modulus;
        scanned += 1;
    }
    Err(ParamError::PrimeScanCap {
        lower,
        residue,
        modulus,
        scanned,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}

/// Tuning constants. The window multiplier M bounds the r-scan ([n, (M+1)n)
/// in double-index mode, (n, 18n) in single-index mode); the branch
/// multiplier decides when a row may stabilize at d_2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub epsilon: f64,
    pub c0: u64,
    pub c1: u64,
    pub c2: f64,
    pub c3: u64,
    pub branch_multiplier: u64,
    pub window_multiplier: u64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            epsilon: 0.1,
            c0: 2,
            c1: 9,
            c2: 2.0,
            c3: 0,
            branch_multiplier: 8,
            window_multiplier: 36,
        }
    }
}

/// A growth function n -> f(n), either tabulated or derived from the floor
/// family F(n) = exp(c * n * log^2 n * (log log n)^(1+eps)) via
/// f(n) = ceil(log F / log log F).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GrowthSpec {
    Explicit(Vec<u64>),
    FloorFamily { c: f64 },
}

impl GrowthSpec {
    pub fn explicit(values: Vec<u64>) -> Result<GrowthSpec, ParamError> {
        for i in 1..values.len() {
            if values[i] < values[i - 1] {
                return Err(ParamError::ExplicitDecreasing { index: i });
            }
        }
        Ok(GrowthSpec::Explicit(values))
    }

    /// ln F(n), when the family form is available. Arguments below 3 are
    /// clamped inside the logarithms to keep the expression real; the
    /// admissibility floor dominates there anyway.
    pub fn log_big_f(&self, n: u32, constants: &Constants) -> Option<f64> {
        match self {
            GrowthSpec::Explicit(_) => None,
            GrowthSpec::FloorFamily { c } => {
                let t = (n as u64 + constants.c3) as f64;
                let tc = t.max(3.0);
                Some(c * t * tc.ln().powi(2) * tc.ln().ln().powf(1.0 + constants.epsilon))
            }
        }
    }

    pub fn f(&self, n: u32, constants: &Constants) -> Result<u64, ParamError> {
        match self {
            GrowthSpec::Explicit(values) => values
                .get(n as usize - 1)
                .copied()
                .ok_or(ParamError::ExplicitTooShort {
                    needed: n,
                    got: values.len(),
                }),
            GrowthSpec::FloorFamily { .. } => {
                let log_f = self.log_big_f(n, constants).expect("family form");
                if log_f <= std::f64::consts::E {
                    return Ok(1);
                }
                Ok((log_f / log_f.ln()).ceil() as u64)
            }
        }
    }
}

/// Stock pair of growth families for double-index builds when the caller
/// does not bring explicit tables: floor family at c = 6000 and c = 18000.
/// The 3x ratio keeps f2 >= f1 everywhere, and the absolute size keeps the
/// offset window 6r < d(n,1) wide enough on the first few rows that the
/// greedy congruence search never runs dry.
pub fn preset_growth_specs() -> (GrowthSpec, GrowthSpec) {
    (
        GrowthSpec::FloorFamily { c: 6000.0 },
        GrowthSpec::FloorFamily { c: 18000.0 },
    )
}

/// f(n) must clear c2 * n * ln n * (ln ln n)^(1+exponent_eps), and c2 itself.
fn admissibility_floor(n: u32, c2: f64, exponent_eps: f64) -> f64 {
    let x = n as f64;
    let inner = (x.max(3.0)).ln().ln();
    (c2 * x * x.ln() * inner.powf(1.0 + exponent_eps)).max(c2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableMode {
    SingleIndex,
    DoubleIndex,
}

/// One row: the moduli d(n,1) ... d(n,m_n) and the offset r(n). In
/// single-index mode every row has a single modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub n: u32,
    pub r: u64,
    pub m_n: u32,
    pub d: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterTables {
    pub mode: TableMode,
    pub constants: Constants,
    pub rows: Vec<Row>,
}

impl ParameterTables {
    /// Rows must be numbered 1..=len with m_n matching the stored moduli.
    pub fn from_rows(
        mode: TableMode,
        constants: Constants,
        rows: Vec<Row>,
    ) -> Result<ParameterTables, ParamError> {
        for (i, row) in rows.iter().enumerate() {
            if row.n as usize != i + 1 {
                return Err(ParamError::MalformedRows(format!(
                    "row {} is numbered {}",
                    i + 1,
                    row.n
                )));
            }
            if row.d.is_empty() || row.m_n as usize != row.d.len() {
                return Err(ParamError::MalformedRows(format!(
                    "row {}: m_n={} but {} moduli stored",
                    row.n,
                    row.m_n,
                    row.d.len()
                )));
            }
            if mode == TableMode::SingleIndex && row.d.len() != 1 {
                return Err(ParamError::MalformedRows(format!(
                    "row {}: single-index mode holds one modulus per row",
                    row.n
                )));
            }
        }
        Ok(ParameterTables {
            mode,
            constants,
            rows,
        })
    }

    pub fn n_max(&self) -> u32 {
        self.rows.len() as u32
    }

    /// d(n,m), with m clamped to m_n: the rows stabilize.
    pub fn d(&self, n: u32, m: u32) -> u64 {
        let row = &self.rows[n as usize - 1];
        let m = m.clamp(1, row.m_n);
        row.d[m as usize - 1]
    }

    pub fn r(&self, n: u32) -> u64 {
        self.rows[n as usize - 1].r
    }

    pub fn m_n(&self, n: u32) -> u32 {
        self.rows[n as usize - 1].m_n
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    pub fn from_json(text: &str) -> Result<ParameterTables, ParamError> {
        let tables: ParameterTables = serde_json::from_str(text)
            .map_err(|e| ParamError::MalformedRows(e.to_string()))?;
        // Re-run the structural checks the typed constructor enforces.
        ParameterTables::from_rows(tables.mode, tables.constants, tables.rows)
    }
}

/// r_a = +-r_b or +-2r_b mod modulus.
pub fn congruence_conflict(r_a: u64, r_b: u64, modulus: u64) -> bool {
    let a = r_a % modulus;
    let b = r_b % modulus;
    let b2 = (2 * (b as u128) % modulus as u128) as u64;
    a == b || a == (modulus - b) % modulus || a == b2 || a == (modulus - b2) % modulus
}

/// The greedy offset scan. Reads the moduli (ignoring any stored r) and
/// returns the chosen r(n) per row, or the first exhausted window.
pub fn greedy_r(tables: &ParameterTables) -> Result<BTreeMap<u32, u64>, ParamError> {
    let mut chosen: BTreeMap<u32, u64> = BTreeMap::new();
    for row in &tables.rows {
        let n = row.n;
        let n64 = n as u64;
        let (lo, hi) = match tables.mode {
            TableMode::DoubleIndex => (n64, (tables.constants.window_multiplier + 1) * n64),
            TableMode::SingleIndex => (n64 + 1, 18 * n64),
        };
        let fits_modulus = |r: u64| match tables.mode {
            TableMode::DoubleIndex => 6 * r < tables.d(n, 1),
            TableMode::SingleIndex => 3 * r < tables.d(n, 1),
        };
        let mut pick = None;
        'candidates: for r in lo..hi {
            if tables.mode == TableMode::DoubleIndex && r % 6 != 1 {
                continue;
            }
            if !fits_modulus(r) {
                // Candidates only grow; nothing later in the window fits.
                break;
            }
            for (&l, &r_l) in &chosen {
                for m in 1..=tables.m_n(l) {
                    if congruence_conflict(r, r_l, tables.d(l, m)) {
                        continue 'candidates;
                    }
                }
                for m in 1..=tables.m_n(n) {
                    if congruence_conflict(r_l, r, tables.d(n, m)) {
                        continue 'candidates;
                    }
                }
            }
            pick = Some(r);
            break;
        }
        match pick {
            Some(r) => {
                chosen.insert(n, r);
            }
            None => return Err(ParamError::WindowExhausted { n, hi }),
        }
    }
    Ok(chosen)
}

/// Build the double-index tables for n = 1..=n_max and run the greedy
/// r-scan; the result passes `validate` in strict mode.
pub fn build_double_index(
    f1: &GrowthSpec,
    f2: &GrowthSpec,
    n_max: u32,
    constants: Constants,
) -> Result<ParameterTables, ParamError> {
    assert!(n_max >= 1);
    let mut rows = Vec::new();
    let mut prev_d1 = 0u64;
    let mut prev_d2 = 0u64;
    for n in 1..=n_max {
        let f1n = f1.f(n, &constants)?;
        let f2n = f2.f(n, &constants)?;
        if f2n < f1n {
            return Err(ParamError::SecondBelowFirst { n, f1: f1n, f2: f2n });
        }
        for f in [f1n, f2n] {
            let bound = admissibility_floor(n, constants.c2, constants.epsilon / 2.0);
            if (f as f64) < bound {
                return Err(ParamError::GrowthTooSmall {
                    n,
                    f,
                    bound: bound.ceil() as u64,
                });
            }
        }
        let d1 = if n > 1 && prev_d1 > f1n {
            prev_d1
        } else {
            next_prime_congruent(f1n.max(2), 1, 6)?
        };
        let d2_lower = f2n.max(2 * d1);
        let d2 = if n > 1 && prev_d2 > d2_lower {
            prev_d2
        } else {
            next_prime_congruent(d2_lower, 5, 6)?
        };
        prev_d1 = d1;
        prev_d2 = d2;

        let mut d = vec![d1];
        loop {
            let prev = *d.last().expect("nonempty row");
            if 2 * prev > d2 {
                return Err(ParamError::StabilizationOvershoot {
                    n,
                    entry: prev,
                    d2,
                });
            }
            if d2 <= constants.branch_multiplier * prev {
                d.push(d2);
                break;
            }
            d.push(next_prime_congruent(2 * prev - 1, 1, 6)?);
        }
        rows.push(Row {
            n,
            r: 0,
            m_n: d.len() as u32,
            d,
        });
    }
    let mut tables = ParameterTables::from_rows(TableMode::DoubleIndex, constants, rows)?;
    let r = greedy_r(&tables)?;
    for row in &mut tables.rows {
        row.r = r[&row.n];
    }
    let report = validate(&tables, false);
    if !report.all_passed() {
        return Err(ParamError::PostValidation(report.first_failure()));
    }
    Ok(tables)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub condition: String,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub relaxed: bool,
    pub entries: Vec<ConditionResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn first_failure(&self) -> String {
        self.entries
            .iter()
            .find(|e| !e.passed)
            .map(|e| {
                format!(
                    "condition {}: {}",
                    e.condition,
                    e.counterexample.as_deref().unwrap_or("failed")
                )
            })
            .unwrap_or_else(|| "all conditions passed".to_string())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "{:4}  {}{}",
                e.condition,
                if e.passed { "pass" } else { "FAIL" },
                e.counterexample
                    .as_deref()
                    .map(|c| format!("  ({c})"))
                    .unwrap_or_default()
            )?;
        }
        Ok(())
    }
}

/// Check every tabulated condition, reporting the first counterexample per
/// condition. Relaxed mode skips the growth floor (d), which deliberately
/// small test tables are allowed to miss.
pub fn validate(tables: &ParameterTables, relaxed: bool) -> ValidationReport {
    let mut entries = Vec::new();
    let mut push = |condition: &str, counterexample: Option<String>| {
        entries.push(ConditionResult {
            condition: condition.to_string(),
            passed: counterexample.is_none(),
            counterexample,
        });
    };
    let double = tables.mode == TableMode::DoubleIndex;
    let c = &tables.constants;

    // (a) first-column moduli non-decreasing.
    push(
        "a",
        tables.rows.windows(2).find_map(|w| {
            (w[1].d[0] < w[0].d[0])
                .then(|| format!("d({},1)={} < d({},1)={}", w[1].n, w[1].d[0], w[0].n, w[0].d[0]))
        }),
    );

    // (b) every modulus an odd prime.
    push(
        "b",
        tables.rows.iter().find_map(|row| {
            row.d.iter().enumerate().find_map(|(i, &p)| {
                (p < 3 || p % 2 == 0 || !is_prime_u64(p))
                    .then(|| format!("d({},{})={} not an odd prime", row.n, i + 1, p))
            })
        }),
    );

    // (c) consecutive moduli within (c0, c1) ratio until stabilization.
    push(
        "c",
        if double {
            tables.rows.iter().find_map(|row| {
                row.d.windows(2).enumerate().find_map(|(i, w)| {
                    (w[1] <= c.c0 * w[0] || w[1] >= c.c1 * w[0]).then(|| {
                        format!(
                            "d({},{})={} vs d({},{})={} outside ({}x, {}x)",
                            row.n,
                            i + 2,
                            w[1],
                            row.n,
                            i + 1,
                            w[0],
                            c.c0,
                            c.c1
                        )
                    })
                })
            })
        } else {
            None
        },
    );

    // (d) growth floor on the first column.
    if !relaxed {
        push(
            "d",
            tables.rows.iter().find_map(|row| {
                let bound = admissibility_floor(row.n, c.c2, c.epsilon);
                ((row.d[0] as f64) < bound)
                    .then(|| format!("d({},1)={} below floor {:.1}", row.n, row.d[0], bound))
            }),
        );
    }

    // (1') window and modulus headroom for r(n).
    push(
        "1'",
        tables.rows.iter().find_map(|row| {
            let n = row.n as u64;
            let bad = if double {
                row.r < n || row.r >= (c.window_multiplier + 1) * n || 6 * row.r >= row.d[0]
            } else {
                row.r <= n || row.r >= 18 * n || 3 * row.r >= row.d[0]
            };
            bad.then(|| format!("r({})={} with d({},1)={}", row.n, row.r, row.n, row.d[0]))
        }),
    );

    // (2') cross-row congruence avoidance.
    push(
        "2'",
        tables.rows.iter().find_map(|row_l| {
            tables.rows.iter().find_map(|row_n| {
                if row_l.n == row_n.n {
                    return None;
                }
                row_n.d.iter().enumerate().find_map(|(i, &modulus)| {
                    congruence_conflict(row_l.r, row_n.r, modulus).then(|| {
                        format!(
                            "r({})={} hits +-r({}), +-2r({}) mod d({},{})={}",
                            row_l.n,
                            row_l.r,
                            row_n.n,
                            row_n.n,
                            row_n.n,
                            i + 1,
                            modulus
                        )
                    })
                })
            })
        }),
    );

    // (3') offsets 1 mod 6.
    push(
        "3'",
        if double {
            tables.rows.iter().find_map(|row| {
                (row.r % 6 != 1).then(|| format!("r({})={} is {} mod 6", row.n, row.r, row.r % 6))
            })
        } else {
            None
        },
    );

    ValidationReport { relaxed, entries }
}
