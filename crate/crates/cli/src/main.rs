//! Command line front end. Every subcommand echoes its resolved
//! configuration to stderr, writes its payload to stdout (or --out), and
//! exits 0 on success, 1 when a check ran and failed, 2 on configuration
//! errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sepgrowth::checks::{run_suite, SuiteOptions, SUITE_NAMES};
use sepgrowth::depth::{
    conj_pair_witness, conj_upper, growth_tables, rf_lower_witness, rf_upper, DepthReport,
    DepthWitness, Direction, GrowthMode, QuotientKind,
};
use sepgrowth::groups::{evaluate_at_coordinate, is_conjugate_element, is_identity_element};
use sepgrowth::params::{
    build_double_index, preset_growth_specs, validate, Constants, GrowthSpec, ParameterTables,
};
use sepgrowth::words::Word;
use sepgrowth::wreath::{alpha_inf, beta_inf};

#[derive(Parser)]
#[command(
    name = "sepgrowth",
    version,
    about = "Finite truncations of alternating-group products with a lamplighter coordinate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build double-index parameter tables and write them as JSON
    ParamsBuild(ParamsBuild),
    /// Check the table conditions on an existing tables file
    ParamsValidate(ParamsValidate),
    /// Evaluate a word at the infinite coordinate and across the tables
    EvalWord(EvalWord),
    /// Decide whether two words are conjugate over the tables
    DecideConj(DecideConj),
    /// Smallest separating quotient for a word, or the stock row witnesses
    Depth(Depth),
    /// Tabulate separation depth growth over word length
    GrowthTable(GrowthTableCmd),
    /// Run a named check suite (or "all")
    Verify(Verify),
}

#[derive(Args)]
struct ParamsBuild {
    /// Number of rows to build
    #[arg(long, default_value_t = 20)]
    n_max: u32,
    /// Floor-family constant for the first index (needs --floor2)
    #[arg(long)]
    floor1: Option<f64>,
    /// Floor-family constant for the second index (needs --floor1)
    #[arg(long)]
    floor2: Option<f64>,
    /// Explicit first-index growth values, comma separated (needs --table2)
    #[arg(long, value_delimiter = ',')]
    table1: Option<Vec<u64>>,
    /// Explicit second-index growth values, comma separated (needs --table1)
    #[arg(long, value_delimiter = ',')]
    table2: Option<Vec<u64>>,
    /// Write the tables here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamsValidate {
    #[arg(long)]
    tables: PathBuf,
    /// Skip the growth floor, as deliberately small tables must
    #[arg(long)]
    relaxed: bool,
}

#[derive(Args)]
struct EvalWord {
    #[arg(long)]
    tables: PathBuf,
    /// Word over a, b, e.g. "a^3 b^-1 a^-3 b"
    #[arg(long)]
    word: String,
    /// Also print the full image at this coordinate, as "n,m"
    #[arg(long)]
    at: Option<String>,
}

#[derive(Args)]
struct DecideConj {
    #[arg(long)]
    tables: PathBuf,
    #[arg(long)]
    w1: String,
    #[arg(long)]
    w2: String,
}

#[derive(Args)]
struct Depth {
    #[arg(long)]
    tables: PathBuf,
    /// Report the smallest quotient separating this word from the identity
    #[arg(long, conflicts_with_all = ["pair", "lower_witness", "conj_pair"])]
    word: Option<String>,
    /// Two words: smallest quotient separating their conjugacy classes
    #[arg(long, num_args = 2, conflicts_with_all = ["lower_witness", "conj_pair"])]
    pair: Option<Vec<String>>,
    /// Certified row witness for plain separation depth
    #[arg(long, conflicts_with = "conj_pair")]
    lower_witness: Option<u32>,
    /// Certified row witness for conjugacy separation depth
    #[arg(long)]
    conj_pair: Option<u32>,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Rf,
    Conj,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct GrowthTableCmd {
    #[arg(long)]
    tables: PathBuf,
    /// Largest word length to tabulate
    #[arg(long)]
    len: u64,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Random pairs per length once the exhaustive range is passed
    #[arg(long, default_value_t = 2000)]
    samples: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Verify {
    /// One of the named suites, or "all"
    suite: String,
    #[arg(long)]
    tables: Option<PathBuf>,
    /// Largest random word length (locality, d-invariance)
    #[arg(long)]
    len: Option<u64>,
    /// Random words per suite (locality, d-invariance)
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Row cap (commute, alt-containment, witnesses)
    #[arg(long)]
    n_cap: Option<u32>,
    /// Largest offset for the cycle-structure scan
    #[arg(long)]
    r_max: Option<u64>,
    /// Largest modulus for the cycle-structure scan
    #[arg(long)]
    d_cap: Option<u64>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::ParamsBuild(a) => params_build(a),
        Command::ParamsValidate(a) => params_validate(a),
        Command::EvalWord(a) => eval_word(a),
        Command::DecideConj(a) => decide_conj(a),
        Command::Depth(a) => depth(a),
        Command::GrowthTable(a) => growth_table(a),
        Command::Verify(a) => verify(a),
    }
}

fn load_tables(path: &Path) -> Result<ParameterTables> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ParameterTables::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_word(text: &str) -> Result<Word> {
    text.parse::<Word>()
        .map_err(|e| anyhow!("word {text:?}: {e}"))
}

fn emit(out: Option<&Path>, payload: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, payload)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn spec_label(spec: &GrowthSpec) -> String {
    match spec {
        GrowthSpec::Explicit(v) => format!("explicit[{}]", v.len()),
        GrowthSpec::FloorFamily { c } => format!("floor(c={c})"),
    }
}

fn params_build(a: ParamsBuild) -> Result<bool> {
    let (s1, s2) = match (a.floor1, a.floor2, &a.table1, &a.table2) {
        (None, None, None, None) => preset_growth_specs(),
        (Some(c1), Some(c2), None, None) => (
            GrowthSpec::FloorFamily { c: c1 },
            GrowthSpec::FloorFamily { c: c2 },
        ),
        (None, None, Some(t1), Some(t2)) => (
            GrowthSpec::explicit(t1.clone())?,
            GrowthSpec::explicit(t2.clone())?,
        ),
        _ => bail!("give both of --floor1/--floor2, both of --table1/--table2, or neither pair"),
    };
    eprintln!(
        "config: params-build n_max={} f1={} f2={} out={}",
        a.n_max,
        spec_label(&s1),
        spec_label(&s2),
        a.out.as_deref().map_or("stdout".into(), |p| p.display().to_string()),
    );
    let tables = build_double_index(&s1, &s2, a.n_max, Constants::default())?;
    emit(a.out.as_deref(), &tables.to_json())?;
    Ok(true)
}

fn params_validate(a: ParamsValidate) -> Result<bool> {
    eprintln!(
        "config: params-validate tables={} relaxed={}",
        a.tables.display(),
        a.relaxed
    );
    let tables = load_tables(&a.tables)?;
    let report = validate(&tables, a.relaxed);
    print!("{report}");
    println!(
        "{} rows, {}",
        tables.n_max(),
        if report.all_passed() { "all conditions pass" } else { "CONDITIONS FAILED" }
    );
    Ok(report.all_passed())
}

fn parse_coord(text: &str) -> Result<(u32, u32)> {
    let (n, m) = text
        .split_once(',')
        .ok_or_else(|| anyhow!("coordinate {text:?}: expected \"n,m\""))?;
    Ok((n.trim().parse()?, m.trim().parse()?))
}

fn eval_word(a: EvalWord) -> Result<bool> {
    eprintln!(
        "config: eval-word tables={} word={:?} at={}",
        a.tables.display(),
        a.word,
        a.at.as_deref().unwrap_or("-")
    );
    let tables = load_tables(&a.tables)?;
    let word = parse_word(&a.word)?;
    let z = word.evaluate(&alpha_inf(), &beta_inf());
    let lamps: Vec<String> = z
        .support()
        .iter()
        .map(|(p, v)| format!("{p}:{v}"))
        .collect();
    println!(
        "infinite coordinate: shift {}, lamps {{{}}}",
        z.shift(),
        lamps.join(", ")
    );
    println!("identity element: {}", is_identity_element(&word, &tables));

    let mut nontrivial = Vec::new();
    for n in 1..=tables.n_max() {
        for m in 1..=tables.m_n(n) {
            let image = evaluate_at_coordinate(&word, tables.d(n, m), tables.r(n));
            if !image.is_identity() {
                nontrivial.push(format!("({n},{m})"));
            }
        }
    }
    let total: u32 = (1..=tables.n_max()).map(|n| tables.m_n(n)).sum();
    let shown = nontrivial.len().min(8);
    println!(
        "nontrivial at {} of {} coordinates{}{}",
        nontrivial.len(),
        total,
        if shown > 0 { ": " } else { "" },
        nontrivial[..shown].join(" ")
    );

    if let Some(at) = &a.at {
        let (n, m) = parse_coord(at)?;
        if n < 1 || n > tables.n_max() || m < 1 || m > tables.m_n(n) {
            bail!("coordinate ({n},{m}) outside the tables");
        }
        let image = evaluate_at_coordinate(&word, tables.d(n, m), tables.r(n));
        println!("at ({n},{m}), d={}: {image}", tables.d(n, m));
    }
    Ok(true)
}

fn decide_conj(a: DecideConj) -> Result<bool> {
    eprintln!(
        "config: decide-conj tables={} w1={:?} w2={:?}",
        a.tables.display(),
        a.w1,
        a.w2
    );
    let tables = load_tables(&a.tables)?;
    let w1 = parse_word(&a.w1)?;
    let w2 = parse_word(&a.w2)?;
    let decision = is_conjugate_element(&w1, &w2, &tables);
    println!("conjugate: {}", decision.conjugate);
    match decision.witness {
        Some(w) => println!("witness: {w}"),
        None if decision.conjugate => {
            println!("witness: none assembled (coordinate corrections needed)")
        }
        None => {}
    }
    Ok(true)
}

fn report_lines(report: &DepthReport) -> String {
    let mut out = String::new();
    let value = match report.value.kind {
        QuotientKind::Alt { degree } => format!("alt({degree})"),
        QuotientKind::WreathFold { modulus } => format!("lamp fold k={modulus}"),
    };
    let _ = writeln!(
        out,
        "quotient: {value}, order 10^{:.3}",
        report.value.log10_order
    );
    let witness = match report.witness {
        DepthWitness::Coordinate { n, m } => format!("coordinate ({n},{m})"),
        DepthWitness::InfiniteFold { modulus } => format!("infinite coordinate mod {modulus}"),
    };
    let _ = writeln!(out, "witness: {witness}");
    let _ = writeln!(
        out,
        "direction: {}",
        match report.direction {
            Direction::Upper => "upper bound",
            Direction::ProvenLower => "proven lower bound",
        }
    );
    if let Some(nb) = report.norm {
        let _ = writeln!(out, "norm: word length {} <= {}", nb.word_norm, nb.linear_bound);
    }
    out
}

fn depth(a: Depth) -> Result<bool> {
    let tables = load_tables(&a.tables)?;
    let report = if let Some(text) = &a.word {
        eprintln!("config: depth tables={} word={text:?}", a.tables.display());
        rf_upper(&parse_word(text)?, &tables)?
    } else if let Some(pair) = &a.pair {
        eprintln!(
            "config: depth tables={} pair={:?}/{:?}",
            a.tables.display(),
            pair[0],
            pair[1]
        );
        conj_upper(&parse_word(&pair[0])?, &parse_word(&pair[1])?, &tables)?
    } else if let Some(n) = a.lower_witness {
        eprintln!("config: depth tables={} lower-witness n={n}", a.tables.display());
        rf_lower_witness(n, &tables)?
    } else if let Some(n) = a.conj_pair {
        eprintln!("config: depth tables={} conj-pair n={n}", a.tables.display());
        conj_pair_witness(n, &tables)?
    } else {
        bail!("pick one of --word, --pair, --lower-witness, --conj-pair");
    };
    print!("{}", report_lines(&report));
    Ok(true)
}

fn growth_table(a: GrowthTableCmd) -> Result<bool> {
    let mode = match a.mode {
        ModeArg::Rf => GrowthMode::Rf,
        ModeArg::Conj => GrowthMode::Conj,
    };
    eprintln!(
        "config: growth-table tables={} len={} mode={mode} seed={} samples={} format={} out={}",
        a.tables.display(),
        a.len,
        a.seed,
        a.samples,
        match a.format {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        },
        a.out.as_deref().map_or("stdout".into(), |p| p.display().to_string()),
    );
    let tables = load_tables(&a.tables)?;
    let table = growth_tables(&tables, a.len, mode, a.seed, a.samples)?;
    let payload = match a.format {
        FormatArg::Csv => table.to_csv(),
        FormatArg::Json => table.to_json(),
    };
    emit(a.out.as_deref(), &payload)?;
    Ok(true)
}

fn verify(a: Verify) -> Result<bool> {
    let mut opts = SuiteOptions::default();
    if let Some(v) = a.len {
        opts.max_len = v;
    }
    if let Some(v) = a.trials {
        opts.trials = v;
    }
    if let Some(v) = a.seed {
        opts.seed = v;
    }
    if let Some(v) = a.n_cap {
        opts.n_cap = v;
    }
    if let Some(v) = a.r_max {
        opts.r_max = v;
    }
    if let Some(v) = a.d_cap {
        opts.d_cap = v;
    }
    let names: Vec<&str> = if a.suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![a.suite.as_str()]
    };
    eprintln!(
        "config: verify suites={} tables={} len={} trials={} seed={:#x} n_cap={} r_max={} d_cap={}",
        names.join(","),
        a.tables.as_deref().map_or("-".into(), |p| p.display().to_string()),
        opts.max_len,
        opts.trials,
        opts.seed,
        opts.n_cap,
        opts.r_max,
        opts.d_cap,
    );
    let tables = match &a.tables {
        Some(path) => Some(load_tables(path)?),
        None => None,
    };
    let mut all_passed = true;
    for name in names {
        let report = run_suite(name, tables.as_ref(), &opts).map_err(|e| anyhow!(e))?;
        println!("{}", report.to_string().trim_end());
        all_passed &= report.passed();
    }
    Ok(all_passed)
}
