//! Command-line surface for the superengel library.
//!
//! Commands: `validate`, `analyze`, `decide`, `oracle`, `cross-check`,
//! `gallery`. Every command reads the JSON algebra format and emits either
//! human-readable text or a JSON report (`--json`).
//!
//! Exit codes: 0 = ran successfully (the verdict lives inside the report),
//! 2 = validation failure, 3 = enumeration budget exceeded, 4 = internal
//! disagreement detected by cross-check.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use superengel::engel::{
    central_power_check, chain_certificate, engel_degree_exact, engel_witness_search,
    CentralPower, ChainCertificate, OracleTier, OracleVerdict,
};
use superengel::env::{EnvConfig, RegularRep};
use superengel::format::{
    AlgebraFile, AnalysisSection, CrossCheckSection, OracleSection, ReportFile,
    ValidationSection, WitnessLine,
};
use superengel::lsa::{validate, LieSuperalgebra, ValidationReport};
use superengel::subspace::{
    bracket_space, center, derived_subalgebra, even_part, lower_central_series, odd_part,
};
use superengel::verdict::{cross_validate, decide_auto, decide_char0, decide_ordinary,
    decide_restricted, Agreement};
use superengel::{corpus, gallery, DEFAULT_BUDGET, DEFAULT_SEED};

const EXIT_VALIDATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_DISAGREEMENT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "superengel",
    version,
    about = "Decides the bounded Engel condition for enveloping algebras of finite-dimensional (restricted) Lie superalgebras, with brute-force cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the machine-readable JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Enumeration budget (elements); also via SUPERENGEL_BUDGET
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom and report violations
    Validate { file: PathBuf },
    /// Series, center, and dimension survey
    Analyze { file: PathBuf },
    /// Structural Engel decision
    Decide {
        file: PathBuf,
        /// auto | char0 | ordinary | restricted
        #[arg(long, default_value = "auto")]
        setting: String,
    },
    /// Envelope-side Engel oracle
    Oracle {
        file: PathBuf,
        /// auto | exact | symbolic | certificate | sample
        #[arg(long, default_value = "auto")]
        mode: String,
        /// Largest Engel degree probed by sampling
        #[arg(long, default_value_t = 9)]
        max_n: usize,
        /// Truncation cap for the ordinary envelope
        #[arg(long, default_value_t = 8)]
        trunc: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Structural verdict against oracle, on a file or a random corpus
    CrossCheck {
        file: Option<PathBuf>,
        /// `random` generates a corpus instead of reading a file
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        dim_even: usize,
        #[arg(long, default_value_t = 2)]
        dim_odd: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Emit a built-in algebra (g1..g6; aliases: example21, fan, heisenberg)
    Gallery {
        #[arg(long)]
        name: String,
        /// Number of even generators in the g1 family
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Characteristic (0 = rationals); default depends on the algebra
        #[arg(long)]
        p: Option<u64>,
        /// Override the per-algebra restricted default
        #[arg(long)]
        restricted: Option<bool>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn budget_from(cli_budget: Option<u64>) -> u64 {
    cli_budget
        .or_else(|| {
            std::env::var("SUPERENGEL_BUDGET")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(DEFAULT_BUDGET)
}

fn read_algebra(path: &PathBuf) -> Result<AlgebraFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn report_skeleton(command: &str, file: &AlgebraFile) -> ReportFile {
    ReportFile {
        command: command.into(),
        input_digest: file.digest(),
        characteristic: file.characteristic,
        restricted: file.restricted,
        dim_even: file.even_basis.len(),
        dim_odd: file.odd_basis.len(),
        ..Default::default()
    }
}

fn validation_section(outcome: &Result<LieSuperalgebra, ValidationReport>) -> ValidationSection {
    match outcome {
        Ok(_) => ValidationSection { valid: true, violations: vec![], budget_exceeded: false },
        Err(report) => ValidationSection {
            valid: false,
            violations: report.lines(),
            budget_exceeded: report.budget_exceeded(),
        },
    }
}

fn emit(report: &ReportFile, json: bool, human: impl FnOnce(&ReportFile)) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    } else {
        human(report);
    }
}

fn print_validation(report: &ReportFile) {
    let v = report.validation.as_ref().unwrap();
    if v.valid {
        println!(
            "valid: characteristic {}, {} even + {} odd generators{}",
            report.characteristic,
            report.dim_even,
            report.dim_odd,
            if report.restricted { ", restricted" } else { "" }
        );
    } else {
        println!("INVALID ({} violations):", v.violations.len());
        for line in &v.violations {
            println!("  - {line}");
        }
    }
}

fn run_validate(path: &PathBuf, json: bool, budget: u64) -> Result<u8, String> {
    let file = read_algebra(path)?;
    let started = Instant::now();
    let outcome = validate(&file, budget);
    let mut report = report_skeleton("validate", &file);
    report.validation = Some(validation_section(&outcome));
    report.timing_ms = started.elapsed().as_millis() as u64;
    let code = match &outcome {
        Ok(_) => 0,
        Err(r) if r.budget_exceeded() => EXIT_BUDGET,
        Err(_) => EXIT_VALIDATION,
    };
    emit(&report, json, print_validation);
    Ok(code)
}

fn analysis_section(l: &LieSuperalgebra) -> AnalysisSection {
    let series = lower_central_series(l);
    let l0 = even_part(l);
    let l1 = odd_part(l);
    AnalysisSection {
        lower_central_dims: series.dims(),
        nilpotent: series.terminal_zero,
        nilpotency_class: series.class,
        derived_dim: derived_subalgebra(l).dim(),
        center_dim: center(l).dim(),
        even_derived_dim: bracket_space(l, &l0, &l0).dim(),
        odd_square_dim: bracket_space(l, &l1, &l1).dim(),
    }
}

fn run_analyze(path: &PathBuf, json: bool, budget: u64) -> Result<u8, String> {
    let file = read_algebra(path)?;
    let started = Instant::now();
    let outcome = validate(&file, budget);
    let mut report = report_skeleton("analyze", &file);
    report.validation = Some(validation_section(&outcome));
    let code = match &outcome {
        Ok(l) => {
            report.analysis = Some(analysis_section(l));
            0
        }
        Err(r) if r.budget_exceeded() => EXIT_BUDGET,
        Err(_) => EXIT_VALIDATION,
    };
    report.timing_ms = started.elapsed().as_millis() as u64;
    emit(&report, json, |r| {
        print_validation(r);
        if let Some(a) = &r.analysis {
            println!("lower central dims: {:?}", a.lower_central_dims);
            match a.nilpotency_class {
                Some(c) => println!("nilpotent, class {c}"),
                None => println!("not nilpotent"),
            }
            println!(
                "derived dim {}, center dim {}, (L0,L0) dim {}, (L1,L1) dim {}",
                a.derived_dim, a.center_dim, a.even_derived_dim, a.odd_square_dim
            );
        }
    });
    Ok(code)
}

fn run_decide(path: &PathBuf, setting: &str, json: bool, budget: u64) -> Result<u8, String> {
    let file = read_algebra(path)?;
    let started = Instant::now();
    let outcome = validate(&file, budget);
    let mut report = report_skeleton("decide", &file);
    report.validation = Some(validation_section(&outcome));
    let l = match outcome {
        Ok(l) => l,
        Err(r) => {
            report.timing_ms = started.elapsed().as_millis() as u64;
            emit(&report, json, print_validation);
            return Ok(if r.budget_exceeded() { EXIT_BUDGET } else { EXIT_VALIDATION });
        }
    };
    let verdict = match setting {
        "auto" => decide_auto(&l, budget),
        "char0" => decide_char0(&l),
        "ordinary" => decide_ordinary(&l, budget),
        "restricted" => decide_restricted(&l, budget),
        other => return Err(format!("unknown setting `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    report.analysis = Some(analysis_section(&l));
    report.verdict = Some(verdict.to_section());
    report.timing_ms = started.elapsed().as_millis() as u64;
    emit(&report, json, |r| {
        let v = r.verdict.as_ref().unwrap();
        println!(
            "setting {}: bounded Engel = {} ({})",
            v.setting, v.engel, v.certainty
        );
        for c in &v.conditions {
            let mark = if c.holds { "+" } else { "-" };
            print!("  [{mark}] {}", c.name);
            if let Some(w) = &c.witness {
                print!("  witness: {w}");
            }
            if let Some(n) = &c.note {
                print!("  ({n})");
            }
            println!();
        }
        if let Some(pi) = &v.pi_certificate {
            println!("  PI certificate: {pi}");
        }
        for n in &v.notes {
            println!("  note: {n}");
        }
    });
    Ok(0)
}

fn oracle_section(
    cfg: &EnvConfig,
    tier: OracleTier,
    verdict: &OracleVerdict,
    budget_spent: u64,
) -> OracleSection {
    let mut section = OracleSection {
        tier: tier.as_str().into(),
        budget_spent,
        ..Default::default()
    };
    match verdict {
        OracleVerdict::EngelWithDegree(n) => {
            section.verdict = "engel".into();
            section.engel_degree = Some(*n);
        }
        OracleVerdict::CertifiedEngelViaChain { bound } => {
            section.verdict = "engel".into();
            section.certified_bound = Some(*bound);
        }
        OracleVerdict::NotEngelWitness { a, b, n } => {
            section.verdict = "not-engel".into();
            let value = cfg
                .iterated_commutator(a, b, *n)
                .expect("witness re-computes");
            section.witness = Some(WitnessLine {
                a: cfg.format_element(a),
                b: cfg.format_element(b),
                n: *n,
                value: cfg.format_element(&value),
            });
        }
        OracleVerdict::Inconclusive { reason } => {
            section.verdict = "inconclusive".into();
            section.reason = Some(reason.clone());
        }
    }
    section
}

#[allow(clippy::too_many_arguments)]
fn run_oracle(
    path: &PathBuf,
    mode: &str,
    max_n: usize,
    trunc: usize,
    seed: u64,
    json: bool,
    budget: u64,
) -> Result<u8, String> {
    let file = read_algebra(path)?;
    let started = Instant::now();
    let outcome = validate(&file, budget);
    let mut report = report_skeleton("oracle", &file);
    report.validation = Some(validation_section(&outcome));
    let l = match outcome {
        Ok(l) => l,
        Err(r) => {
            report.timing_ms = started.elapsed().as_millis() as u64;
            emit(&report, json, print_validation);
            return Ok(if r.budget_exceeded() { EXIT_BUDGET } else { EXIT_VALIDATION });
        }
    };

    if l.restricted && superengel::verdict::restricted_carrier_size(&l) > superengel::verdict::CARRIER_CAP
    {
        report.oracle = Some(OracleSection {
            tier: "exact".into(),
            verdict: "inconclusive".into(),
            reason: Some("envelope carrier too large for any oracle tier".into()),
            ..Default::default()
        });
        report.timing_ms = started.elapsed().as_millis() as u64;
        emit(&report, json, |r| {
            println!("oracle: inconclusive ({})", r.oracle.as_ref().unwrap().reason.as_ref().unwrap());
        });
        return Ok(EXIT_BUDGET);
    }

    let mut exit = 0u8;
    let section = if l.restricted {
        let cfg = EnvConfig::restricted(&l).map_err(|e| e.to_string())?;
        let rep = RegularRep::new(&cfg);
        let dim = rep.dim();
        let p = l.characteristic;
        let exact_feasible = (p as u128)
            .checked_pow(dim as u32 - 1)
            .is_some_and(|n| n <= budget as u128);
        let effective = match mode {
            "auto" if exact_feasible => "exact",
            "auto" => "certificate",
            m => m,
        };
        match effective {
            "exact" => {
                let r = engel_degree_exact(&cfg, &rep, budget).map_err(|e| e.to_string())?;
                if matches!(r.verdict, OracleVerdict::Inconclusive { .. }) {
                    exit = EXIT_BUDGET;
                }
                oracle_section(&cfg, r.tier, &r.verdict, r.budget_spent)
            }
            "symbolic" => {
                // smallest k that settles the question: all central at p^k
                // certifies Engel degree <= p^k; a failure at p^k >= dim
                // refutes bounded Engel
                let section;
                let mut k = 1u32;
                loop {
                    let r = central_power_check(&cfg, &rep, k, budget, seed)
                        .map_err(|e| e.to_string())?;
                    let pk = (p as u64).pow(k);
                    match r.outcome {
                        CentralPower::AllCentral => {
                            section = Some(oracle_section(
                                &cfg,
                                r.tier,
                                &OracleVerdict::CertifiedEngelViaChain { bound: pk },
                                r.budget_spent,
                            ));
                            break;
                        }
                        CentralPower::NotCentral { witness, .. } if pk >= dim as u64 => {
                            // an Engel algebra has all sufficiently high
                            // p-power maps central; this one does not
                            let v = OracleVerdict::NotEngelWitness {
                                a: cfg.generator(0),
                                b: witness,
                                n: dim,
                            };
                            // the 1-column may be the wrong partner; rebuild
                            // a checked witness from the ad matrix instead
                            let checked = superengel::engel::sample_ad_witness(
                                &cfg, &rep, 400, seed,
                            )
                            .map_err(|e| e.to_string())?;
                            let v = match checked {
                                Some((a, b, n)) => OracleVerdict::NotEngelWitness { a, b, n },
                                None => v,
                            };
                            section =
                                Some(oracle_section(&cfg, r.tier, &v, r.budget_spent));
                            break;
                        }
                        CentralPower::NotCentral { .. } => {
                            k += 1;
                            continue;
                        }
                        CentralPower::Inconclusive { reason } => {
                            exit = EXIT_BUDGET;
                            section = Some(oracle_section(
                                &cfg,
                                r.tier,
                                &OracleVerdict::Inconclusive { reason },
                                r.budget_spent,
                            ));
                            break;
                        }
                    }
                }
                section.unwrap()
            }
            "certificate" => {
                match chain_certificate(&cfg, &rep, budget, seed).map_err(|e| e.to_string())? {
                    ChainCertificate::Certified { bound, .. } => oracle_section(
                        &cfg,
                        OracleTier::Certificate,
                        &OracleVerdict::CertifiedEngelViaChain { bound },
                        0,
                    ),
                    ChainCertificate::RefutedByChain => {
                        let w = superengel::engel::sample_ad_witness(&cfg, &rep, 400, seed)
                            .map_err(|e| e.to_string())?;
                        let verdict = match w {
                            Some((a, b, n)) => OracleVerdict::NotEngelWitness { a, b, n },
                            None => OracleVerdict::Inconclusive {
                                reason: "chain refutes bounded Engel; no sampled pair found"
                                    .into(),
                            },
                        };
                        oracle_section(&cfg, OracleTier::Certificate, &verdict, 0)
                    }
                    ChainCertificate::CertificateInvalid { bound, .. } => {
                        exit = EXIT_DISAGREEMENT;
                        oracle_section(
                            &cfg,
                            OracleTier::Certificate,
                            &OracleVerdict::Inconclusive {
                                reason: format!("certified bound {bound} failed re-verification"),
                            },
                            0,
                        )
                    }
                    ChainCertificate::Inconclusive { reason } => oracle_section(
                        &cfg,
                        OracleTier::Certificate,
                        &OracleVerdict::Inconclusive { reason },
                        0,
                    ),
                }
            }
            "sample" => {
                let mut found = None;
                for n in 1..=max_n {
                    let r = engel_witness_search(&cfg, n, 400, 2, seed)
                        .map_err(|e| e.to_string())?;
                    if matches!(r.verdict, OracleVerdict::NotEngelWitness { .. }) {
                        found = Some(r);
                    }
                }
                match found {
                    Some(r) => oracle_section(&cfg, r.tier, &r.verdict, r.budget_spent),
                    None => oracle_section(
                        &cfg,
                        OracleTier::Sample,
                        &OracleVerdict::Inconclusive {
                            reason: format!("no witness for any n <= {max_n}"),
                        },
                        0,
                    ),
                }
            }
            other => return Err(format!("unknown oracle mode `{other}`")),
        }
    } else {
        // ordinary/char-0 envelope: sampling in the truncated algebra
        let cfg = EnvConfig::truncated(&l, trunc);
        let mut found = None;
        for n in 1..=max_n {
            let r = engel_witness_search(&cfg, n, 400, 2, seed).map_err(|e| e.to_string())?;
            if matches!(r.verdict, OracleVerdict::NotEngelWitness { .. }) {
                found = Some(r);
            }
        }
        match found {
            Some(r) => oracle_section(&cfg, r.tier, &r.verdict, r.budget_spent),
            None => oracle_section(
                &cfg,
                OracleTier::Sample,
                &OracleVerdict::Inconclusive {
                    reason: format!("no witness for any n <= {max_n} at truncation {trunc}"),
                },
                0,
            ),
        }
    };
    report.oracle = Some(section);
    report.timing_ms = started.elapsed().as_millis() as u64;
    emit(&report, json, |r| {
        let o = r.oracle.as_ref().unwrap();
        println!("oracle tier {}: {}", o.tier, o.verdict);
        if let Some(n) = o.engel_degree {
            println!("  minimal Engel degree: {n}");
        }
        if let Some(b) = o.certified_bound {
            println!("  certified Engel degree bound: {b}");
        }
        if let Some(w) = &o.witness {
            println!("  witness: a = {}, b = {}, n = {}", w.a, w.b, w.n);
            println!("  [a, {} b] = {}", w.n, w.value);
        }
        if let Some(reason) = &o.reason {
            println!("  reason: {reason}");
        }
    });
    Ok(exit)
}

fn agreement_counts(results: &[(String, Agreement)]) -> CrossCheckSection {
    let mut section = CrossCheckSection {
        instances: results.len(),
        ..Default::default()
    };
    for (desc, a) in results {
        match a {
            Agreement::Disagree { .. } => {
                section.disagreements += 1;
                section.details.push(format!("{desc}: {}", a.as_str()));
            }
            Agreement::InconclusiveLabeled => {
                section.inconclusive += 1;
            }
            _ => {}
        }
    }
    section.agreement = if section.disagreements == 0 { "ok".into() } else { "DISAGREEMENT".into() };
    section
}

#[allow(clippy::too_many_arguments)]
fn run_cross_check(
    file: Option<&PathBuf>,
    corpus_kind: Option<&str>,
    count: usize,
    dim_even: usize,
    dim_odd: usize,
    p: u64,
    seed: u64,
    json: bool,
    budget: u64,
) -> Result<u8, String> {
    let started = Instant::now();
    let mut results: Vec<(String, Agreement)> = Vec::new();
    let mut lemma_failures: Vec<String> = Vec::new();
    let mut report;
    match (file, corpus_kind) {
        (Some(path), None) => {
            let algebra_file = read_algebra(path)?;
            report = report_skeleton("cross-check", &algebra_file);
            let outcome = validate(&algebra_file, budget);
            report.validation = Some(validation_section(&outcome));
            let l = match outcome {
                Ok(l) => l,
                Err(r) => {
                    emit(&report, json, print_validation);
                    return Ok(if r.budget_exceeded() { EXIT_BUDGET } else { EXIT_VALIDATION });
                }
            };
            let r = cross_validate(&l, budget, seed, 6).map_err(|e| e.to_string())?;
            for c in &r.lemma_checks {
                if !c.holds {
                    lemma_failures.push(c.name.clone());
                }
            }
            report.verdict = Some(r.verdict.to_section());
            results.push((path.display().to_string(), r.agreement));
        }
        (None, Some("random")) => {
            let files = corpus::generate_corpus(seed, count, p, dim_even, dim_odd, true, budget);
            if files.len() < count {
                return Err(format!(
                    "corpus generation produced only {} of {count} instances",
                    files.len()
                ));
            }
            report = ReportFile {
                command: "cross-check".into(),
                input_digest: format!("corpus(seed={seed},count={count},p={p})"),
                characteristic: p,
                restricted: true,
                dim_even,
                dim_odd,
                ..Default::default()
            };
            for (idx, f) in files.iter().enumerate() {
                let l = validate(f, budget).expect("corpus instances are validated");
                let r = cross_validate(&l, budget, seed + idx as u64, 6)
                    .map_err(|e| e.to_string())?;
                for c in &r.lemma_checks {
                    if !c.holds {
                        lemma_failures.push(format!("instance {idx}: {}", c.name));
                    }
                }
                results.push((format!("instance {idx}"), r.agreement));
            }
        }
        _ => return Err("pass a file, or --corpus random".into()),
    }
    let mut section = agreement_counts(&results);
    section.lemma_failures = lemma_failures;
    let disagreement = section.disagreements > 0 || !section.lemma_failures.is_empty();
    report.cross_check = Some(section);
    report.timing_ms = started.elapsed().as_millis() as u64;
    emit(&report, json, |r| {
        let c = r.cross_check.as_ref().unwrap();
        println!(
            "cross-check: {} instances, {} disagreements, {} inconclusive",
            c.instances, c.disagreements, c.inconclusive
        );
        for d in &c.details {
            println!("  {d}");
        }
        for f in &c.lemma_failures {
            println!("  lemma failure: {f}");
        }
    });
    Ok(if disagreement { EXIT_DISAGREEMENT } else { 0 })
}

fn run_gallery(
    name: &str,
    m: usize,
    p: Option<u64>,
    restricted: Option<bool>,
    out: Option<&PathBuf>,
    json: bool,
) -> Result<u8, String> {
    if m == 0 {
        return Err("--m must be at least 1".into());
    }
    let default_p = if name == "g5" { 0 } else { 3 };
    let p = p.unwrap_or(default_p);
    let file = gallery::by_name(name, m, p, restricted)
        .ok_or_else(|| format!("unknown gallery id `{name}` (known: {:?})", gallery::NAMES))?;
    let text = serde_json::to_string_pretty(&file).expect("algebra serializes");
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| format!("cannot write: {e}"))?;
            if !json {
                println!("wrote {}", path.display());
            }
        }
        None => println!("{text}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    // behave like a unix filter when stdout closes early (decide | head)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let budget = budget_from(cli.budget);
    let result = match &cli.command {
        Command::Validate { file } => run_validate(file, cli.json, budget),
        Command::Analyze { file } => run_analyze(file, cli.json, budget),
        Command::Decide { file, setting } => run_decide(file, setting, cli.json, budget),
        Command::Oracle { file, mode, max_n, trunc, seed } => {
            run_oracle(file, mode, *max_n, *trunc, *seed, cli.json, budget)
        }
        Command::CrossCheck { file, corpus, count, dim_even, dim_odd, p, seed } => run_cross_check(
            file.as_ref(),
            corpus.as_deref(),
            *count,
            *dim_even,
            *dim_odd,
            *p,
            *seed,
            cli.json,
            budget,
        ),
        Command::Gallery { name, m, p, restricted, out } => {
            run_gallery(name, *m, *p, *restricted, out.as_ref(), cli.json)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
