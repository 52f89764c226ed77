//! Command-line front end.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::Error;
use crate::families::{self, compare_expected, FamilySpec};
use crate::forms::{ExactForm, TernaryForm};
use crate::pencil::Pencil;
use crate::plot::render_svg;
use crate::report::{analyze, AnalysisReport};
use crate::scalar::{qi_int, QI};
use crate::verify::{Status, Verdict, MEMBER_COUNT_BOUND};

#[derive(Debug, Parser)]
#[command(name = "conicline", version, about = "Conic-line members of pencils of plane curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct CommonOpts {
    /// Base tolerance; the other tolerances keep their default ratios to it.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

impl CommonOpts {
    pub fn tolerances(&self) -> Tolerances {
        self.tol.map(Tolerances::with_tau).unwrap_or_default()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze the pencil spanned by two forms.
    Analyze {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        opts: CommonOpts,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check over a corpus of built-in pencils.
    Verify {
        /// `default`, `empty`, or a family name such as `fermat-4`, `pa-1/2`, `hesse`.
        #[arg(long, default_value = "default")]
        corpus: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Analyze randomly generated pencils and record the results.
    Hunt {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Template::ConicLinePair)]
        template: Template,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSONL output; candidates with m >= 5 also go to `<out>.candidates.jsonl`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Draw the real conic-line members of a report in the chart z = 1.
    Plot {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Analyze a built-in family and compare it with its expected table.
    Family {
        /// `fermat`, `pa` or `hesse`.
        name: String,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[command(flatten)]
        opts: CommonOpts,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Template {
    /// Dense forms with small integer coefficients.
    RandomDense,
    /// Products of random lines and conics.
    ConicLinePair,
    /// A line times conics of the shape `x² + bxy + cy² - z²`, as in the
    /// built-in four-member cubic family.
    PaLike,
}

/// Process exit status for an analysis.
pub fn exit_code(result: &Result<AnalysisReport, Error>) -> i32 {
    match result {
        Ok(r) if r.rejection.is_some() => 2,
        Ok(_) => 0,
        Err(Error::CommonComponent | Error::NonTransverse { .. } | Error::NonReducedMember { .. } | Error::DegenerateEliminant(_)) => 2,
        Err(_) => 1,
    }
}

/// Parses both forms and analyzes their pencil.
pub fn cmd_analyze(f: &str, g: &str, tol: &Tolerances, seed: u64) -> Result<AnalysisReport, Error> {
    crate::report::analyze_text(f, g, tol, seed)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Outcome of running the checks over one corpus member.
#[derive(Debug, Clone)]
pub struct CorpusResult {
    pub name: String,
    pub report: Option<AnalysisReport>,
    pub mismatches: Vec<String>,
    pub failed_checks: Vec<Verdict>,
    pub applicable: usize,
    pub error: Option<String>,
}

impl CorpusResult {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.mismatches.is_empty() && self.failed_checks.is_empty()
    }
}

pub fn corpus_by_name(name: &str) -> Result<Vec<FamilySpec>> {
    match name {
        "default" => Ok(families::default_corpus()),
        "empty" => Ok(Vec::new()),
        other => {
            let found: Vec<FamilySpec> = families::default_corpus().into_iter().filter(|f| f.name == other).collect();
            if !found.is_empty() {
                return Ok(found);
            }
            let (family, arg) = other.split_once('-').unwrap_or((other, ""));
            let spec = match family {
                "fermat" => families::fermat(arg.parse().context("fermat degree")?)?,
                "pa" => families::by_name("pa", None, Some(arg))?,
                _ => bail!("unknown corpus {other}"),
            };
            Ok(vec![spec])
        }
    }
}

pub fn run_corpus(corpus: &[FamilySpec], tol: &Tolerances, seed: u64) -> Vec<CorpusResult> {
    corpus
        .iter()
        .map(|spec| {
            let analysis = spec.pencil(seed).and_then(|p| analyze(&p, tol));
            match analysis {
                Ok(report) => {
                    let failed_checks = report.verdicts.iter().filter(|v| v.failed()).cloned().collect();
                    let applicable = report.verdicts.iter().filter(|v| v.status != Status::NotApplicable).count();
                    CorpusResult {
                        name: spec.name.clone(),
                        mismatches: compare_expected(spec, &report),
                        report: Some(report),
                        failed_checks,
                        applicable,
                        error: None,
                    }
                }
                Err(e) => CorpusResult {
                    name: spec.name.clone(),
                    report: None,
                    mismatches: Vec::new(),
                    failed_checks: Vec::new(),
                    applicable: 0,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// One line of the hunt output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntRecord {
    pub trial: usize,
    pub seed: u64,
    pub degree: u32,
    pub template: Template,
    pub f: String,
    pub g: String,
    /// `analyzed`, `rejected` or `error`.
    pub status: String,
    pub message: Option<String>,
    pub m: Option<usize>,
    pub p: Option<usize>,
    pub qbar: Option<usize>,
    pub balance: Option<i64>,
    pub verdicts: Vec<Verdict>,
}

impl HuntRecord {
    pub fn violates_member_bound(&self) -> bool {
        self.verdicts.iter().any(|v| v.name == MEMBER_COUNT_BOUND && v.failed())
    }
}

fn small(rng: &mut ChaCha8Rng, bound: i64) -> QI {
    qi_int(rng.gen_range(-bound..=bound), 0)
}

fn random_line(rng: &mut ChaCha8Rng) -> ExactForm {
    loop {
        let c = [small(rng, 3), small(rng, 3), small(rng, 3)];
        let l = TernaryForm::linear(c);
        if !l.is_zero() {
            return l;
        }
    }
}

fn random_conic(rng: &mut ChaCha8Rng) -> ExactForm {
    let coeffs: Vec<QI> = (0..6).map(|_| small(rng, 3)).collect();
    let c = TernaryForm::new(2, coeffs).expect("six coefficients");
    if c.is_zero() {
        random_conic(rng)
    } else {
        c
    }
}

fn random_product(rng: &mut ChaCha8Rng, d: u32) -> ExactForm {
    let mut left = d;
    let mut out = TernaryForm::constant(qi_int(1, 0));
    while left > 0 {
        let factor = if left >= 2 && rng.gen_bool(0.5) { random_conic(rng) } else { random_line(rng) };
        left -= factor.degree();
        out = out.mul(&factor);
    }
    out
}

fn pa_like(rng: &mut ChaCha8Rng, d: u32) -> ExactForm {
    let mut out = TernaryForm::linear([qi_int(1, 0), small(rng, 3), qi_int(0, 0)]);
    let mut left = d - 1;
    if left % 2 == 1 {
        out = out.mul(&random_line(rng));
        left -= 1;
    }
    for _ in 0..left / 2 {
        let conic = TernaryForm::from_terms(
            2,
            [
                ((2, 0, 0), qi_int(1, 0)),
                ((1, 1, 0), small(rng, 2)),
                ((0, 2, 0), small(rng, 2)),
                ((0, 0, 2), qi_int(-1, 0)),
            ],
        )
        .expect("degree 2 terms");
        out = out.mul(&conic);
    }
    out
}

pub fn generate(template: Template, d: u32, seed: u64) -> (ExactForm, ExactForm) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match template {
        Template::RandomDense => {
            let dense = |rng: &mut ChaCha8Rng| {
                let coeffs: Vec<QI> = (0..crate::forms::monomial_count(d)).map(|_| small(rng, 5)).collect();
                TernaryForm::new(d, coeffs).expect("dense coefficient count")
            };
            (dense(&mut rng), dense(&mut rng))
        }
        Template::ConicLinePair => (random_product(&mut rng, d), random_product(&mut rng, d)),
        Template::PaLike => (pa_like(&mut rng, d), pa_like(&mut rng, d)),
    }
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add((trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs one hunt trial.
pub fn hunt_trial(template: Template, d: u32, seed: u64, trial: usize, tol: &Tolerances) -> HuntRecord {
    let s = trial_seed(seed, trial);
    let (f, g) = generate(template, d, s);
    let mut rec = HuntRecord {
        trial,
        seed: s,
        degree: d,
        template,
        f: f.to_expr(),
        g: g.to_expr(),
        status: "error".into(),
        message: None,
        m: None,
        p: None,
        qbar: None,
        balance: None,
        verdicts: Vec::new(),
    };
    match Pencil::new(f, g, s).and_then(|p| analyze(&p, tol)) {
        Ok(r) => {
            rec.status = if r.rejection.is_some() { "rejected".into() } else { "analyzed".into() };
            rec.message = r.rejection.clone();
            if r.rejection.is_none() {
                rec.m = Some(r.summary.m);
                rec.p = Some(r.summary.p);
                rec.qbar = Some(r.summary.qbar);
                rec.balance = Some(r.ledger.balance);
                rec.verdicts = r.verdicts;
            }
        }
        Err(e) => {
            rec.status = if exit_code(&Err(e.clone())) == 2 { "rejected".into() } else { "error".into() };
            rec.message = Some(e.to_string());
        }
    }
    rec
}

fn candidates_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".candidates.jsonl");
    out.with_file_name(name)
}

/// Runs `trials` trials in parallel and writes records in trial order.
pub fn cmd_hunt(template: Template, d: u32, trials: usize, seed: u64, out: &Path, tol: &Tolerances) -> Result<Vec<HuntRecord>> {
    if d < 2 {
        bail!("hunt needs degree >= 2");
    }
    let mut main = BufWriter::new(File::create(out).with_context(|| format!("creating {}", out.display()))?);
    let cand_path = candidates_path(out);
    let mut candidates = BufWriter::new(File::create(&cand_path).with_context(|| format!("creating {}", cand_path.display()))?);
    let mut all = Vec::with_capacity(trials);
    const CHUNK: usize = 64;
    let mut start = 0;
    while start < trials {
        let end = (start + CHUNK).min(trials);
        let records: Vec<HuntRecord> = (start..end).into_par_iter().map(|k| hunt_trial(template, d, seed, k, tol)).collect();
        for r in &records {
            let line = serde_json::to_string(r)?;
            writeln!(main, "{line}")?;
            if r.m.is_some_and(|m| m >= 5) {
                writeln!(candidates, "{line}")?;
            }
        }
        main.flush()?;
        candidates.flush()?;
        all.extend(records);
        start = end;
    }
    Ok(all)
}

fn report_line(r: &AnalysisReport) -> String {
    format!(
        "m={} p={} qbar={} non-special={} balance={}",
        r.summary.m, r.summary.p, r.summary.qbar, r.summary.nonspecial, r.ledger.balance
    )
}

/// Runs the command line; returns the process exit status.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze { f, g, opts, out } => {
            let result = cmd_analyze(&f, &g, &opts.tolerances(), opts.seed);
            let code = exit_code(&result);
            match &result {
                Ok(r) => {
                    write_text(out.as_deref(), &r.to_json())?;
                    if let Some(reason) = &r.rejection {
                        eprintln!("rejected: {reason}");
                    }
                }
                Err(e) => eprintln!("error: {e}"),
            }
            Ok(code)
        }
        Command::Family { name, d, a, opts, out } => {
            let spec = families::by_name(&name, d, a.as_deref())?;
            let pencil = spec.pencil(opts.seed)?;
            let result = analyze(&pencil, &opts.tolerances());
            let code = exit_code(&result);
            let report = match result {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(code);
                }
            };
            write_text(out.as_deref(), &report.to_json())?;
            let mismatches = compare_expected(&spec, &report);
            for m in &mismatches {
                eprintln!("{}: {m}", spec.name);
            }
            Ok(if mismatches.is_empty() { code } else { 1 })
        }
        Command::Verify { corpus, opts } => {
            let specs = corpus_by_name(&corpus)?;
            let results = run_corpus(&specs, &opts.tolerances(), opts.seed);
            let mut failures = 0;
            let mut checks = 0;
            for r in &results {
                checks += r.applicable;
                let status = if r.ok() { "ok" } else { "FAIL" };
                match (&r.report, &r.error) {
                    (Some(rep), _) => println!("{:<10} {status:<4} {} ({} applicable checks)", r.name, report_line(rep), r.applicable),
                    (None, Some(e)) => println!("{:<10} {status:<4} error: {e}", r.name),
                    _ => {}
                }
                for v in &r.failed_checks {
                    println!("    check {} failed: {}", v.name, v.details);
                }
                for m in &r.mismatches {
                    println!("    expected table: {m}");
                }
                if !r.ok() {
                    failures += 1;
                }
            }
            println!("{} pencils, {checks} applicable checks, {failures} failing pencils", results.len());
            Ok(if failures == 0 { 0 } else { 1 })
        }
        Command::Hunt {
            degree,
            trials,
            template,
            seed,
            out,
            workers,
            tol,
        } => {
            let tol = tol.map(Tolerances::with_tau).unwrap_or_default();
            let records = match workers {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()?
                    .install(|| cmd_hunt(template, degree, trials, seed, &out, &tol))?,
                None => cmd_hunt(template, degree, trials, seed, &out, &tol)?,
            };
            let analyzed = records.iter().filter(|r| r.status == "analyzed").count();
            let violations = records.iter().filter(|r| r.violates_member_bound()).count();
            let best = records.iter().filter_map(|r| r.m).max();
            eprintln!(
                "{} trials, {analyzed} analyzed, max m = {best:?}, {violations} member-count violations",
                records.len()
            );
            Ok(if violations == 0 { 0 } else { 1 })
        }
        Command::Plot { report, out } => {
            let text = std::fs::read_to_string(&report).with_context(|| format!("reading {}", report.display()))?;
            let rep = AnalysisReport::from_json(&text).context("parsing report")?;
            match render_svg(&rep) {
                Ok(svg) => {
                    std::fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(2)
                }
            }
        }
    }
}
