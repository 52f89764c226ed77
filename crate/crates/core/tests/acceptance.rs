//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the summary is always printed.

use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;

use conicline::cli::{cmd_analyze, cmd_hunt, Template};
use conicline::families::{self, compare_expected, projective_error, FamilySpec};
use conicline::report::{AnalysisReport, FiberReport};
use conicline::scalar::{parse_c64, qi_int, qi_ratio, C64};
use conicline::verify::{self, Status};
use conicline::Tolerances;

const SEED: u64 = 42;
const P2_F: &str = "(x-2*y)(x^2+y^2-z^2)";
const P2_G: &str = "(x-y)(x^2-x*y+y^2-z^2)";

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<(T, Duration), String> {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    ensure(took <= limit, || format!("{what} took {took:.2?}, limit {limit:?}"))?;
    Ok((out, took))
}

fn analyze_spec(spec: &FamilySpec) -> Result<AnalysisReport, String> {
    let pencil = spec.pencil(SEED).map_err(|e| format!("{}: {e}", spec.name))?;
    let report = conicline::report::analyze(&pencil, &Tolerances::default()).map_err(|e| format!("{}: {e}", spec.name))?;
    ensure(report.rejection.is_none(), || format!("{}: rejected: {:?}", spec.name, report.rejection))?;
    Ok(report)
}

fn no_mismatch(spec: &FamilySpec, report: &AnalysisReport) -> Result<(), String> {
    let diffs = compare_expected(spec, report);
    ensure(diffs.is_empty(), || format!("{}: {}", spec.name, diffs.join("; ")))
}

fn fermat_checks(d: u32, report: &AnalysisReport) -> Result<(), String> {
    let s = &report.summary;
    ensure(s.m == 3 && s.p == 3, || format!("d={d}: m={} p={}", s.m, s.p))?;
    ensure(s.nonspecial == 0, || format!("d={d}: {} non-special singular fibers", s.nonspecial))?;
    for f in report.special_fibers() {
        ensure(f.euler == d as i64 + 1, || format!("d={d}: fiber e={}", f.euler))?;
        ensure(f.singular_points.len() == 1, || format!("d={d}: {} singular points on a fiber", f.singular_points.len()))?;
        let mu = (d as usize - 1).pow(2);
        ensure(f.mu_total() == mu, || format!("d={d}: mu={} expected {mu}", f.mu_total()))?;
    }
    let total: usize = report.fibers.iter().map(|f| f.mu_total()).sum();
    ensure(total == 3 * (d as usize - 1).pow(2), || format!("d={d}: total mu {total}"))?;
    ensure(report.ledger.balance == 0, || format!("d={d}: balance {}", report.ledger.balance))
}

fn criterion_1() -> Outcome {
    let spec = families::fermat(3).map_err(|e| e.to_string())?;
    let (report, took) = timed(Duration::from_secs(5), "fermat d=3", || analyze_spec(&spec))?;
    let report = report?;
    fermat_checks(3, &report)?;
    no_mismatch(&spec, &report)?;
    Ok(format!("m=3 p=3 e=4 mu=4 balance 0 in {took:.2?}"))
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for d in [4, 5] {
        let spec = families::fermat(d).map_err(|e| e.to_string())?;
        let (report, took) = timed(Duration::from_secs(30), &format!("fermat d={d}"), || analyze_spec(&spec))?;
        let report = report?;
        fermat_checks(d, &report)?;
        no_mismatch(&spec, &report)?;
        let total: usize = report.fibers.iter().map(|f| f.mu_total()).sum();
        notes.push(format!("d={d}: sum mu={total} in {took:.2?}"));
    }
    Ok(notes.join(", "))
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    for (a, label) in [(qi_int(2, 0), "2"), (qi_int(3, 0), "3"), (qi_int(-1, 0), "-1"), (qi_ratio(1, 2), "1/2")] {
        let spec = families::pa(&a).map_err(|e| e.to_string())?;
        let (report, took) = timed(Duration::from_secs(10), &format!("P_{label}"), || analyze_spec(&spec))?;
        let report = report?;
        ensure(report.summary.m == 4, || format!("P_{label}: m={}", report.summary.m))?;
        // compare_expected matches params, factors (relative error 1e-6) and
        // general-position flags against the printed table
        no_mismatch(&spec, &report)?;
        let gp: Vec<bool> = spec.expected.iter().map(|e| e.general_position.unwrap_or(true)).collect();
        let want = match label {
            "2" => vec![true, true, false, true],
            "1/2" => vec![true, true, true, false],
            _ => vec![true; 4],
        };
        ensure(gp == want, || format!("P_{label}: expected table flags {gp:?}"))?;
        notes.push(format!("a={label} {took:.2?}"));
    }
    Ok(notes.join(", "))
}

fn find_member<'a>(report: &'a AnalysisReport, param: [f64; 2]) -> Option<&'a FiberReport> {
    let want = [C64::new(param[0], 0.0), C64::new(param[1], 0.0)];
    report.special_fibers().find(|f| {
        f.param_c64()
            .is_some_and(|p| projective_error(&want, &p) <= 1e-6)
    })
}

fn criterion_4() -> Outcome {
    let report = cmd_analyze(P2_F, P2_G, &Tolerances::default(), SEED).map_err(|e| e.to_string())?;
    let mut es = Vec::new();
    for param in [[1.0, 0.0], [0.0, 1.0], [1.0, -1.0], [1.0, -2.0]] {
        let f = find_member(&report, param).ok_or_else(|| format!("no member at {param:?}"))?;
        es.push(f.euler);
    }
    ensure(es == [2, 2, 3, 2], || format!("special e = {es:?}"))?;
    let non: Vec<&FiberReport> = report.fibers.iter().filter(|f| !f.special).collect();
    ensure(non.len() == 3, || format!("{} non-special fibers", non.len()))?;
    for f in &non {
        ensure(f.singular_points.len() == 1 && f.mu_total() == 1 && f.euler == 1, || {
            format!("non-special fiber with {} points, mu {}, e {}", f.singular_points.len(), f.mu_total(), f.euler)
        })?;
    }
    let l = &report.ledger;
    let sum: i64 = l.fiber_euler.iter().sum();
    ensure(l.e_surface == 12 && l.e_generic == 0 && sum == 12 && l.balance == 0, || format!("ledger {l:?}"))?;
    Ok(format!("special e {es:?}, 3 nodal fibers e=1, 12 = 0 + {sum}"))
}

/// Elements `a + b·ω` of the field of cube roots of unity, `ω² = −1 − ω`.
#[derive(Clone, Debug, PartialEq)]
struct Eisenstein {
    a: BigRational,
    b: BigRational,
}

impl Eisenstein {
    fn int(a: i64, b: i64) -> Self {
        Eisenstein {
            a: BigRational::from_integer(a.into()),
            b: BigRational::from_integer(b.into()),
        }
    }

    fn zero() -> Self {
        Eisenstein::int(0, 0)
    }

    fn omega_pow(k: usize) -> Self {
        match k % 3 {
            0 => Eisenstein::int(1, 0),
            1 => Eisenstein::int(0, 1),
            _ => Eisenstein::int(-1, -1),
        }
    }

    fn add(&self, o: &Self) -> Self {
        Eisenstein {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let bd = &self.b * &o.b;
        Eisenstein {
            a: &self.a * &o.a - &bd,
            b: &self.a * &o.b + &self.b * &o.a - &bd,
        }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn to_c64(&self) -> C64 {
        let f = |r: &BigRational| conicline::scalar::rational_to_f64(r);
        C64::new(f(&self.a) - 0.5 * f(&self.b), f(&self.b) * 3f64.sqrt() / 2.0)
    }
}

/// Cubic forms as maps from exponent triples to coefficients.
type Cubic = std::collections::BTreeMap<(u32, u32, u32), Eisenstein>;

fn multiply_lines(lines: &[[Eisenstein; 3]]) -> Cubic {
    let mut poly: Cubic = Cubic::new();
    poly.insert((0, 0, 0), Eisenstein::int(1, 0));
    for l in lines {
        let mut next = Cubic::new();
        for (e, c) in &poly {
            for (k, lc) in l.iter().enumerate() {
                let mut exp = *e;
                match k {
                    0 => exp.0 += 1,
                    1 => exp.1 += 1,
                    _ => exp.2 += 1,
                }
                let term = c.mul(lc);
                let slot = next.entry(exp).or_insert_with(Eisenstein::zero);
                *slot = slot.add(&term);
            }
        }
        poly = next;
    }
    poly.retain(|_, c| !c.is_zero());
    poly
}

fn det3(m: &[[Eisenstein; 3]]) -> Eisenstein {
    let minus = Eisenstein::int(-1, 0);
    let t = |i: usize, j: usize, k: usize| m[0][i].mul(&m[1][j]).mul(&m[2][k]);
    t(0, 1, 2)
        .add(&t(1, 2, 0))
        .add(&t(2, 0, 1))
        .add(&minus.mul(&t(2, 1, 0)))
        .add(&minus.mul(&t(0, 2, 1)))
        .add(&minus.mul(&t(1, 0, 2)))
}

/// Exact factorization of `x³ + y³ + z³ − 3ω^j·xyz` as a product of the
/// lines `x + ω^(j+k)·y + ω^(2k)·z`, verified by expanding in exact arithmetic.
fn hesse_oracle(j: usize) -> Result<Vec<[Eisenstein; 3]>, String> {
    let lines: Vec<[Eisenstein; 3]> = (0..3)
        .map(|k| [Eisenstein::int(1, 0), Eisenstein::omega_pow(j + k), Eisenstein::omega_pow(2 * k)])
        .collect();
    let mut member = Cubic::new();
    for e in [(3, 0, 0), (0, 3, 0), (0, 0, 3)] {
        member.insert(e, Eisenstein::int(1, 0));
    }
    member.insert((1, 1, 1), Eisenstein::int(-3, 0).mul(&Eisenstein::omega_pow(j)));
    ensure(multiply_lines(&lines) == member, || format!("oracle product mismatch for j={j}"))?;
    ensure(!det3(&lines).is_zero(), || format!("oracle lines concurrent for j={j}"))?;
    Ok(lines)
}

fn criterion_5() -> Outcome {
    let spec = families::hesse();
    let report = analyze_spec(&spec)?;
    let s = &report.summary;
    ensure(s.m == 4 && s.p == 0 && s.nonspecial == 0, || format!("m={} p={} non-special={}", s.m, s.p, s.nonspecial))?;
    ensure(report.ledger.balance == 0, || format!("balance {}", report.ledger.balance))?;
    for f in report.special_fibers() {
        ensure(f.lines.len() == 3 && f.conics.is_empty() && !f.concurrent, || format!("member {:?} is not a triangle", f.param))?;
        ensure(f.singular_points.len() == 3 && f.mu_total() == 3 && f.euler == 3, || format!("member {:?}: e={}", f.param, f.euler))?;
    }
    let one = C64::new(1.0, 0.0);
    for j in 0..3 {
        let oracle = hesse_oracle(j)?;
        let t = Eisenstein::int(-3, 0).mul(&Eisenstein::omega_pow(j)).to_c64();
        let fiber = report
            .special_fibers()
            .find(|f| f.param_c64().is_some_and(|p| projective_error(&[one, t], &p) <= 1e-6))
            .ok_or_else(|| format!("no member at [1:{t}]"))?;
        for line in &oracle {
            let want: Vec<C64> = line.iter().map(Eisenstein::to_c64).collect();
            let best = fiber
                .lines
                .iter()
                .map(|l| {
                    let got: Vec<C64> = l.coeffs.iter().filter_map(|c| parse_c64(c)).collect();
                    projective_error(&want, &got)
                })
                .fold(f64::INFINITY, f64::min);
            ensure(best <= 1e-6, || format!("oracle line {want:?} not found (error {best:e})"))?;
        }
    }
    let axes = report
        .special_fibers()
        .find(|f| f.param_c64().is_some_and(|p| p[0].norm() < 1e-12))
        .ok_or("no member at [0:1]")?;
    ensure(axes.certified, || "xyz member not certified".into())?;
    Ok("m=4 p=0, four triangles with 3 nodes and e=3, lines match the exact factorization".into())
}

fn corpus_reports() -> Result<Vec<AnalysisReport>, String> {
    families::default_corpus().iter().map(analyze_spec).collect()
}

fn criterion_6(corpus: &[AnalysisReport]) -> Outcome {
    let mut fibers = 0;
    for r in corpus {
        let d = r.degree as i64;
        for f in r.special_fibers().filter(|f| f.general_position && !f.concurrent) {
            let nodes = f.singular_points.iter().filter(|s| s.mu == 1).count() as i64;
            let want = d * (d - 1) / 2 - f.q as i64;
            ensure(nodes == want && f.singular_points.len() as i64 == nodes, || {
                format!("{} member {:?}: {nodes} nodes, expected {want}", r.f, f.param)
            })?;
            let v = verify::check_node_count(f, r.degree);
            ensure(v.status == Status::Pass, || format!("{}: {}", v.name, v.details))?;
            fibers += 1;
        }
    }
    ensure(fibers > 0, || "no general-position member in the corpus".into())?;
    Ok(format!("{fibers} general-position members"))
}

fn criterion_7(corpus: &[AnalysisReport]) -> Outcome {
    let mut count = 0;
    for r in corpus {
        for f in &r.fibers {
            for v in [verify::check_euler_bounds(f, r.degree), verify::check_concurrent_lines_euler(f, r.degree)] {
                ensure(!v.failed(), || format!("{}: {} on {:?}", v.name, v.details, f.param))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} fibers"))
}

fn cross_checks(f: &FiberReport) -> Result<(), String> {
    if f.special {
        ensure(f.euler_components == Some(f.euler), || format!("{:?}: components give {:?}, fiber {}", f.param, f.euler_components, f.euler))?;
        for s in &f.singular_points {
            let (r, delta) = (s.r.ok_or("missing branch count")?, s.delta.ok_or("missing delta")?);
            ensure(s.mu as i64 == 2 * delta as i64 - r as i64 + 1, || format!("mu={} delta={delta} r={r}", s.mu))?;
        }
    }
    Ok(())
}

fn criterion_8_and_9(corpus: &[AnalysisReport]) -> (Outcome, Outcome) {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return (Err(e.to_string()), Err("hunt did not run".into())),
    };
    let out = dir.path().join("hunt.jsonl");
    let run = timed(Duration::from_secs(600), "hunt", || {
        cmd_hunt(Template::ConicLinePair, 3, 200, 1, &out, &Tolerances::default())
    });
    let (records, took) = match run {
        Ok((Ok(r), t)) => (r, t),
        Ok((Err(e), _)) => return (Err(e.to_string()), Err("hunt did not run".into())),
        Err(e) => return (Err(e), Err("hunt did not finish in time".into())),
    };
    let c8 = (|| {
        let lines = std::fs::read_to_string(&out).map_err(|e| e.to_string())?.lines().count();
        ensure(lines == 200 && records.len() == 200, || format!("{lines} records persisted"))?;
        let analyzed: Vec<_> = records.iter().filter(|r| r.status == "analyzed").collect();
        let bad: Vec<usize> = analyzed
            .iter()
            .filter(|r| {
                let (m, p) = (r.m.unwrap_or(0), r.p.unwrap_or(0));
                m + p > 6 || p > 3 || r.violates_member_bound()
            })
            .map(|r| r.trial)
            .collect();
        ensure(bad.is_empty(), || format!("trials {bad:?} violate m <= 6 - p or p <= 3"))?;
        ensure(!analyzed.is_empty(), || "no trial was analyzed".into())?;
        let max_m = analyzed.iter().filter_map(|r| r.m).max().unwrap_or(0);
        Ok(format!("200 trials ({} analyzed, max m={max_m}), 0 violations in {took:.2?}", analyzed.len()))
    })();
    let c9 = (|| {
        let mut fibers = 0;
        for r in corpus {
            for f in r.special_fibers() {
                cross_checks(f).map_err(|e| format!("{}: {e}", r.f))?;
                fibers += 1;
            }
        }
        let mut verdicts = 0;
        for rec in &records {
            for v in &rec.verdicts {
                if v.name == verify::EULER_CROSS_CHECK || v.name == verify::MILNOR_DELTA_RELATION {
                    ensure(!v.failed(), || format!("hunt trial {}: {} {}", rec.trial, v.name, v.details))?;
                    verdicts += usize::from(v.passed());
                }
            }
        }
        Ok(format!("{fibers} corpus members, {verdicts} passing hunt verdicts"))
    })();
    (c8, c9)
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("p2-{k}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_conicline"))
            .args(["analyze", "--f", P2_F, "--g", P2_G, "--seed", "7", "--out"])
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("analyze exited with {status}"))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "reports differ".into())?;
    let report = AnalysisReport::from_json(std::str::from_utf8(&outputs[0]).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(report.seed == 7 && report.summary.m == 4, || "unexpected report content".into())?;
    Ok(format!("two runs, {} identical bytes", outputs[0].len()))
}

fn main() {
    let corpus = corpus_reports();
    let (c8, c9) = match &corpus {
        Ok(c) => criterion_8_and_9(c),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    let on_corpus = |f: fn(&[AnalysisReport]) -> Outcome| corpus.as_ref().map_err(|e| e.clone()).and_then(|c| f(c));
    let results: Vec<Outcome> = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        on_corpus(criterion_6),
        on_corpus(criterion_7),
        c8,
        c9,
        criterion_10(),
    ];
    let mut failed = 0;
    for (k, r) in results.iter().enumerate() {
        match r {
            Ok(note) => println!("criterion {}: pass ({note})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL ({why})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
