//! Serializable analysis reports.
//!
//! Every number is stored as a decimal string with 17 significant digits,
//! together with an exact string when the value is a Gaussian rational, so
//! that a report round-trips through JSON without loss.

use serde::{Deserialize, Serialize};

use crate::classify::Classification;
use crate::config::Tolerances;
use crate::error::Error;
use crate::euler::global_ledger;
use crate::forms::{parse_form, FloatForm, TernaryForm};
use crate::pencil::{Pencil, SingularFiber};
use crate::scalar::{format_c64, format_f64, format_qi, parse_c64, C64};
use crate::verify::{run_checks, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceReport {
    pub tau: String,
    pub tau_div: String,
    pub rho_c: String,
    pub rho_loc: String,
    pub eps: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub coords: [String; 3],
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseLocusReport {
    pub count: usize,
    pub transverse: bool,
    pub points: Vec<PointReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineReport {
    /// `(a, b, c)` of `ax + by + cz`.
    pub coeffs: [String; 3],
    pub exact: Option<String>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConicReport {
    /// Coefficients of `x², xy, xz, y², yz, z²`.
    pub coeffs: Vec<String>,
    pub exact: Option<String>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularPointReport {
    pub coords: [String; 3],
    pub mu: usize,
    /// Multiplicity of the point in the critical system of the pencil.
    pub critical_multiplicity: usize,
    pub r: Option<usize>,
    pub delta: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    pub param: [String; 2],
    pub param_exact: Option<[String; 2]>,
    pub form: String,
    pub reduced: bool,
    pub special: bool,
    pub lines: Vec<LineReport>,
    pub conics: Vec<ConicReport>,
    /// Degree left undecomposed for members that are not conic-line.
    pub remainder_degree: Option<u32>,
    pub q: usize,
    pub concurrent: bool,
    pub concurrent_point: Option<[String; 3]>,
    pub general_position: bool,
    pub certified: bool,
    pub singular_points: Vec<SingularPointReport>,
    pub euler: i64,
    pub euler_components: Option<i64>,
}

impl FiberReport {
    pub fn mu_total(&self) -> usize {
        self.singular_points.iter().map(|s| s.mu).sum()
    }

    pub fn param_c64(&self) -> Option<[C64; 2]> {
        Some([parse_c64(&self.param[0])?, parse_c64(&self.param[1])?])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub m: usize,
    pub p: usize,
    pub qbar: usize,
    /// Number of singular fibers that are not conic-line.
    pub nonspecial: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub e_surface: i64,
    pub e_generic: i64,
    pub genus: i64,
    pub fiber_euler: Vec<i64>,
    pub mu_total: i64,
    pub balance: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub degree: u32,
    pub seed: u64,
    pub f: String,
    pub g: String,
    pub tolerances: ToleranceReport,
    /// Why the analysis stopped early, if it did.
    pub rejection: Option<String>,
    pub base_locus: BaseLocusReport,
    pub fibers: Vec<FiberReport>,
    pub summary: Summary,
    pub ledger: LedgerReport,
    pub verdicts: Vec<Verdict>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<AnalysisReport, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn special_fibers(&self) -> impl Iterator<Item = &FiberReport> {
        self.fibers.iter().filter(|f| f.special)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

fn coords3(c: &[C64; 3]) -> [String; 3] {
    c.map(format_c64)
}

fn fiber_report(fiber: &SingularFiber) -> FiberReport {
    let mut out = FiberReport {
        param: fiber.param.map(format_c64),
        param_exact: fiber.exact_param.as_ref().map(|p| [format_qi(&p[0]), format_qi(&p[1])]),
        form: match &fiber.exact_form {
            Some(e) => e.to_expr(),
            None => fiber.form.to_expr(),
        },
        reduced: fiber.reduced,
        special: fiber.is_special(),
        lines: Vec::new(),
        conics: Vec::new(),
        remainder_degree: None,
        q: 0,
        concurrent: false,
        concurrent_point: None,
        general_position: false,
        certified: false,
        singular_points: fiber
            .singular_points
            .iter()
            .map(|s| SingularPointReport {
                coords: coords3(s.point.coords()),
                mu: s.milnor,
                critical_multiplicity: s.critical_multiplicity,
                r: s.branches,
                delta: s.delta,
            })
            .collect(),
        euler: fiber.euler,
        euler_components: fiber.euler_components,
    };
    let line_report = |l: &crate::classify::LineFactor| LineReport {
        coeffs: l.coeffs.map(format_c64),
        exact: l.exact.as_ref().map(|e| TernaryForm::linear(e.clone()).to_expr()),
        multiplicity: l.multiplicity,
    };
    let conic_report = |c: &crate::classify::ConicFactor| ConicReport {
        coeffs: c.form.coeffs().iter().map(|v| format_c64(*v)).collect(),
        exact: c.exact.as_ref().map(|e| e.to_expr()),
        multiplicity: c.multiplicity,
    };
    match &fiber.classification {
        Some(Classification::ConicLine(dec)) => {
            out.lines = dec.lines.iter().map(line_report).collect();
            out.conics = dec.conics.iter().map(conic_report).collect();
            out.q = dec.q();
            out.concurrent = dec.concurrent_point.is_some();
            out.concurrent_point = dec.concurrent_point.map(|p| coords3(p.coords()));
            out.general_position = dec.general_position;
            out.certified = dec.certified;
        }
        Some(Classification::NotConicLine {
            remainder_degree,
            lines,
            conics,
        }) => {
            out.lines = lines.iter().map(line_report).collect();
            out.conics = conics.iter().map(conic_report).collect();
            out.remainder_degree = Some(*remainder_degree);
        }
        None => {}
    }
    out
}

fn summary(fibers: &[FiberReport]) -> Summary {
    let special: Vec<&FiberReport> = fibers.iter().filter(|f| f.special).collect();
    Summary {
        m: special.len(),
        p: special.iter().filter(|f| f.concurrent).count(),
        qbar: special.iter().filter(|f| !f.concurrent).map(|f| f.q).sum(),
        nonspecial: fibers.iter().filter(|f| !f.special).count(),
    }
}

fn ledger_report(d: u32, fibers: &[FiberReport]) -> LedgerReport {
    let pairs: Vec<(i64, i64)> = fibers.iter().map(|f| (f.euler, f.mu_total() as i64)).collect();
    let l = global_ledger(d, &pairs);
    LedgerReport {
        e_surface: l.e_surface,
        e_generic: l.e_generic,
        genus: l.genus,
        fiber_euler: pairs.iter().map(|p| p.0).collect(),
        mu_total: pairs.iter().map(|p| p.1).sum(),
        balance: l.balance,
    }
}

/// Runs the full analysis. Structural rejections (non-transverse base locus)
/// yield a report with `rejection` set rather than an error.
pub fn analyze(pencil: &Pencil, tol: &Tolerances) -> Result<AnalysisReport, Error> {
    tol.validate()?;
    let d = pencil.degree();
    let base = pencil.base_locus(tol)?;
    let mut report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        degree: d,
        seed: pencil.seed(),
        f: pencil.f().to_expr(),
        g: pencil.g().to_expr(),
        tolerances: ToleranceReport {
            tau: format_f64(tol.tau),
            tau_div: format_f64(tol.tau_div),
            rho_c: format_f64(tol.rho_c),
            rho_loc: format_f64(tol.rho_loc),
            eps: format_f64(tol.eps),
        },
        rejection: None,
        base_locus: BaseLocusReport {
            count: base.count(),
            transverse: base.transverse,
            points: base
                .points
                .iter()
                .map(|z| PointReport {
                    coords: coords3(z.point.coords()),
                    multiplicity: z.multiplicity,
                })
                .collect(),
        },
        fibers: Vec::new(),
        summary: summary(&[]),
        ledger: ledger_report(d, &[]),
        verdicts: Vec::new(),
    };
    if !base.transverse {
        report.rejection = Some(format!(
            "base locus is not transverse ({} distinct points, expected {})",
            base.count(),
            d * d
        ));
        return Ok(report);
    }
    let fibers = pencil.singular_members(&base, tol)?;
    report.fibers = fibers.iter().map(fiber_report).collect();
    if let Some(f) = report.fibers.iter().find(|f| !f.reduced) {
        report.rejection = Some(format!("member [{}:{}] is not reduced", f.param[0], f.param[1]));
    }
    report.summary = summary(&report.fibers);
    report.ledger = ledger_report(d, &report.fibers);
    report.verdicts = run_checks(&report);
    Ok(report)
}

/// Parses both forms and analyzes the pencil they span.
pub fn analyze_text(f: &str, g: &str, tol: &Tolerances, seed: u64) -> Result<AnalysisReport, Error> {
    let f = parse_form(f, None)?;
    let g = parse_form(g, Some(f.degree()))?;
    let pencil = Pencil::new(f, g, seed)?;
    analyze(&pencil, tol)
}

/// Rebuilds a conic from its reported coefficients.
pub fn conic_form(c: &ConicReport) -> Option<FloatForm> {
    let coeffs: Option<Vec<C64>> = c.coeffs.iter().map(|s| parse_c64(s)).collect();
    FloatForm::new(2, coeffs?).ok()
}

/// Parses reported coordinates.
pub fn parse_coords(c: &[String; 3]) -> Option<[C64; 3]> {
    Some([parse_c64(&c[0])?, parse_c64(&c[1])?, parse_c64(&c[2])?])
}
