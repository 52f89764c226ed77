//! Built-in pencils with tables of their expected conic-line members.

use crate::error::Error;
use crate::forms::{parse_form, ExactForm, TernaryForm};
use crate::pencil::Pencil;
use crate::point::chordal_distance;
use crate::report::AnalysisReport;
use crate::scalar::{format_c64, format_qi, parse_c64, qi_int, Coeff, C64, QI};

/// Chordal tolerance for matching member parameters.
const PARAM_MATCH: f64 = 1e-6;
/// Relative coefficient error allowed for a recovered factor.
const FACTOR_MATCH: f64 = 1e-6;

/// A conic-line member the analysis is expected to find.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedMember {
    pub param: [C64; 2],
    /// Exact parameter, when it lies in the Gaussian rationals.
    pub exact_param: Option<[QI; 2]>,
    pub lines: usize,
    pub conics: usize,
    pub concurrent: bool,
    pub general_position: Option<bool>,
    pub euler: i64,
    /// Expected irreducible factors over the Gaussian rationals, when known.
    pub factors: Vec<ExactForm>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub name: String,
    pub f: ExactForm,
    pub g: ExactForm,
    /// Expected conic-line members (`m` is its length).
    pub expected: Vec<ExpectedMember>,
    /// Expected non-special singular fibers as `(count, Milnor number each)`.
    pub nonspecial: Option<(usize, usize)>,
}

impl FamilySpec {
    pub fn pencil(&self, seed: u64) -> Result<Pencil, Error> {
        Pencil::new(self.f.clone(), self.g.clone(), seed)
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }
}

fn form(s: &str) -> ExactForm {
    parse_form(s, None).expect("built-in forms parse")
}

fn q(n: i64) -> QI {
    qi_int(n, 0)
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `(x^d - y^d, y^d - z^d)`: three members of `d` concurrent lines.
pub fn fermat(d: u32) -> Result<FamilySpec, Error> {
    if d < 2 {
        return Err(Error::BadParameter(format!("Fermat pencil needs d >= 2, got {d}")));
    }
    let f = form(&format!("x^{d}-y^{d}"));
    let g = form(&format!("y^{d}-z^{d}"));
    let expected = [(1, 0), (1, 1), (0, 1)]
        .into_iter()
        .map(|(a, b)| ExpectedMember {
            param: [c(a as f64), c(b as f64)],
            exact_param: Some([q(a), q(b)]),
            lines: d as usize,
            conics: 0,
            concurrent: true,
            general_position: Some(d <= 2),
            euler: d as i64 + 1,
            factors: Vec::new(),
        })
        .collect();
    Ok(FamilySpec {
        name: format!("fermat-{d}"),
        f,
        g,
        expected,
        nonspecial: Some((0, 0)),
    })
}

/// The cubic pencil `λ(x - ay)(x²+y²-z²) + μ(x - y)(x²-xy+y²-z²)`, which
/// has exactly four conic-line members.
pub fn pa(a: &QI) -> Result<FamilySpec, Error> {
    if Coeff::is_zero(a) || *a == q(1) {
        return Err(Error::BadParameter(format!("a must differ from 0 and 1, got {}", format_qi(a))));
    }
    let one = q(1);
    let lin = |c: [QI; 3]| TernaryForm::linear(c);
    let x = lin([one.clone(), q(0), q(0)]);
    let y = lin([q(0), one.clone(), q(0)]);
    let circle = form("x^2+y^2-z^2");
    let c2conic = form("x^2-x*y+y^2-z^2");
    let f = lin([one.clone(), a.neg_ref(), q(0)]).mul(&circle);
    let g = form("x-y").mul(&c2conic);
    let one_minus_a = one.sub_ref(a);
    let a_minus_one = a.sub_ref(&one);
    let two_minus_a = q(2).sub_ref(a);
    let one_minus_2a = one.sub_ref(&q(2).mul_ref(a));
    // y((2-a)x^2 - xy + (1-a)y^2 + (a-1)z^2)
    let c3 = TernaryForm::from_terms(
        2,
        [
            ((2, 0, 0), two_minus_a.clone()),
            ((1, 1, 0), q(-1)),
            ((0, 2, 0), one_minus_a.clone()),
            ((0, 0, 2), a_minus_one.clone()),
        ],
    )?;
    // x((1-a)x^2 + axy + (1-2a)y^2 + (a-1)z^2)
    let c4 = TernaryForm::from_terms(
        2,
        [
            ((2, 0, 0), one_minus_a.clone()),
            ((1, 1, 0), a.clone()),
            ((0, 2, 0), one_minus_2a),
            ((0, 0, 2), a_minus_one),
        ],
    )?;
    let half = crate::scalar::qi_ratio(1, 2);
    let two = q(2);
    let gp3 = *a != two;
    let gp4 = *a != half;
    let member = |p: [QI; 2], factors: Vec<ExactForm>, gp: bool| ExpectedMember {
        param: [p[0].to_c64(), p[1].to_c64()],
        exact_param: Some(p),
        lines: 1,
        conics: 1,
        concurrent: false,
        general_position: Some(gp),
        euler: if gp { 2 } else { 3 },
        factors,
    };
    let expected = vec![
        member([one.clone(), q(0)], vec![lin([one.clone(), a.neg_ref(), q(0)]), circle], true),
        member([q(0), one.clone()], vec![form("x-y"), c2conic], true),
        member([one.clone(), q(-1)], vec![y, c3], gp3),
        member([one.clone(), a.neg_ref()], vec![x, c4], gp4),
    ];
    let tangencies = usize::from(!gp3) + usize::from(!gp4);
    let special_mu: usize = 8 + tangencies;
    Ok(FamilySpec {
        name: format!("pa-{}", format_qi(a)),
        f,
        g,
        expected,
        nonspecial: Some((12 - special_mu, 1)),
    })
}

/// `(x³+y³+z³, xyz)`: four triangle members.
pub fn hesse() -> FamilySpec {
    let omega = C64::new(-0.5, 3f64.sqrt() / 2.0);
    let triangle = |param: [C64; 2], exact_param: Option<[QI; 2]>, factors: Vec<ExactForm>| ExpectedMember {
        param,
        exact_param,
        lines: 3,
        conics: 0,
        concurrent: false,
        general_position: Some(true),
        euler: 3,
        factors,
    };
    let expected = vec![
        triangle(
            [c(1.0), c(-3.0)],
            Some([q(1), q(-3)]),
            vec![form("x+y+z")],
        ),
        triangle([c(1.0), omega * -3.0], None, Vec::new()),
        triangle([c(1.0), omega.conj() * -3.0], None, Vec::new()),
        triangle([c(0.0), c(1.0)], Some([q(0), q(1)]), vec![form("x"), form("y"), form("z")]),
    ];
    FamilySpec {
        name: "hesse".into(),
        f: form("x^3+y^3+z^3"),
        g: form("x*y*z"),
        expected,
        nonspecial: Some((0, 0)),
    }
}

/// Parses a family name as used on the command line.
pub fn by_name(name: &str, d: Option<u32>, a: Option<&str>) -> Result<FamilySpec, Error> {
    match name {
        "fermat" => fermat(d.unwrap_or(3)),
        "pa" => {
            let text = a.unwrap_or("2");
            let value = crate::scalar::parse_qi(text).ok_or_else(|| Error::BadParameter(format!("cannot parse a = {text}")))?;
            pa(&value)
        }
        "hesse" => Ok(hesse()),
        other => Err(Error::BadParameter(format!("unknown family {other}"))),
    }
}

/// Relative distance between two coefficient vectors up to a scalar.
pub fn projective_error(expected: &[C64], got: &[C64]) -> f64 {
    let Some(k) = (0..expected.len()).max_by(|&i, &j| expected[i].norm().total_cmp(&expected[j].norm())) else {
        return f64::INFINITY;
    };
    if expected.len() != got.len() || expected[k].norm() == 0.0 {
        return f64::INFINITY;
    }
    let scale = got[k] / expected[k];
    let top = got.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return f64::INFINITY;
    }
    expected.iter().zip(got).map(|(e, g)| (g - e * scale).norm()).fold(0.0, f64::max) / top
}

/// Differences between an analysis report and the expected table; empty
/// when they agree.
pub fn compare_expected(spec: &FamilySpec, report: &AnalysisReport) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(reason) = &report.rejection {
        out.push(format!("analysis rejected: {reason}"));
        return out;
    }
    if report.summary.m != spec.expected.len() {
        out.push(format!("m = {}, expected {}", report.summary.m, spec.expected.len()));
    }
    let p = spec.expected.iter().filter(|e| e.concurrent).count();
    if report.summary.p != p {
        out.push(format!("p = {}, expected {p}", report.summary.p));
    }
    for e in &spec.expected {
        let label = format!("[{}:{}]", format_c64(e.param[0]), format_c64(e.param[1]));
        let found = report.special_fibers().find(|f| {
            f.param_c64().is_some_and(|p| {
                let z = C64::new(0.0, 0.0);
                chordal_distance(&[p[0], p[1], z], &[e.param[0], e.param[1], z]) <= PARAM_MATCH
            })
        });
        let Some(f) = found else {
            out.push(format!("{label}: no conic-line member found"));
            continue;
        };
        if f.lines.len() != e.lines || f.q != e.conics {
            out.push(format!("{label}: {} lines and {} conics, expected {} and {}", f.lines.len(), f.q, e.lines, e.conics));
        }
        if f.concurrent != e.concurrent {
            out.push(format!("{label}: concurrent = {}, expected {}", f.concurrent, e.concurrent));
        }
        if let Some(gp) = e.general_position {
            if f.general_position != gp {
                out.push(format!("{label}: general position = {}, expected {gp}", f.general_position));
            }
        }
        if f.euler != e.euler {
            out.push(format!("{label}: e = {}, expected {}", f.euler, e.euler));
        }
        for factor in &e.factors {
            let want: Vec<C64> = factor.to_float().coeffs().to_vec();
            let candidates: Vec<Vec<C64>> = if factor.degree() == 1 {
                f.lines.iter().map(|l| l.coeffs.iter().filter_map(|c| parse_c64(c)).collect()).collect()
            } else {
                f.conics.iter().map(|c| c.coeffs.iter().filter_map(|v| parse_c64(v)).collect()).collect()
            };
            let best = candidates.iter().map(|c| projective_error(&want, c)).fold(f64::INFINITY, f64::min);
            if best > FACTOR_MATCH {
                out.push(format!("{label}: factor {} not recovered (best relative error {best:e})", factor.to_expr()));
            }
        }
    }
    if let Some((count, mu)) = spec.nonspecial {
        let non: Vec<_> = report.fibers.iter().filter(|f| !f.special).collect();
        if non.len() != count || non.iter().any(|f| f.mu_total() != mu || f.singular_points.len() != 1) {
            out.push(format!(
                "non-special fibers: {} with Milnor totals {:?}, expected {count} single points of Milnor number {mu}",
                non.len(),
                non.iter().map(|f| f.mu_total()).collect::<Vec<_>>()
            ));
        }
    }
    out
}

/// The default verification corpus.
pub fn default_corpus() -> Vec<FamilySpec> {
    let mut out: Vec<FamilySpec> = (3..=5).map(|d| fermat(d).expect("d >= 2")).collect();
    for a in [q(2), q(3), q(-1), crate::scalar::qi_ratio(1, 2)] {
        out.push(pa(&a).expect("a not in {0, 1}"));
    }
    out.push(hesse());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::exact_divide;

    #[test]
    fn pa_members_factor_as_printed() {
        for a in [q(2), q(3), q(-1), crate::scalar::qi_ratio(1, 2), qi_int(2, 1)] {
            let fam = pa(&a).unwrap();
            for m in &fam.expected {
                let p = m.exact_param.clone().unwrap();
                let h = fam.f.combine(&p[0], &fam.g, &p[1]).unwrap();
                let mut rem = h;
                for factor in &m.factors {
                    rem = exact_divide(&rem, factor).expect("factor divides the member");
                }
                assert_eq!(rem.degree(), 0);
            }
        }
    }

    #[test]
    fn pa_rejects_degenerate_parameters() {
        assert!(matches!(pa(&q(0)), Err(Error::BadParameter(_))));
        assert!(matches!(pa(&q(1)), Err(Error::BadParameter(_))));
    }

    #[test]
    fn hesse_real_triangle_contains_x_plus_y_plus_z() {
        let fam = hesse();
        let h = fam.f.combine(&q(1), &fam.g, &q(-3)).unwrap();
        assert!(exact_divide(&h, &form("x+y+z")).is_some());
        assert_eq!(fam.expected.len(), 4);
    }

    #[test]
    fn corpus_names() {
        let names: Vec<String> = default_corpus().into_iter().map(|f| f.name).collect();
        assert_eq!(names, ["fermat-3", "fermat-4", "fermat-5", "pa-2", "pa-3", "pa--1", "pa-1/2", "hesse"]);
    }
}
