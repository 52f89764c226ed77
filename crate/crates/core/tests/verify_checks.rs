//! Checks run on synthetic and fault-injected reports.

use conicline::cli::cmd_analyze;
use conicline::report::{AnalysisReport, ConicReport, FiberReport, LineReport, PointReport, SingularPointReport};
use conicline::scalar::{format_c64, C64};
use conicline::verify::{self, run_checks, Status};
use conicline::Tolerances;

fn p2() -> AnalysisReport {
    cmd_analyze("(x-2*y)(x^2+y^2-z^2)", "(x-y)(x^2-x*y+y^2-z^2)", &Tolerances::default(), 3).unwrap()
}

fn s(re: f64) -> String {
    format_c64(C64::new(re, 0.0))
}

fn node(x: f64, y: f64) -> SingularPointReport {
    SingularPointReport {
        coords: [s(x), s(y), s(1.0)],
        mu: 1,
        critical_multiplicity: 1,
        r: Some(2),
        delta: Some(1),
    }
}

/// A line plus the unit circle, meeting in two nodes.
fn line_and_circle(k: usize) -> FiberReport {
    let t = k as f64;
    FiberReport {
        param: [s(1.0), s(t)],
        param_exact: None,
        form: String::new(),
        reduced: true,
        special: true,
        lines: vec![LineReport {
            coeffs: [s(0.0), s(1.0), s(-0.1 * t)],
            exact: None,
            multiplicity: 1,
        }],
        conics: vec![ConicReport {
            coeffs: [1.0, 0.0, 0.0, 1.0, 0.0, -1.0].map(s).to_vec(),
            exact: None,
            multiplicity: 1,
        }],
        remainder_degree: None,
        q: 1,
        concurrent: false,
        concurrent_point: None,
        general_position: true,
        certified: true,
        singular_points: vec![node(-1.0, 0.1 * t), node(1.0, 0.1 * t)],
        euler: 2,
        euler_components: Some(2),
    }
}

/// Six general-position members of one line and one conic, with every base
/// point on the conic.
fn six_members() -> AnalysisReport {
    let mut r = p2();
    r.fibers = (0..6).map(line_and_circle).collect();
    r.base_locus.points = (0..9)
        .map(|k| {
            let a = k as f64 * 0.7;
            PointReport {
                coords: [s(a.cos()), s(a.sin()), s(1.0)],
                multiplicity: 1,
            }
        })
        .collect();
    r.summary.m = 6;
    r.summary.p = 0;
    r.summary.qbar = 6;
    r.summary.nonspecial = 0;
    r
}

fn status(r: &AnalysisReport, name: &str) -> (Status, String) {
    let v = run_checks(r).into_iter().find(|v| v.name == name).unwrap();
    (v.status, v.details)
}

#[test]
fn six_member_structure_holds_for_consistent_report() {
    let (st, details) = status(&six_members(), verify::SIX_MEMBER_STRUCTURE);
    assert_eq!(st, Status::Pass, "{details}");
}

#[test]
fn six_member_structure_flags_non_special_fiber() {
    let mut r = six_members();
    let mut extra = line_and_circle(7);
    extra.special = false;
    extra.lines.clear();
    extra.conics.clear();
    extra.singular_points.truncate(1);
    r.fibers.push(extra);
    r.summary.nonspecial = 1;
    let (st, details) = status(&r, verify::SIX_MEMBER_STRUCTURE);
    assert_eq!(st, Status::Fail);
    assert!(details.contains("(i)"), "{details}");
}

#[test]
fn six_member_structure_flags_wrong_member_shape() {
    let mut r = six_members();
    let f = &mut r.fibers[2];
    f.conics.clear();
    f.q = 0;
    f.lines = (0..3)
        .map(|k| LineReport {
            coeffs: [s(1.0), s(k as f64), s(1.0 - k as f64)],
            exact: None,
            multiplicity: 1,
        })
        .collect();
    let (st, details) = status(&r, verify::SIX_MEMBER_STRUCTURE);
    assert_eq!(st, Status::Fail);
    assert!(details.contains("(ii)") && !details.contains("(i) "), "{details}");
}

#[test]
fn six_member_structure_flags_base_point_off_conics() {
    let mut r = six_members();
    r.base_locus.points[4].coords = [s(3.0), s(0.5), s(1.0)];
    let (st, details) = status(&r, verify::SIX_MEMBER_STRUCTURE);
    assert_eq!(st, Status::Fail);
    assert!(details.contains("(iii)"), "{details}");
}

#[test]
fn six_member_structure_needs_six_members_and_odd_degree() {
    let mut r = six_members();
    r.fibers.pop();
    r.summary.m = 5;
    assert_eq!(status(&r, verify::SIX_MEMBER_STRUCTURE).0, Status::NotApplicable);
    let mut r = six_members();
    r.degree = 4;
    assert_eq!(status(&r, verify::SIX_MEMBER_STRUCTURE).0, Status::NotApplicable);
    let mut r = six_members();
    r.fibers[0].general_position = false;
    assert_eq!(status(&r, verify::SIX_MEMBER_STRUCTURE).0, Status::NotApplicable);
}

#[test]
fn member_count_bound_rejects_seven_or_too_many_concurrent() {
    let mut r = six_members();
    assert_eq!(status(&r, verify::MEMBER_COUNT_BOUND).0, Status::Pass);
    r.summary.m = 7;
    assert_eq!(status(&r, verify::MEMBER_COUNT_BOUND).0, Status::Fail);
    r.summary.m = 5;
    r.summary.p = 2;
    assert_eq!(status(&r, verify::MEMBER_COUNT_BOUND).0, Status::Fail);
    r.summary.p = 1;
    assert_eq!(status(&r, verify::MEMBER_COUNT_BOUND).0, Status::Pass);
}

#[test]
fn p2_passes_every_applicable_check() {
    let r = p2();
    for v in &r.verdicts {
        assert!(!v.failed(), "{}: {}", v.name, v.details);
    }
    // the member at [1:-1] is tangent, so the odd-degree bound does not apply
    assert_eq!(status(&r, verify::NONSPECIAL_MILNOR_BOUND).0, Status::NotApplicable);
    assert_eq!(status(&r, verify::SIX_MEMBER_STRUCTURE).0, Status::NotApplicable);
}

#[test]
fn nonspecial_milnor_bound_applies_when_all_members_are_in_general_position() {
    let spec = conicline::families::pa(&conicline::scalar::qi_int(3, 0)).unwrap();
    let r = conicline::report::analyze(&spec.pencil(5).unwrap(), &Tolerances::default()).unwrap();
    let (st, details) = status(&r, verify::NONSPECIAL_MILNOR_BOUND);
    assert_eq!(st, Status::Pass, "{details}");
}

#[test]
fn injected_milnor_error_fails_named_checks() {
    let mut r = p2();
    let f = r.fibers.iter_mut().find(|f| !f.special).unwrap();
    f.singular_points[0].mu = 2;
    r.ledger.mu_total += 1;
    r.ledger.balance = 1;
    let failed: Vec<String> = run_checks(&r).into_iter().filter(|v| v.failed()).map(|v| v.name).collect();
    assert!(failed.contains(&verify::MILNOR_CROSS_CHECK.to_string()), "{failed:?}");
    assert!(failed.contains(&verify::LEDGER_BALANCE.to_string()), "{failed:?}");
}

#[test]
fn injected_euler_errors_fail_bounds() {
    let r = p2();
    let d = r.degree;
    let mut f = r.special_fibers().next().unwrap().clone();
    assert!(verify::check_euler_bounds(&f, d).passed());
    f.euler = d as i64 + 2;
    assert!(verify::check_euler_bounds(&f, d).failed());
    f.euler = d as i64 + 1;
    assert!(verify::check_concurrent_lines_euler(&f, d).failed());
    f.euler = 3;
    f.euler_components = Some(2);
    assert!(verify::check_euler_cross_check(&f).failed());
}

#[test]
fn node_count_counts_general_position_members_only() {
    let r = p2();
    let d = r.degree;
    let mut f = r.special_fibers().find(|f| f.general_position).unwrap().clone();
    assert!(verify::check_node_count(&f, d).passed());
    f.singular_points.pop();
    assert!(verify::check_node_count(&f, d).failed());
    f.general_position = false;
    assert_eq!(verify::check_node_count(&f, d).status, Status::NotApplicable);
}

#[test]
fn milnor_delta_relation_detects_inconsistent_branch_data() {
    let mut f = line_and_circle(1);
    assert!(verify::check_milnor_delta(&f).passed());
    f.singular_points[0].delta = Some(2);
    assert!(verify::check_milnor_delta(&f).failed());
}
