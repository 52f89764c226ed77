//! Pass/fail/not-applicable checks over analysis reports.

use serde::{Deserialize, Serialize};

use crate::report::{conic_form, parse_coords, AnalysisReport, FiberReport};

pub const EULER_BOUNDS: &str = "euler_bounds";
pub const CONCURRENT_LINES_EULER: &str = "concurrent_lines_iff_max_euler";
pub const MEMBER_COUNT_BOUND: &str = "member_count_bound";
pub const CONIC_TOTAL_BOUND: &str = "conic_total_bound";
pub const NONSPECIAL_MILNOR_BOUND: &str = "nonspecial_milnor_bound";
pub const SIX_MEMBER_STRUCTURE: &str = "six_member_structure";
pub const NODE_COUNT: &str = "general_position_node_count";
pub const LEDGER_BALANCE: &str = "ledger_balance";
pub const EULER_CROSS_CHECK: &str = "euler_cross_check";
pub const MILNOR_DELTA_RELATION: &str = "milnor_delta_relation";
pub const MILNOR_CROSS_CHECK: &str = "milnor_cross_check";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub details: String,
}

impl Verdict {
    fn new(name: &str, ok: bool, details: String) -> Verdict {
        Verdict {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            details,
        }
    }

    fn not_applicable(name: &str, details: impl Into<String>) -> Verdict {
        Verdict {
            name: name.into(),
            status: Status::NotApplicable,
            details: details.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

fn binom2(d: i64) -> i64 {
    d * (d - 1) / 2
}

/// `d(5-d)/2 - q <= e <= d+1` for a reduced conic-line member.
pub fn check_euler_bounds(fiber: &FiberReport, d: u32) -> Verdict {
    if !fiber.special {
        return Verdict::not_applicable(EULER_BOUNDS, "not a conic-line member");
    }
    let d = d as i64;
    let lower = d * (5 - d) / 2 - fiber.q as i64;
    let upper = d + 1;
    let e = fiber.euler;
    Verdict::new(EULER_BOUNDS, lower <= e && e <= upper, format!("{lower} <= {e} <= {upper}"))
}

/// `e = d+1` exactly when the member is `d` lines through one point.
pub fn check_concurrent_lines_euler(fiber: &FiberReport, d: u32) -> Verdict {
    if !fiber.special {
        return Verdict::not_applicable(CONCURRENT_LINES_EULER, "not a conic-line member");
    }
    let max_euler = fiber.euler == d as i64 + 1;
    let pencil_of_lines = fiber.concurrent && fiber.lines.len() == d as usize && fiber.conics.is_empty();
    Verdict::new(
        CONCURRENT_LINES_EULER,
        max_euler == pencil_of_lines,
        format!("e = d+1: {max_euler}, concurrent lines: {pencil_of_lines}"),
    )
}

/// A member in general position has `C(d,2) - q` nodes and nothing else.
pub fn check_node_count(fiber: &FiberReport, d: u32) -> Verdict {
    if !fiber.special || !fiber.general_position {
        return Verdict::not_applicable(NODE_COUNT, "not a conic-line member in general position");
    }
    let expected = binom2(d as i64) - fiber.q as i64;
    let nodes = fiber.singular_points.len() as i64;
    let all_nodes = fiber.singular_points.iter().all(|s| s.mu == 1);
    Verdict::new(
        NODE_COUNT,
        all_nodes && nodes == expected,
        format!("{nodes} singular points (all nodes: {all_nodes}), expected {expected}"),
    )
}

/// Euler characteristic from Milnor numbers equals the one from components.
pub fn check_euler_cross_check(fiber: &FiberReport) -> Verdict {
    if !fiber.special {
        return Verdict::not_applicable(EULER_CROSS_CHECK, "not a conic-line member");
    }
    Verdict::new(
        EULER_CROSS_CHECK,
        fiber.euler_components == Some(fiber.euler),
        format!("from Milnor numbers {}, from components {:?}", fiber.euler, fiber.euler_components),
    )
}

/// `μ = 2δ - r + 1` at every singular point of a conic-line member.
pub fn check_milnor_delta(fiber: &FiberReport) -> Verdict {
    if !fiber.special {
        return Verdict::not_applicable(MILNOR_DELTA_RELATION, "not a conic-line member");
    }
    let mut bad = Vec::new();
    for s in &fiber.singular_points {
        match (s.r, s.delta) {
            (Some(r), Some(delta)) if s.mu as i64 == 2 * delta as i64 - r as i64 + 1 => {}
            (r, delta) => bad.push(format!("mu {} r {:?} delta {:?}", s.mu, r, delta)),
        }
    }
    Verdict::new(
        MILNOR_DELTA_RELATION,
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} points", fiber.singular_points.len())
        } else {
            bad.join("; ")
        },
    )
}

/// Milnor numbers agree with the multiplicities of the critical system.
pub fn check_milnor_cross_check(fiber: &FiberReport) -> Verdict {
    let pairs: Vec<(usize, usize)> = fiber.singular_points.iter().map(|s| (s.mu, s.critical_multiplicity)).collect();
    Verdict::new(
        MILNOR_CROSS_CHECK,
        pairs.iter().all(|(a, b)| a == b),
        format!("(mu, critical multiplicity): {pairs:?}"),
    )
}

/// `m <= 6`, `p <= 3` and `m <= 6 - p` when `p >= 1`.
pub fn check_member_count(report: &AnalysisReport) -> Verdict {
    let (m, p) = (report.summary.m, report.summary.p);
    let ok = m <= 6 && p <= 3 && p <= m && (p == 0 || m <= 6 - p);
    Verdict::new(MEMBER_COUNT_BOUND, ok, format!("m = {m}, p = {p}"))
}

/// `q̄ <= (m - p)·⌊d/2⌋`.
pub fn check_conic_total(report: &AnalysisReport) -> Verdict {
    let s = &report.summary;
    let bound = s.m.saturating_sub(s.p) * (report.degree as usize / 2);
    Verdict::new(CONIC_TOTAL_BOUND, s.p <= s.m && s.qbar <= bound, format!("qbar = {} <= {bound}", s.qbar))
}

fn all_special_general_position(report: &AnalysisReport) -> bool {
    report.special_fibers().all(|f| f.general_position)
}

/// For odd `d` with every conic-line member in general position, the
/// non-special singular fibers carry at most `(d-1)²(6-m)/2` in total
/// Milnor number.
pub fn check_nonspecial_milnor(report: &AnalysisReport) -> Verdict {
    let d = report.degree as i64;
    if d % 2 == 0 {
        return Verdict::not_applicable(NONSPECIAL_MILNOR_BOUND, "degree is even");
    }
    if !all_special_general_position(report) {
        return Verdict::not_applicable(NONSPECIAL_MILNOR_BOUND, "a conic-line member is not in general position");
    }
    let m = report.summary.m as i64;
    let total: i64 = report.fibers.iter().filter(|f| !f.special).map(|f| f.mu_total() as i64).sum();
    let twice_bound = (d - 1).pow(2) * (6 - m);
    Verdict::new(
        NONSPECIAL_MILNOR_BOUND,
        2 * total <= twice_bound,
        format!("non-special Milnor total {total} <= {}/2", twice_bound),
    )
}

/// For odd `d`, `m = 6` and general position: no non-special singular
/// fibers, every member is one line plus `(d-1)/2` conics, and for `d = 3`
/// every base point lies on a conic component.
pub fn check_six_members(report: &AnalysisReport) -> Verdict {
    let d = report.degree as usize;
    if d % 2 == 0 || report.summary.m != 6 || !all_special_general_position(report) {
        return Verdict::not_applicable(SIX_MEMBER_STRUCTURE, "needs odd degree, m = 6 and general position");
    }
    let mut failures = Vec::new();
    let nonspecial = report.fibers.iter().filter(|f| !f.special).count();
    if nonspecial > 0 {
        failures.push(format!("(i) {nonspecial} non-special singular fibers"));
    }
    for f in report.special_fibers() {
        if f.lines.len() != 1 || f.q != (d - 1) / 2 {
            failures.push(format!(
                "(ii) member [{}:{}] has {} lines and {} conics",
                f.param[0],
                f.param[1],
                f.lines.len(),
                f.q
            ));
        }
    }
    if d == 3 {
        let conics: Vec<_> = report.special_fibers().flat_map(|f| f.conics.iter()).filter_map(conic_form).collect();
        for b in &report.base_locus.points {
            let Some(c) = parse_coords(&b.coords) else {
                failures.push("(iii) unreadable base point".into());
                continue;
            };
            if !conics.iter().any(|q| q.relative_value(&c) <= 1e-6) {
                failures.push(format!("(iii) base point [{}:{}:{}] lies on no conic", b.coords[0], b.coords[1], b.coords[2]));
            }
        }
    }
    let ok = failures.is_empty();
    Verdict::new(
        SIX_MEMBER_STRUCTURE,
        ok,
        if ok { "clauses (i)-(iii) hold".into() } else { failures.join("; ") },
    )
}

/// Milnor numbers over all singular fibers sum to `3(d-1)²`.
pub fn check_ledger(report: &AnalysisReport) -> Verdict {
    let l = &report.ledger;
    Verdict::new(
        LEDGER_BALANCE,
        l.balance == 0,
        format!("e(S) = {}, Milnor total {}, balance {}", l.e_surface, l.mu_total, l.balance),
    )
}

/// Combines per-fiber verdicts: fail if any fails, pass if any passes.
fn aggregate(name: &str, report: &AnalysisReport, check: impl Fn(&FiberReport) -> Verdict) -> Verdict {
    let mut parts = Vec::new();
    let mut status = Status::NotApplicable;
    for f in &report.fibers {
        let v = check(f);
        match v.status {
            Status::Fail => status = Status::Fail,
            Status::Pass if status == Status::NotApplicable => status = Status::Pass,
            _ => {}
        }
        if v.status != Status::NotApplicable {
            parts.push(format!("[{}:{}] {}", f.param[0], f.param[1], v.details));
        }
    }
    Verdict {
        name: name.into(),
        status,
        details: if parts.is_empty() { "no applicable fiber".into() } else { parts.join("; ") },
    }
}

/// Every check, in a fixed order.
pub fn run_checks(report: &AnalysisReport) -> Vec<Verdict> {
    let d = report.degree;
    vec![
        aggregate(EULER_BOUNDS, report, |f| check_euler_bounds(f, d)),
        aggregate(CONCURRENT_LINES_EULER, report, |f| check_concurrent_lines_euler(f, d)),
        aggregate(NODE_COUNT, report, |f| check_node_count(f, d)),
        aggregate(EULER_CROSS_CHECK, report, check_euler_cross_check),
        aggregate(MILNOR_DELTA_RELATION, report, check_milnor_delta),
        aggregate(MILNOR_CROSS_CHECK, report, check_milnor_cross_check),
        check_member_count(report),
        check_conic_total(report),
        check_nonspecial_milnor(report),
        check_six_members(report),
        check_ledger(report),
    ]
}
