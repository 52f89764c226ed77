//! Decomposition of singular members into lines and conics.
//!
//! Points are sampled on the curve by intersecting it with random lines.
//! A line component meets every sampling line once and a conic component
//! twice, so the points found on one sampling line serve as anchors: every
//! component passes through one of them. Candidate factors fitted through
//! anchors are confirmed by least-squares division and deflated.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Tolerances;
use crate::error::Error;
use crate::forms::{exact_divide, least_squares_divide, BinaryForm, ExactForm, FloatBinary, FloatForm, TernaryForm};
use crate::point::{cluster_points, ProjPoint};
use crate::roots::solve_binary;
use crate::scalar::{rationalize_c64, C64, QI};

const SAMPLE_LINES: usize = 20;
/// Relative value under which a sample lies on a candidate component.
const ON_CURVE: f64 = 1e-7;
const MAX_DEN: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct LineFactor {
    /// `(a, b, c)` of `ax + by + cz`, largest coefficient equal to 1.
    pub coeffs: [C64; 3],
    /// Exact coefficients when the factor was certified by exact division.
    pub exact: Option<[QI; 3]>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConicFactor {
    /// Quadratic form, largest coefficient equal to 1.
    pub form: FloatForm,
    pub exact: Option<ExactForm>,
    pub multiplicity: usize,
}

impl LineFactor {
    pub fn form(&self) -> FloatForm {
        FloatForm::linear(self.coeffs)
    }
}

impl ConicFactor {
    pub fn symmetric(&self) -> [[C64; 3]; 3] {
        self.form.symmetric_matrix().expect("conic factors have degree 2")
    }
}

/// Point where at least two components meet.
#[derive(Clone, Debug, PartialEq)]
pub struct MeetingPoint {
    pub point: ProjPoint,
    /// Indices into the component list (lines first, then conics).
    pub components: Vec<usize>,
    /// Sum of the pairwise intersection multiplicities at the point.
    pub delta: usize,
    /// Largest pairwise intersection multiplicity at the point.
    pub max_pair_multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub lines: Vec<LineFactor>,
    pub conics: Vec<ConicFactor>,
    pub concurrent_point: Option<ProjPoint>,
    pub general_position: bool,
    pub meetings: Vec<MeetingPoint>,
    /// Every factor was confirmed by exact division of the exact member.
    pub certified: bool,
}

impl Decomposition {
    /// Number of irreducible conics, counted with multiplicity.
    pub fn q(&self) -> usize {
        self.conics.iter().map(|c| c.multiplicity).sum()
    }

    pub fn component_count(&self) -> usize {
        self.lines.len() + self.conics.len()
    }

    pub fn is_reduced(&self) -> bool {
        self.lines.iter().all(|l| l.multiplicity == 1) && self.conics.iter().all(|c| c.multiplicity == 1)
    }

    /// Degree covered by the factors.
    pub fn degree(&self) -> usize {
        self.lines.iter().map(|l| l.multiplicity).sum::<usize>() + 2 * self.q()
    }

    /// `d` distinct lines through one point.
    pub fn is_concurrent_lines(&self) -> bool {
        self.concurrent_point.is_some()
    }

    fn component_forms(&self) -> Vec<FloatForm> {
        self.lines
            .iter()
            .map(|l| l.form())
            .chain(self.conics.iter().map(|c| c.form.clone()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    ConicLine(Decomposition),
    /// Some component has degree at least 3; `remainder_degree` is the degree
    /// left after removing the lines and conics that were found.
    NotConicLine {
        remainder_degree: u32,
        lines: Vec<LineFactor>,
        conics: Vec<ConicFactor>,
    },
}

impl Classification {
    pub fn decomposition(&self) -> Option<&Decomposition> {
        match self {
            Classification::ConicLine(d) => Some(d),
            Classification::NotConicLine { .. } => None,
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> [C64; 3] {
    std::array::from_fn(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn normalize_coeffs(v: &mut [C64]) {
    let piv = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm()));
    if let Some(p) = piv {
        if p.norm() > 0.0 {
            for c in v.iter_mut() {
                *c /= p;
            }
        }
    }
}

fn cross(a: &[C64; 3], b: &[C64; 3]) -> [C64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Points on `{h = 0}` cut out by `n` seeded random lines; each entry is
/// tagged with the index of its sampling line.
pub fn sample_curve_points(h: &FloatForm, n: usize, tol: &Tolerances, seed: u64) -> Result<Vec<(usize, ProjPoint)>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for k in 0..n {
        let (p, q) = (random_point(&mut rng), random_point(&mut rng));
        let r = h.restrict_to_line(&p, &q)?;
        for c in solve_binary(&r, tol, rng.gen())? {
            let pt: [C64; 3] = std::array::from_fn(|i| p[i] * c.point[0] + q[i] * c.point[1]);
            if let Some(pp) = ProjPoint::new(pt) {
                for _ in 0..c.multiplicity {
                    out.push((k, pp));
                }
            }
        }
    }
    Ok(out)
}

/// Right null vector of the rows (smallest singular value).
fn null_vector(rows: &[Vec<C64>]) -> (Vec<C64>, f64) {
    let n = rows[0].len();
    let m = DMatrix::from_fn(rows.len().max(n), n, |i, j| if i < rows.len() { rows[i][j] } else { C64::new(0.0, 0.0) });
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let (k, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, s)| (k, *s))
        .unwrap();
    let smax = svd.singular_values.max();
    let v: Vec<C64> = (0..n).map(|j| vt[(k, j)].conj()).collect();
    (v, if smax > 0.0 { smin / smax } else { 0.0 })
}

fn conic_row(p: &[C64; 3]) -> Vec<C64> {
    // monomial order of degree-2 forms: x^2, xy, xz, y^2, yz, z^2
    vec![p[0] * p[0], p[0] * p[1], p[0] * p[2], p[1] * p[1], p[1] * p[2], p[2] * p[2]]
}

fn fit_line(points: &[ProjPoint]) -> [C64; 3] {
    let rows: Vec<Vec<C64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    let (mut v, _) = null_vector(&rows);
    normalize_coeffs(&mut v);
    [v[0], v[1], v[2]]
}

fn fit_conic(points: &[ProjPoint]) -> FloatForm {
    let rows: Vec<Vec<C64>> = points.iter().map(|p| conic_row(p.coords())).collect();
    let (mut v, _) = null_vector(&rows);
    normalize_coeffs(&mut v);
    TernaryForm::new(2, v).expect("six conic coefficients")
}

fn support(form: &FloatForm, samples: &[(usize, ProjPoint)]) -> Vec<usize> {
    samples
        .iter()
        .enumerate()
        .filter(|(_, (_, p))| form.relative_value(p.coords()) <= ON_CURVE)
        .map(|(i, _)| i)
        .collect()
}

struct Search<'a> {
    rem: FloatForm,
    samples: Vec<(usize, ProjPoint)>,
    tol: &'a Tolerances,
    lines: Vec<LineFactor>,
    conics: Vec<ConicFactor>,
}

impl Search<'_> {
    fn degree(&self) -> u32 {
        self.rem.degree()
    }

    /// Divides the remainder by `factor` as often as possible.
    fn deflate(&mut self, factor: &FloatForm) -> usize {
        let mut mult = 0;
        while self.rem.degree() >= factor.degree() {
            match least_squares_divide(&self.rem, factor) {
                Ok((q, res)) if res <= self.tol.tau_div => {
                    self.rem = q.normalized();
                    mult += 1;
                }
                _ => break,
            }
        }
        if mult > 0 {
            let keep: Vec<(usize, ProjPoint)> = self
                .samples
                .iter()
                .filter(|(_, p)| factor.relative_value(p.coords()) > ON_CURVE)
                .copied()
                .collect();
            self.samples = keep;
        }
        mult
    }

    fn anchors(&self) -> Vec<ProjPoint> {
        let Some(first) = self.samples.first().map(|s| s.0) else {
            return Vec::new();
        };
        self.samples.iter().filter(|s| s.0 == first).map(|s| s.1).collect()
    }

    fn try_line(&mut self, a: &ProjPoint, b: &ProjPoint) -> bool {
        if a.distance(b) < 1e-6 {
            return false;
        }
        let mut c = cross(a.coords(), b.coords());
        normalize_coeffs(&mut c);
        let l = FloatForm::linear(c);
        let sup = support(&l, &self.samples);
        let k = self.degree() as usize;
        if sup.len() < (k + 1).max(3).min(SAMPLE_LINES / 2) {
            return false;
        }
        let pts: Vec<ProjPoint> = sup.iter().map(|&i| self.samples[i].1).collect();
        let coeffs = fit_line(&pts);
        let mult = self.deflate(&FloatForm::linear(coeffs));
        if mult == 0 {
            return false;
        }
        self.lines.push(LineFactor {
            coeffs,
            exact: None,
            multiplicity: mult,
        });
        true
    }

    fn find_line(&mut self, hints: &[ProjPoint]) -> bool {
        for i in 0..hints.len() {
            for j in i + 1..hints.len() {
                if self.try_line(&hints[i], &hints[j]) {
                    return true;
                }
            }
        }
        for a in self.anchors() {
            let others: Vec<ProjPoint> = self.samples.iter().map(|s| s.1).collect();
            for b in others {
                if self.try_line(&a, &b) {
                    return true;
                }
            }
        }
        false
    }

    fn accept_conic(&mut self, conic: FloatForm) -> bool {
        let mult = self.deflate(&conic);
        if mult == 0 {
            return false;
        }
        self.conics.push(ConicFactor {
            form: conic,
            exact: None,
            multiplicity: mult,
        });
        true
    }

    fn find_conic(&mut self) -> bool {
        let k = self.degree() as usize;
        let anchors = self.anchors();
        let first = self.samples.first().map(|s| s.0);
        let mut grouped: std::collections::BTreeMap<usize, Vec<ProjPoint>> = std::collections::BTreeMap::new();
        for (line, p) in &self.samples {
            if Some(*line) != first {
                grouped.entry(*line).or_default().push(*p);
            }
        }
        let by_line: Vec<Vec<ProjPoint>> = grouped.into_values().collect();
        if by_line.len() < 4 {
            return false;
        }
        let groups: Vec<Vec<ProjPoint>> = by_line.into_iter().take(4).collect();
        for a in &anchors {
            for p1 in &groups[0] {
                for p2 in &groups[1] {
                    for p3 in &groups[2] {
                        for p4 in &groups[3] {
                            let five = [*a, *p1, *p2, *p3, *p4];
                            let cand = fit_conic(&five);
                            let sup = support(&cand, &self.samples);
                            if sup.len() < 2 * k + 1 {
                                continue;
                            }
                            let pts: Vec<ProjPoint> = sup.iter().map(|&i| self.samples[i].1).collect();
                            let refit = fit_conic(&pts);
                            if is_degenerate(&refit) {
                                continue;
                            }
                            if self.accept_conic(refit) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }
}

fn det3(m: &[[C64; 3]; 3]) -> C64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn is_degenerate(conic: &FloatForm) -> bool {
    let s = conic.symmetric_matrix().expect("degree 2");
    let scale = s.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    det3(&s).norm() <= 1e-8 * scale.powi(3)
}

/// Splits a degenerate conic into its two lines.
fn split_degenerate(conic: &FloatForm, tol: &Tolerances, seed: u64) -> Result<Vec<[C64; 3]>, Error> {
    let s = conic.symmetric_matrix().expect("degree 2");
    let rows: Vec<Vec<C64>> = s.iter().map(|r| r.to_vec()).collect();
    let (v, _) = null_vector(&rows);
    let vertex = [v[0], v[1], v[2]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let (p, q) = (random_point(&mut rng), random_point(&mut rng));
        let r = conic.restrict_to_line(&p, &q)?;
        let roots = solve_binary(&r, tol, rng.gen())?;
        let pts: Vec<[C64; 3]> = roots
            .iter()
            .map(|c| std::array::from_fn(|i| p[i] * c.point[0] + q[i] * c.point[1]))
            .collect();
        if pts.len() == 1 {
            // double line
            let mut l = cross(&vertex, &pts[0]);
            normalize_coeffs(&mut l);
            return Ok(vec![l, l]);
        }
        if pts.len() == 2 {
            let mut out = Vec::new();
            for pt in pts {
                let mut l = cross(&vertex, &pt);
                normalize_coeffs(&mut l);
                out.push(l);
            }
            return Ok(out);
        }
    }
    Err(Error::LiftFailure)
}

/// Decides whether `h` is a conic-line curve and returns its components.
///
/// `exact` is the same member with exact coefficients, when known; it is
/// used to certify rationalized factors by exact division.
pub fn detect_components(
    h: &FloatForm,
    exact: Option<&ExactForm>,
    singular_points: &[ProjPoint],
    tol: &Tolerances,
    seed: u64,
) -> Result<Classification, Error> {
    let d = h.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = sample_curve_points(h, SAMPLE_LINES, tol, rng.gen())?;
    let mut s = Search {
        rem: h.normalized(),
        samples,
        tol,
        lines: Vec::new(),
        conics: Vec::new(),
    };
    while s.degree() > 0 {
        let k = s.degree();
        if k == 1 {
            let mut c = [*s.rem.coeff(1, 0, 0), *s.rem.coeff(0, 1, 0), *s.rem.coeff(0, 0, 1)];
            normalize_coeffs(&mut c);
            s.rem = FloatForm::constant(C64::new(1.0, 0.0));
            match s.lines.iter_mut().find(|l| same_coeffs(&l.coeffs, &c)) {
                Some(l) => l.multiplicity += 1,
                None => s.lines.push(LineFactor {
                    coeffs: c,
                    exact: None,
                    multiplicity: 1,
                }),
            }
            break;
        }
        if s.find_line(singular_points) {
            continue;
        }
        if k == 2 {
            let conic = s.rem.clone();
            if is_degenerate(&conic) {
                for l in split_degenerate(&conic, tol, rng.gen())? {
                    s.deflate(&FloatForm::linear(l));
                    match s.lines.iter_mut().find(|x| same_coeffs(&x.coeffs, &l)) {
                        Some(x) => x.multiplicity += 1,
                        None => s.lines.push(LineFactor {
                            coeffs: l,
                            exact: None,
                            multiplicity: 1,
                        }),
                    }
                }
                if s.degree() != 0 {
                    break;
                }
                continue;
            }
            s.rem = FloatForm::constant(C64::new(1.0, 0.0));
            let mut form = conic;
            let mut v = form.coeffs().to_vec();
            normalize_coeffs(&mut v);
            form = TernaryForm::new(2, v).expect("six coefficients");
            match s.conics.iter_mut().find(|c| same_coeffs(c.form.coeffs(), form.coeffs())) {
                Some(c) => c.multiplicity += 1,
                None => s.conics.push(ConicFactor {
                    form,
                    exact: None,
                    multiplicity: 1,
                }),
            }
            break;
        }
        if s.find_conic() {
            continue;
        }
        break;
    }
    let Search { rem, mut lines, mut conics, .. } = s;
    if rem.degree() > 0 {
        return Ok(Classification::NotConicLine {
            remainder_degree: rem.degree(),
            lines,
            conics,
        });
    }
    lines.sort_by(|a, b| order_coeffs(&a.coeffs, &b.coeffs));
    conics.sort_by(|a, b| order_coeffs(a.form.coeffs(), b.form.coeffs()));
    let certified = match exact {
        Some(e) => certify(e, &mut lines, &mut conics),
        None => false,
    };
    let mut dec = Decomposition {
        lines,
        conics,
        concurrent_point: None,
        general_position: false,
        meetings: Vec::new(),
        certified,
    };
    let line_coeffs: Vec<[C64; 3]> = dec.lines.iter().map(|l| l.coeffs).collect();
    if dec.conics.is_empty() && dec.is_reduced() && dec.lines.len() == d as usize {
        dec.concurrent_point = concurrency(&line_coeffs);
    }
    dec.meetings = meeting_points(&dec, tol, rng.gen())?;
    dec.general_position = general_position(&dec);
    Ok(Classification::ConicLine(dec))
}

fn same_coeffs(a: &[C64], b: &[C64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= 1e-6)
}

fn order_coeffs(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if (x - y).norm() > 1e-9 && o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

fn rationalize_form(f: &FloatForm) -> Option<ExactForm> {
    let coeffs: Option<Vec<QI>> = f.coeffs().iter().map(|c| rationalize_c64(*c, MAX_DEN, 1e-9)).collect();
    TernaryForm::new(f.degree(), coeffs?).ok()
}

/// Confirms every factor by exact division; fills in the exact factors on
/// success.
fn certify(h: &ExactForm, lines: &mut [LineFactor], conics: &mut [ConicFactor]) -> bool {
    let mut rem = h.clone();
    let mut exact_lines = Vec::new();
    let mut exact_conics = Vec::new();
    for l in lines.iter() {
        let Some(e) = rationalize_form(&l.form()) else {
            return false;
        };
        for _ in 0..l.multiplicity {
            match exact_divide(&rem, &e) {
                Some(q) => rem = q,
                None => return false,
            }
        }
        exact_lines.push(e);
    }
    for c in conics.iter() {
        let Some(e) = rationalize_form(&c.form) else {
            return false;
        };
        for _ in 0..c.multiplicity {
            match exact_divide(&rem, &e) {
                Some(q) => rem = q,
                None => return false,
            }
        }
        exact_conics.push(e);
    }
    if rem.degree() != 0 || rem.is_zero() {
        return false;
    }
    for (l, e) in lines.iter_mut().zip(exact_lines) {
        l.exact = Some([e.coeff(1, 0, 0).clone(), e.coeff(0, 1, 0).clone(), e.coeff(0, 0, 1).clone()]);
    }
    for (c, e) in conics.iter_mut().zip(exact_conics) {
        c.exact = Some(e);
    }
    true
}

/// Common point of a set of lines, if their coefficient matrix has rank at
/// most 2.
pub fn concurrency(lines: &[[C64; 3]]) -> Option<ProjPoint> {
    if lines.len() < 2 {
        return None;
    }
    let rows: Vec<Vec<C64>> = lines.iter().map(|l| l.to_vec()).collect();
    let (v, ratio) = null_vector(&rows);
    if lines.len() > 2 && ratio > 1e-8 {
        return None;
    }
    ProjPoint::new([v[0], v[1], v[2]])
}

/// Two points spanning the line `l`.
fn line_basis(l: &[C64; 3]) -> ([C64; 3], [C64; 3]) {
    let k = (0..3).max_by(|&a, &b| l[a].norm().total_cmp(&l[b].norm())).unwrap();
    let e = |i: usize| -> [C64; 3] { std::array::from_fn(|j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }) };
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    (cross(l, &e(others[0])), cross(l, &e(others[1])))
}

fn binary_add(a: &FloatBinary, b: &FloatBinary) -> FloatBinary {
    let n = a.coeffs().len().max(b.coeffs().len());
    let get = |f: &FloatBinary, k: usize| f.coeffs().get(k).copied().unwrap_or(C64::new(0.0, 0.0));
    BinaryForm::from_coeffs((0..n).map(|k| get(a, k) + get(b, k)).collect())
}

/// Rational parametrization of a smooth conic by a line: coordinate
/// quadratics `X(s, t)`.
fn parametrize_conic(conic: &FloatForm, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Result<[FloatBinary; 3], Error> {
    let a = conic.symmetric_matrix().expect("degree 2");
    let (p, q) = (random_point(rng), random_point(rng));
    let r = conic.restrict_to_line(&p, &q)?;
    let root = solve_binary(&r, tol, rng.gen())?[0].point;
    let p0: [C64; 3] = std::array::from_fn(|i| p[i] * root[0] + q[i] * root[1]);
    let (u, v) = (random_point(rng), random_point(rng));
    // W = s U + t V; X = (W^T A W) P0 - 2 (P0^T A W) W
    let w: [FloatBinary; 3] = std::array::from_fn(|i| BinaryForm::from_coeffs(vec![v[i], u[i]]));
    let mut waw = BinaryForm::from_coeffs(vec![C64::new(0.0, 0.0); 3]);
    for i in 0..3 {
        for j in 0..3 {
            let term = w[i].mul(&w[j]).map(|c| c * a[i][j]);
            waw = binary_add(&waw, &term);
        }
    }
    let mut paw = BinaryForm::from_coeffs(vec![C64::new(0.0, 0.0); 2]);
    for i in 0..3 {
        for j in 0..3 {
            paw = binary_add(&paw, &w[j].map(|c| c * p0[i] * a[i][j]));
        }
    }
    Ok(std::array::from_fn(|i| {
        let first = waw.map(|c| c * p0[i]);
        let second = paw.mul(&w[i]).map(|c| c * -2.0);
        binary_add(&first, &second)
    }))
}

/// Pulls a form back along a parametrization given by coordinate binary
/// forms of equal degree.
fn pull_back(f: &FloatForm, x: &[FloatBinary; 3]) -> FloatBinary {
    let one = BinaryForm::from_coeffs(vec![C64::new(1.0, 0.0)]);
    let d = f.degree() as usize;
    let pows: Vec<Vec<FloatBinary>> = x
        .iter()
        .map(|xi| {
            let mut v = vec![one.clone()];
            for k in 1..=d {
                let next = v[k - 1].mul(xi);
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = BinaryForm::from_coeffs(vec![C64::new(0.0, 0.0)]);
    for ((a, b, c), v) in f.terms() {
        if v.norm() == 0.0 {
            continue;
        }
        let m = pows[0][a as usize].mul(&pows[1][b as usize]).mul(&pows[2][c as usize]);
        out = binary_add(&out, &m.map(|t| t * v));
    }
    out
}

/// Intersection points of two components with local multiplicities.
fn pair_intersections(
    a: &FloatForm,
    b: &FloatForm,
    tol: &Tolerances,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(ProjPoint, usize)>, Error> {
    let (a, b) = if a.degree() <= b.degree() { (a, b) } else { (b, a) };
    let lin = |f: &FloatForm| [*f.coeff(1, 0, 0), *f.coeff(0, 1, 0), *f.coeff(0, 0, 1)];
    if a.degree() == 1 && b.degree() == 1 {
        return Ok(ProjPoint::new(cross(&lin(a), &lin(b))).map(|p| vec![(p, 1)]).unwrap_or_default());
    }
    let (param, pulled): ([FloatBinary; 3], FloatBinary) = if a.degree() == 1 {
        let (p, q) = line_basis(&lin(a));
        let x: [FloatBinary; 3] = std::array::from_fn(|i| BinaryForm::from_coeffs(vec![q[i], p[i]]));
        let r = pull_back(b, &x);
        (x, r)
    } else {
        let x = parametrize_conic(a, tol, rng)?;
        let r = pull_back(b, &x);
        (x, r)
    };
    let mut out = Vec::new();
    for c in solve_binary(&pulled, tol, rng.gen())? {
        let pt: [C64; 3] = std::array::from_fn(|i| param[i].evaluate(&c.point[0], &c.point[1]));
        if let Some(p) = ProjPoint::new(pt) {
            out.push((p, c.multiplicity));
        }
    }
    Ok(out)
}

/// Points where components meet, with the components through each.
pub fn meeting_points(dec: &Decomposition, tol: &Tolerances, seed: u64) -> Result<Vec<MeetingPoint>, Error> {
    let forms = dec.component_forms();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw: Vec<(ProjPoint, usize, usize, usize)> = Vec::new();
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            for (p, m) in pair_intersections(&forms[i], &forms[j], tol, &mut rng)? {
                raw.push((p, i, j, m));
            }
        }
    }
    let pts: Vec<ProjPoint> = raw.iter().map(|r| r.0).collect();
    let mut out = Vec::new();
    for (rep, members) in cluster_points(&pts, 1e-5) {
        let mut comps: Vec<usize> = members.iter().flat_map(|&k| [raw[k].1, raw[k].2]).collect();
        comps.sort_unstable();
        comps.dedup();
        out.push(MeetingPoint {
            point: rep,
            components: comps,
            delta: members.iter().map(|&k| raw[k].3).sum(),
            max_pair_multiplicity: members.iter().map(|&k| raw[k].3).max().unwrap_or(0),
        });
    }
    crate::roots::sort_pairs(&mut out, |m| {
        let c = m.point.coords();
        [c[0] + c[1] * 1e-3 + c[2] * 1e-6, C64::new(1.0, 0.0)]
    });
    Ok(out)
}

/// Components meet pairwise transversally and no three share a point.
pub fn general_position(dec: &Decomposition) -> bool {
    dec.is_reduced() && dec.meetings.iter().all(|m| m.max_pair_multiplicity == 1 && m.components.len() == 2)
}

/// `true` when `h` has no repeated factor: its restriction to a random line
/// has a numerically full-rank Sylvester matrix with its derivative.
pub fn is_reduced(h: &FloatForm, seed: u64) -> bool {
    let d = h.degree() as usize;
    if d <= 1 {
        return !h.is_zero();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, q) = (random_point(&mut rng), random_point(&mut rng));
    let Ok(r) = h.restrict_to_line(&p, &q) else {
        return false;
    };
    let f: Vec<C64> = r.coeffs().to_vec();
    let df: Vec<C64> = f.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let (m, n) = (f.len() - 1, df.len() - 1);
    let size = m + n;
    let mut rows = Vec::new();
    for s in 0..n {
        let mut row = vec![C64::new(0.0, 0.0); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[s + k] = *c;
        }
        rows.push(row);
    }
    for s in 0..m {
        let mut row = vec![C64::new(0.0, 0.0); size];
        for (k, c) in df.iter().rev().enumerate() {
            row[s + k] = *c;
        }
        rows.push(row);
    }
    let (_, ratio) = null_vector(&rows);
    ratio > 1e-10
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;

    fn classify(s: &str) -> Classification {
        let e = parse_form(s, None).unwrap();
        detect_components(&e.to_float(), Some(&e), &[], &Tolerances::default(), 42).unwrap()
    }

    #[test]
    fn coordinate_triangle() {
        let c = classify("x*y*z");
        let d = c.decomposition().unwrap();
        assert_eq!(d.lines.len(), 3);
        assert_eq!(d.q(), 0);
        assert!(d.concurrent_point.is_none());
        assert!(d.general_position);
        assert!(d.certified);
        assert_eq!(d.meetings.len(), 3);
    }

    #[test]
    fn line_and_conic() {
        let c = classify("(x-y)(x^2-x*y+y^2-z^2)");
        let d = c.decomposition().unwrap();
        assert_eq!((d.lines.len(), d.q()), (1, 1));
        assert!(d.certified);
        assert!(d.general_position);
        let conic = d.conics[0].exact.clone().unwrap();
        let expected = parse_form("x^2-x*y+y^2-z^2", None).unwrap();
        assert_eq!(conic.normalized(), expected.normalized());
    }

    #[test]
    fn concurrent_lines() {
        let c = classify("x^3-y^3");
        let d = c.decomposition().unwrap();
        assert_eq!(d.lines.len(), 3);
        let p = d.concurrent_point.unwrap();
        assert!(p.distance(&ProjPoint::real(0.0, 0.0, 1.0).unwrap()) < 1e-10);
        assert!(!d.general_position);
        // complex lines x - w y do not rationalize in Q(i)
        assert!(!d.certified);
    }

    #[test]
    fn tangent_line_is_not_general_position() {
        let c = classify("y*(-x*y-y^2+z^2)");
        let d = c.decomposition().unwrap();
        assert!(!d.general_position);
        assert_eq!(d.meetings.len(), 1);
        assert_eq!(d.meetings[0].delta, 2);
        let c1 = classify("(x-2*y)(x^2+y^2-z^2)");
        assert!(c1.decomposition().unwrap().general_position);
    }

    #[test]
    fn smooth_cubic_is_not_conic_line() {
        let c = classify("x^3+y^3+z^3-3*x*y*z+1/5*x^2*y");
        assert!(matches!(c, Classification::NotConicLine { remainder_degree: 3, .. }));
    }

    #[test]
    fn two_conics_and_a_line() {
        let c = classify("(x+2*y-z)(x^2+y^2-z^2)(x^2-3*y*z+2*z^2)");
        let d = c.decomposition().unwrap();
        assert_eq!((d.lines.len(), d.q()), (1, 2));
        assert!(d.certified);
    }

    #[test]
    fn concurrency_examples() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let p = concurrency(&[[one, zero, zero], [zero, one, zero], [one, one, zero]]).unwrap();
        assert!(p.distance(&ProjPoint::real(0.0, 0.0, 1.0).unwrap()) < 1e-12);
        assert!(concurrency(&[[one, zero, zero], [zero, one, zero], [zero, zero, one]]).is_none());
    }

    #[test]
    fn reducedness() {
        let f = |s: &str| parse_form(s, None).unwrap().to_float();
        assert!(!is_reduced(&f("x^2*y"), 1));
        assert!(is_reduced(&f("x*y*z"), 1));
        assert!(is_reduced(&f("(x-y)(x^2-x*y+y^2-z^2)"), 1));
    }

    #[test]
    fn samples_lie_on_curve() {
        let h = parse_form("x^2+y^2-z^2", None).unwrap().to_float();
        let pts = sample_curve_points(&h, 5, &Tolerances::default(), 3).unwrap();
        assert_eq!(pts.len(), 10);
        assert!(pts.iter().all(|(_, p)| h.relative_value(p.coords()) < 1e-8));
    }
}
