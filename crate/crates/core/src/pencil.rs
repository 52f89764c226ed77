//! Pencils `λf + μg`, their base locus and their singular members.

use rayon::prelude::*;

use crate::classify::{detect_components, is_reduced, Classification};
use crate::config::Tolerances;
use crate::error::Error;
use crate::euler::{euler_conic_line, euler_fiber, milnor_number};
use crate::forms::{random_transform, resultant_eliminate, ExactForm, FloatForm, FormError, TernaryForm, Var};
use crate::intersect::{intersect_exact, CommonZero};
use crate::point::{chordal_distance, ProjPoint};
use crate::scalar::{rationalize_c64, Coeff, C64, QI};

/// Largest denominator tried when recognizing a member parameter as exact.
const PARAM_DEN: i64 = 1_000_000;
/// Relative minor value under which a point of the reduced system is kept.
const MINOR_TOL: f64 = 1e-6;
/// Chordal radius within which two critical points share a member.
const PARAM_RADIUS: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    f: ExactForm,
    g: ExactForm,
    seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaseLocus {
    pub points: Vec<CommonZero>,
    pub transverse: bool,
}

impl BaseLocus {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub point: ProjPoint,
    /// Member `[λ:μ]` through the point, normalized by [`normalize_param`].
    pub param: [C64; 2],
    /// Intersection multiplicity of the critical system at the point; equal
    /// to the Milnor number of the member there.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberSingularity {
    pub point: ProjPoint,
    pub milnor: usize,
    /// Multiplicity of the critical system, an independent count of `milnor`.
    pub critical_multiplicity: usize,
    /// Components through the point (conic-line members only).
    pub branches: Option<usize>,
    /// Sum of pairwise intersection multiplicities of the components.
    pub delta: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularFiber {
    pub param: [C64; 2],
    pub exact_param: Option<[QI; 2]>,
    pub form: FloatForm,
    pub exact_form: Option<ExactForm>,
    pub reduced: bool,
    pub singular_points: Vec<FiberSingularity>,
    pub euler: i64,
    /// Euler characteristic from the component structure, when conic-line.
    pub euler_components: Option<i64>,
    pub classification: Option<Classification>,
}

impl SingularFiber {
    pub fn is_special(&self) -> bool {
        self.reduced && matches!(self.classification, Some(Classification::ConicLine(_)))
    }

    pub fn milnor_total(&self) -> usize {
        self.singular_points.iter().map(|s| s.milnor).sum()
    }
}

/// Scales `[λ:μ]` so that `λ = 1`, or returns `[0:1]`.
pub fn normalize_param(p: [C64; 2]) -> [C64; 2] {
    let scale = p[0].norm().max(p[1].norm());
    if p[0].norm() <= 1e-13 * scale {
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
    } else {
        [C64::new(1.0, 0.0), p[1] / p[0]]
    }
}

fn param_distance(a: &[C64; 2], b: &[C64; 2]) -> f64 {
    let z = C64::new(0.0, 0.0);
    chordal_distance(&[a[0], a[1], z], &[b[0], b[1], z])
}

/// `[1:0]` first, then `[1:t]` by real and imaginary part of `t`, then `[0:1]`.
fn param_order(a: &[C64; 2], b: &[C64; 2]) -> std::cmp::Ordering {
    let key = |p: &[C64; 2]| -> (u8, u8, f64, f64) {
        if p[0].norm() == 0.0 {
            (2, 0, 0.0, 0.0)
        } else if p[1].norm() == 0.0 {
            (0, 0, 0.0, 0.0)
        } else {
            (1, 0, p[1].re, p[1].im)
        }
    };
    let (ka, kb) = (key(a), key(b));
    let re = if (ka.2 - kb.2).abs() <= 1e-9 * ka.2.abs().max(1.0) {
        std::cmp::Ordering::Equal
    } else {
        ka.2.total_cmp(&kb.2)
    };
    ka.0.cmp(&kb.0).then(re).then(ka.3.total_cmp(&kb.3))
}

fn stream(seed: u64, k: u64) -> u64 {
    seed ^ k.wrapping_mul(0xA076_1D64_78BD_642F).rotate_left(17)
}

impl Pencil {
    /// Checks degrees and coprimality of the generators.
    pub fn new(f: ExactForm, g: ExactForm, seed: u64) -> Result<Pencil, Error> {
        if f.degree() != g.degree() {
            return Err(FormError::DegreeMismatch(f.degree(), g.degree()).into());
        }
        if f.is_zero() || g.is_zero() {
            return Err(FormError::ZeroForm.into());
        }
        if f.degree() < 1 {
            return Err(FormError::DegreeTooLow.into());
        }
        for k in 0..8 {
            let t = random_transform(stream(seed, 1 + k));
            match resultant_eliminate(&t.apply_form(&f), &t.apply_form(&g), Var::Z) {
                Ok(_) => return Ok(Pencil { f, g, seed }),
                Err(FormError::ZeroEliminant) => return Err(Error::CommonComponent),
                Err(FormError::LeadingCoefficientVanishes) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        Err(Error::DegenerateEliminant(8))
    }

    pub fn f(&self) -> &ExactForm {
        &self.f
    }

    pub fn g(&self) -> &ExactForm {
        &self.g
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `λf + μg`, scaled so its largest coefficient is 1.
    pub fn member(&self, param: [C64; 2]) -> Result<FloatForm, Error> {
        if param[0].norm() == 0.0 && param[1].norm() == 0.0 {
            return Err(Error::ZeroParam);
        }
        Ok(self.f.to_float().combine(&param[0], &self.g.to_float(), &param[1])?.normalized())
    }

    /// `λf + μg` over the Gaussian rationals, scaled by its leading coefficient.
    pub fn member_exact(&self, param: &[QI; 2]) -> Result<ExactForm, Error> {
        if Coeff::is_zero(&param[0]) && Coeff::is_zero(&param[1]) {
            return Err(Error::ZeroParam);
        }
        Ok(self.f.combine(&param[0], &self.g, &param[1])?.normalized())
    }

    pub fn base_locus(&self, tol: &Tolerances) -> Result<BaseLocus, Error> {
        let points = intersect_exact(&self.f, &self.g, tol, stream(self.seed, 2))?;
        let d = self.degree() as usize;
        let simple = points.len() == d * d && points.iter().all(|z| z.multiplicity == 1);
        let (ff, gf) = (self.f.to_float(), self.g.to_float());
        let transverse = simple && points.iter().all(|z| jacobian_rank_two(&ff, &gf, &z.point));
        Ok(BaseLocus { points, transverse })
    }

    /// Points where the gradients of `f` and `g` are parallel, off the base
    /// locus.
    pub fn critical_points(&self, base: &BaseLocus, tol: &Tolerances) -> Result<Vec<CriticalPoint>, Error> {
        let [fx, fy, fz] = self.f.partials();
        let [gx, gy, gz] = self.g.partials();
        let minors = [
            fx.mul(&gy).checked_sub(&fy.mul(&gx))?,
            fx.mul(&gz).checked_sub(&fz.mul(&gx))?,
            fy.mul(&gz).checked_sub(&fz.mul(&gy))?,
        ];
        if minors.iter().all(|m| m.is_zero()) {
            return Err(Error::DegenerateEliminant(0));
        }
        let minors_f: Vec<FloatForm> = minors.iter().map(|m| m.to_float()).collect();
        let (ff, gf) = (self.f.to_float(), self.g.to_float());
        const TRIES: u64 = 3;
        for attempt in 0..TRIES {
            let s = stream(self.seed, 10 + attempt);
            let weights = combination_weights(s);
            let combo = |w: &[i64; 3]| -> Result<ExactForm, Error> {
                let mut acc = TernaryForm::zero(minors[0].degree());
                for (m, &c) in minors.iter().zip(w) {
                    acc = acc.checked_add(&m.scale(&QI::from_i64(c)))?;
                }
                Ok(acc)
            };
            let (n1, n2) = (combo(&weights[0])?, combo(&weights[1])?);
            if n1.is_zero() || n2.is_zero() {
                continue;
            }
            let zeros = match intersect_exact(&n1, &n2, tol, s) {
                Ok(z) => z,
                Err(Error::CommonComponent) => continue,
                Err(e) => return Err(e),
            };
            let mut out = Vec::new();
            for z in zeros {
                if minors_f.iter().any(|m| !m.is_zero() && m.relative_value(z.point.coords()) > MINOR_TOL) {
                    continue;
                }
                if base.points.iter().any(|b| b.point.distance(&z.point) <= tol.rho_c) {
                    continue;
                }
                let c = z.point.coords();
                let param = normalize_param([gf.evaluate(c), -ff.evaluate(c)]);
                out.push(CriticalPoint {
                    point: z.point,
                    param,
                    multiplicity: z.multiplicity,
                });
            }
            return Ok(out);
        }
        Err(Error::DegenerateEliminant(TRIES as usize))
    }

    /// Singular members with their singular points, Euler characteristics and
    /// decompositions, sorted by parameter.
    pub fn singular_members(&self, base: &BaseLocus, tol: &Tolerances) -> Result<Vec<SingularFiber>, Error> {
        let crit = self.critical_points(base, tol)?;
        let mut groups: Vec<([C64; 2], Vec<CriticalPoint>)> = Vec::new();
        for c in crit {
            match groups.iter_mut().find(|(p, _)| param_distance(p, &c.param) <= PARAM_RADIUS) {
                Some((_, v)) => v.push(c),
                None => groups.push((c.param, vec![c])),
            }
        }
        for (p, members) in groups.iter_mut() {
            // average in the normalized chart for a representative parameter
            if p[0].norm() > 0.0 {
                let sum: C64 = members.iter().map(|m| m.param[1]).sum();
                *p = [C64::new(1.0, 0.0), sum / members.len() as f64];
            }
        }
        groups.sort_by(|a, b| param_order(&a.0, &b.0));
        groups
            .into_par_iter()
            .enumerate()
            .map(|(k, (param, pts))| self.analyze_fiber(param, &pts, tol, stream(self.seed, 100 + k as u64)))
            .collect()
    }

    fn analyze_fiber(&self, param: [C64; 2], pts: &[CriticalPoint], tol: &Tolerances, seed: u64) -> Result<SingularFiber, Error> {
        let d = self.degree();
        let exact_param = match (rationalize_c64(param[0], PARAM_DEN, 1e-9), rationalize_c64(param[1], PARAM_DEN, 1e-9)) {
            (Some(a), Some(b)) => Some([a, b]),
            _ => None,
        };
        let mut param = param;
        let exact_form = match &exact_param {
            Some(p) => {
                param = [p[0].to_c64(), p[1].to_c64()];
                Some(self.member_exact(p)?)
            }
            None => None,
        };
        let form = match &exact_form {
            Some(e) => e.to_float().normalized(),
            None => self.member(param)?,
        };
        let reduced = is_reduced(&form, seed);
        let mut singular_points = Vec::with_capacity(pts.len());
        for c in pts {
            let milnor = milnor_number(&form, &c.point, tol)?;
            singular_points.push(FiberSingularity {
                point: c.point,
                milnor,
                critical_multiplicity: c.multiplicity,
                branches: None,
                delta: None,
            });
        }
        crate::roots::sort_pairs(&mut singular_points, |s| {
            let c = s.point.coords();
            [c[0] + c[1] * C64::new(0.0, 1e-3), c[2] + C64::new(2.0, 0.0)]
        });
        let euler = euler_fiber(d, &singular_points.iter().map(|s| s.milnor).collect::<Vec<_>>());
        let mut fiber = SingularFiber {
            param,
            exact_param,
            form,
            exact_form,
            reduced,
            singular_points,
            euler,
            euler_components: None,
            classification: None,
        };
        if !reduced {
            return Ok(fiber);
        }
        let hints: Vec<ProjPoint> = fiber.singular_points.iter().map(|s| s.point).collect();
        let class = detect_components(&fiber.form, fiber.exact_form.as_ref(), &hints, tol, seed)?;
        if let Classification::ConicLine(dec) = &class {
            for s in fiber.singular_points.iter_mut() {
                let meet = dec.meetings.iter().find(|m| m.point.distance(&s.point) <= 1e-5);
                s.branches = Some(meet.map_or(1, |m| m.components.len()));
                s.delta = Some(meet.map_or(0, |m| m.delta));
            }
            let mut rs: Vec<usize> = fiber.singular_points.iter().filter_map(|s| s.branches).collect();
            // meetings that were not found among the critical points
            for m in &dec.meetings {
                if !fiber.singular_points.iter().any(|s| s.point.distance(&m.point) <= 1e-5) {
                    rs.push(m.components.len());
                }
            }
            fiber.euler_components = Some(euler_conic_line(dec.component_count(), &rs));
        }
        fiber.classification = Some(class);
        Ok(fiber)
    }
}

fn jacobian_rank_two(f: &FloatForm, g: &FloatForm, p: &ProjPoint) -> bool {
    let c = p.coords();
    let gf: Vec<C64> = f.partials().iter().map(|h| h.evaluate(c)).collect();
    let gg: Vec<C64> = g.partials().iter().map(|h| h.evaluate(c)).collect();
    let nf = gf.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let ng = gg.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if nf == 0.0 || ng == 0.0 {
        return false;
    }
    let cross = [
        gf[1] * gg[2] - gf[2] * gg[1],
        gf[2] * gg[0] - gf[0] * gg[2],
        gf[0] * gg[1] - gf[1] * gg[0],
    ];
    let nc = cross.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    nc > 1e-8 * nf * ng
}

fn combination_weights(seed: u64) -> [[i64; 3]; 2] {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut w = [[0i64; 3]; 2];
    for row in w.iter_mut() {
        for c in row.iter_mut() {
            *c = rng.gen_range(1..=9) * if rng.gen::<bool>() { 1 } else { -1 };
        }
    }
    w
}
