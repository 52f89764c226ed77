//! Common zeros of two plane curves.
//!
//! Elimination is exact: the resultant with respect to `z` is computed over
//! the Gaussian rationals in random unimodular coordinates, and its exact
//! square-free decomposition fixes every intersection multiplicity. Each
//! root of the eliminant is then lifted to a point of the plane numerically.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::Error;
use crate::forms::{random_transform, resultant_eliminate, ExactForm, FloatForm, FormError, Var};
use crate::point::ProjPoint;
use crate::roots::{solve_binary, solve_binary_exact};
use crate::scalar::{Coeff, C64};

const ATTEMPTS: u64 = 8;
/// Relative value under which a lifted point counts as a zero of the other
/// curve.
const LIFT_TOL: f64 = 1e-6;

/// Point of `F = G = 0` with its local intersection multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommonZero {
    pub point: ProjPoint,
    pub multiplicity: usize,
}

fn mix(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k.wrapping_mul(0xD1B5_4A32_D192_ED03)) ^ k
}

/// All common zeros of two coprime forms, with multiplicities summing to
/// `deg F · deg G`.
pub fn intersect_exact(f: &ExactForm, g: &ExactForm, tol: &Tolerances, seed: u64) -> Result<Vec<CommonZero>, Error> {
    if f.is_zero() || g.is_zero() {
        return Err(FormError::ZeroForm.into());
    }
    let mut last = Error::LiftFailure;
    for attempt in 0..ATTEMPTS {
        let s = mix(seed, attempt);
        let t = random_transform(s);
        let (ft, gt) = (t.apply_form(f), t.apply_form(g));
        let apex = [<crate::scalar::QI as Coeff>::zero(), <crate::scalar::QI as Coeff>::zero(), <crate::scalar::QI as Coeff>::one()];
        if ft.evaluate(&apex).is_zero() || gt.evaluate(&apex).is_zero() {
            continue;
        }
        let res = match resultant_eliminate(&ft, &gt, Var::Z) {
            Ok(r) => r,
            Err(FormError::ZeroEliminant) => return Err(Error::CommonComponent),
            Err(e) => return Err(e.into()),
        };
        let shadows = solve_binary_exact(&res, s)?;
        let (ff, gf) = (ft.to_float(), gt.to_float());
        let tinv = t.to_float();
        let mut out = Vec::with_capacity(shadows.len());
        let mut ok = true;
        for sh in &shadows {
            match lift(&ff, &gf, sh.point, tol, s) {
                Ok(p) => {
                    let back = tinv.unapply_point(&p);
                    match ProjPoint::new(back) {
                        Some(point) => out.push(CommonZero {
                            point,
                            multiplicity: sh.multiplicity,
                        }),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                Err(e) => {
                    last = e;
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(out);
        }
    }
    Err(last)
}

/// Floating-point counterpart of [`intersect_exact`] for forms with inexact
/// coefficients. Multiplicities come from root clusters of the eliminant and
/// are reliable for small multiplicities only.
pub fn intersect_float(f: &FloatForm, g: &FloatForm, tol: &Tolerances, seed: u64) -> Result<Vec<CommonZero>, Error> {
    if f.is_zero() || g.is_zero() {
        return Err(FormError::ZeroForm.into());
    }
    let mut last = Error::LiftFailure;
    for attempt in 0..ATTEMPTS {
        let s = mix(seed, attempt);
        let t = random_transform(s).to_float();
        let (ft, gt) = (t.apply_form(f), t.apply_form(g));
        let apex = [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        if ft.relative_value(&apex) < 1e-8 || gt.relative_value(&apex) < 1e-8 {
            continue;
        }
        let res = match resultant_eliminate(&ft, &gt, Var::Z) {
            Ok(r) => r,
            Err(FormError::ZeroEliminant) => return Err(Error::CommonComponent),
            Err(e) => return Err(e.into()),
        };
        // a resultant that is tiny against the Hadamard-type scale means a
        // shared factor
        let scale = ft.norm().powi(gt.degree() as i32) * gt.norm().powi(ft.degree() as i32);
        if res.norm() <= 1e-10 * scale {
            return Err(Error::CommonComponent);
        }
        let shadows = solve_binary(&res, tol, s)?;
        let mut out = Vec::with_capacity(shadows.len());
        let mut ok = true;
        for sh in &shadows {
            match lift(&ft, &gt, sh.point, tol, s).map(|p| ProjPoint::new(t.unapply_point(&p))) {
                Ok(Some(point)) => out.push(CommonZero {
                    point,
                    multiplicity: sh.multiplicity,
                }),
                Ok(None) => {
                    ok = false;
                    break;
                }
                Err(e) => {
                    last = e;
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(out);
        }
    }
    Err(last)
}

/// The unique common zero of `F, G` on the line joining `[0:0:1]` and
/// `[a:b:0]`.
fn lift(f: &FloatForm, g: &FloatForm, ab: [C64; 2], tol: &Tolerances, seed: u64) -> Result<[C64; 3], Error> {
    let zero = C64::new(0.0, 0.0);
    let apex = [zero, zero, C64::new(1.0, 0.0)];
    let dir = [ab[0], ab[1], zero];
    let to_point = |st: [C64; 2]| [st[1] * ab[0], st[1] * ab[1], st[0]];
    let mut cands: Vec<([C64; 3], f64)> = Vec::new();
    for (a, b) in [(f, g), (g, f)] {
        let r = a.restrict_to_line(&apex, &dir)?;
        for c in solve_binary(&r, tol, seed)? {
            if c.point[1].norm() == 0.0 {
                continue;
            }
            let mut st = c.point;
            if c.multiplicity > 1 {
                let one = C64::new(1.0, 0.0);
                st = if st[1].norm() >= st[0].norm() {
                    [refine_multiple(r.coeffs(), st[0] / st[1], c.multiplicity), one]
                } else {
                    let rev: Vec<C64> = r.coeffs().iter().rev().copied().collect();
                    [one, refine_multiple(&rev, st[1] / st[0], c.multiplicity)]
                };
            }
            let p = to_point(st);
            let v = b.relative_value(&p).max(a.relative_value(&p));
            if v <= LIFT_TOL {
                cands.push((p, v));
            }
        }
    }
    if cands.is_empty() {
            return Err(Error::LiftFailure);
    }
    cands.sort_by(|x, y| x.1.total_cmp(&y.1));
    let (best, best_v) = cands[0];
    let sep = 1e-4_f64.max(tol.rho_c);
    let rival = (best_v * 1e4).max(1e-12);
    // a second, distinct zero on the same line means the projection was not generic
    if cands
        .iter()
        .any(|(p, v)| *v <= rival && crate::point::chordal_distance(p, &best) > sep)
    {
        return Err(Error::LiftFailure);
    }
    Ok(best)
}

/// Sharpens an approximate `k`-fold root `z0` of `sum c_j z^j` with Newton
/// steps on the `(k-1)`-th derivative, where the root is simple.
fn refine_multiple(coeffs: &[C64], z0: C64, k: usize) -> C64 {
    let mut d: Vec<C64> = coeffs.to_vec();
    for _ in 1..k {
        d = d.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect();
    }
    let eval = |c: &[C64], z: C64| c.iter().rev().fold(C64::new(0.0, 0.0), |acc, v| acc * z + v);
    let dd: Vec<C64> = d.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect();
    let mut z = z0;
    for _ in 0..8 {
        let step = eval(&d, z) / eval(&dd, z);
        if !step.norm().is_finite() || step.norm() > 1e-3 * (1.0 + z0.norm()) {
            return z0;
        }
        z -= step;
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;

    #[test]
    fn fermat_cubic_base_points() {
        let f = parse_form("x^3-y^3", None).unwrap();
        let g = parse_form("y^3-z^3", None).unwrap();
        let z = intersect_exact(&f, &g, &Tolerances::default(), 1).unwrap();
        assert_eq!(z.len(), 9);
        assert!(z.iter().all(|c| c.multiplicity == 1));
        for c in &z {
            let p = c.point.coords();
            assert!((p[0].powu(3) - C64::new(1.0, 0.0)).norm() < 1e-10);
            assert!((p[1].powu(3) - C64::new(1.0, 0.0)).norm() < 1e-10);
            assert!((p[2].powu(3) - C64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn tangent_line_and_conic() {
        let f = parse_form("z-y", None).unwrap();
        let g = parse_form("x^2+y^2-z^2", None).unwrap();
        let z = intersect_exact(&f, &g, &Tolerances::default(), 2).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].multiplicity, 2);
        assert!(z[0].point.distance(&ProjPoint::real(0.0, 1.0, 1.0).unwrap()) < 1e-8);
    }

    #[test]
    fn float_intersection_matches_exact() {
        let f = parse_form("(x-2*y)(x^2+y^2-z^2)", None).unwrap();
        let g = parse_form("(x-y)(x^2-x*y+y^2-z^2)", None).unwrap();
        let tol = Tolerances::default();
        let e = intersect_exact(&f, &g, &tol, 4).unwrap();
        let fl = intersect_float(&f.to_float(), &g.to_float(), &tol, 4).unwrap();
        assert_eq!(e.len(), 9);
        assert_eq!(fl.len(), 9);
        for a in &e {
            assert!(fl.iter().any(|b| b.point.distance(&a.point) < 1e-8));
        }
        // the pencil passes through [0:0:1]
        let origin = ProjPoint::real(0.0, 0.0, 1.0).unwrap();
        assert!(e.iter().any(|c| c.point.distance(&origin) < 1e-12));
    }

    #[test]
    fn common_component() {
        let f = parse_form("x*(y-z)", None).unwrap();
        let g = parse_form("x*(y+z)", None).unwrap();
        assert!(matches!(intersect_exact(&f, &g, &Tolerances::default(), 3), Err(Error::CommonComponent)));
    }
}
