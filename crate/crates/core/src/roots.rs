//! Simultaneous root finding for univariate polynomials and binary forms.
//!
//! The kernel is the Aberth–Ehrlich iteration with Gauss–Seidel updates and
//! Newton-polygon starting points. Roots of a nonzero binary form are grouped
//! into clusters using Weierstrass inclusion disks, so a cluster of `k`
//! iterates certifies (to rounding) a `k`-fold root or `k` roots too close to
//! be separated at double precision.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::Error;
use crate::forms::{chordal_distance_1d, normalize_pair, ExactBinary, FloatBinary, UniPoly};
use crate::scalar::{qi_slice_to_c64_scaled, C64};

const MAX_ITER: usize = 500;
const RETRIES: usize = 3;

/// Root of a binary form, counted with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootCluster {
    /// `[s:t]` with the larger coordinate equal to 1.
    pub point: [C64; 2],
    pub multiplicity: usize,
    /// Chordal radius of the iterates that were merged into this cluster.
    pub radius: f64,
    /// `|B(point)| / ‖B‖` for the normalized representative.
    pub max_residual: f64,
}

/// Horner evaluation of `p` and `p'` together with a rounding-error bound
/// for `p(z)`.
fn horner(coeffs: &[C64], z: C64) -> (C64, C64, f64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let az = z.norm();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        bound = bound * az + p.norm();
    }
    (p, dp, bound * 4.0 * f64::EPSILON)
}

/// Ratio `p(z)/p'(z)` and a rounding-aware residual test, evaluated in the
/// reversed polynomial when `|z| > 1` for stability.
fn newton_ratio(coeffs: &[C64], z: C64) -> (C64, bool) {
    let n = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let (p, dp, err) = horner(coeffs, z);
        (p / dp, p.norm() <= err)
    } else {
        let w = C64::new(1.0, 0.0) / z;
        let rev: Vec<C64> = coeffs.iter().rev().copied().collect();
        let (q, dq, err) = horner(&rev, w);
        // p'/p = n w - w^2 q'/q
        let ratio = C64::new(n as f64, 0.0) * w - w * w * dq / q;
        (C64::new(1.0, 0.0) / ratio, q.norm() <= err)
    }
}

/// Starting points on circles whose radii follow the upper convex hull of
/// `(k, log|a_k|)`.
fn initial_guesses(coeffs: &[C64], rng: &mut ChaCha8Rng) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let logs: Vec<f64> = coeffs
        .iter()
        .map(|c| if c.norm() > 0.0 { c.norm().ln() } else { f64::NEG_INFINITY })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..=n {
        if logs[k] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop j if it lies below the segment i..k
            let lhs = (logs[j] - logs[i]) * (k - i) as f64;
            let rhs = (logs[k] - logs[i]) * (j - i) as f64;
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let sigma: f64 = rng.gen_range(0.0..2.0 * PI);
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let count = j - i;
        let u = ((logs[i] - logs[j]) / count as f64).exp();
        for m in 0..count {
            let ang = 2.0 * PI * m as f64 / count as f64 + 2.0 * PI * i as f64 / n as f64 + sigma;
            out.push(C64::from_polar(u, ang));
        }
    }
    out
}

/// All roots of `coeffs` (low to high, nonzero leading coefficient), or
/// `None` if the iteration did not converge.
fn aberth(coeffs: &[C64], rng: &mut ChaCha8Rng) -> Option<Vec<C64>> {
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    if zeros > 0 {
        let mut rest = aberth(&coeffs[zeros..], rng)?;
        rest.extend(std::iter::repeat_n(C64::new(0.0, 0.0), zeros));
        return Some(rest);
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Some(Vec::new());
    }
    if n == 1 {
        return Some(vec![-coeffs[0] / coeffs[1]]);
    }
    let mut z = initial_guesses(coeffs, rng);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, small) = newton_ratio(coeffs, z[i]);
            if small || !ratio.norm().is_finite() {
                done[i] = true;
                continue;
            }
            let mut sum = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += C64::new(1.0, 0.0) / (z[i] - z[j]);
                }
            }
            let corr = ratio / (C64::new(1.0, 0.0) - ratio * sum);
            if !corr.norm().is_finite() {
                return None;
            }
            z[i] -= corr;
            if corr.norm() <= 2.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Some(z);
        }
    }
    None
}

/// Roots of a univariate polynomial (coefficients low to high), each listed
/// once per multiplicity. The polynomial is expected to be square-free;
/// multiple roots come back as nearby iterates.
pub fn solve_univariate(coeffs: &[C64], seed: u64) -> Result<Vec<C64>, Error> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|v| v.norm() == 0.0) {
        c.pop();
    }
    if c.is_empty() {
        return Err(crate::forms::FormError::ZeroForm.into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..=RETRIES {
        if let Some(mut z) = aberth(&c, &mut rng) {
            for r in z.iter_mut() {
                *r = polish(&c, *r);
            }
            return Ok(z);
        }
    }
    Err(Error::NonConvergence(RETRIES + 1))
}

fn polish(coeffs: &[C64], mut z: C64) -> C64 {
    for _ in 0..3 {
        let (ratio, small) = newton_ratio(coeffs, z);
        if small || !ratio.norm().is_finite() {
            break;
        }
        z -= ratio;
    }
    z
}

/// Groups iterates whose Weierstrass inclusion disks overlap. Returns, for
/// each group, the member indices (ascending).
fn inclusion_groups(coeffs: &[C64], z: &[C64], extra_radius: f64) -> Vec<Vec<usize>> {
    let n = z.len();
    let lead = coeffs[n].norm();
    let radii: Vec<f64> = (0..n)
        .map(|i| {
            let (p, _, err) = horner(coeffs, z[i]);
            let mut log_den = lead.ln();
            for j in 0..n {
                if j != i {
                    log_den += (z[i] - z[j]).norm().max(f64::MIN_POSITIVE).ln();
                }
            }
            let num = n as f64 * (p.norm() + err);
            if num == 0.0 {
                0.0
            } else {
                (num.ln() - log_den).exp()
            }
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let dist = (z[i] - z[j]).norm();
            let pi = [z[i], C64::new(1.0, 0.0)];
            let pj = [z[j], C64::new(1.0, 0.0)];
            if dist <= radii[i] + radii[j] || chordal_distance_1d(&pi, &pj) <= extra_radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Random unitary change of the `(s, t)` chart.
fn random_unitary(rng: &mut ChaCha8Rng) -> [[C64; 2]; 2] {
    let th: f64 = rng.gen_range(0.3..1.2);
    let (a1, a2): (f64, f64) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI));
    let c = C64::from_polar(th.cos(), a1);
    let s = C64::from_polar(th.sin(), a2);
    [[c, -s.conj()], [s, c.conj()]]
}

fn sort_key(p: &[C64; 2]) -> (u8, f64, f64) {
    if p[1].norm() >= p[0].norm() {
        let z = p[0] / p[1];
        (0, z.re, z.im)
    } else {
        let z = p[1] / p[0];
        (1, z.re, z.im)
    }
}

pub(crate) fn sort_pairs<T>(v: &mut [T], key: impl Fn(&T) -> [C64; 2]) {
    v.sort_by(|a, b| {
        let (ka, kb) = (sort_key(&key(a)), sort_key(&key(b)));
        ka.0.cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(ka.2.total_cmp(&kb.2))
    });
}

fn residual(b: &FloatBinary, p: &[C64; 2]) -> f64 {
    let n = b.norm();
    if n == 0.0 {
        return 0.0;
    }
    b.evaluate(&p[0], &p[1]).norm() / n
}

/// Roots of a nonzero binary form on the projective line, clustered.
///
/// Multiplicity is the number of iterates in a cluster; the multiplicities
/// always sum to the degree.
pub fn solve_binary(b: &FloatBinary, tol: &Tolerances, seed: u64) -> Result<Vec<RootCluster>, Error> {
    if b.is_zero() {
        return Err(crate::forms::FormError::ZeroForm.into());
    }
    let n = b.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..=RETRIES {
        let u = random_unitary(&mut rng);
        let rotated = b.substitute(&u);
        let coeffs = rotated.coeffs().to_vec();
        if coeffs[n].norm() <= 1e-14 * rotated.norm() {
            continue;
        }
        let Some(z) = aberth(&coeffs, &mut rng) else {
            continue;
        };
        let groups = inclusion_groups(&coeffs, &z, tol.rho_c);
        let mut out = Vec::with_capacity(groups.len());
        for g in groups {
            let rep = if g.len() == 1 {
                polish(&coeffs, z[g[0]])
            } else {
                g.iter().map(|&i| z[i]).sum::<C64>() / g.len() as f64
            };
            let to_st = |w: C64| normalize_pair([u[0][0] * w + u[0][1], u[1][0] * w + u[1][1]]);
            let point = to_st(rep);
            let radius = g
                .iter()
                .map(|&i| chordal_distance_1d(&to_st(z[i]), &point))
                .fold(0.0, f64::max);
            out.push(RootCluster {
                point,
                multiplicity: g.len(),
                radius,
                max_residual: residual(b, &point),
            });
        }
        sort_pairs(&mut out, |c| c.point);
        return Ok(out);
    }
    Err(Error::NonConvergence(RETRIES + 1))
}

/// Roots of an exact binary form with exact multiplicities.
///
/// The square-free decomposition runs over the Gaussian rationals; each
/// square-free factor is then solved in floating point, so distinct roots are
/// never merged and multiplicities never drift.
pub fn solve_binary_exact(b: &ExactBinary, seed: u64) -> Result<Vec<RootCluster>, Error> {
    if b.is_zero() {
        return Err(crate::forms::FormError::ZeroForm.into());
    }
    let n = b.degree();
    let bf = b.to_float();
    let affine = b.dehomogenize();
    let deg = affine.degree().unwrap_or(0);
    let mut out = Vec::new();
    if deg < n {
        out.push(RootCluster {
            point: [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            multiplicity: n - deg,
            radius: 0.0,
            max_residual: 0.0,
        });
    }
    for (k, (factor, mult)) in squarefree_parts(&affine).into_iter().enumerate() {
        let coeffs = qi_slice_to_c64_scaled(factor.coeffs());
        for z in solve_univariate(&coeffs, seed.wrapping_add(k as u64))? {
            let point = normalize_pair([z, C64::new(1.0, 0.0)]);
            out.push(RootCluster {
                point,
                multiplicity: mult,
                radius: 0.0,
                max_residual: residual(&bf, &point),
            });
        }
    }
    sort_pairs(&mut out, |c| c.point);
    Ok(out)
}

pub(crate) fn squarefree_parts(p: &UniPoly<crate::scalar::QI>) -> Vec<(UniPoly<crate::scalar::QI>, usize)> {
    p.squarefree_decomposition()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::BinaryForm;
    use crate::scalar::qi_int;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn sum_of_squares() {
        let b = BinaryForm::from_coeffs(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let r = solve_binary(&b, &Tolerances::default(), 1).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.multiplicity == 1));
        let mut ims: Vec<f64> = r.iter().map(|x| (x.point[0] / x.point[1]).im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-12 && (ims[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triple_root_clusters() {
        // (s - t)^3 = s^3 - 3 s^2 t + 3 s t^2 - t^3; coeffs[k] multiplies s^k t^(3-k)
        let b = BinaryForm::from_coeffs(vec![c(-1.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]);
        let r = solve_binary(&b, &Tolerances::default(), 7).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert!(chordal_distance_1d(&r[0].point, &[c(1.0, 0.0), c(1.0, 0.0)]) < 1e-5);
    }

    #[test]
    fn root_at_infinity() {
        // s t: roots [0:1] and [1:0]
        let b = BinaryForm::from_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let r = solve_binary(&b, &Tolerances::default(), 3).unwrap();
        assert_eq!(r.len(), 2);
        let e = solve_binary_exact(&BinaryForm::from_coeffs(vec![qi_int(0, 0), qi_int(1, 0), qi_int(0, 0)]), 3).unwrap();
        assert_eq!(e.len(), 2);
        for (a, b) in r.iter().zip(&e) {
            assert!(chordal_distance_1d(&a.point, &b.point) < 1e-12);
        }
    }

    #[test]
    fn exact_multiplicities() {
        // (s^3 - t^3)^3
        let cube = BinaryForm::from_coeffs(vec![qi_int(-1, 0), qi_int(0, 0), qi_int(0, 0), qi_int(1, 0)]);
        let b = cube.mul(&cube).mul(&cube);
        let r = solve_binary_exact(&b, 5).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| x.multiplicity == 3 && x.max_residual < 1e-12));
    }

    #[test]
    fn deterministic() {
        let b = BinaryForm::from_coeffs((0..9).map(|k| c(k as f64 - 3.5, (k * k) as f64 * 0.1)).collect());
        let a1 = solve_binary(&b, &Tolerances::default(), 11).unwrap();
        let a2 = solve_binary(&b, &Tolerances::default(), 11).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(a1.iter().map(|x| x.multiplicity).sum::<usize>(), 8);
    }
}
