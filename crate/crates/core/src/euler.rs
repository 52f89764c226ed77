//! Local invariants of plane curve singularities and Euler-characteristic
//! bookkeeping for the fibers of a pencil.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::Error;
use crate::forms::FloatForm;
use crate::intersect::intersect_float;
use crate::point::{pivot, ProjPoint};
use crate::scalar::C64;

type Local = BTreeMap<(u32, u32), C64>;

/// Singular point of a fiber with its invariants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalSingularity {
    pub point: ProjPoint,
    pub milnor: usize,
    /// Number of components through the point (conic-line fibers only).
    pub branches: usize,
    /// Sum of pairwise intersection multiplicities of those components.
    pub delta: usize,
}

/// Expansion of `h` around `p` in the affine chart where the largest
/// coordinate of `p` is 1; `p` becomes the origin.
fn local_expansion(h: &FloatForm, p: &ProjPoint) -> Local {
    let c = p.coords();
    let k = pivot(c);
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let rows: [[C64; 3]; 3] = std::array::from_fn(|m| {
        [
            if m == others[0] { one } else { zero },
            if m == others[1] { one } else { zero },
            c[m],
        ]
    });
    let moved = h.substitute_linear(&rows);
    let scale = moved.coeffs().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut out = Local::new();
    for ((a, b, _), v) in moved.terms() {
        if v.norm() > 0.0 {
            out.insert((a, b), v / scale);
        }
    }
    out
}

fn derivative(poly: &Local, var: usize) -> Local {
    let mut out = Local::new();
    for (&(a, b), v) in poly {
        let e = if var == 0 { a } else { b };
        if e == 0 {
            continue;
        }
        let key = if var == 0 { (a - 1, b) } else { (a, b - 1) };
        out.insert(key, v * e as f64);
    }
    out
}

fn numerical_rank(m: &DMatrix<C64>, rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    // generators come from a form scaled to unit largest coefficient, so
    // values far below 1 are rounding noise even when nothing else is larger
    let top = sv.max().max(1.0);
    sv.iter().filter(|&&s| s > rel * top).count()
}

/// Dimension of the order-`n` part of the dual space of the ideal generated
/// by `gens` at the origin.
fn dual_dimension(gens: &[Local], n: u32, rel: f64) -> usize {
    let cols: Vec<(u32, u32)> = (0..=n).flat_map(|t| (0..=t).map(move |b| (t - b, b))).collect();
    let index: BTreeMap<(u32, u32), usize> = cols.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for g in gens {
        for t in 0..=n {
            for b in 0..=t {
                let a = t - b;
                let mut row = vec![C64::new(0.0, 0.0); cols.len()];
                let mut any = false;
                for (&(ga, gb), v) in g {
                    if let Some(&j) = index.get(&(ga + a, gb + b)) {
                        row[j] += v;
                        any = true;
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
    }
    let m = DMatrix::from_fn(rows.len(), cols.len(), |i, j| rows[i][j]);
    cols.len() - numerical_rank(&m, rel)
}

/// Milnor number of `h` at `p`: the dimension of the local algebra
/// `O_p / (h_u, h_v)`, read off from the stabilizing dual space.
///
/// Returns 0 when `p` is a smooth point of the curve (or not on it).
pub fn milnor_number(h: &FloatForm, p: &ProjPoint, _tol: &Tolerances) -> Result<usize, Error> {
    let poly = local_expansion(h, p);
    let gens = [derivative(&poly, 0), derivative(&poly, 1)];
    let d = h.degree();
    let cap = (d.saturating_sub(1)).pow(2) + 3;
    let rel = 1e-8;
    let mut prev = dual_dimension(&gens, 0, rel);
    for n in 1..=cap {
        let cur = dual_dimension(&gens, n, rel);
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonIsolated(format!(
        "local algebra at {:?} did not stabilize",
        p.coords()
    )))
}

/// Milnor number as the number of solutions of `∇h = ε·(a, b)` near `p`,
/// for two random directions `(a, b)`. Both counts must agree.
pub fn milnor_number_perturbed(h: &FloatForm, p: &ProjPoint, tol: &Tolerances, seed: u64) -> Result<usize, Error> {
    let poly = local_expansion(h, p);
    let d = h.degree();
    if d < 2 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Vec::new();
    for _ in 0..2 {
        let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let dir = [C64::from_polar(tol.eps, ang), C64::from_polar(tol.eps, ang + phase)];
        let mut eqs = Vec::new();
        for var in 0..2 {
            // zoom so the neighbourhood of radius rho_loc becomes the unit disk
            let mut g: Local = derivative(&poly, var)
                .into_iter()
                .map(|((a, b), v)| ((a, b), v * tol.rho_loc.powi((a + b) as i32)))
                .collect();
            *g.entry((0, 0)).or_insert(C64::new(0.0, 0.0)) -= dir[var];
            // homogenize with w as the third coordinate
            let e = d - 1;
            let terms = g.into_iter().map(|((a, b), v)| ((a, b, e - a - b), v));
            eqs.push(FloatForm::from_terms(e, terms)?);
        }
        let sols = intersect_float(&eqs[0], &eqs[1], tol, rng.gen())?;
        let near: usize = sols
            .iter()
            .filter(|s| {
                let c = s.point.coords();
                c[2].norm() > 0.0 && (c[0] / c[2]).norm() <= 1.0 && (c[1] / c[2]).norm() <= 1.0
            })
            .map(|s| s.multiplicity)
            .sum();
        counts.push(near);
    }
    if counts[0] != counts[1] {
        return Err(Error::NonIsolated(format!("perturbed counts disagree: {counts:?}")));
    }
    Ok(counts[0])
}

/// Intersection multiplicity of two curves at `p`: the common zeros within
/// `rho_loc` of `p`, counted with multiplicity.
pub fn local_intersection(f1: &FloatForm, f2: &FloatForm, p: &ProjPoint, tol: &Tolerances, seed: u64) -> Result<usize, Error> {
    let zeros = intersect_float(f1, f2, tol, seed)?;
    Ok(zeros
        .iter()
        .filter(|z| z.point.distance(p) <= tol.rho_loc)
        .map(|z| z.multiplicity)
        .sum())
}

/// Euler characteristic of a reduced conic-line curve: each component is a
/// sphere, and a point on `r` components glues `r` points into one.
pub fn euler_conic_line(components: usize, branch_counts: &[usize]) -> i64 {
    2 * components as i64 - branch_counts.iter().map(|&r| r as i64 - 1).sum::<i64>()
}

/// Euler characteristic of a reduced degree-`d` curve with isolated
/// singularities of the given Milnor numbers.
pub fn euler_fiber(d: u32, milnor: &[usize]) -> i64 {
    euler_generic(d) + milnor.iter().map(|&m| m as i64).sum::<i64>()
}

/// Euler characteristic of a smooth plane curve of degree `d`.
pub fn euler_generic(d: u32) -> i64 {
    let d = d as i64;
    3 * d - d * d
}

/// Euler characteristic of the plane blown up at `d²` points.
pub fn euler_surface(d: u32) -> i64 {
    3 + (d as i64).pow(2)
}

pub fn genus(d: u32) -> i64 {
    let d = d as i64;
    (d - 1) * (d - 2) / 2
}

/// Nodes of a degree-`d` conic-line curve in general position with `q`
/// conics.
pub fn node_count_general_position(d: u32, q: u32) -> i64 {
    let d = d as i64;
    d * (d - 1) / 2 - q as i64
}

/// Fiber-by-fiber decomposition of the Euler characteristic of the blown-up
/// plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub degree: u32,
    pub e_surface: i64,
    pub e_generic: i64,
    pub genus: i64,
    /// `(e, total Milnor number)` per singular fiber.
    pub fibers: Vec<(i64, i64)>,
    /// `e_surface - 2 e_generic - Σ (e - e_generic)`; zero when every
    /// singular fiber was found with correct invariants.
    pub balance: i64,
}

pub fn global_ledger(d: u32, fibers: &[(i64, i64)]) -> Ledger {
    let e_generic = euler_generic(d);
    let e_surface = euler_surface(d);
    let balance = e_surface - 2 * e_generic - fibers.iter().map(|(e, _)| e - e_generic).sum::<i64>();
    Ledger {
        degree: d,
        e_surface,
        e_generic,
        genus: genus(d),
        fibers: fibers.to_vec(),
        balance,
    }
}
