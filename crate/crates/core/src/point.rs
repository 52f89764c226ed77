use serde::{Deserialize, Serialize};

use crate::scalar::C64;

/// Point of the projective plane, stored with its largest coordinate equal
/// to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjPoint {
    coords: [C64; 3],
}

impl ProjPoint {
    /// Normalizes `coords`; returns `None` for the zero vector.
    pub fn new(coords: [C64; 3]) -> Option<ProjPoint> {
        let k = pivot(&coords);
        let piv = coords[k];
        if piv.norm() == 0.0 || !piv.norm().is_finite() {
            return None;
        }
        let mut out = coords.map(|c| c / piv);
        out[k] = C64::new(1.0, 0.0);
        Some(ProjPoint { coords: out })
    }

    pub fn real(x: f64, y: f64, z: f64) -> Option<ProjPoint> {
        ProjPoint::new([C64::new(x, 0.0), C64::new(y, 0.0), C64::new(z, 0.0)])
    }

    pub fn coords(&self) -> &[C64; 3] {
        &self.coords
    }

    /// Chordal (Fubini-Study sine) distance; lies in `[0, 1]`.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        chordal_distance(&self.coords, &other.coords)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coords.iter().all(|c| c.im.abs() <= tol)
    }
}

pub(crate) fn pivot(p: &[C64; 3]) -> usize {
    let mut k = 0;
    for i in 1..3 {
        if p[i].norm() > p[k].norm() {
            k = i;
        }
    }
    k
}

pub fn chordal_distance(a: &[C64; 3], b: &[C64; 3]) -> f64 {
    let na: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|c| c.norm_sqr()).sum();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    // |a ∧ b| / (|a| |b|)
    let w = [
        a[0] * b[1] - a[1] * b[0],
        a[0] * b[2] - a[2] * b[0],
        a[1] * b[2] - a[2] * b[1],
    ];
    let nw: f64 = w.iter().map(|c| c.norm_sqr()).sum();
    (nw / (na * nb)).sqrt().min(1.0)
}

/// Single-linkage clusters of points under the chordal metric. Each cluster
/// is returned with its normalized mean and the indices of its members, in
/// order of first appearance.
pub fn cluster_points(pts: &[ProjPoint], radius: f64) -> Vec<(ProjPoint, Vec<usize>)> {
    let n = pts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let next = p[i];
            p[i] = r;
            i = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if pts[i].distance(&pts[j]) <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let anchor = pts[members[0]].coords;
            let k = pivot(&anchor);
            let mut sum = [C64::new(0.0, 0.0); 3];
            for &m in &members {
                let c = pts[m].coords;
                // align each representative to the anchor's pivot before averaging
                let s = c[k];
                let scale = if s.norm() > 0.0 { C64::new(1.0, 0.0) / s } else { C64::new(1.0, 0.0) };
                for t in 0..3 {
                    sum[t] += c[t] * scale;
                }
            }
            (ProjPoint::new(sum).unwrap_or(pts[members[0]]), members)
        })
        .collect()
}
