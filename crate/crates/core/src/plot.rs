//! SVG drawings of the real conic-line members in the chart `z = 1`.

use std::fmt::Write;

use crate::error::Error;
use crate::report::{conic_form, parse_coords, AnalysisReport, FiberReport};
use crate::scalar::{parse_c64, C64};

const SIZE: f64 = 640.0;
const SWEEP: usize = 1440;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];
const REAL_TOL: f64 = 1e-9;

struct Canvas {
    half: f64,
    body: String,
}

impl Canvas {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        ((x + self.half) / (2.0 * self.half) * SIZE, (self.half - y) / (2.0 * self.half) * SIZE)
    }

    fn inside(&self, x: f64, y: f64) -> bool {
        x.abs() <= self.half * 1.05 && y.abs() <= self.half * 1.05
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str) {
        if pts.len() < 2 {
            return;
        }
        let mut path = String::new();
        for (k, (x, y)) in pts.iter().enumerate() {
            let (u, v) = self.map(*x, *y);
            let _ = write!(path, "{}{:.2},{:.2}", if k == 0 { "M" } else { " L" }, u, v);
        }
        let _ = writeln!(self.body, r#"  <path d="{path}" fill="none" stroke="{color}" stroke-width="2"/>"#);
    }
}

fn real_vector(v: &[C64]) -> Option<Vec<f64>> {
    let k = (0..v.len()).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))?;
    if v[k].norm() == 0.0 {
        return None;
    }
    let scaled: Vec<C64> = v.iter().map(|c| c / v[k]).collect();
    scaled.iter().all(|c| c.im.abs() <= REAL_TOL).then(|| scaled.iter().map(|c| c.re).collect())
}

/// Segment of the real line `ax + by + c = 0` inside the square.
fn line_segment(l: &[f64], half: f64) -> Option<[(f64, f64); 2]> {
    let (a, b, c) = (l[0], l[1], l[2]);
    let mut pts = Vec::new();
    if b.abs() > 1e-12 {
        for x in [-half, half] {
            let y = -(a * x + c) / b;
            if y.abs() <= half + 1e-9 {
                pts.push((x, y));
            }
        }
    }
    if a.abs() > 1e-12 {
        for y in [-half, half] {
            let x = -(b * y + c) / a;
            if x.abs() <= half + 1e-9 {
                pts.push((x, y));
            }
        }
    }
    pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-9 && (p.1 - q.1).abs() < 1e-9);
    (pts.len() >= 2).then(|| [pts[0], pts[pts.len() - 1]])
}

/// A real point of the conic with symmetric matrix `a`, found on the
/// coordinate lines and a few fixed lines through the origin.
fn real_point(a: &[[f64; 3]; 3]) -> Option<[f64; 3]> {
    let q = |p: &[f64; 3], r: &[f64; 3]| -> f64 { (0..3).map(|i| (0..3).map(|j| p[i] * a[i][j] * r[j]).sum::<f64>()).sum() };
    let dirs: [[f64; 3]; 6] = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 1.0, 0.0],
        [1.0, -1.0, 0.0],
        [0.3, 0.7, 1.0],
    ];
    for p in &dirs {
        for r in &dirs {
            if p == r {
                continue;
            }
            // Q(p + t r) = Q(p) + 2t B(p, r) + t² Q(r)
            let (c0, c1, c2) = (q(p, p), 2.0 * q(p, r), q(r, r));
            let roots: Vec<f64> = if c2.abs() < 1e-14 {
                if c1.abs() < 1e-14 {
                    continue;
                }
                vec![-c0 / c1]
            } else {
                let disc = c1 * c1 - 4.0 * c2 * c0;
                if disc < 0.0 {
                    continue;
                }
                vec![(-c1 + disc.sqrt()) / (2.0 * c2)]
            };
            let t = roots[0];
            let pt: [f64; 3] = std::array::from_fn(|i| p[i] + t * r[i]);
            let n = pt.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if pt[2].abs() > 1e-6 * n {
                return Some(pt);
            }
        }
    }
    None
}

/// Real locus of a conic, swept by the lines through one of its real points.
fn conic_paths(coeffs: &[f64], canvas: &Canvas) -> Vec<Vec<(f64, f64)>> {
    let (xx, xy, xz, yy, yz, zz) = (coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4], coeffs[5]);
    let a = [[xx, xy / 2.0, xz / 2.0], [xy / 2.0, yy, yz / 2.0], [xz / 2.0, yz / 2.0, zz]];
    let Some(p0) = real_point(&a) else {
        return Vec::new();
    };
    let bil = |p: &[f64; 3], r: &[f64; 3]| -> f64 { (0..3).map(|i| (0..3).map(|j| p[i] * a[i][j] * r[j]).sum::<f64>()).sum() };
    let mut paths = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for k in 0..=SWEEP {
        let th = std::f64::consts::PI * k as f64 / SWEEP as f64;
        // the lines through p0 meet the line at infinity once each
        let w = [th.cos(), th.sin(), 0.0];
        let pt: [f64; 3] = std::array::from_fn(|i| bil(&w, &w) * p0[i] - 2.0 * bil(&p0, &w) * w[i]);
        let ok = pt[2].abs() > 1e-12 && {
            let (x, y) = (pt[0] / pt[2], pt[1] / pt[2]);
            canvas.inside(x, y)
        };
        if ok {
            current.push((pt[0] / pt[2], pt[1] / pt[2]));
        } else if !current.is_empty() {
            paths.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        paths.push(current);
    }
    paths
}

fn fiber_label(f: &FiberReport) -> String {
    match &f.param_exact {
        Some(p) => format!("[{}:{}]", p[0], p[1]),
        None => {
            let p = f.param_c64().unwrap_or([C64::new(0.0, 0.0); 2]);
            format!("[{:.4}:{:.4}{:+.4}i]", p[0].re, p[1].re, p[1].im)
        }
    }
}

/// Renders the report; fails with [`Error::NothingToPlot`] when it has no
/// conic-line member.
pub fn render_svg(report: &AnalysisReport) -> Result<String, Error> {
    let members: Vec<&FiberReport> = report.special_fibers().collect();
    if members.is_empty() {
        return Err(Error::NothingToPlot);
    }
    let real_base: Vec<(f64, f64)> = report
        .base_locus
        .points
        .iter()
        .filter_map(|b| parse_coords(&b.coords))
        .filter_map(|c| real_vector(&c))
        .filter(|v| v[2].abs() > 1e-12)
        .map(|v| (v[0] / v[2], v[1] / v[2]))
        .collect();
    let extent = real_base.iter().map(|(x, y)| x.abs().max(y.abs())).fold(1.0, f64::max);
    let mut canvas = Canvas {
        half: (extent * 1.5).clamp(2.0, 20.0),
        body: String::new(),
    };
    let mut legend = Vec::new();
    for (k, f) in members.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut drawn = 0;
        let mut skipped = 0;
        for l in &f.lines {
            let coeffs: Vec<C64> = l.coeffs.iter().filter_map(|s| parse_c64(s)).collect();
            match real_vector(&coeffs).and_then(|v| line_segment(&v, canvas.half)) {
                Some(seg) => {
                    canvas.polyline(&seg, color);
                    drawn += 1;
                }
                None => skipped += 1,
            }
        }
        for c in &f.conics {
            let coeffs = conic_form(c).map(|q| q.coeffs().to_vec()).unwrap_or_default();
            match real_vector(&coeffs) {
                Some(v) => {
                    let paths = conic_paths(&v, &canvas);
                    if paths.is_empty() {
                        skipped += 1;
                    } else {
                        drawn += 1;
                    }
                    for p in paths {
                        canvas.polyline(&p, color);
                    }
                }
                None => skipped += 1,
            }
        }
        legend.push((color, format!("{} ({drawn} real, {skipped} not drawn)", fiber_label(f))));
    }
    for (x, y) in &real_base {
        let (u, v) = canvas.map(*x, *y);
        let _ = writeln!(canvas.body, r#"  <circle cx="{u:.2}" cy="{v:.2}" r="4" fill="black"/>"#);
    }
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{}" viewBox="0 0 {SIZE} {}">"#, SIZE + 20.0 * legend.len() as f64 + 10.0, SIZE + 20.0 * legend.len() as f64 + 10.0);
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let (ox, oy) = canvas.map(0.0, 0.0);
    let _ = writeln!(svg, r##"  <path d="M0,{oy:.2} L{SIZE},{oy:.2} M{ox:.2},0 L{ox:.2},{SIZE}" stroke="#bbbbbb" stroke-width="1"/>"##);
    svg.push_str(&canvas.body);
    for (k, (color, text)) in legend.iter().enumerate() {
        let y = SIZE + 20.0 * (k as f64 + 1.0);
        let _ = writeln!(svg, r#"  <text x="10" y="{y}" font-family="monospace" font-size="13" fill="{color}">{text}</text>"#);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
