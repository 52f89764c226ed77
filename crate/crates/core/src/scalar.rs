//! Coefficient fields.
//!
//! Two fields are used throughout the crate: exact Gaussian rationals
//! ([`QI`], real and imaginary parts are arbitrary-precision rationals) and
//! double-precision complex numbers ([`C64`]). Algorithms that must not lose
//! information (elimination, square-free decomposition, divisibility
//! certificates) run over [`QI`]; everything local and approximate runs over
//! [`C64`]. Both implement [`Coeff`], so polynomial containers are generic.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type C64 = Complex<f64>;
pub type QI = Complex<BigRational>;

/// Field operations shared by exact and floating coefficients.
///
/// The `*_ref` methods exist so generic code never has to clone big rationals
/// just to combine them.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync + 'static {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    /// Panics (exact) or yields non-finite values (float) on division by zero.
    fn div_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn to_c64(&self) -> C64;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Determinant of a square matrix given by rows.
    fn determinant(rows: Vec<Vec<Self>>) -> Self;

    /// Nodes at which a polynomial of degree `< n` is sampled before
    /// [`Coeff::interpolate`] recovers its monomial coefficients.
    fn interpolation_nodes(n: usize) -> Vec<Self>;

    /// Monomial coefficients (low to high) of the unique polynomial of degree
    /// `< nodes.len()` through `(nodes[k], values[k])`. `nodes` must come from
    /// [`Coeff::interpolation_nodes`].
    fn interpolate(nodes: &[Self], values: &[Self]) -> Vec<Self>;

    fn fmt_coeff(&self) -> String;

    /// `(negative, magnitude)` for real values; non-real values come back
    /// parenthesized with `negative = false`.
    fn fmt_signed(&self) -> (bool, String);
}

impl Coeff for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn to_c64(&self) -> C64 {
        *self
    }

    fn determinant(mut rows: Vec<Vec<Self>>) -> Self {
        let n = rows.len();
        let mut det = C64::new(1.0, 0.0);
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&a, &b| rows[a][k].norm().total_cmp(&rows[b][k].norm()))
                .unwrap();
            if rows[piv][k].norm() == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if piv != k {
                rows.swap(piv, k);
                det = -det;
            }
            let p = rows[k][k];
            det *= p;
            for i in k + 1..n {
                let f = rows[i][k] / p;
                if f.norm() == 0.0 {
                    continue;
                }
                for j in k..n {
                    let v = rows[k][j];
                    rows[i][j] -= f * v;
                }
            }
        }
        det
    }

    fn interpolation_nodes(n: usize) -> Vec<Self> {
        (0..n)
            .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect()
    }

    fn interpolate(nodes: &[Self], values: &[Self]) -> Vec<Self> {
        // nodes are the n-th roots of unity: inverse DFT
        let n = nodes.len();
        (0..n)
            .map(|j| {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += values[k] * nodes[(j * (n - k)) % n];
                }
                acc / n as f64
            })
            .collect()
    }

    fn fmt_coeff(&self) -> String {
        format_c64(*self)
    }

    fn fmt_signed(&self) -> (bool, String) {
        if self.im == 0.0 {
            (self.re < 0.0, format_f64(self.re.abs()))
        } else {
            (false, format!("({})", format_c64(*self)))
        }
    }
}

impl Coeff for QI {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(v.into()), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Complex::new(&self.re * &o.re, BigRational::zero());
        }
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn div_ref(&self, o: &Self) -> Self {
        if o.im.is_zero() {
            return Complex::new(&self.re / &o.re, &self.im / &o.re);
        }
        let den = &o.re * &o.re + &o.im * &o.im;
        Complex::new(
            (&self.re * &o.re + &self.im * &o.im) / &den,
            (&self.im * &o.re - &self.re * &o.im) / &den,
        )
    }
    fn neg_ref(&self) -> Self {
        Complex::new(-&self.re, -&self.im)
    }
    fn to_c64(&self) -> C64 {
        C64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        exact_determinant(rows)
    }

    fn interpolation_nodes(n: usize) -> Vec<Self> {
        // 0, 1, -1, 2, -2, ... keeps the node magnitudes at n/2
        (0..n as i64)
            .map(|k| {
                let v = if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) };
                QI::from_i64(v)
            })
            .collect()
    }

    fn interpolate(nodes: &[Self], values: &[Self]) -> Vec<Self> {
        newton_interpolate(nodes, values)
    }

    fn fmt_coeff(&self) -> String {
        format_qi(self)
    }

    fn fmt_signed(&self) -> (bool, String) {
        if self.im.is_zero() {
            (self.re.is_negative(), format_rational(&self.re.abs()))
        } else if self.re.is_zero() {
            (self.im.is_negative(), format!("{}i", format_rational(&self.im.abs())))
        } else {
            (false, format!("({})", format_qi(self)))
        }
    }
}

/// Integer or rational Gaussian number from parts.
pub fn qi(re: BigRational, im: BigRational) -> QI {
    Complex::new(re, im)
}

pub fn qi_int(re: i64, im: i64) -> QI {
    Complex::new(
        BigRational::from_integer(re.into()),
        BigRational::from_integer(im.into()),
    )
}

pub fn qi_ratio(num: i64, den: i64) -> QI {
    Complex::new(BigRational::new(num.into(), den.into()), BigRational::zero())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    match r.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            // outside double range: go through the exponent explicitly
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift = nb - db;
            let scaled = scale_pow2(r, -shift);
            scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift.clamp(-1100, 1100) as i32)
        }
    }
}

/// `r * 2^e` exactly.
pub fn scale_pow2(r: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::new(r.numer() << (e as usize), r.denom().clone())
    } else {
        BigRational::new(r.numer().clone(), r.denom() << ((-e) as usize))
    }
}

/// Approximate `log2 |r|` from bit lengths (exact to within one).
pub fn log2_abs(r: &BigRational) -> Option<i64> {
    if r.is_zero() {
        None
    } else {
        Some(r.numer().bits() as i64 - r.denom().bits() as i64)
    }
}

/// Converts exact coefficients to doubles after a common power-of-two
/// rescaling, so huge or tiny eliminants stay inside double range. Returns the
/// rescaled values; the scale is irrelevant for root finding.
pub fn qi_slice_to_c64_scaled(vals: &[QI]) -> Vec<C64> {
    let top = vals
        .iter()
        .flat_map(|v| [log2_abs(&v.re), log2_abs(&v.im)])
        .flatten()
        .max();
    let Some(top) = top else {
        return vec![C64::new(0.0, 0.0); vals.len()];
    };
    vals.iter()
        .map(|v| {
            C64::new(
                rational_to_f64(&scale_pow2(&v.re, -top)),
                rational_to_f64(&scale_pow2(&v.im, -top)),
            )
        })
        .collect()
}

/// Best rational approximation with denominator `<= max_den`
/// (continued-fraction convergents). Returns `None` when no convergent is
/// within `tol` of `x`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x.abs() <= tol {
        return Some(BigRational::zero());
    }
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= tol * x.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

pub fn rationalize_c64(z: C64, max_den: i64, tol: f64) -> Option<QI> {
    Some(Complex::new(
        rationalize(z.re, max_den, tol)?,
        rationalize(z.im, max_den, tol)?,
    ))
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `a`, `bi`, `a+bi` with rational parts.
pub fn format_qi(z: &QI) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => format_rational(&z.re),
        (true, false) => format!("{}i", format_rational(&z.im)),
        (false, false) => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            format!(
                "{}{}{}i",
                format_rational(&z.re),
                sign,
                format_rational(&z.im.abs())
            )
        }
    }
}

/// Parses a Gaussian rational such as `-1`, `1/2` or `2+3i`.
pub fn parse_qi(s: &str) -> Option<QI> {
    let f = crate::forms::parse_form(s, Some(0)).ok()?;
    if f.degree() != 0 {
        return None;
    }
    Some(f.coeff(0, 0, 0).clone())
}

/// 17 significant digits, enough to round-trip a double.
pub fn format_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn format_c64(z: C64) -> String {
    if z.im == 0.0 {
        format_f64(z.re)
    } else {
        format!("{}{:+.16e}i", format_f64(z.re), z.im)
    }
}

/// Parses strings produced by [`format_c64`].
pub fn parse_c64(s: &str) -> Option<C64> {
    let s = s.trim();
    if let Some(body) = s.strip_suffix('i') {
        // split at the sign that starts the imaginary part (not an exponent sign)
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'e' && bytes[k - 1] != b'E'
            {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => Some(C64::new(body[..k].parse().ok()?, body[k..].parse().ok()?)),
            None => Some(C64::new(0.0, body.parse().ok()?)),
        }
    } else {
        Some(C64::new(s.parse().ok()?, 0.0))
    }
}

// ---- exact kernels ----

/// Gaussian integer `a + bi`.
#[derive(Clone, Debug, PartialEq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    /// Exact quotient; the caller guarantees divisibility.
    fn div_exact(&self, o: &GaussInt) -> GaussInt {
        if o.im.is_zero() {
            return GaussInt {
                re: &self.re / &o.re,
                im: &self.im / &o.re,
            };
        }
        let n = &o.re * &o.re + &o.im * &o.im;
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        GaussInt {
            re: re / &n,
            im: im / n,
        }
    }
}

/// Fraction-free (Bareiss) determinant after clearing row denominators.
fn exact_determinant(rows: Vec<Vec<QI>>) -> QI {
    let n = rows.len();
    if n == 0 {
        return <QI as Coeff>::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<GaussInt>> = rows
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| {
                acc.lcm(v.re.denom()).lcm(v.im.denom())
            });
            scale *= &l;
            row.into_iter()
                .map(|v| GaussInt {
                    re: (v.re * BigRational::from_integer(l.clone())).to_integer(),
                    im: (v.im * BigRational::from_integer(l.clone())).to_integer(),
                })
                .collect()
        })
        .collect();
    let mut sign = 1i32;
    let mut prev = GaussInt {
        re: BigInt::one(),
        im: BigInt::zero(),
    };
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return <QI as Coeff>::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev);
            }
            m[i][k] = GaussInt {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
        }
        prev = m[k][k].clone();
    }
    let det = &m[n - 1][n - 1];
    let mut re = BigRational::new(det.re.clone(), scale.clone());
    let mut im = BigRational::new(det.im.clone(), scale);
    if sign < 0 {
        re = -re;
        im = -im;
    }
    Complex::new(re, im)
}

fn newton_interpolate(nodes: &[QI], values: &[QI]) -> Vec<QI> {
    let n = nodes.len();
    let mut dd: Vec<QI> = values.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let num = dd[k].sub_ref(&dd[k - 1]);
            let den = nodes[k].sub_ref(&nodes[k - level]);
            dd[k] = num.div_ref(&den);
        }
    }
    // expand the Newton form from the innermost bracket outward
    let mut poly: Vec<QI> = vec![dd[n - 1].clone()];
    for k in (0..n - 1).rev() {
        // poly = poly * (x - nodes[k]) + dd[k]
        let mut next = vec![<QI as Coeff>::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] = next[j + 1].add_ref(c);
            next[j] = next[j].sub_ref(&c.mul_ref(&nodes[k]));
        }
        next[0] = next[0].add_ref(&dd[k]);
        poly = next;
    }
    poly.truncate(n);
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_determinant_matches_cofactor_expansion() {
        let m = vec![
            vec![qi_int(2, 1), qi_ratio(1, 2), qi_int(0, 0)],
            vec![qi_int(1, 0), qi_int(3, -1), qi_int(4, 0)],
            vec![qi_int(0, 2), qi_int(1, 0), qi_ratio(-3, 4)],
        ];
        let cof = |r: &Vec<Vec<QI>>| {
            let a = |i: usize, j: usize| r[i][j].clone();
            let m2 = |i0, j0, i1, j1| {
                a(i0, j0)
                    .mul_ref(&a(i1, j1))
                    .sub_ref(&a(i0, j1).mul_ref(&a(i1, j0)))
            };
            a(0, 0)
                .mul_ref(&m2(1, 1, 2, 2))
                .sub_ref(&a(0, 1).mul_ref(&m2(1, 0, 2, 2)))
                .add_ref(&a(0, 2).mul_ref(&m2(1, 0, 2, 1)))
        };
        assert_eq!(QI::determinant(m.clone()), cof(&m));
        let f: Vec<Vec<C64>> = m.iter().map(|r| r.iter().map(|v| v.to_c64()).collect()).collect();
        assert!((C64::determinant(f) - cof(&m).to_c64()).norm() < 1e-12);
    }

    #[test]
    fn interpolation_recovers_coefficients() {
        let coeffs = vec![qi_int(3, 0), qi_int(0, -2), qi_ratio(5, 7), qi_int(1, 1)];
        let nodes = QI::interpolation_nodes(4);
        let vals: Vec<QI> = nodes
            .iter()
            .map(|x| {
                coeffs
                    .iter()
                    .rev()
                    .fold(<QI as Coeff>::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
            })
            .collect();
        assert_eq!(QI::interpolate(&nodes, &vals), coeffs);

        let fc: Vec<C64> = coeffs.iter().map(|c| c.to_c64()).collect();
        let fnodes = C64::interpolation_nodes(4);
        let fvals: Vec<C64> = fnodes
            .iter()
            .map(|x| fc.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c))
            .collect();
        for (a, b) in C64::interpolate(&fnodes, &fvals).iter().zip(&fc) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.5, 1_000_000, 1e-12), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(rationalize(-3.0, 1_000_000, 1e-12), Some(BigRational::from_integer((-3).into())));
        assert_eq!(rationalize(std::f64::consts::PI, 1_000, 1e-12), None);
    }

    #[test]
    fn c64_text_round_trip() {
        for z in [C64::new(1.0 / 3.0, -2.5e-17), C64::new(-7.0, 0.0), C64::new(0.0, 1e300)] {
            assert_eq!(parse_c64(&format_c64(z)), Some(z));
        }
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(BigInt::one() << 2000usize, BigInt::one() << 1990usize);
        assert_eq!(rational_to_f64(&big), 1024.0);
    }
}
