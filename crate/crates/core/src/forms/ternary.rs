use std::fmt;

use crate::forms::{BinaryForm, FormError};
use crate::scalar::{Coeff, C64, QI};

/// Number of monomials `x^a y^b z^c` with `a + b + c = d`.
pub fn monomial_count(d: u32) -> usize {
    let d = d as usize;
    (d + 1) * (d + 2) / 2
}

/// Position of `x^a y^b z^(d-a-b)` in the graded-lex order used by
/// [`TernaryForm`]: `x^d, x^(d-1) y, x^(d-1) z, x^(d-2) y^2, ...`.
pub fn monomial_index(d: u32, a: u32, b: u32) -> usize {
    let ra = (d - a) as usize;
    ra * (ra + 1) / 2 + (d - a - b) as usize
}

/// Exponent triples in storage order.
pub fn monomials(d: u32) -> impl Iterator<Item = (u32, u32, u32)> {
    (0..=d)
        .rev()
        .flat_map(move |a| (0..=d - a).rev().map(move |b| (a, b, d - a - b)))
}

/// Homogeneous polynomial in `x, y, z` with dense coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TernaryForm<T> {
    degree: u32,
    coeffs: Vec<T>,
}

pub type ExactForm = TernaryForm<QI>;
pub type FloatForm = TernaryForm<C64>;

impl<T: Coeff> TernaryForm<T> {
    pub fn zero(degree: u32) -> Self {
        TernaryForm {
            degree,
            coeffs: vec![T::zero(); monomial_count(degree)],
        }
    }

    pub fn new(degree: u32, coeffs: Vec<T>) -> Result<Self, FormError> {
        if coeffs.len() != monomial_count(degree) {
            return Err(FormError::CoefficientCount {
                degree,
                expected: monomial_count(degree),
                got: coeffs.len(),
            });
        }
        Ok(TernaryForm { degree, coeffs })
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32, u32), T)>>(
        degree: u32,
        terms: I,
    ) -> Result<Self, FormError> {
        let mut f = Self::zero(degree);
        for ((a, b, c), v) in terms {
            if a + b + c != degree {
                return Err(FormError::NotHomogeneous);
            }
            let k = monomial_index(degree, a, b);
            f.coeffs[k] = f.coeffs[k].add_ref(&v);
        }
        Ok(f)
    }

    /// The linear form `a x + b y + c z`.
    pub fn linear(coeffs: [T; 3]) -> Self {
        let [a, b, c] = coeffs;
        TernaryForm {
            degree: 1,
            coeffs: vec![a, b, c],
        }
    }

    /// The quadratic form `X^T S X` of a symmetric matrix.
    pub fn from_symmetric(s: &[[T; 3]; 3]) -> Self {
        let two = T::from_i64(2);
        let mut f = Self::zero(2);
        for (i, j) in [(0, 0), (1, 1), (2, 2)] {
            let e = exponent_of_pair(i, j);
            f.coeffs[monomial_index(2, e.0, e.1)] = s[i][j].clone();
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let e = exponent_of_pair(i, j);
            f.coeffs[monomial_index(2, e.0, e.1)] = s[i][j].mul_ref(&two);
        }
        f
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, a: u32, b: u32, c: u32) -> &T {
        debug_assert_eq!(a + b + c, self.degree);
        &self.coeffs[monomial_index(self.degree, a, b)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32, u32), &T)> {
        monomials(self.degree).zip(self.coeffs.iter())
    }

    pub fn nonzero_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> TernaryForm<U> {
        TernaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_float(&self) -> FloatForm {
        self.map(|c| c.to_c64())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.mul_ref(s))
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, FormError> {
        if self.degree != o.degree {
            return Err(FormError::DegreeMismatch(self.degree, o.degree));
        }
        Ok(TernaryForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, FormError> {
        self.checked_add(&o.scale(&T::from_i64(-1)))
    }

    /// `lambda * self + mu * other`.
    pub fn combine(&self, lambda: &T, other: &Self, mu: &T) -> Result<Self, FormError> {
        self.scale(lambda).checked_add(&other.scale(mu))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.degree + o.degree;
        let mut out = Self::zero(d);
        for ((a1, b1, _), c1) in self.terms() {
            if c1.is_zero() {
                continue;
            }
            for ((a2, b2, _), c2) in o.terms() {
                if c2.is_zero() {
                    continue;
                }
                let k = monomial_index(d, a1 + a2, b1 + b2);
                out.coeffs[k] = out.coeffs[k].add_ref(&c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn constant(c: T) -> Self {
        TernaryForm {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn evaluate(&self, p: &[T; 3]) -> T {
        let d = self.degree as usize;
        let pw = |v: &T| {
            let mut out = Vec::with_capacity(d + 1);
            out.push(T::one());
            for k in 1..=d {
                let next = out[k - 1].mul_ref(v);
                out.push(next);
            }
            out
        };
        let (px, py, pz) = (pw(&p[0]), pw(&p[1]), pw(&p[2]));
        let mut acc = T::zero();
        for ((a, b, c), v) in self.terms() {
            if v.is_zero() {
                continue;
            }
            let m = px[a as usize]
                .mul_ref(&py[b as usize])
                .mul_ref(&pz[c as usize]);
            acc = acc.add_ref(&v.mul_ref(&m));
        }
        acc
    }

    /// `(dF/dx, dF/dy, dF/dz)`, each of degree `d - 1` (degree 0 forms give
    /// zero partials of degree 0).
    pub fn partials(&self) -> [Self; 3] {
        if self.degree == 0 {
            return [Self::zero(0), Self::zero(0), Self::zero(0)];
        }
        let d = self.degree - 1;
        let mut out = [Self::zero(d), Self::zero(d), Self::zero(d)];
        for ((a, b, c), v) in self.terms() {
            if v.is_zero() {
                continue;
            }
            if a > 0 {
                let k = monomial_index(d, a - 1, b);
                out[0].coeffs[k] = v.mul_ref(&T::from_i64(a as i64));
            }
            if b > 0 {
                let k = monomial_index(d, a, b - 1);
                out[1].coeffs[k] = v.mul_ref(&T::from_i64(b as i64));
            }
            if c > 0 {
                let k = monomial_index(d, a, b);
                out[2].coeffs[k] = v.mul_ref(&T::from_i64(c as i64));
            }
        }
        out
    }

    /// `F(L_0, L_1, L_2)` where `L_k = rows[k] . (x, y, z)`.
    pub fn substitute_linear(&self, rows: &[[T; 3]; 3]) -> Self {
        let d = self.degree;
        let lin: Vec<Self> = rows.iter().map(|r| Self::linear(r.clone())).collect();
        let powers: Vec<Vec<Self>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![Self::constant(T::one())];
                for k in 1..=d as usize {
                    let next = v[k - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(d);
        for ((a, b, c), v) in self.terms() {
            if v.is_zero() {
                continue;
            }
            let m = powers[0][a as usize]
                .mul(&powers[1][b as usize])
                .mul(&powers[2][c as usize]);
            for (o, t) in out.coeffs.iter_mut().zip(&m.coeffs) {
                if !t.is_zero() {
                    *o = o.add_ref(&v.mul_ref(t));
                }
            }
        }
        out
    }

    /// `F(sP + tQ)` as a binary form in `(s, t)`.
    pub fn restrict_to_line(&self, p: &[T; 3], q: &[T; 3]) -> Result<BinaryForm<T>, FormError> {
        if !independent(p, q) {
            return Err(FormError::CoincidentPoints);
        }
        Ok(self.restrict_unchecked(p, q))
    }

    pub(crate) fn restrict_unchecked(&self, p: &[T; 3], q: &[T; 3]) -> BinaryForm<T> {
        let d = self.degree;
        let lin: Vec<BinaryForm<T>> = (0..3)
            .map(|k| BinaryForm::from_coeffs(vec![q[k].clone(), p[k].clone()]))
            .collect();
        let powers: Vec<Vec<BinaryForm<T>>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![BinaryForm::from_coeffs(vec![T::one()])];
                for k in 1..=d as usize {
                    let next = v[k - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = vec![T::zero(); d as usize + 1];
        for ((a, b, c), v) in self.terms() {
            if v.is_zero() {
                continue;
            }
            let m = powers[0][a as usize]
                .mul(&powers[1][b as usize])
                .mul(&powers[2][c as usize]);
            for (o, t) in out.iter_mut().zip(m.coeffs()) {
                *o = o.add_ref(&v.mul_ref(t));
            }
        }
        BinaryForm::from_coeffs(out)
    }

    /// Index and value of the coefficient of largest modulus.
    pub fn leading_by_modulus(&self) -> Option<(usize, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .max_by(|a, b| a.1.modulus().total_cmp(&b.1.modulus()))
    }

    /// Divides by the coefficient of largest modulus, so forms equal up to
    /// scalar normalize to the same representative.
    pub fn normalized(&self) -> Self {
        match self.leading_by_modulus() {
            Some((_, lead)) => {
                let inv = T::one().div_ref(lead);
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Coefficient-space 2-norm.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `|F(p)| / (sum |c| * |p|_inf^d)`: a scale-free membership residual.
    pub fn relative_value(&self, p: &[C64; 3]) -> f64 {
        let f = self.to_float();
        let l1: f64 = f.coeffs.iter().map(|c| c.norm()).sum();
        if l1 == 0.0 {
            return 0.0;
        }
        let m = p.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            return 0.0;
        }
        let q = [p[0] / m, p[1] / m, p[2] / m];
        f.evaluate(&q).norm() / l1
    }

    /// Polynomial text in the crate's expression grammar.
    pub fn to_expr(&self) -> String {
        let mut out = String::new();
        for ((a, b, c), v) in self.terms() {
            if v.is_zero() {
                continue;
            }
            let mono = monomial_text(a, b, c);
            let (negative, body) = v.fmt_signed();
            let term = match (mono.is_empty(), body.as_str()) {
                (true, _) => body.clone(),
                (false, "1") => mono.clone(),
                (false, _) => format!("{body}*{mono}"),
            };
            let sign = if negative { "-" } else { "+" };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn exponent_of_pair(i: usize, j: usize) -> (u32, u32, u32) {
    let mut e = [0u32; 3];
    e[i] += 1;
    e[j] += 1;
    (e[0], e[1], e[2])
}

fn monomial_text(a: u32, b: u32, c: u32) -> String {
    let mut parts = Vec::new();
    for (name, e) in [("x", a), ("y", b), ("z", c)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

fn independent<T: Coeff>(p: &[T; 3], q: &[T; 3]) -> bool {
    let cross = [
        p[1].mul_ref(&q[2]).sub_ref(&p[2].mul_ref(&q[1])),
        p[2].mul_ref(&q[0]).sub_ref(&p[0].mul_ref(&q[2])),
        p[0].mul_ref(&q[1]).sub_ref(&p[1].mul_ref(&q[0])),
    ];
    if T::EXACT {
        cross.iter().any(|c| !c.is_zero())
    } else {
        let np: f64 = p.iter().map(|v| v.modulus().powi(2)).sum::<f64>().sqrt();
        let nq: f64 = q.iter().map(|v| v.modulus().powi(2)).sum::<f64>().sqrt();
        let nc: f64 = cross.iter().map(|v| v.modulus().powi(2)).sum::<f64>().sqrt();
        nc > 1e-12 * np * nq
    }
}

impl TernaryForm<C64> {
    /// Symmetric matrix of a quadratic form.
    pub fn symmetric_matrix(&self) -> Option<[[C64; 3]; 3]> {
        if self.degree != 2 {
            return None;
        }
        let half = C64::new(0.5, 0.0);
        let c = |a, b, cc| *self.coeff(a, b, cc);
        Some([
            [c(2, 0, 0), c(1, 1, 0) * half, c(1, 0, 1) * half],
            [c(1, 1, 0) * half, c(0, 2, 0), c(0, 1, 1) * half],
            [c(1, 0, 1) * half, c(0, 1, 1) * half, c(0, 0, 2)],
        ])
    }
}

impl fmt::Display for TernaryForm<QI> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Display for TernaryForm<C64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;
    use crate::scalar::qi_int;

    fn p(s: &str) -> ExactForm {
        parse_form(s, None).unwrap()
    }

    #[test]
    fn index_matches_enumeration() {
        for d in 0..7 {
            for (k, (a, b, _)) in monomials(d).enumerate() {
                assert_eq!(monomial_index(d, a, b), k);
            }
            assert_eq!(monomials(d).count(), monomial_count(d));
        }
    }

    #[test]
    fn evaluation_examples() {
        let one = qi_int(1, 0);
        let zero = qi_int(0, 0);
        assert!(p("x^3 - y^3").evaluate(&[one.clone(), one.clone(), zero.clone()]).is_zero());
        assert_eq!(p("x*y*z").evaluate(&[one.clone(), one.clone(), one.clone()]), one);
        assert_eq!(
            p("x^2 + y^2 - z^2").evaluate(&[zero.clone(), zero.clone(), one.clone()]),
            qi_int(-1, 0)
        );
    }

    #[test]
    fn partial_examples() {
        let [fx, fy, fz] = p("x^3").partials();
        assert_eq!(fx, p("3*x^2"));
        assert!(fy.is_zero() && fz.is_zero());
        let [fx, fy, fz] = p("x*y*z").partials();
        assert_eq!((fx, fy, fz), (p("y*z"), p("x*z"), p("x*y")));
    }

    #[test]
    fn euler_identity_fermat() {
        let f = p("x^3 - y^3");
        let [fx, fy, fz] = f.partials();
        let lhs = p("x")
            .mul(&fx)
            .checked_add(&p("y").mul(&fy))
            .unwrap()
            .checked_add(&p("z").mul(&fz))
            .unwrap();
        assert_eq!(lhs, f.scale(&qi_int(3, 0)));
    }

    #[test]
    fn restriction_examples() {
        let one = qi_int(1, 0);
        let zero = qi_int(0, 0);
        let b = p("x")
            .restrict_to_line(&[zero.clone(), one.clone(), zero.clone()], &[zero.clone(), zero.clone(), one.clone()])
            .unwrap();
        assert!(b.is_zero());

        // conic through P = [1:0:1]: restriction vanishes at [s:t] = [1:0]
        let b = p("x^2 + y^2 - z^2")
            .restrict_to_line(&[one.clone(), zero.clone(), one.clone()], &[zero.clone(), one.clone(), zero.clone()])
            .unwrap();
        assert!(b.evaluate(&one, &zero).is_zero());
        assert!(!b.is_zero());

        // xyz on the line through [1:0:0] and [0:1:1]: (s)(t)(t) = s t^2
        let b = p("x*y*z")
            .restrict_to_line(&[one.clone(), zero.clone(), zero.clone()], &[zero.clone(), one.clone(), one.clone()])
            .unwrap();
        assert_eq!(b.coeffs(), &[zero.clone(), one.clone(), zero.clone(), zero.clone()]);

        assert!(matches!(
            p("x").restrict_to_line(&[one.clone(), zero.clone(), zero.clone()], &[qi_int(2, 0), zero.clone(), zero.clone()]),
            Err(FormError::CoincidentPoints)
        ));
    }

    #[test]
    fn expression_text_round_trips() {
        for s in ["x^3 - y^3", "x^2 + y*z - y^2", "(1+2i)*x*y - 3/4*z^2 + i*x^2", "-x*y*z"] {
            let f = p(s);
            assert_eq!(parse_form(&f.to_expr(), None).unwrap(), f, "{}", f.to_expr());
        }
    }

    #[test]
    fn symmetric_matrix_round_trip() {
        let f = p("x^2 - x*y + y^2 - z^2").to_float();
        let s = f.symmetric_matrix().unwrap();
        let g = TernaryForm::from_symmetric(&s);
        for (a, b) in f.coeffs().iter().zip(g.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
    }
}
