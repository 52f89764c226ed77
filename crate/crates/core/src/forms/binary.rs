use crate::forms::UniPoly;
use crate::scalar::{Coeff, C64, QI};

/// Homogeneous polynomial in `(s, t)`; `coeffs[k]` multiplies `s^k t^(n-k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm<T> {
    coeffs: Vec<T>,
}

pub type ExactBinary = BinaryForm<QI>;
pub type FloatBinary = BinaryForm<C64>;

impl<T: Coeff> BinaryForm<T> {
    /// Degree is `coeffs.len() - 1`; an empty vector is read as the zero
    /// constant.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            return BinaryForm {
                coeffs: vec![T::zero()],
            };
        }
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }

    pub fn evaluate(&self, s: &T, t: &T) -> T {
        // Horner in s with powers of t carried along
        let n = self.degree();
        let mut tp = vec![T::one(); n + 1];
        for k in 1..=n {
            tp[k] = tp[k - 1].mul_ref(t);
        }
        let mut acc = T::zero();
        for k in (0..=n).rev() {
            acc = acc.mul_ref(s).add_ref(&self.coeffs[k].mul_ref(&tp[n - k]));
        }
        acc
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> BinaryForm<U> {
        BinaryForm {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_float(&self) -> FloatBinary {
        self.map(|c| c.to_c64())
    }

    /// Dehomogenization `t = 1`, a polynomial in `u = s/t`.
    pub fn dehomogenize(&self) -> UniPoly<T> {
        UniPoly::new(self.coeffs.clone())
    }

    /// `B(m00 s + m01 t, m10 s + m11 t)`.
    pub fn substitute(&self, m: &[[T; 2]; 2]) -> Self {
        let n = self.degree();
        let ls = BinaryForm::from_coeffs(vec![m[0][1].clone(), m[0][0].clone()]);
        let lt = BinaryForm::from_coeffs(vec![m[1][1].clone(), m[1][0].clone()]);
        let pw = |l: &BinaryForm<T>| {
            let mut v = vec![BinaryForm::from_coeffs(vec![T::one()])];
            for k in 1..=n {
                let next = v[k - 1].mul(l);
                v.push(next);
            }
            v
        };
        let (ps, pt) = (pw(&ls), pw(&lt));
        let mut out = vec![T::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = ps[k].mul(&pt[n - k]);
            for (o, v) in out.iter_mut().zip(&m.coeffs) {
                *o = o.add_ref(&c.mul_ref(v));
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Chordal distance between points of the projective line.
pub fn chordal_distance_1d(a: &[C64; 2], b: &[C64; 2]) -> f64 {
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    (a[0] * b[1] - a[1] * b[0]).norm() / (na * nb)
}

/// Scales `[s:t]` so the coordinate of largest modulus is exactly 1.
pub fn normalize_pair(p: [C64; 2]) -> [C64; 2] {
    let k = if p[0].norm() >= p[1].norm() { 0 } else { 1 };
    let piv = p[k];
    if piv.norm() == 0.0 {
        return p;
    }
    let mut out = [p[0] / piv, p[1] / piv];
    out[k] = C64::new(1.0, 0.0);
    out
}
