use crate::scalar::Coeff;

/// Dense univariate polynomial, coefficients low to high, trimmed so the
/// last coefficient is nonzero (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Coeff::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![T::one()],
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul_ref(&T::from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = T::zero();
        UniPoly::new(
            (0..n)
                .map(|k| {
                    self.coeffs
                        .get(k)
                        .unwrap_or(&z)
                        .sub_ref(o.coeffs.get(k).unwrap_or(&z))
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        UniPoly::new(out)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = T::one().div_ref(l);
                UniPoly::new(self.coeffs.iter().map(|c| c.mul_ref(&inv)).collect())
            }
        }
    }

    /// Euclidean division; panics when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = T::one().div_ref(d.leading().unwrap());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul_ref(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub_ref(&c.mul_ref(dc));
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    /// Monic greatest common divisor (exact fields only).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), o.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Yun's square-free decomposition: `(factor, multiplicity)` pairs with
    /// pairwise coprime square-free factors of positive degree. Constant
    /// factors are dropped.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi_int, QI};

    fn poly(v: &[i64]) -> UniPoly<QI> {
        UniPoly::new(v.iter().map(|&c| qi_int(c, 0)).collect())
    }

    #[test]
    fn squarefree_of_mixed_multiplicities() {
        // (u - 1)^3 (u + 2)^2 (u^2 + 1)
        let f = poly(&[-1, 1])
            .mul(&poly(&[-1, 1]))
            .mul(&poly(&[-1, 1]))
            .mul(&poly(&[2, 1]))
            .mul(&poly(&[2, 1]))
            .mul(&poly(&[1, 0, 1]));
        let sq = f.squarefree_decomposition();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq[0], (poly(&[1, 0, 1]), 1));
        assert_eq!(sq[1], (poly(&[2, 1]), 2));
        assert_eq!(sq[2], (poly(&[-1, 1]), 3));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = poly(&[5, -3, 0, 2, 7]);
        let b = poly(&[1, 2, 3]);
        let (q, r) = a.div_rem(&b);
        assert!(r.degree().unwrap_or(0) < 2);
        let back = q.mul(&b).sub(&a.sub(&r));
        assert!(back.is_zero());
    }
}
