use nalgebra::{DMatrix, DVector};

use crate::forms::{monomial_index, monomials, FloatForm, FormError, TernaryForm};
use crate::scalar::{Coeff, C64};

/// Least-squares quotient `Q` minimizing `‖F − G·Q‖₂` in coefficient space.
///
/// The returned residual is relative to `‖F‖₂`, so it is 0 exactly when `G`
/// divides `F` and stays comparable across scalings.
pub fn least_squares_divide(f: &FloatForm, g: &FloatForm) -> Result<(FloatForm, f64), FormError> {
    if g.is_zero() {
        return Err(FormError::ZeroForm);
    }
    if g.degree() > f.degree() {
        return Err(FormError::DegreeMismatch(f.degree(), g.degree()));
    }
    let df = f.degree();
    let e = df - g.degree();
    let qmons: Vec<_> = monomials(e).collect();
    let rows = f.coeffs().len();
    let mut a = DMatrix::<C64>::zeros(rows, qmons.len());
    for (j, &(qa, qb, _)) in qmons.iter().enumerate() {
        for ((ga, gb, _), c) in g.terms() {
            if c.is_zero() {
                continue;
            }
            a[(monomial_index(df, qa + ga, qb + gb), j)] += *c;
        }
    }
    let b = DVector::from_column_slice(f.coeffs());
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let q = svd
        .solve(&b, smax * 1e-13)
        .map_err(|_| FormError::ZeroForm)?;
    let r = &b - &a * &q;
    let fnorm = b.norm();
    let residual = if fnorm == 0.0 { r.norm() } else { r.norm() / fnorm };
    let quotient = TernaryForm::new(e, q.iter().copied().collect())?;
    Ok((quotient, residual))
}

/// Exact quotient `F / G`, or `None` when `G` does not divide `F`.
///
/// Division runs in lexicographic order `x > y > z`; since both forms are
/// homogeneous, a nonzero remainder appears as a leading term that the
/// leading term of `G` cannot cancel.
pub fn exact_divide<T: Coeff>(f: &TernaryForm<T>, g: &TernaryForm<T>) -> Option<TernaryForm<T>> {
    if g.is_zero() || g.degree() > f.degree() {
        return None;
    }
    let df = f.degree();
    let e = df - g.degree();
    let gterms: Vec<((u32, u32, u32), T)> = g
        .terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (m, c.clone()))
        .collect();
    let ((la, lb, lc), lead) = gterms[0].clone();
    let mut rem: Vec<T> = f.coeffs().to_vec();
    let mut quot = TernaryForm::<T>::zero(e);
    let fmons: Vec<_> = monomials(df).collect();
    for (k, &(a, b, c)) in fmons.iter().enumerate() {
        if rem[k].is_zero() {
            continue;
        }
        if a < la || b < lb || c < lc {
            return None;
        }
        let qc = rem[k].div_ref(&lead);
        let (qa, qb) = (a - la, b - lb);
        for ((ga, gb, _), gc) in &gterms {
            let idx = monomial_index(df, qa + ga, qb + gb);
            rem[idx] = rem[idx].sub_ref(&qc.mul_ref(gc));
        }
        quot = quot
            .checked_add(&TernaryForm::from_terms(e, [((qa, qb, e - qa - qb), qc)]).ok()?)
            .ok()?;
    }
    Some(quot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;

    #[test]
    fn divides_conic_line_member() {
        let f = parse_form("(x-y)(x^2-x*y+y^2-z^2)", None).unwrap();
        let g = parse_form("x-y", None).unwrap();
        let q = exact_divide(&f, &g).unwrap();
        assert_eq!(q, parse_form("x^2-x*y+y^2-z^2", None).unwrap());
        let (qf, res) = least_squares_divide(&f.to_float(), &g.to_float()).unwrap();
        assert!(res < 1e-12);
        let expect = q.to_float();
        for (a, b) in qf.coeffs().iter().zip(expect.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fermat_cubic_has_no_linear_factor() {
        let f = parse_form("x^3+y^3+z^3", None).unwrap();
        let g = parse_form("x-y", None).unwrap();
        assert!(exact_divide(&f, &g).is_none());
        let (_, res) = least_squares_divide(&f.to_float(), &g.to_float()).unwrap();
        assert!(res > 1e-3);
    }

    #[test]
    fn square_by_root() {
        let f = parse_form("x^2", None).unwrap();
        let g = parse_form("x", None).unwrap();
        assert_eq!(exact_divide(&f, &g).unwrap(), g);
    }

    #[test]
    fn degree_guard() {
        let f = parse_form("x", None).unwrap().to_float();
        let g = parse_form("x^2", None).unwrap().to_float();
        assert!(matches!(least_squares_divide(&f, &g), Err(FormError::DegreeMismatch(1, 2))));
    }
}
