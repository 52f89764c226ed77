use crate::forms::{BinaryForm, FormError, TernaryForm};
use crate::scalar::Coeff;

/// Variable eliminated by [`resultant_eliminate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    /// Index of the eliminated coordinate and of the two that remain, in the
    /// order they appear as `(s, t)` of the eliminant.
    fn layout(self) -> (usize, [usize; 2]) {
        match self {
            Var::X => (0, [1, 2]),
            Var::Y => (1, [0, 2]),
            Var::Z => (2, [0, 1]),
        }
    }
}

/// Coefficients (low to high in the eliminated variable) of `F` with the
/// remaining coordinates set to `(node, 1)`.
fn slice<T: Coeff>(f: &TernaryForm<T>, var: Var, node: &T) -> Vec<T> {
    let (e, [s, _]) = var.layout();
    let d = f.degree() as usize;
    let mut pw = vec![T::one(); d + 1];
    for k in 1..=d {
        pw[k] = pw[k - 1].mul_ref(node);
    }
    let mut out = vec![T::zero(); d + 1];
    for ((a, b, c), v) in f.terms() {
        if v.is_zero() {
            continue;
        }
        let ex = [a as usize, b as usize, c as usize];
        out[ex[e]] = out[ex[e]].add_ref(&v.mul_ref(&pw[ex[s]]));
    }
    out
}

fn sylvester<T: Coeff>(a: &[T], b: &[T]) -> Vec<Vec<T>> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![T::zero(); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![T::zero(); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Sylvester resultant of `F` and `G` as polynomials in `var`.
///
/// The result is a binary form of degree `deg F * deg G` in the two remaining
/// coordinates (in their natural order). It vanishes at `[a:b]` iff `F` and
/// `G` have a common zero on the line where those coordinates are
/// proportional to `(a, b)`. Degrees in `var` are taken formally, so at least
/// one of the forms must contain the pure power of `var`.
pub fn resultant_eliminate<T: Coeff>(
    f: &TernaryForm<T>,
    g: &TernaryForm<T>,
    var: Var,
) -> Result<BinaryForm<T>, FormError> {
    if f.is_zero() || g.is_zero() {
        return Err(FormError::ZeroForm);
    }
    let (e, _) = var.layout();
    let pure = |h: &TernaryForm<T>| {
        let d = h.degree();
        let mut ex = [0u32; 3];
        ex[e] = d;
        h.coeff(ex[0], ex[1], ex[2]).clone()
    };
    if f.degree() == 0 || g.degree() == 0 {
        return Err(FormError::DegreeTooLow);
    }
    if pure(f).is_zero() && pure(g).is_zero() {
        return Err(FormError::LeadingCoefficientVanishes);
    }
    let n = (f.degree() * g.degree()) as usize;
    let nodes = T::interpolation_nodes(n + 1);
    let values: Vec<T> = nodes
        .iter()
        .map(|t| T::determinant(sylvester(&slice(f, var, t), &slice(g, var, t))))
        .collect();
    let coeffs = T::interpolate(&nodes, &values);
    let out = BinaryForm::from_coeffs(coeffs);
    if out.is_zero() {
        return Err(FormError::ZeroEliminant);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;
    use crate::scalar::qi_int;

    #[test]
    fn linear_pair() {
        let f = parse_form("z - x", None).unwrap();
        let g = parse_form("z - y", None).unwrap();
        let r = resultant_eliminate(&f, &g, Var::Z).unwrap();
        // proportional to x - y
        assert_eq!(r.degree(), 1);
        assert_eq!(r.coeffs()[0].clone(), r.coeffs()[1].neg_ref());
    }

    #[test]
    fn fermat_base_points() {
        let f = parse_form("x^3 - y^3", None).unwrap();
        let g = parse_form("y^3 - z^3", None).unwrap();
        let r = resultant_eliminate(&f, &g, Var::Z).unwrap();
        assert_eq!(r.degree(), 9);
        // Res_z(x^3 - y^3, y^3 - z^3) = (x^3 - y^3)^3 up to sign
        let cube = parse_form("x^3 - y^3", None)
            .unwrap()
            .restrict_to_line(
                &[qi_int(1, 0), qi_int(0, 0), qi_int(0, 0)],
                &[qi_int(0, 0), qi_int(1, 0), qi_int(0, 0)],
            )
            .unwrap();
        let expected = cube.mul(&cube).mul(&cube);
        let flipped: Vec<_> = expected.coeffs().iter().map(|c| c.neg_ref()).collect();
        assert!(r.coeffs() == expected.coeffs() || r.coeffs() == flipped.as_slice());
        // the float kernel agrees
        let rf = resultant_eliminate(&f.to_float(), &g.to_float(), Var::Z).unwrap();
        for (a, b) in rf.coeffs().iter().zip(r.coeffs()) {
            assert!((a - b.to_c64()).norm() < 1e-9, "{a} vs {b:?}");
        }
    }

    #[test]
    fn shared_component_is_flagged() {
        let f = parse_form("z^2 + x*y", None).unwrap();
        assert!(matches!(resultant_eliminate(&f, &f, Var::Z), Err(FormError::ZeroEliminant)));
    }

    #[test]
    fn missing_pure_power_is_rejected() {
        let f = parse_form("x*y", None).unwrap();
        let g = parse_form("x*z - y^2", None).unwrap();
        assert!(matches!(
            resultant_eliminate(&f, &g, Var::Z),
            Err(FormError::LeadingCoefficientVanishes)
        ));
    }
}
