use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{FormError, TernaryForm};
use crate::scalar::{Coeff, C64, QI};

/// Invertible change of projective coordinates.
///
/// Applying a transform to a form pushes the curve forward:
/// `p` lies on `F = 0` iff `T p` lies on `apply_form(T, F) = 0`. With this
/// convention `apply(T1, apply(T2, F)) = apply(T1.compose(T2), F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjTransform<T> {
    matrix: [[T; 3]; 3],
    inverse: [[T; 3]; 3],
}

fn det3<T: Coeff>(m: &[[T; 3]; 3]) -> T {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[r0][c0].mul_ref(&m[r1][c1]).sub_ref(&m[r0][c1].mul_ref(&m[r1][c0]))
    };
    m[0][0]
        .mul_ref(&minor(1, 2, 1, 2))
        .sub_ref(&m[0][1].mul_ref(&minor(1, 2, 0, 2)))
        .add_ref(&m[0][2].mul_ref(&minor(1, 2, 0, 1)))
}

fn matmul<T: Coeff>(a: &[[T; 3]; 3], b: &[[T; 3]; 3]) -> [[T; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..3).fold(T::zero(), |acc, k| acc.add_ref(&a[i][k].mul_ref(&b[k][j])))
        })
    })
}

pub(crate) fn matvec<T: Coeff>(m: &[[T; 3]; 3], p: &[T; 3]) -> [T; 3] {
    std::array::from_fn(|i| (0..3).fold(T::zero(), |acc, k| acc.add_ref(&m[i][k].mul_ref(&p[k]))))
}

impl<T: Coeff> ProjTransform<T> {
    pub fn identity() -> Self {
        let m = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
        });
        ProjTransform {
            matrix: m.clone(),
            inverse: m,
        }
    }

    pub fn new(matrix: [[T; 3]; 3]) -> Result<Self, FormError> {
        let det = det3(&matrix);
        let scale: f64 = matrix
            .iter()
            .flatten()
            .map(|v| v.modulus())
            .fold(0.0, f64::max);
        if det.is_zero() || (!T::EXACT && det.modulus() <= 1e-12 * scale.powi(3)) {
            return Err(FormError::SingularTransform);
        }
        let cof = |r: usize, c: usize| {
            let rs: Vec<usize> = (0..3).filter(|&k| k != r).collect();
            let cs: Vec<usize> = (0..3).filter(|&k| k != c).collect();
            let v = matrix[rs[0]][cs[0]]
                .mul_ref(&matrix[rs[1]][cs[1]])
                .sub_ref(&matrix[rs[0]][cs[1]].mul_ref(&matrix[rs[1]][cs[0]]));
            if (r + c) % 2 == 1 {
                v.neg_ref()
            } else {
                v
            }
        };
        let inverse = std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i).div_ref(&det)));
        Ok(ProjTransform { matrix, inverse })
    }

    pub fn matrix(&self) -> &[[T; 3]; 3] {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &[[T; 3]; 3] {
        &self.inverse
    }

    pub fn inverse(&self) -> Self {
        ProjTransform {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    pub fn determinant(&self) -> T {
        det3(&self.matrix)
    }

    /// `F(T^{-1} X)`.
    pub fn apply_form(&self, f: &TernaryForm<T>) -> TernaryForm<T> {
        f.substitute_linear(&self.inverse)
    }

    pub fn apply_point(&self, p: &[T; 3]) -> [T; 3] {
        matvec(&self.matrix, p)
    }

    pub fn unapply_point(&self, p: &[T; 3]) -> [T; 3] {
        matvec(&self.inverse, p)
    }

    /// Transform whose action is "apply `other`, then `self`".
    pub fn compose(&self, other: &Self) -> Self {
        ProjTransform {
            matrix: matmul(&self.matrix, &other.matrix),
            inverse: matmul(&other.inverse, &self.inverse),
        }
    }

    pub fn to_float(&self) -> ProjTransform<C64> {
        let conv = |m: &[[T; 3]; 3]| std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].to_c64()));
        ProjTransform {
            matrix: conv(&self.matrix),
            inverse: conv(&self.inverse),
        }
    }
}

/// Seeded rational orthogonal transform, the Cayley image
/// `(I - A)(I + A)^-1` of a skew matrix `A` with small nonzero integer
/// entries. Being orthogonal it keeps distances between points comparable,
/// which keeps eliminant roots well separated. The same seed always gives
/// the same matrix.
pub fn random_transform(seed: u64) -> ProjTransform<QI> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7e3a_91c4_55d2_0b1f);
    let mut pick = || {
        let v: i64 = rng.gen_range(1..=4);
        if rng.gen_bool(0.5) {
            -v
        } else {
            v
        }
    };
    let (a, b, c) = (pick(), pick(), pick());
    let skew = [[0, a, b], [-a, 0, c], [-b, -c, 0]];
    let q = |i: usize, j: usize, sign: i64| QI::from_i64(if i == j { 1 } else { sign * skew[i][j] });
    let minus = ProjTransform::new(std::array::from_fn(|i| std::array::from_fn(|j| q(i, j, -1))))
        .expect("I - A is invertible for skew A");
    let plus = ProjTransform::new(std::array::from_fn(|i| std::array::from_fn(|j| q(i, j, 1))))
        .expect("I + A is invertible for skew A");
    minus.compose(&plus.inverse())
}
