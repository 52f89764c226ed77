//! Homogeneous polynomials in two and three variables.

mod binary;
mod division;
mod parse;
mod resultant;
mod ternary;
mod transform;
mod univariate;

pub use binary::{chordal_distance_1d, normalize_pair, BinaryForm, ExactBinary, FloatBinary};
pub use division::{exact_divide, least_squares_divide};
pub use parse::parse_form;
pub use resultant::{resultant_eliminate, Var};
pub use ternary::{monomial_count, monomial_index, monomials, ExactForm, FloatForm, TernaryForm};
pub use transform::{random_transform, ProjTransform};
pub use univariate::UniPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("degree {degree} needs {expected} coefficients, got {got}")]
    CoefficientCount {
        degree: u32,
        expected: usize,
        got: usize,
    },
    #[error("the two points defining the line coincide")]
    CoincidentPoints,
    #[error("leading coefficient in the eliminated variable vanishes")]
    LeadingCoefficientVanishes,
    #[error("eliminant vanishes identically (common component or degenerate coordinates)")]
    ZeroEliminant,
    #[error("operation needs a nonzero form")]
    ZeroForm,
    #[error("degree too low for elimination")]
    DegreeTooLow,
    #[error("transform matrix is singular")]
    SingularTransform,
}
