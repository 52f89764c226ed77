use thiserror::Error;

use crate::forms::FormError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("root finder did not converge after {0} attempts")]
    NonConvergence(usize),
    #[error("f and g share a common component")]
    CommonComponent,
    #[error("could not lift an eliminant root to a common zero")]
    LiftFailure,
    #[error("base locus is not transverse ({count} distinct points, expected {expected})")]
    NonTransverse { count: usize, expected: usize },
    #[error("member {param} is not reduced")]
    NonReducedMember { param: String },
    #[error("singular point is not isolated: {0}")]
    NonIsolated(String),
    #[error("elimination stayed degenerate after {0} coordinate changes")]
    DegenerateEliminant(usize),
    #[error("the pencil parameter [0:0] does not define a member")]
    ZeroParam,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("report has no conic-line member to plot")]
    NothingToPlot,
}
