use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Numerical thresholds shared by every stage of the analysis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative residual accepted for "this value is zero".
    pub tau: f64,
    /// Relative residual accepted by least-squares division.
    pub tau_div: f64,
    /// Chordal radius under which two points are the same point.
    pub rho_c: f64,
    /// Radius of the neighbourhood used for local invariants.
    pub rho_loc: f64,
    /// Perturbation size for gradient counts, relative to the form norm.
    pub eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tau: 1e-8,
            tau_div: 1e-7,
            rho_c: 1e-6,
            rho_loc: 1e-2,
            eps: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), Error> {
        let all = [
            ("tau", self.tau),
            ("tau_div", self.tau_div),
            ("rho_c", self.rho_c),
            ("rho_loc", self.rho_loc),
            ("eps", self.eps),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::BadParameter(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Same thresholds with `tau` replaced, the others scaled along with it.
    pub fn with_tau(tau: f64) -> Self {
        let base = Self::default();
        let k = tau / base.tau;
        Tolerances {
            tau,
            tau_div: base.tau_div * k,
            ..base
        }
    }
}
