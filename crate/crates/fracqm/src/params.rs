use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Fractional kinematics: Levy index, generalized diffusion constant and Planck constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FqmParams {
    pub alpha: f64,
    pub d_alpha: f64,
    pub hbar: f64,
}

impl FqmParams {
    pub fn new(alpha: f64, d_alpha: f64, hbar: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(invalid("alpha", format!("{alpha} outside (1, 2]")));
        }
        if !(d_alpha > 0.0 && d_alpha.is_finite()) {
            return Err(invalid("d_alpha", format!("{d_alpha} must be positive")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(invalid("hbar", format!("{hbar} must be positive")));
        }
        Ok(Self { alpha, d_alpha, hbar })
    }

    /// Natural units, D = hbar = 1.
    pub fn natural(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0, 1.0)
    }

    /// Standard quantum mechanics: alpha = 2, D = 1/2m.
    pub fn standard(mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(invalid("mass", format!("{mass} must be positive")));
        }
        Self::new(2.0, 0.5 / mass, hbar)
    }

    /// Mass recovered at alpha = 2.
    pub fn mass(&self) -> Option<f64> {
        (self.alpha == 2.0).then(|| 0.5 / self.d_alpha)
    }

    /// Kinetic energy D |p|^alpha.
    #[inline]
    pub fn kinetic(&self, p: f64) -> f64 {
        self.d_alpha * p.abs().powf(self.alpha)
    }
}
