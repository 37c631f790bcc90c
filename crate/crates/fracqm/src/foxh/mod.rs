//! Special functions of the free theory: the symmetric stable kernel family
//! (real and imaginary time, 1D and 3D), the Euler Beta function and the
//! generalized Airy function.

mod contour;
mod stable;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, FqmError, Result};
use crate::params::FqmParams;

pub use stable::auto_crossover;

/// Numerical policy for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// |u| at which the power series hands over; `None` calibrates per alpha.
    pub crossover: Option<f64>,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 400, crossover: None }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(invalid("rel_tol", "must be positive"));
        }
        if self.max_terms < 10 {
            return Err(invalid("max_terms", "must be at least 10"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    PowerSeries,
    Asymptotic,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub regime: Regime,
}

impl KernelValue {
    fn scaled(self, s: Complex64) -> Self {
        Self { value: self.value * s, abs_error_estimate: self.abs_error_estimate * s.norm(), ..self }
    }
}

/// f_alpha(u) = (1/pi) int_0^inf cos(q u) e^{-q^alpha} dq for u in the
/// closed sector |arg(+-u)| <= pi/(2 alpha) where the integral converges.
pub fn stable_kernel(u: Complex64, alpha: f64, ctl: &SeriesControl) -> Result<KernelValue> {
    ctl.validate()?;
    stable::eval(u, alpha, 0, ctl)
}

/// d f_alpha / du.
pub fn stable_kernel_derivative(u: Complex64, alpha: f64, ctl: &SeriesControl) -> Result<KernelValue> {
    ctl.validate()?;
    stable::eval(u, alpha, 1, ctl)
}

/// Algebraic (asymptotic) part of f_alpha at large |u|, Re u > 0.
///
/// On the real axis this is f itself up to exponentially small terms; on the
/// real-time edge it omits the oscillatory saddle contribution.
pub fn stable_kernel_tail(u: Complex64, alpha: f64, ctl: &SeriesControl) -> Result<KernelValue> {
    ctl.validate()?;
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(invalid("alpha", format!("{alpha} outside (1, 2]")));
    }
    let w = if u.re < 0.0 { -u } else { u };
    let (value, err) = stable::asymptotic(w, alpha, 0, ctl);
    Ok(KernelValue { value, abs_error_estimate: err, regime: Regime::Asymptotic })
}

/// Complex scale hbar^{1-1/alpha} (i D t)^{1/alpha}, principal branch.
pub fn kernel_scale(t: f64, params: &FqmParams) -> Complex64 {
    let a = params.alpha;
    let mag = params.hbar.powf(1.0 - 1.0 / a) * (params.d_alpha * t.abs()).powf(1.0 / a);
    Complex64::from_polar(mag, t.signum() * FRAC_PI_2 / a)
}

/// Real scale hbar (beta D)^{1/alpha}.
pub fn thermal_scale(beta: f64, params: &FqmParams) -> f64 {
    params.hbar * (beta * params.d_alpha).powf(1.0 / params.alpha)
}

fn edge_eval(x: f64, t: f64, params: &FqmParams, deriv: u32, ctl: &SeriesControl) -> Result<KernelValue> {
    ctl.validate()?;
    if t == 0.0 || !t.is_finite() {
        return Err(invalid("t", "kernel is a distribution at t = 0"));
    }
    let sigma = kernel_scale(t, params);
    let rho = x.abs() / sigma.norm();
    let mut kv = stable::eval_edge(rho, params.alpha, deriv, ctl)?;
    if t < 0.0 {
        kv.value = kv.value.conj();
    }
    if deriv == 1 && x < 0.0 {
        kv.value = -kv.value;
    }
    let s = sigma.inv().powu(deriv + 1);
    Ok(kv.scaled(s))
}

/// Free-particle propagator K(x, t) = f_alpha(x / sigma_t) / sigma_t.
pub fn free_kernel_1d(x: f64, t: f64, params: &FqmParams, ctl: &SeriesControl) -> Result<KernelValue> {
    edge_eval(x, t, params, 0, ctl)
}

/// d K / dx.
pub fn free_kernel_1d_dx(x: f64, t: f64, params: &FqmParams, ctl: &SeriesControl) -> Result<KernelValue> {
    edge_eval(x, t, params, 1, ctl)
}

/// Free density matrix rho(x, beta) = f_alpha(x / sigma_beta) / sigma_beta.
pub fn free_density_matrix_1d(x: f64, beta: f64, params: &FqmParams, ctl: &SeriesControl) -> Result<f64> {
    Ok(free_density_matrix_1d_value(x, beta, params, 0, ctl)?.value.re)
}

fn free_density_matrix_1d_value(
    x: f64,
    beta: f64,
    params: &FqmParams,
    deriv: u32,
    ctl: &SeriesControl,
) -> Result<KernelValue> {
    ctl.validate()?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid("beta", format!("{beta} must be positive")));
    }
    let s = thermal_scale(beta, params);
    let kv = stable::eval_real(x / s, params.alpha, deriv, ctl)?;
    Ok(kv.scaled(Complex64::new(s.powi(-(deriv as i32 + 1)), 0.0)))
}

/// 3D free propagator, -(1/(2 pi r)) dK/dx at x = r.
pub fn free_kernel_3d(r: f64, t: f64, params: &FqmParams, ctl: &SeriesControl) -> Result<KernelValue> {
    if !(r > 0.0) {
        return Err(invalid("r", "must be positive"));
    }
    let d = free_kernel_1d_dx(r, t, params, ctl)?;
    Ok(d.scaled(Complex64::new(-0.5 / (PI * r), 0.0)))
}

/// 3D free density matrix, -(1/(2 pi r)) d rho / dx at x = r.
pub fn free_density_matrix_3d(r: f64, beta: f64, params: &FqmParams, ctl: &SeriesControl) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid("r", "must be positive"));
    }
    let d = free_density_matrix_1d_value(r, beta, params, 1, ctl)?;
    Ok(-d.value.re / (2.0 * PI * r))
}

/// Ai_alpha(z) = (1/pi) int_0^inf cos(z t + t^{alpha+1}/(alpha+1)) dt.
pub fn gen_airy(z: f64, alpha: f64, ctl: &SeriesControl) -> Result<f64> {
    Ok(gen_airy_with_error(z, alpha, ctl)?.0)
}

pub fn gen_airy_with_error(z: f64, alpha: f64, ctl: &SeriesControl) -> Result<(f64, f64)> {
    ctl.validate()?;
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(invalid("alpha", format!("{alpha} outside (1, 2]")));
    }
    if !z.is_finite() {
        return Err(invalid("z", "must be finite"));
    }
    let g = alpha + 1.0;
    let (v, e) = contour::half_line(0, z, 1.0 / g, g, ctl.rel_tol)?;
    Ok((v.re / PI, e / PI))
}

/// Euler Beta function B(u, v) = Gamma(u) Gamma(v) / Gamma(u + v).
pub fn beta_function(u: f64, v: f64) -> Result<f64> {
    if !(u > 0.0 && v > 0.0) {
        return Err(FqmError::InvalidParameter { name: "beta_function", reason: format!("arguments ({u}, {v}) must be positive") });
    }
    Ok(statrs::function::beta::beta(u, v))
}

#[cfg(test)]
mod tests;
