//! Closed-form and quantization-condition spectra of the solvable models.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, FqmError, Result};
use crate::foxh::{beta_function, gen_airy, SeriesControl};
use crate::grid::Grid1D;
use crate::params::FqmParams;
use crate::potential::Potential;
use crate::quad::{integrate_segment, QuadTol};
use crate::wavefunction::WaveFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    RootFinding,
    Numerical,
}

/// Which model a spectrum belongs to, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum Model {
    InfiniteWell { a: f64 },
    BohrAtom { z: f64, e2: f64 },
    Oscillator { q2: f64, beta_exp: f64 },
    DeltaWell { gamma: f64 },
    Linear { f: f64 },
    Numerical { potential: Potential },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: u32,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub levels: Vec<Level>,
    pub model: Model,
    pub params: FqmParams,
    pub method: Method,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn energy(&self, n: u32) -> Option<f64> {
        self.levels.iter().find(|l| l.n == n).map(|l| l.energy)
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.levels.windows(2).all(|w| w[1].energy > w[0].energy)
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {v}")))
    }
}

fn levels_at_least_one(n_max: u32) -> Result<()> {
    if n_max == 0 {
        return Err(invalid("n_max", "must be at least 1"));
    }
    Ok(())
}

// The box [-a, a] admits k = n pi / (2a): odd n from the cosine branch,
// even n from the sine branch.
fn well_wavenumber(n: u32, a: f64) -> f64 {
    n as f64 * PI / (2.0 * a)
}

/// E_n = D (n pi hbar / 2a)^alpha, n = 1..=n_max.
pub fn infinite_well_levels(a: f64, n_max: u32, params: &FqmParams) -> Result<Spectrum> {
    positive("a", a)?;
    levels_at_least_one(n_max)?;
    let levels = (1..=n_max)
        .map(|n| Level { n, energy: params.kinetic(params.hbar * well_wavenumber(n, a)) })
        .collect();
    Ok(Spectrum { levels, model: Model::InfiniteWell { a }, params: *params, method: Method::ClosedForm })
}

/// Normalized well eigenfunction, zero outside [-a, a]. Odd n is even in x.
pub fn infinite_well_eigenfunction(n: u32, a: f64, grid: Grid1D, hbar: f64) -> Result<WaveFunction> {
    positive("a", a)?;
    if n == 0 {
        return Err(invalid("n", "levels start at 1"));
    }
    let lo = grid.x_min();
    if lo > -a + 1e-12 || lo + grid.length() < a - 1e-12 {
        return Err(FqmError::GridMismatch(format!(
            "grid [{lo}, {}) does not cover the well [-{a}, {a}]",
            lo + grid.length()
        )));
    }
    let k = well_wavenumber(n, a);
    let norm = a.sqrt().recip();
    Ok(WaveFunction::from_fn(grid, hbar, |x| {
        if x.abs() >= a {
            return Complex64::new(0.0, 0.0);
        }
        let v = if n % 2 == 1 { (k * x).cos() } else { (k * x).sin() };
        Complex64::new(norm * v, 0.0)
    }))
}

/// Bohr-postulate level structure of the hydrogen-like atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BohrAtom {
    pub z: f64,
    pub e2: f64,
    pub params: FqmParams,
    /// a_0
    pub bohr_radius: f64,
    /// E_0, the lowest-orbit binding energy
    pub binding_energy: f64,
    pub radii: Vec<f64>,
    pub energies: Vec<f64>,
}

impl BohrAtom {
    fn exponent(&self) -> f64 {
        self.params.alpha / (self.params.alpha - 1.0)
    }

    pub fn radius(&self, n: u32) -> f64 {
        self.bohr_radius * (n as f64).powf(self.exponent())
    }

    pub fn energy(&self, n: u32) -> f64 {
        (1.0 - self.params.alpha) * self.binding_energy * (n as f64).powf(-self.exponent())
    }

    /// Signed frequency of the m -> n transition, (E_n - E_m) / hbar.
    pub fn transition(&self, m: u32, n: u32) -> f64 {
        let g = self.exponent();
        (1.0 - self.params.alpha) * self.binding_energy / self.params.hbar
            * ((n as f64).powf(-g) - (m as f64).powf(-g))
    }

    /// D (n hbar / a_n)^alpha
    pub fn kinetic(&self, n: u32) -> f64 {
        self.params.kinetic(n as f64 * self.params.hbar / self.radius(n))
    }

    pub fn potential(&self, n: u32) -> f64 {
        -self.z * self.e2 / self.radius(n)
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum {
            levels: self.energies.iter().enumerate().map(|(i, &e)| Level { n: i as u32 + 1, energy: e }).collect(),
            model: Model::BohrAtom { z: self.z, e2: self.e2 },
            params: self.params,
            method: Method::ClosedForm,
        }
    }
}

pub fn bohr_atom(z: f64, e2: f64, n_max: u32, params: &FqmParams) -> Result<BohrAtom> {
    positive("z", z)?;
    positive("e2", e2)?;
    levels_at_least_one(n_max)?;
    let a = params.alpha;
    if a <= 1.0 {
        return Err(invalid("alpha", "Bohr levels need alpha > 1"));
    }
    let ze2 = z * e2;
    let inv = 1.0 / (a - 1.0);
    let bohr_radius = (a * params.d_alpha * params.hbar.powf(a) / ze2).powf(inv);
    let binding_energy = (ze2.powf(a) / (a.powf(a) * params.d_alpha * params.hbar.powf(a))).powf(inv);
    let mut atom = BohrAtom { z, e2, params: *params, bohr_radius, binding_energy, radii: vec![], energies: vec![] };
    atom.radii = (1..=n_max).map(|n| atom.radius(n)).collect();
    atom.energies = (1..=n_max).map(|n| atom.energy(n)).collect();
    Ok(atom)
}

/// Bohr-Sommerfeld levels of V = q2 |x|^beta_exp, n = 0..n_max.
pub fn oscillator_levels_semiclassical(q2: f64, beta_exp: f64, n_max: u32, params: &FqmParams) -> Result<Spectrum> {
    positive("q2", q2)?;
    if !(beta_exp > 1.0 && beta_exp <= 2.0) {
        return Err(invalid("beta_exp", format!("must lie in (1, 2], got {beta_exp}")));
    }
    let (a, b) = (params.alpha, beta_exp);
    let scale = PI * params.hbar * b * params.d_alpha.powf(1.0 / a) * q2.powf(1.0 / b)
        / (2.0 * beta_function(1.0 / b, 1.0 / a + 1.0)?);
    let p = a * b / (a + b);
    let levels = (0..=n_max).map(|n| Level { n, energy: (scale * (n as f64 + 0.5)).powf(p) }).collect();
    Ok(Spectrum { levels, model: Model::Oscillator { q2, beta_exp }, params: *params, method: Method::ClosedForm })
}

/// E = -[gamma B(1/alpha, 1 - 1/alpha) / (pi hbar alpha D^{1/alpha})]^{alpha/(alpha-1)}.
pub fn delta_well_energy(gamma: f64, params: &FqmParams) -> Result<f64> {
    positive("gamma", gamma)?;
    let a = params.alpha;
    if a <= 1.0 {
        return Err(invalid("alpha", "delta-well bound state needs alpha > 1"));
    }
    let b = beta_function(1.0 / a, 1.0 - 1.0 / a)?;
    let base = gamma * b / (PI * params.hbar * a * params.d_alpha.powf(1.0 / a));
    Ok(-base.powf(a / (a - 1.0)))
}

/// int_0^inf cos(s y) / (1 + s^alpha) ds.
fn resolvent_profile(y: f64, alpha: f64) -> Result<f64> {
    let y = y.abs();
    if y == 0.0 {
        return Ok(PI / (alpha * (PI / alpha).sin()));
    }
    // the pole sits at angle pi/alpha >= pi/2, so the ray at pi/4 is free
    let dir = Complex64::from_polar(1.0, FRAC_PI_4);
    let f = |s: Complex64| (Complex64::new(0.0, y) * s).exp() / (s.powf(alpha) + 1.0);
    let tol = QuadTol { abs: 1e-300, rel: 1e-13, max_intervals: 2000 };
    let mut total = Complex64::new(0.0, 0.0);
    let (mut r0, mut r1) = (0.0, 1.0 / y);
    for _ in 0..400 {
        let seg = integrate_segment(f, dir * r0, dir * r1, tol)?;
        total += seg.value;
        if seg.value.norm() < 1e-17 * total.norm() {
            return Ok(total.re);
        }
        r0 = r1;
        r1 *= 2.0;
    }
    Err(FqmError::NonConvergence { what: "delta-well profile", estimate: total.re, error: f64::NAN })
}

/// Bound state of V = -gamma delta(x): energy and normalized wave function on `grid`.
pub fn delta_well_bound_state(gamma: f64, params: &FqmParams, grid: Grid1D) -> Result<(f64, WaveFunction)> {
    let e = delta_well_energy(gamma, params)?;
    let (a, h) = (params.alpha, params.hbar);
    let k = e.abs();
    let p0 = (k / params.d_alpha).powf(1.0 / a);
    // phi(p) = c / (D |p|^alpha + |E|) with unit norm in momentum space
    let c = k * (PI * h * a / (p0 * beta_function(1.0 / a, 2.0 - 1.0 / a)?)).sqrt();
    let amp = c * p0 / (PI * h * k);
    let values = grid
        .xs()
        .into_iter()
        .map(|x| Ok(Complex64::new(amp * resolvent_profile(p0 * x / h, a)?, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok((e, WaveFunction::new(grid, values, h)?))
}

fn zero_spacing(lam: f64, alpha: f64) -> f64 {
    PI / lam.max(1.0).powf(1.0 / alpha)
}

/// The first `n` zeros of z -> gen_airy(-z, alpha), z > 0.
pub fn gen_airy_zeros(n: usize, alpha: f64, ctl: &SeriesControl) -> Result<Vec<f64>> {
    let f = |z: f64| gen_airy(-z, alpha, ctl);
    let mut zeros = Vec::with_capacity(n);
    let mut lo = 0.0;
    let mut flo = f(lo)?;
    let limit = 1e4;
    while zeros.len() < n {
        let hi = lo + 0.25 * zero_spacing(lo, alpha);
        if hi > limit {
            return Err(FqmError::Bracketing { lo: 0.0, hi: limit, found: zeros.len() });
        }
        let fhi = f(hi)?;
        if flo == 0.0 {
            zeros.push(lo);
        } else if flo.signum() != fhi.signum() {
            let (mut a, mut b, mut fa) = (lo, hi, flo);
            while b - a > 1e-10 {
                let m = 0.5 * (a + b);
                let fm = f(m)?;
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        lo = hi;
        flo = fhi;
    }
    Ok(zeros)
}

/// Energy scale and inverse length of the linear potential V = F x, x > 0.
fn linear_scales(f: f64, params: &FqmParams) -> (f64, f64) {
    let a = params.alpha;
    let fh = f * params.hbar;
    let energy = fh * (params.d_alpha / fh).powf(1.0 / (a + 1.0));
    let kappa = (f / (params.d_alpha * params.hbar.powf(a))).powf(1.0 / (a + 1.0));
    (energy, kappa)
}

/// E_n = lambda_n F hbar (D / (F hbar))^{1/(alpha+1)}, n = 1..=n_max.
pub fn linear_potential_levels(f: f64, n_max: u32, params: &FqmParams, ctl: &SeriesControl) -> Result<Spectrum> {
    positive("f", f)?;
    levels_at_least_one(n_max)?;
    let (scale, _) = linear_scales(f, params);
    let zeros = gen_airy_zeros(n_max as usize, params.alpha, ctl)?;
    let levels = zeros.iter().enumerate().map(|(i, &z)| Level { n: i as u32 + 1, energy: z * scale }).collect();
    Ok(Spectrum { levels, model: Model::Linear { f }, params: *params, method: Method::RootFinding })
}

/// phi_n(x) proportional to gen_airy(kappa x - lambda_n) on x > 0, zero elsewhere; grid-normalized.
pub fn linear_potential_eigenfunction(n: u32, f: f64, params: &FqmParams, grid: Grid1D, ctl: &SeriesControl) -> Result<WaveFunction> {
    positive("f", f)?;
    if n == 0 {
        return Err(invalid("n", "levels start at 1"));
    }
    let lam = gen_airy_zeros(n as usize, params.alpha, ctl)?[n as usize - 1];
    let (_, kappa) = linear_scales(f, params);
    let values = grid
        .xs()
        .into_iter()
        .map(|x| Ok(Complex64::new(if x > 0.0 { gen_airy(kappa * x - lam, params.alpha, ctl)? } else { 0.0 }, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    let mut psi = WaveFunction::new(grid, values, params.hbar)?;
    psi.normalize();
    Ok(psi)
}

#[cfg(test)]
mod tests;
