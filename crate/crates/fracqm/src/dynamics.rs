//! Real-time propagation: exact free evolution, Strang split-step with a
//! static potential, and convolution with the closed-form free kernel.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{invalid, FqmError, Result};
use crate::fft;
use crate::foxh::{self, kernel_scale, SeriesControl};
use crate::params::FqmParams;
use crate::potential::{Potential, Regularization};
use crate::riesz::{current_density, spectral_derivative};
use crate::wavefunction::{Representation, WaveFunction};

/// phi(p, t) = e^{-i D |p|^alpha t / hbar} phi(p, 0).
pub fn evolve_free(psi0: &WaveFunction, t: f64, params: &FqmParams) -> WaveFunction {
    let h = params.hbar;
    let mut out = psi0.apply_multiplier(|p| Complex64::from_polar(1.0, -params.kinetic(p) * t / h));
    out.time = psi0.time + t;
    out
}

/// Precomputed Strang factors for a fixed step.
pub(crate) struct Stepper {
    half_v: Vec<Complex64>,
    kin: Vec<Complex64>,
}

impl Stepper {
    /// `dt` may be complex: real for real time, -i hbar d_beta for imaginary time.
    pub(crate) fn new(v: &[f64], dt: Complex64, psi: &WaveFunction, params: &FqmParams) -> Self {
        let h = params.hbar;
        let i = Complex64::new(0.0, 1.0);
        let half_v = v.iter().map(|&vv| (-i * vv * dt / (2.0 * h)).exp()).collect();
        let n = psi.grid.n_points() as f64;
        let kin = (0..psi.len())
            .map(|k| (-i * params.kinetic(psi.grid.p(k, h)) * dt / h).exp() / n)
            .collect();
        Self { half_v, kin }
    }

    /// One e^{-iV dt/2} e^{-iT dt} e^{-iV dt/2} step on position samples.
    pub(crate) fn step(&self, buf: &mut [Complex64]) {
        for (b, f) in buf.iter_mut().zip(&self.half_v) {
            *b *= f;
        }
        fft::forward(buf);
        for (b, f) in buf.iter_mut().zip(&self.kin) {
            *b *= f;
        }
        fft::inverse(buf);
        for (b, f) in buf.iter_mut().zip(&self.half_v) {
            *b *= f;
        }
    }
}

fn real_potential(v: &Potential, psi: &WaveFunction) -> Result<Vec<f64>> {
    if !v.is_real() {
        return Err(FqmError::Potential("split-step needs a real potential".into()));
    }
    v.sample(&psi.grid, &Regularization::default())
}

/// Strang split-step evolution over time t in n_steps equal steps.
pub fn evolve_splitstep(psi0: &WaveFunction, v: &Potential, t: f64, n_steps: usize, params: &FqmParams) -> Result<WaveFunction> {
    Ok(splitstep_frames(psi0, v, t, n_steps, n_steps, params)?.pop().expect("at least the final frame"))
}

/// Split-step trajectory; returns the initial state and every `every`-th step.
pub fn splitstep_frames(
    psi0: &WaveFunction,
    v: &Potential,
    t: f64,
    n_steps: usize,
    every: usize,
    params: &FqmParams,
) -> Result<Vec<WaveFunction>> {
    if n_steps == 0 {
        return Err(invalid("n_steps", "must be at least 1"));
    }
    if every == 0 {
        return Err(invalid("every", "must be at least 1"));
    }
    let vs = real_potential(v, psi0)?;
    let dt = t / n_steps as f64;
    let start = psi0.to_position();
    let stepper = Stepper::new(&vs, Complex64::new(dt, 0.0), &start, params);
    let mut buf = start.values.clone();
    let mut frames = vec![start.clone()];
    for s in 1..=n_steps {
        stepper.step(&mut buf);
        if s % every == 0 || s == n_steps {
            frames.push(WaveFunction { values: buf.clone(), time: start.time + s as f64 * dt, ..start.clone() });
        }
    }
    if psi0.representation == Representation::Momentum {
        for f in frames.iter_mut() {
            *f = f.to_momentum();
        }
    }
    Ok(frames)
}

/// Window and image settings for [`propagate_with_kernel`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelConvolution {
    /// Fraction of p_max at which the kernel's local wavenumber starts the hand-over to the tail series.
    pub window_start: f64,
    /// Fraction of p_max at which the hand-over is complete.
    pub window_end: f64,
    /// Number of periodic images summed explicitly on each side.
    pub images: usize,
}

impl Default for KernelConvolution {
    fn default() -> Self {
        Self { window_start: 0.5, window_end: 1.5, images: 64 }
    }
}

/// Smooth step: 1 below lo, 0 above hi, C-infinity in between.
fn window(d: f64, lo: f64, hi: f64) -> f64 {
    if d <= lo {
        return 1.0;
    }
    if d >= hi {
        return 0.0;
    }
    let s = (d - lo) / (hi - lo);
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    b / (a + b)
}

/// Algebraic tail of the free kernel at distance d > 0.
fn kernel_tail(d: f64, sigma: Complex64, alpha: f64, ctl: &SeriesControl) -> Result<Complex64> {
    Ok(foxh::stable_kernel_tail(d / sigma, alpha, ctl)?.value / sigma)
}

/// Periodized, band-limited free kernel sampled at circular offsets j dx.
///
/// Inside the window the exact kernel is used; beyond it the kernel oscillates
/// faster than the grid resolves, and only its non-oscillatory algebraic part
/// is kept (the oscillatory part there couples to momenta above the band).
/// This relies on the stationary-phase link between distance and momentum,
/// which weakens as alpha approaches 1; there the sampled kernel aliases and
/// the route loses accuracy.
pub fn sampled_kernel(
    grid: &crate::grid::Grid1D,
    t: f64,
    params: &FqmParams,
    ctl: &SeriesControl,
    conv: &KernelConvolution,
) -> Result<Vec<Complex64>> {
    if t == 0.0 {
        return Err(invalid("t", "kernel convolution needs t != 0"));
    }
    if !(0.0 < conv.window_start && conv.window_start < conv.window_end) {
        return Err(invalid("window", "need 0 < window_start < window_end"));
    }
    let a = params.alpha;
    let n = grid.n_points();
    let l = grid.length();
    let dx = grid.dx();
    let sigma = kernel_scale(t, params);
    let pmax = grid.p_max(params.hbar);
    let reach = |c: f64| a * params.d_alpha * t.abs() * (c * pmax).powf(a - 1.0);
    let (mut lo, mut hi) = (reach(conv.window_start), reach(conv.window_end));
    // the taper has to finish inside the box or the wrap point leaves a kink
    let room = 0.45 * l;
    if hi > room {
        lo *= room / hi;
        hi = room;
    }
    // leading tail coefficient, for the remainder of the image sum
    let c1 = gamma(a + 1.0) * (PI * a / 2.0).sin() / PI * sigma.powf(a);
    let m_img = conv.images as f64;

    (0..n)
        .into_par_iter()
        .map(|j| {
            let d = if j <= n / 2 { j as f64 * dx } else { (j as f64 - n as f64) * dx };
            let ad = d.abs();
            let w = window(ad, lo, hi);
            let mut k = Complex64::new(0.0, 0.0);
            if w > 0.0 {
                k += foxh::free_kernel_1d(ad, t, params, ctl)?.value * w;
            }
            if w < 1.0 {
                k += kernel_tail(ad, sigma, a, ctl)? * (1.0 - w);
            }
            if a < 2.0 {
                for m in 1..=conv.images {
                    let s = m as f64 * l;
                    k += kernel_tail(s + d, sigma, a, ctl)? + kernel_tail(s - d, sigma, a, ctl)?;
                }
                let r = (m_img + 0.5) * l;
                k += c1 * ((r + d).powf(-a) + (r - d).powf(-a)) / (a * l);
            }
            Ok(k)
        })
        .collect()
}

/// psi(x, t) = int K(x - x', t) psi0(x') dx' by discrete circular convolution.
pub fn propagate_with_kernel(psi0: &WaveFunction, t: f64, params: &FqmParams, ctl: &SeriesControl) -> Result<WaveFunction> {
    propagate_with_kernel_opts(psi0, t, params, ctl, &KernelConvolution::default())
}

pub fn propagate_with_kernel_opts(
    psi0: &WaveFunction,
    t: f64,
    params: &FqmParams,
    ctl: &SeriesControl,
    conv: &KernelConvolution,
) -> Result<WaveFunction> {
    let start = psi0.to_position();
    let kern = sampled_kernel(&start.grid, t, params, ctl, conv)?;
    let dx = start.grid.dx();
    let mut out = fft::circular_convolve(&kern, &start.values);
    out.iter_mut().for_each(|v| *v *= dx);
    let res = WaveFunction { values: out, time: start.time + t, ..start };
    Ok(match psi0.representation {
        Representation::Position => res,
        Representation::Momentum => res.to_momentum(),
    })
}

/// Max relative defect of lam^{1/alpha} K(lam^{1/alpha} x, lam t) = K(x, t) over `xs`.
pub fn scaling_check(xs: &[f64], t: f64, lam: f64, params: &FqmParams, ctl: &SeriesControl) -> Result<f64> {
    if !(lam > 0.0) {
        return Err(invalid("lam", "must be positive"));
    }
    let s = lam.powf(1.0 / params.alpha);
    let mut worst: f64 = 0.0;
    for &x in xs {
        let k = foxh::free_kernel_1d(x, t, params, ctl)?.value;
        let ks = foxh::free_kernel_1d(s * x, lam * t, params, ctl)?.value * s;
        worst = worst.max((ks - k).norm() / k.norm());
    }
    Ok(worst)
}

/// L2 norm over the trajectory of d(rho)/dt + d(j)/dx, centred differences in time.
fn continuity_residual(frames: &[WaveFunction], dt: f64, params: &FqmParams) -> Result<f64> {
    if frames.len() < 3 {
        return Err(invalid("n_steps", "need at least 2 steps"));
    }
    let g = frames[0].grid;
    let fields = frames.iter().map(|f| current_density(&f.to_position(), params)).collect::<Result<Vec<_>>>()?;
    let mut acc = 0.0;
    for k in 1..frames.len() - 1 {
        let dj = spectral_derivative(&fields[k].j, &g);
        for i in 0..g.n_points() {
            let r = (fields[k + 1].rho[i] - fields[k - 1].rho[i]) / (2.0 * dt) + dj[i];
            acc += r * r;
        }
    }
    Ok((acc * g.dx() * dt).sqrt())
}

/// Continuity-equation residual of the free trajectory on [0, t].
pub fn continuity_defect(psi0: &WaveFunction, t: f64, n_steps: usize, params: &FqmParams) -> Result<f64> {
    if n_steps < 2 {
        return Err(invalid("n_steps", "need at least 2 steps"));
    }
    let dt = t / n_steps as f64;
    let frames: Vec<WaveFunction> = (0..=n_steps).map(|k| evolve_free(psi0, k as f64 * dt, params)).collect();
    continuity_residual(&frames, dt, params)
}

/// Same residual along a split-step trajectory in a potential (diagnostic).
pub fn continuity_defect_splitstep(psi0: &WaveFunction, v: &Potential, t: f64, n_steps: usize, params: &FqmParams) -> Result<f64> {
    if n_steps < 2 {
        return Err(invalid("n_steps", "need at least 2 steps"));
    }
    let frames = splitstep_frames(psi0, v, t, n_steps, 1, params)?;
    continuity_residual(&frames, t / n_steps as f64, params)
}

/// Pointwise source left in d(rho)/dt + d(j)/dx = S by the nonlocal current:
/// S = 2 D hbar Im(conj(psi') A psi') with A the |p|^{alpha-2} multiplier.
/// S integrates to zero and vanishes identically only at alpha = 2.
pub fn continuity_source(psi: &WaveFunction, params: &FqmParams) -> Vec<f64> {
    let h = params.hbar;
    let a = params.alpha;
    let psi = psi.to_position();
    let nyq = psi.grid.p_max(h);
    let band = move |p: f64| p != 0.0 && (p.abs() - nyq).abs() > 1e-9 * nyq;
    let dpsi = psi.apply_multiplier(|p| if band(p) { Complex64::new(0.0, p / h) } else { Complex64::new(0.0, 0.0) });
    let adpsi = psi.apply_multiplier(|p| if band(p) { Complex64::new(0.0, p.abs().powf(a - 2.0) * p / h) } else { Complex64::new(0.0, 0.0) });
    dpsi.values.iter().zip(&adpsi.values).map(|(d, ad)| 2.0 * params.d_alpha * h * (d.conj() * ad).im).collect()
}
