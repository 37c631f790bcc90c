//! Thermal density matrices, the Bloch equation and partition functions.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::dynamics::Stepper;
use crate::error::{invalid, FqmError, Result};
use crate::fft;
use crate::foxh::{self, SeriesControl};
use crate::grid::Grid1D;
use crate::params::FqmParams;
use crate::potential::{Potential, Regularization};
use crate::quad::{integrate_real, QuadTol};
use crate::wavefunction::WaveFunction;

/// rho(x_j, x_k; beta) on a grid.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub kernel: DMatrix<f64>,
    pub beta: f64,
    pub grid: Grid1D,
}

impl DensityMatrix {
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.kernel[(j, k)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.kernel.diagonal().iter().copied().collect()
    }

    /// max |rho - rho^T|
    pub fn symmetry_defect(&self) -> f64 {
        let m = &self.kernel;
        (0..m.nrows()).flat_map(|i| (0..i).map(move |j| (m[(i, j)] - m[(j, i)]).abs())).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the operator (kernel times dx).
    pub fn min_operator_eigenvalue(&self) -> f64 {
        let sym = (&self.kernel + self.kernel.transpose()) * (0.5 * self.grid.dx());
        sym.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Operator product: (self * other)(x, x') = int rho1(x, y) rho2(y, x') dy.
    pub fn compose(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        if !self.grid.same_as(&other.grid) {
            return Err(FqmError::GridMismatch("density matrices live on different grids".into()));
        }
        Ok(DensityMatrix { kernel: &self.kernel * &other.kernel * self.grid.dx(), beta: self.beta + other.beta, grid: self.grid })
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.kernel - &other.kernel).amax()
    }

    /// <psi|rho|psi> / Tr rho; tends to 1 when psi spans the thermal ground state.
    pub fn projector_fidelity(&self, psi: &WaveFunction) -> Result<f64> {
        if !self.grid.same_as(&psi.grid) {
            return Err(FqmError::GridMismatch("state and density matrix grids differ".into()));
        }
        let psi = psi.to_position();
        let dx = self.grid.dx();
        let v = nalgebra::DVector::from_iterator(psi.len(), psi.values.iter().map(|c| c.re));
        let w = nalgebra::DVector::from_iterator(psi.len(), psi.values.iter().map(|c| c.im));
        let num = (v.dot(&(&self.kernel * &v)) + w.dot(&(&self.kernel * &w))) * dx * dx;
        Ok(num / (partition_function(self) * psi.norm_sqr()))
    }

    /// rho(p_k, p_l) = dx^2 sum_{j,m} rho(x_j, x_m) e^{-i(p_k x_j - p_l x_m)/hbar}.
    pub fn momentum_representation(&self, hbar: f64) -> DMatrix<Complex64> {
        let n = self.grid.n_points();
        let g = self.grid;
        let dx = g.dx();
        let x0 = g.x_min();
        let phase: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, -g.p(k, hbar) * x0 / hbar)).collect();
        // transform columns, then rows
        let mut m: DMatrix<Complex64> = self.kernel.map(|v| Complex64::new(v, 0.0));
        for mut col in m.column_iter_mut() {
            let mut buf: Vec<Complex64> = col.iter().copied().collect();
            fft::forward(&mut buf);
            col.iter_mut().zip(buf).for_each(|(c, b)| *c = b);
        }
        for mut row in m.row_iter_mut() {
            let mut buf: Vec<Complex64> = row.iter().copied().collect();
            fft::inverse(&mut buf);
            row.iter_mut().zip(buf).for_each(|(c, b)| *c = b);
        }
        DMatrix::from_fn(n, n, |k, l| m[(k, l)] * phase[k] * phase[l].conj() * dx * dx)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(invalid("beta", format!("must be positive, got {beta}")))
    }
}

/// rho(x, x') = free 1D density matrix at the nearest-image separation.
pub fn free_density_matrix(grid: Grid1D, beta: f64, params: &FqmParams, ctl: &SeriesControl) -> Result<DensityMatrix> {
    check_beta(beta)?;
    let n = grid.n_points();
    let dx = grid.dx();
    let row = (0..n)
        .into_par_iter()
        .map(|m| {
            let d = if m <= n / 2 { m as f64 } else { (n - m) as f64 } * dx;
            foxh::free_density_matrix_1d(d, beta, params, ctl)
        })
        .collect::<Result<Vec<f64>>>()?;
    let kernel = DMatrix::from_fn(n, n, |j, k| row[(j + n - k) % n]);
    Ok(DensityMatrix { kernel, beta, grid })
}

/// Column-wise split-step solution of -d rho/d beta = H rho from rho(beta = 0) = delta.
pub fn bloch_propagate(v: &Potential, grid: Grid1D, beta: f64, n_steps: usize, params: &FqmParams) -> Result<DensityMatrix> {
    bloch_propagate_with(v, grid, beta, n_steps, params, &Regularization::default())
}

pub fn bloch_propagate_with(
    v: &Potential,
    grid: Grid1D,
    beta: f64,
    n_steps: usize,
    params: &FqmParams,
    reg: &Regularization,
) -> Result<DensityMatrix> {
    check_beta(beta)?;
    if n_steps == 0 {
        return Err(invalid("n_steps", "must be at least 1"));
    }
    if !v.is_real() {
        return Err(FqmError::Potential("Bloch evolution needs a real potential".into()));
    }
    let samples = v.sample(&grid, reg)?;
    let n = grid.n_points();
    let dx = grid.dx();
    let probe = WaveFunction::new(grid, vec![Complex64::new(0.0, 0.0); n], params.hbar)?;
    let db = beta / n_steps as f64;
    let stepper = Stepper::new(&samples, Complex64::new(0.0, -params.hbar * db), &probe, params);
    let cols = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            buf[k] = Complex64::new(1.0 / dx, 0.0);
            for _ in 0..n_steps {
                stepper.step(&mut buf);
            }
            if buf.iter().any(|c| !c.re.is_finite()) {
                return Err(FqmError::Overflow(format!("density matrix column {k} overflowed at beta = {beta}")));
            }
            Ok(buf.into_iter().map(|c| c.re).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel = DMatrix::from_fn(n, n, |j, k| cols[k][j]);
    Ok(DensityMatrix { kernel, beta, grid })
}

/// Z = sum_j rho(x_j, x_j) dx.
pub fn partition_function(rho: &DensityMatrix) -> f64 {
    rho.kernel.trace() * rho.grid.dx()
}

/// Free-particle trace per unit length, (1/2 pi hbar) int exp(-beta D |p|^alpha) dp.
pub fn free_trace_density(beta: f64, params: &FqmParams) -> Result<f64> {
    check_beta(beta)?;
    let a = params.alpha;
    Ok(gamma(1.0 / a) / (a * PI * params.hbar * (beta * params.d_alpha).powf(1.0 / a)))
}

/// Z_cl = free_trace_density * int exp(-beta V(x)) dx over `range` (bounds may be infinite).
pub fn classical_partition_function(v: &Potential, beta: f64, params: &FqmParams, range: (f64, f64)) -> Result<f64> {
    let pref = free_trace_density(beta, params)?;
    let (a, b) = range;
    if !(a < b) {
        return Err(invalid("x_range", "need lower < upper"));
    }
    if v.value_at(0.0).is_none() {
        return Err(FqmError::Potential("classical partition function needs a pointwise potential".into()));
    }
    let boltz = |x: f64| (-beta * v.value_at(x).expect("pointwise potential")).exp();
    let divergent = || FqmError::NonConvergence { what: "configurational integral", estimate: f64::INFINITY, error: f64::INFINITY };
    // an infinite side needs exp(-beta V) to have died out far away
    const FAR: f64 = 1e6;
    if (a.is_infinite() && boltz(-FAR) > 1e-30) || (b.is_infinite() && boltz(FAR) > 1e-30) {
        return Err(divergent());
    }
    let tol = QuadTol { abs: 1e-14, rel: 1e-12, max_intervals: 4000 };
    let (val, _) = if a.is_finite() && b.is_finite() {
        integrate_real(boltz, a, b, tol)
    } else {
        // x = t / (1 - t^2) maps (-1, 1) onto the real line
        let inv = |x: f64| match x {
            x if x.is_infinite() => x.signum(),
            0.0 => 0.0,
            x => (-1.0 + (1.0 + 4.0 * x * x).sqrt()) / (2.0 * x),
        };
        let f = |t: f64| {
            let s = 1.0 - t * t;
            if s <= 0.0 {
                return 0.0;
            }
            let w = boltz(t / s) * (1.0 + t * t) / (s * s);
            if w.is_finite() { w } else { 0.0 }
        };
        integrate_real(f, inv(a), inv(b), tol)
    }
    .map_err(|_| divergent())?;
    if !val.is_finite() {
        return Err(divergent());
    }
    Ok(pref * val)
}

/// hbar (beta D)^{1/alpha}
pub fn thermal_length(beta: f64, params: &FqmParams) -> Result<f64> {
    check_beta(beta)?;
    Ok(foxh::thermal_scale(beta, params))
}

pub fn free_density_matrix_3d_radial(r: f64, beta: f64, params: &FqmParams, ctl: &SeriesControl) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid("r", "must be positive"));
    }
    check_beta(beta)?;
    foxh::free_density_matrix_3d(r, beta, params, ctl)
}
