//! Stationary states: dense plane-wave Hamiltonian and imaginary-time relaxation.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::Stepper;
use crate::error::{invalid, FqmError, Result};
use crate::fft;
use crate::grid::Grid1D;
use crate::params::FqmParams;
use crate::potential::{Potential, Regularization};
use crate::riesz::{apply_hamiltonian_sampled, parity_classify, Parity};
use crate::spectra::{Level, Method, Model, Spectrum};
use crate::wavefunction::{inner_product, WaveFunction};

/// Real symmetric H = T + diag(V) on the position grid.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    matrix: DMatrix<f64>,
    potential: Potential,
    samples: Vec<f64>,
    grid: Grid1D,
    params: FqmParams,
}

impl HermitianMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
    pub fn grid(&self) -> Grid1D {
        self.grid
    }
    pub fn params(&self) -> FqmParams {
        self.params
    }
    pub fn potential_samples(&self) -> &[f64] {
        &self.samples
    }
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// max |H - H^T|
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.matrix;
        (0..m.nrows()).flat_map(|i| (0..i).map(move |j| (m[(i, j)] - m[(j, i)]).abs())).fold(0.0, f64::max)
    }
}

/// First row of the circulant kinetic matrix: c_m = (1/n) sum_k D|p_k|^alpha e^{2 pi i k m / n}.
fn kinetic_row(grid: &Grid1D, params: &FqmParams) -> Vec<f64> {
    let n = grid.n_points();
    let mut c: Vec<Complex64> = (0..n).map(|k| Complex64::new(params.kinetic(grid.p(k, params.hbar)), 0.0)).collect();
    fft::inverse(&mut c);
    let raw: Vec<f64> = c.iter().map(|v| v.re / n as f64).collect();
    (0..n).map(|m| 0.5 * (raw[m] + raw[(n - m) % n])).collect()
}

pub fn build_hamiltonian_matrix(v: &Potential, grid: Grid1D, params: &FqmParams) -> Result<HermitianMatrix> {
    build_hamiltonian_matrix_with(v, grid, params, &Regularization::default())
}

pub fn build_hamiltonian_matrix_with(v: &Potential, grid: Grid1D, params: &FqmParams, reg: &Regularization) -> Result<HermitianMatrix> {
    if !v.is_real() {
        return Err(FqmError::Potential("matrix eigensolve needs a real potential".into()));
    }
    let samples = v.sample(&grid, reg)?;
    if let Some(j) = samples.iter().position(|x| !x.is_finite()) {
        return Err(FqmError::Potential(format!("potential is unbounded at grid index {j}")));
    }
    let n = grid.n_points();
    let c = kinetic_row(&grid, params);
    let matrix = DMatrix::from_fn(n, n, |i, j| c[(i + n - j) % n] + if i == j { samples[i] } else { 0.0 });
    Ok(HermitianMatrix { matrix, potential: v.clone(), samples, grid, params: *params })
}

#[derive(Debug, Clone)]
pub struct Eigenstates {
    pub spectrum: Spectrum,
    pub states: Vec<WaveFunction>,
    /// Reflection class about the grid centre; meaningful for symmetric potentials.
    pub parities: Vec<Parity>,
}

impl Eigenstates {
    /// Energies of the states with the given parity, ascending.
    pub fn energies_with_parity(&self, p: Parity) -> Vec<f64> {
        self.spectrum.levels.iter().zip(&self.parities).filter(|(_, q)| **q == p).map(|(l, _)| l.energy).collect()
    }
}

const PARITY_TOL: f64 = 1e-6;

fn numerical_spectrum(energies: impl Iterator<Item = f64>, h: &HermitianMatrix) -> Spectrum {
    Spectrum {
        levels: energies.enumerate().map(|(i, e)| Level { n: i as u32, energy: e }).collect(),
        model: Model::Numerical { potential: h.potential.clone() },
        params: h.params,
        method: Method::Numerical,
    }
}

fn check_k(h: &HermitianMatrix, k: usize) -> Result<()> {
    if k == 0 || k > h.dim() {
        return Err(invalid("k", format!("must lie in 1..={}, got {k}", h.dim())));
    }
    Ok(())
}

/// Lowest k eigenvalues only.
pub fn eigenvalues(h: &HermitianMatrix, k: usize) -> Result<Spectrum> {
    check_k(h, k)?;
    let mut ev: Vec<f64> = h.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
    if ev.iter().any(|e| !e.is_finite()) {
        return Err(FqmError::Eigen("non-finite eigenvalue".into()));
    }
    ev.sort_by(f64::total_cmp);
    Ok(numerical_spectrum(ev.into_iter().take(k), h))
}

/// Lowest k eigenpairs, energies ascending, states unit-normalized on the grid.
pub fn eigenstates(h: &HermitianMatrix, k: usize) -> Result<Eigenstates> {
    check_k(h, k)?;
    let eig = SymmetricEigen::try_new(h.matrix.clone(), f64::EPSILON, 0)
        .ok_or_else(|| FqmError::Eigen("symmetric eigendecomposition did not converge".into()))?;
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale = h.grid.dx().sqrt().recip();
    let mut states = Vec::with_capacity(k);
    let mut parities = Vec::with_capacity(k);
    for &i in order.iter().take(k) {
        let col = eig.eigenvectors.column(i);
        // fix the overall sign by the largest component
        let big = col.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        let s = scale * big.signum();
        let psi = WaveFunction::new(h.grid, col.iter().map(|&v| Complex64::new(s * v, 0.0)).collect(), h.params.hbar)?;
        parities.push(parity_classify(&psi, PARITY_TOL)?);
        states.push(psi);
    }
    let spectrum = numerical_spectrum(order.iter().take(k).map(|&i| eig.eigenvalues[i]), h);
    Ok(Eigenstates { spectrum, states, parities })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelaxControl {
    /// Accept when the last step changes the energy by at most tol * max(|E|, 1).
    pub tol: f64,
    /// Slack for the per-step monotonicity check.
    pub monotone_slack: f64,
}

impl Default for RelaxControl {
    fn default() -> Self {
        Self { tol: 1e-12, monotone_slack: 1e-12 }
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub psi: WaveFunction,
    /// <psi, H psi> after each step, starting with the initial guess.
    pub history: Vec<f64>,
}

/// Ground state by normalized imaginary-time split-step from an even Gaussian guess.
pub fn imaginary_time_ground_state(v: &Potential, grid: Grid1D, params: &FqmParams, beta_max: f64, n_steps: usize) -> Result<GroundState> {
    let guess = WaveFunction::gaussian(grid, params.hbar, grid.x_center(), grid.length() / 20.0, 0.0);
    relax(v, guess, params, beta_max, n_steps, &RelaxControl::default())
}

pub fn relax(v: &Potential, guess: WaveFunction, params: &FqmParams, beta_max: f64, n_steps: usize, ctl: &RelaxControl) -> Result<GroundState> {
    if !(beta_max > 0.0) {
        return Err(invalid("beta_max", "must be positive"));
    }
    if n_steps == 0 {
        return Err(invalid("n_steps", "must be at least 1"));
    }
    if !v.is_real() {
        return Err(FqmError::Potential("relaxation needs a real potential".into()));
    }
    let mut psi = guess.to_position();
    psi.normalize();
    let samples = v.sample(&psi.grid, &Regularization::default())?;
    let vc: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let energy = |psi: &WaveFunction| -> Result<f64> {
        Ok(inner_product(psi, &apply_hamiltonian_sampled(psi, &vc, params)?)?.re)
    };
    let db = beta_max / n_steps as f64;
    let stepper = Stepper::new(&samples, Complex64::new(0.0, -params.hbar * db), &psi, params);
    let mut history = vec![energy(&psi)?];
    for _ in 0..n_steps {
        stepper.step(&mut psi.values);
        let nrm = psi.norm();
        if !(nrm > 0.0 && nrm.is_finite()) {
            return Err(FqmError::Overflow("state vanished during relaxation".into()));
        }
        psi.values.iter_mut().for_each(|x| *x /= nrm);
        let e = energy(&psi)?;
        let prev = *history.last().expect("seeded");
        if e > prev + ctl.monotone_slack * prev.abs().max(1.0) {
            return Err(FqmError::NonConvergence { what: "imaginary-time energy increased", estimate: e, error: e - prev });
        }
        history.push(e);
    }
    let n = history.len();
    let e = history[n - 1];
    let change = (history[n - 1] - history[n - 2]).abs();
    if change > ctl.tol * e.abs().max(1.0) {
        return Err(FqmError::NonConvergence { what: "imaginary-time relaxation", estimate: e, error: change });
    }
    psi.time = 0.0;
    Ok(GroundState { energy: e, psi, history })
}
