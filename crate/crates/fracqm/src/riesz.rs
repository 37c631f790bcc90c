//! The quantum Riesz derivative and operators built from it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, FqmError, Result};
use crate::grid::Grid1D;
use crate::params::FqmParams;
use crate::potential::{Potential, Regularization};
use crate::wavefunction::{inner_product, Representation, WaveFunction};

/// Defect below which an operator counts as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Zero-mode weight above which the fractional current is flagged.
pub const ZERO_MODE_WARN: f64 = 1e-6;

/// (hbar nabla)^alpha psi, the field whose momentum amplitude is -|p|^alpha phi(p).
pub fn apply_riesz(psi: &WaveFunction, params: &FqmParams) -> WaveFunction {
    let a = params.alpha;
    psi.apply_multiplier(|p| Complex64::new(-p.abs().powf(a), 0.0))
}

/// Kinetic part D |p|^alpha psi.
pub fn apply_kinetic(psi: &WaveFunction, params: &FqmParams) -> WaveFunction {
    psi.apply_multiplier(|p| Complex64::new(params.kinetic(p), 0.0))
}

/// H psi for an already sampled (possibly complex) potential.
pub fn apply_hamiltonian_sampled(psi: &WaveFunction, v: &[Complex64], params: &FqmParams) -> Result<WaveFunction> {
    if v.len() != psi.len() {
        return Err(FqmError::GridMismatch(format!("{} potential samples for {} points", v.len(), psi.len())));
    }
    let mut out = apply_kinetic(&psi.to_position(), params);
    let pos = psi.to_position();
    for ((o, p), vv) in out.values.iter_mut().zip(&pos.values).zip(v) {
        *o += vv * p;
    }
    Ok(match psi.representation {
        Representation::Position => out,
        Representation::Momentum => out.to_momentum(),
    })
}

/// H psi = -D (hbar nabla)^alpha psi + V psi.
///
/// The infinite well is rejected; delta wells use the default regularization.
pub fn apply_hamiltonian(psi: &WaveFunction, v: &Potential, params: &FqmParams) -> Result<WaveFunction> {
    if matches!(v, Potential::InfiniteWell { .. }) {
        return Err(FqmError::Potential("infinite well has no multiplication operator; use a finite wall".into()));
    }
    let vs = v.sample_complex(&psi.grid, &Regularization::default())?;
    apply_hamiltonian_sampled(psi, &vs, params)
}

/// <psi, H psi> / <psi, psi>.
pub fn energy_expectation(psi: &WaveFunction, v: &[Complex64], params: &FqmParams) -> Result<Complex64> {
    let pos = psi.to_position();
    let h = apply_hamiltonian_sampled(&pos, v, params)?;
    Ok(inner_product(&pos, &h)? / pos.norm_sqr())
}

/// Smooth random field: band-limited Fourier coefficients with a Gaussian envelope.
pub fn random_smooth_field(grid: Grid1D, hbar: f64, rng: &mut impl Rng) -> WaveFunction {
    let pc = 0.25 * grid.p_max(hbar);
    let values = (0..grid.n_points())
        .map(|k| {
            let p = grid.p(k, hbar);
            let env = (-(p / pc).powi(2)).exp();
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * env
        })
        .collect();
    let mut psi = WaveFunction {
        values,
        representation: Representation::Momentum,
        grid,
        time: 0.0,
        hbar,
    }
    .to_position();
    psi.normalize();
    psi
}

/// max over random pairs of |<f, H g> - <H f, g>| / (|f| |g|).
pub fn hermiticity_defect(v: &Potential, params: &FqmParams, grid: Grid1D, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    let vs = v.sample_complex(&grid, &Regularization::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let f = random_smooth_field(grid, params.hbar, &mut rng);
        let g = random_smooth_field(grid, params.hbar, &mut rng);
        let hf = apply_hamiltonian_sampled(&f, &vs, params)?;
        let hg = apply_hamiltonian_sampled(&g, &vs, params)?;
        let d = (inner_product(&f, &hg)? - inner_product(&hf, &g)?).norm() / (f.norm() * g.norm());
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Density and fractional current of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableField {
    pub rho: Vec<f64>,
    pub j: Vec<f64>,
    pub grid: Grid1D,
    pub time: f64,
    /// Fraction of the norm carried by the p = 0 mode, where |p|^{alpha-2} is singular.
    pub zero_mode_weight: f64,
    pub alpha: f64,
}

impl ObservableField {
    pub fn singular_warning(&self) -> Option<String> {
        (self.alpha < 2.0 && self.zero_mode_weight > ZERO_MODE_WARN).then(|| {
            format!(
                "zero-momentum weight {:.3e}: |p|^(alpha-2) is singular there and the mode was dropped",
                self.zero_mode_weight
            )
        })
    }
}

/// j = 2 D hbar Im(psi* g), g the field with momentum amplitude |p|^{alpha-2} (i p/hbar) phi(p).
///
/// The multiplier is odd in p, so the unpaired Nyquist mode is dropped along
/// with p = 0; otherwise real fields would acquire a spurious current.
pub fn current_density(psi: &WaveFunction, params: &FqmParams) -> Result<ObservableField> {
    psi.require(Representation::Position)?;
    let a = params.alpha;
    let h = params.hbar;
    let phi = psi.to_momentum();
    let zero = phi.values[0].norm_sqr() * phi.weight() / phi.norm_sqr().max(f64::MIN_POSITIVE);
    let nyq = psi.grid.p(psi.grid.nyquist_index(), h);
    let g = psi.apply_multiplier(|p| {
        if p == 0.0 || p == nyq {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, p.abs().powf(a - 2.0) * p / h)
        }
    });
    let j = psi
        .values
        .iter()
        .zip(&g.values)
        .map(|(s, gv)| 2.0 * params.d_alpha * h * (s.conj() * gv).im)
        .collect();
    Ok(ObservableField {
        rho: psi.density(),
        j,
        grid: psi.grid,
        time: psi.time,
        zero_mode_weight: zero,
        alpha: a,
    })
}

/// v = alpha D |p|^{alpha-1} sign(p).
pub fn group_velocity(p: f64, params: &FqmParams) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    params.alpha * params.d_alpha * p.abs().powf(params.alpha - 1.0) * p.signum()
}

/// Spectral derivative of a real periodic sample vector.
pub fn spectral_derivative(values: &[f64], grid: &Grid1D) -> Vec<f64> {
    let psi = WaveFunction {
        values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        representation: Representation::Position,
        grid: *grid,
        time: 0.0,
        hbar: 1.0,
    };
    let nyq = grid.p(grid.nyquist_index(), 1.0);
    psi.apply_multiplier(|p| if p == nyq { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, p) })
        .values
        .into_iter()
        .map(|v| v.re)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Parity about the grid centre.
pub fn parity_classify(psi: &WaveFunction, tol: f64) -> Result<Parity> {
    parity_classify_about(psi, psi.grid.x_center(), tol)
}

/// Parity about `center`, which must map the grid onto itself.
pub fn parity_classify_about(psi: &WaveFunction, center: f64, tol: f64) -> Result<Parity> {
    psi.require(Representation::Position)?;
    let g = psi.grid;
    let n = g.n_points() as i64;
    let m = 2.0 * (center - g.x_min()) / g.dx();
    if (m - m.round()).abs() > 1e-9 {
        return Err(FqmError::GridMismatch(format!("grid is not symmetric about x = {center}")));
    }
    let m = m.round() as i64;
    let norm = psi.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(Parity::Even);
    }
    let (mut de, mut dodd) = (0.0, 0.0);
    for j in 0..n {
        let r = (m - j).rem_euclid(n) as usize;
        let a = psi.values[j as usize];
        let b = psi.values[r];
        de += (a - b).norm_sqr();
        dodd += (a + b).norm_sqr();
    }
    let (de, dodd) = (de.sqrt() / norm, dodd.sqrt() / norm);
    Ok(if de < tol {
        Parity::Even
    } else if dodd < tol {
        Parity::Odd
    } else {
        Parity::Mixed
    })
}
