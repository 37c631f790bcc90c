use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FqmError, Result};
use crate::fft;
use crate::grid::Grid1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Position,
    Momentum,
}

impl Representation {
    fn name(self) -> &'static str {
        match self {
            Representation::Position => "position",
            Representation::Momentum => "momentum",
        }
    }
}

/// Number of samples at each edge counted by [`WaveFunction::boundary_mass`].
pub const BOUNDARY_POINTS: usize = 5;
/// Boundary mass above which propagation results are flagged.
pub const BOUNDARY_WARN_MASS: f64 = 1e-8;

/// Complex field on a periodic grid.
///
/// Momentum values are stored in FFT order (see [`Grid1D`]) and normalized so
/// that phi(p) approximates the continuous transform of psi.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub values: Vec<Complex64>,
    pub representation: Representation,
    pub grid: Grid1D,
    pub time: f64,
    /// hbar used to label momenta; fixed at construction.
    pub hbar: f64,
}

impl WaveFunction {
    pub fn new(grid: Grid1D, values: Vec<Complex64>, hbar: f64) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(FqmError::GridMismatch(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.n_points()
            )));
        }
        Ok(Self { values, representation: Representation::Position, grid, time: 0.0, hbar })
    }

    /// Samples `f` on the position grid.
    pub fn from_fn(grid: Grid1D, hbar: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.xs().into_iter().map(f).collect();
        Self { values, representation: Representation::Position, grid, time: 0.0, hbar }
    }

    /// Normalized Gaussian packet of width `sigma` centred at `x0` with mean momentum `p0`.
    pub fn gaussian(grid: Grid1D, hbar: f64, x0: f64, sigma: f64, p0: f64) -> Self {
        let c = (2.0 * PI * sigma * sigma).powf(-0.25);
        let mut psi = Self::from_fn(grid, hbar, |x| {
            let d = x - x0;
            Complex64::from_polar(c * (-d * d / (4.0 * sigma * sigma)).exp(), p0 * x / hbar)
        });
        psi.normalize();
        psi
    }

    /// Plane wave e^{i p_k x/hbar} / sqrt(L) at FFT mode index `k`.
    pub fn plane_wave(grid: Grid1D, hbar: f64, k: usize) -> Self {
        let p = grid.p(k, hbar);
        let a = grid.length().sqrt().recip();
        Self::from_fn(grid, hbar, |x| Complex64::from_polar(a, p * x / hbar))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Integration weight of the current representation: dx or dp / (2 pi hbar).
    pub fn weight(&self) -> f64 {
        match self.representation {
            Representation::Position => self.grid.dx(),
            Representation::Momentum => 1.0 / self.grid.length(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.weight()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.values.iter_mut().for_each(|v| *v /= n);
        }
    }

    pub fn require(&self, r: Representation) -> Result<()> {
        if self.representation == r {
            Ok(())
        } else {
            Err(FqmError::Representation {
                expected: r.name(),
                found: self.representation.name(),
            })
        }
    }

    /// phi(p_k) = sum_j psi(x_j) e^{-i p_k x_j / hbar} dx.
    pub fn to_momentum(&self) -> WaveFunction {
        if self.representation == Representation::Momentum {
            return self.clone();
        }
        let g = self.grid;
        let mut buf = self.values.clone();
        fft::forward(&mut buf);
        let x0 = g.x_min();
        for (k, v) in buf.iter_mut().enumerate() {
            *v *= Complex64::from_polar(g.dx(), -g.p(k, self.hbar) * x0 / self.hbar);
        }
        WaveFunction { values: buf, representation: Representation::Momentum, ..self.clone() }
    }

    /// psi(x_j) = (1/L) sum_k phi(p_k) e^{i p_k x_j / hbar}.
    pub fn to_position(&self) -> WaveFunction {
        if self.representation == Representation::Position {
            return self.clone();
        }
        let g = self.grid;
        let x0 = g.x_min();
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v * Complex64::from_polar(1.0, g.p(k, self.hbar) * x0 / self.hbar))
            .collect();
        fft::inverse(&mut buf);
        let s = 1.0 / g.length();
        buf.iter_mut().for_each(|v| *v *= s);
        WaveFunction { values: buf, representation: Representation::Position, ..self.clone() }
    }

    /// Multiplies the momentum representation by `m(p)`; returns the input representation.
    pub fn apply_multiplier(&self, m: impl Fn(f64) -> Complex64) -> WaveFunction {
        let mut phi = self.to_momentum();
        for (k, v) in phi.values.iter_mut().enumerate() {
            *v *= m(self.grid.p(k, self.hbar));
        }
        match self.representation {
            Representation::Position => phi.to_position(),
            Representation::Momentum => phi,
        }
    }

    /// Probability mass within [`BOUNDARY_POINTS`] samples of either edge.
    pub fn boundary_mass(&self) -> f64 {
        let psi = self.to_position();
        let n = psi.len();
        let b = BOUNDARY_POINTS.min(n / 2);
        let edge: f64 = psi.values[..b].iter().chain(&psi.values[n - b..]).map(|v| v.norm_sqr()).sum();
        edge * self.grid.dx()
    }

    pub fn boundary_warning(&self) -> Option<String> {
        let m = self.boundary_mass();
        (m > BOUNDARY_WARN_MASS)
            .then(|| format!("boundary mass {m:.3e} exceeds {BOUNDARY_WARN_MASS:e}; periodic images may matter"))
    }

    /// Density |psi|^2 in position representation.
    pub fn density(&self) -> Vec<f64> {
        self.to_position().values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Reflection about x_center (position) or p -> -p (momentum).
    pub fn reflected(&self) -> WaveFunction {
        let g = self.grid;
        let values = (0..g.n_points()).map(|j| self.values[g.reflect_index(j)]).collect();
        WaveFunction { values, ..self.clone() }
    }

    /// Expectation of a position-space function, sum |psi|^2 f(x) dx.
    pub fn expect_position(&self, f: impl Fn(f64) -> f64) -> f64 {
        let psi = self.to_position();
        let g = self.grid;
        psi.values.iter().enumerate().map(|(j, v)| v.norm_sqr() * f(g.x(j))).sum::<f64>() * g.dx()
    }
}

/// <phi, chi> = sum conj(phi_j) chi_j w in the shared representation.
pub fn inner_product(phi: &WaveFunction, chi: &WaveFunction) -> Result<Complex64> {
    if !phi.grid.same_as(&chi.grid) {
        return Err(FqmError::GridMismatch("inner product of fields on different grids".into()));
    }
    if phi.representation != chi.representation {
        return Err(FqmError::Representation {
            expected: phi.representation.name(),
            found: chi.representation.name(),
        });
    }
    let s: Complex64 = phi.values.iter().zip(&chi.values).map(|(a, b)| a.conj() * b).sum();
    Ok(s * phi.weight())
}
