use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, FqmError, Result};
use crate::grid::Grid1D;

/// Static potentials, all expressed in absolute coordinates about x = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Potential {
    Free,
    /// Zero on |x| < a, infinite outside.
    InfiniteWell { a: f64 },
    /// -gamma delta(x).
    DeltaWell { gamma: f64 },
    /// F |x|; its odd states are those of F x on x > 0 with a hard wall at the origin.
    Linear { f: f64 },
    /// q2 |x|^beta_exp.
    PowerLaw { q2: f64, beta_exp: f64 },
    /// Values on the grid; `imag` may be empty.
    Tabulated {
        values: Vec<f64>,
        #[serde(default)]
        imag: Vec<f64>,
    },
}

/// How singular potentials are put on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Regularization {
    /// Height of the finite wall replacing an infinite one.
    pub wall_height: f64,
    pub delta_shape: DeltaShape,
    /// Gaussian width; `None` means one grid spacing.
    pub delta_width: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaShape {
    /// Narrow Gaussian of matched area.
    Gaussian,
    /// All weight on the sample nearest the origin.
    GridPoint,
}

impl Default for Regularization {
    fn default() -> Self {
        Self { wall_height: 1e6, delta_shape: DeltaShape::Gaussian, delta_width: None }
    }
}

impl Potential {
    /// V = k x^2 / 2.
    pub fn harmonic(k: f64) -> Self {
        Potential::PowerLaw { q2: 0.5 * k, beta_exp: 2.0 }
    }

    pub fn tabulated(values: Vec<f64>) -> Self {
        Potential::Tabulated { values, imag: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Potential::Free => Ok(()),
            Potential::InfiniteWell { a } if !(a > 0.0) => Err(invalid("a", "well half-width must be positive")),
            Potential::DeltaWell { gamma } if !(gamma > 0.0) => Err(invalid("gamma", "must be positive")),
            Potential::Linear { f } if !(f > 0.0) => Err(invalid("f", "force must be positive")),
            Potential::PowerLaw { q2, beta_exp } => {
                if !(q2 > 0.0) {
                    Err(invalid("q2", "must be positive"))
                } else if !(beta_exp > 0.0) {
                    Err(invalid("beta_exp", "must be positive"))
                } else {
                    Ok(())
                }
            }
            Potential::Tabulated { ref values, ref imag } => {
                if values.iter().chain(imag).any(|v| !v.is_finite()) {
                    Err(FqmError::Potential("tabulated potential has non-finite entries".into()))
                } else if !imag.is_empty() && imag.len() != values.len() {
                    Err(FqmError::Potential("imaginary part length differs from real part".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Potential::Tabulated { imag, .. } => imag.iter().all(|v| *v == 0.0),
            _ => true,
        }
    }

    /// Reflection symmetry about x = 0.
    pub fn is_even(&self) -> bool {
        !matches!(self, Potential::Tabulated { .. })
    }

    /// Pointwise value for the smooth kinds.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        match *self {
            Potential::Free => Some(0.0),
            Potential::Linear { f } => Some(f * x.abs()),
            Potential::PowerLaw { q2, beta_exp } => Some(q2 * x.abs().powf(beta_exp)),
            Potential::InfiniteWell { a } => Some(if x.abs() < a { 0.0 } else { f64::INFINITY }),
            _ => None,
        }
    }

    /// Samples on the grid, possibly complex.
    pub fn sample_complex(&self, grid: &Grid1D, reg: &Regularization) -> Result<Vec<Complex64>> {
        self.validate()?;
        let n = grid.n_points();
        let out = match self {
            Potential::Tabulated { values, imag } => {
                if values.len() != n {
                    return Err(FqmError::GridMismatch(format!(
                        "tabulated potential has {} entries, grid has {n}",
                        values.len()
                    )));
                }
                values
                    .iter()
                    .enumerate()
                    .map(|(j, &re)| Complex64::new(re, imag.get(j).copied().unwrap_or(0.0)))
                    .collect()
            }
            _ => self.sample(grid, reg)?.into_iter().map(Complex64::from).collect(),
        };
        Ok(out)
    }

    /// Real samples; singular kinds are regularized per `reg`.
    pub fn sample(&self, grid: &Grid1D, reg: &Regularization) -> Result<Vec<f64>> {
        self.validate()?;
        let xs = grid.xs();
        let dx = grid.dx();
        match *self {
            Potential::Free => Ok(vec![0.0; xs.len()]),
            Potential::InfiniteWell { a } => {
                if !(reg.wall_height > 0.0 && reg.wall_height.is_finite()) {
                    return Err(invalid("wall_height", "must be positive and finite"));
                }
                let tol = 1e-12 * a.max(dx);
                Ok(xs.iter().map(|x| if x.abs() < a - tol { 0.0 } else { reg.wall_height }).collect())
            }
            Potential::DeltaWell { gamma } => match reg.delta_shape {
                DeltaShape::GridPoint => {
                    let j = grid
                        .index_of(0.0)
                        .ok_or_else(|| FqmError::Potential("origin outside the grid".into()))?;
                    let mut v = vec![0.0; xs.len()];
                    v[j] = -gamma / dx;
                    Ok(v)
                }
                DeltaShape::Gaussian => {
                    let w = reg.delta_width.unwrap_or(dx);
                    if !(w > 0.0) {
                        return Err(invalid("delta_width", "must be positive"));
                    }
                    let shape: Vec<f64> = xs.iter().map(|x| (-0.5 * (x / w).powi(2)).exp()).collect();
                    let area: f64 = shape.iter().sum::<f64>() * dx;
                    if area == 0.0 {
                        return Err(FqmError::Potential("delta surrogate misses every sample".into()));
                    }
                    Ok(shape.into_iter().map(|s| -gamma * s / area).collect())
                }
            },
            Potential::Tabulated { .. } => {
                if !self.is_real() {
                    return Err(FqmError::Potential("complex potential where a real one is required".into()));
                }
                let c = self.sample_complex(grid, reg)?;
                Ok(c.into_iter().map(|v| v.re).collect())
            }
            _ => Ok(xs.iter().map(|&x| self.value_at(x).unwrap_or(0.0)).collect()),
        }
    }
}
