//! Fractional quantum mechanics on a periodic grid: the quantum Riesz
//! derivative, Levy-stable free kernels, exactly solvable spectra, numerical
//! eigenstates and thermal density matrices.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dynamics;
pub mod eigensolve;
pub mod error;
mod fft;
pub mod foxh;
pub mod grid;
pub mod params;
pub mod potential;
pub mod quad;
pub mod riesz;
pub mod spectra;
pub mod statmech;
pub mod validation;
pub mod wavefunction;

pub use error::{FqmError, Result};
pub use num_complex::Complex64;
pub use grid::{make_grid, Grid1D};
pub use params::FqmParams;
pub use potential::{DeltaShape, Potential, Regularization};
pub use wavefunction::{inner_product, Representation, WaveFunction};
