use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Periodic position grid; samples x_j = x_center - L/2 + j L/n.
///
/// Momentum-space arrays use FFT storage order: index k < n/2 holds mode k,
/// index k >= n/2 holds mode k - n (so the Nyquist mode -n/2 sits at n/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n_points: usize,
    length: f64,
    x_center: f64,
}

pub fn make_grid(n_points: usize, length: f64, x_center: f64) -> Result<Grid1D> {
    Grid1D::new(n_points, length, x_center)
}

impl Grid1D {
    pub fn new(n_points: usize, length: f64, x_center: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_multiple_of(2) {
            return Err(invalid("n_points", format!("{n_points} must be even and >= 8")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(invalid("length", format!("{length} must be positive")));
        }
        if !x_center.is_finite() {
            return Err(invalid("x_center", "must be finite"));
        }
        Ok(Self { n_points, length, x_center })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }
    pub fn len(&self) -> usize {
        self.n_points
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn length(&self) -> f64 {
        self.length
    }
    pub fn x_center(&self) -> f64 {
        self.x_center
    }
    pub fn dx(&self) -> f64 {
        self.length / self.n_points as f64
    }
    pub fn x_min(&self) -> f64 {
        self.x_center - 0.5 * self.length
    }
    pub fn x(&self, j: usize) -> f64 {
        self.x_min() + j as f64 * self.dx()
    }
    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Momentum spacing 2 pi hbar / L.
    pub fn dp(&self, hbar: f64) -> f64 {
        2.0 * PI * hbar / self.length
    }

    /// Signed mode number stored at FFT index `k`.
    pub fn mode(&self, k: usize) -> i64 {
        let n = self.n_points as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// Momentum at FFT index `k`.
    pub fn p(&self, k: usize, hbar: f64) -> f64 {
        self.mode(k) as f64 * self.dp(hbar)
    }

    /// Momenta in FFT storage order.
    pub fn momenta(&self, hbar: f64) -> Vec<f64> {
        (0..self.n_points).map(|k| self.p(k, hbar)).collect()
    }

    /// Momenta in ascending order, k = -n/2 .. n/2 - 1.
    pub fn momenta_centered(&self, hbar: f64) -> Vec<f64> {
        let h = (self.n_points / 2) as i64;
        (-h..h).map(|k| k as f64 * self.dp(hbar)).collect()
    }

    /// Largest momentum magnitude, pi hbar n / L.
    pub fn p_max(&self, hbar: f64) -> f64 {
        PI * hbar * self.n_points as f64 / self.length
    }

    /// FFT index of the unpaired Nyquist mode.
    pub fn nyquist_index(&self) -> usize {
        self.n_points / 2
    }

    /// Index of the reflection of sample j about x_center (periodic).
    pub fn reflect_index(&self, j: usize) -> usize {
        (self.n_points - j) % self.n_points
    }

    /// Grid index closest to `x`, if x lies inside the box.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let s = ((x - self.x_min()) / self.dx()).round();
        (s >= 0.0 && (s as usize) < self.n_points).then_some(s as usize)
    }

    pub(crate) fn same_as(&self, other: &Grid1D) -> bool {
        self.n_points == other.n_points
            && self.length == other.length
            && self.x_center == other.x_center
    }
}
