//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands,
//! on real intervals and straight segments of the complex plane.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{FqmError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTol {
    fn default() -> Self {
        Self { abs: 1e-15, rel: 1e-13, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn kronrod(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let d = h * XGK[i];
        let s = f(c - d) + f(c + d);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Integral of `f` over [a, b].
pub fn integrate(f: impl FnMut(f64) -> Complex64, a: f64, b: f64, tol: QuadTol) -> Result<QuadResult> {
    let (r, ok) = integrate_best(f, a, b, tol);
    if ok {
        Ok(r)
    } else {
        Err(FqmError::NonConvergence { what: "adaptive quadrature", estimate: r.value.norm(), error: r.error })
    }
}

/// Like [`integrate`] but returns the last estimate when the interval budget
/// runs out; the flag reports whether the tolerance was met.
pub(crate) fn integrate_best(mut f: impl FnMut(f64) -> Complex64, a: f64, b: f64, tol: QuadTol) -> (QuadResult, bool) {
    if a == b {
        return (QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0 }, true);
    }
    let (v, e) = kronrod(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    while err > tol.abs.max(tol.rel * total.norm()) {
        if heap.len() >= tol.max_intervals {
            return (QuadResult { value: total, error: err }, false);
        }
        let p = heap.pop().expect("heap holds at least one piece");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // interval exhausted at machine resolution
            heap.push(Piece { error: 0.0, ..p });
            err = heap.iter().map(|q| q.error).sum();
            continue;
        }
        let (v1, e1) = kronrod(&mut f, p.a, m);
        let (v2, e2) = kronrod(&mut f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
        if err < 0.0 || heap.len() % 64 == 0 {
            // resync against drift in the running sums
            total = heap.iter().map(|q| q.value).sum();
            err = heap.iter().map(|q| q.error).sum();
        }
    }
    (QuadResult { value: total, error: err }, true)
}

pub fn integrate_real(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: QuadTol) -> Result<(f64, f64)> {
    let r = integrate(|x| Complex64::new(f(x), 0.0), a, b, tol)?;
    Ok((r.value.re, r.error))
}

/// Integral of `f` along the straight segment z0 -> z1.
pub fn integrate_segment(
    mut f: impl FnMut(Complex64) -> Complex64,
    z0: Complex64,
    z1: Complex64,
    tol: QuadTol,
) -> Result<QuadResult> {
    let d = z1 - z0;
    let r = integrate(|s| f(z0 + d * s) * d, 0.0, 1.0, tol)?;
    Ok(r)
}

pub(crate) fn integrate_segment_best(
    mut f: impl FnMut(Complex64) -> Complex64,
    z0: Complex64,
    z1: Complex64,
    tol: QuadTol,
) -> QuadResult {
    let d = z1 - z0;
    integrate_best(|s| f(z0 + d * s) * d, 0.0, 1.0, tol).0
}
