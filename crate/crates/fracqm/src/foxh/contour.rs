//! Oscillatory half-line integrals
//! `I_m(a, b, g) = int_0^inf s^m exp(i (a s + b s^g)) ds` with b > 0, g > 1,
//! evaluated on a deformed path: a ray into the decaying sector when the phase
//! has no stationary point, otherwise a detour through the saddle along its
//! steepest-descent direction.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{FqmError, Result};
use crate::quad::{integrate_segment_best, QuadTol};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn tol(rel: f64) -> QuadTol {
    QuadTol { abs: 1e-300, rel: rel.min(1e-13), max_intervals: 4000 }
}

/// I_m(a, b, g) with its accumulated error estimate.
pub(crate) fn half_line(m: i32, a: f64, b: f64, g: f64, rel: f64) -> Result<(Complex64, f64)> {
    debug_assert!(b > 0.0 && g > 1.0);
    let f = |s: Complex64| s.powi(m) * (I * (s * a + s.powf(g) * b)).exp();
    let phi = std::f64::consts::FRAC_PI_2 / g;
    let dir = Complex64::from_polar(1.0, phi);
    let tl = tol(rel);

    let (start, mut total, mut err) = if a >= 0.0 {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0)
    } else {
        let s_star = (-a / (b * g)).powf(1.0 / (g - 1.0));
        let curv = b * g * (g - 1.0) * s_star.powf(g - 2.0);
        let h = (6.0 / curv.sqrt()).min(0.5 * s_star);
        let e = Complex64::from_polar(h, FRAC_PI_4);
        let p1 = Complex64::new(s_star, 0.0) - e;
        let p2 = Complex64::new(s_star, 0.0) + e;
        // drop below the axis first: before the saddle the lower half plane
        // damps, so the long approach does not oscillate at full amplitude
        let q = Complex64::new(0.0, -(40.0 / -a).min(0.5 * s_star));
        let r0 = integrate_segment_best(f, Complex64::new(0.0, 0.0), q, tl);
        let r1 = integrate_segment_best(f, q, p1, tl);
        let r2 = integrate_segment_best(f, p1, p2, tl);
        (p2, r0.value + r1.value + r2.value, r0.error + r1.error + r2.error)
    };

    // march out along the ray in geometrically growing chunks
    let mut r0 = 0.0;
    let mut r1 = (1.0 / b).powf(1.0 / g).max(start.norm() * 0.25).max(1e-3);
    for _ in 0..200 {
        let seg = integrate_segment_best(f, start + dir * r0, start + dir * r1, tl);
        total += seg.value;
        err += seg.error;
        let edge = f(start + dir * r1).norm() * r1;
        if seg.value.norm() <= 1e-17 * total.norm() && edge <= 1e-17 * total.norm().max(1e-300) {
            // pieces may stall on roundoff; judge them against the whole. A
            // phase of size P carries eps * P of noise in every sample.
            let s0 = start.norm();
            let noise = 16.0 * f64::EPSILON * (a.abs() * s0 + b * s0.powf(g));
            if err > (100.0 * rel.max(1e-13) + noise) * total.norm() {
                return Err(FqmError::NonConvergence { what: "contour integral", estimate: total.norm(), error: err });
            }
            return Ok((total, err));
        }
        r0 = r1;
        r1 *= 2.0;
    }
    Err(FqmError::NonConvergence { what: "contour tail", estimate: total.norm(), error: err })
}
