//! Thread-local FFT plans.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward transform, sum_j a_j e^{-2 pi i jk/n}.
pub(crate) fn forward(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// Unnormalized inverse transform, sum_k a_k e^{+2 pi i jk/n}.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

/// Circular convolution c_m = sum_j a_j b_{(m - j) mod n}.
pub(crate) fn circular_convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() as f64;
    let mut fa = a.to_vec();
    let mut fb = b.to_vec();
    forward(&mut fa);
    forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y / n;
    }
    inverse(&mut fa);
    fa
}
