//! The symmetric stable density f_a(u) = (1/pi) int_0^inf cos(q u) e^{-q^a} dq
//! and its derivative, by power series, asymptotic series, Zolotarev's
//! integral (real u), direct quadrature (complex u inside the sector) or the
//! contour integrals of [`super::contour`] (complex u on the sector edge).

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use statrs::function::factorial::factorial;
use statrs::function::gamma::{gamma, ln_gamma};

use super::{contour, KernelValue, Regime, SeriesControl};
use crate::error::{invalid, FqmError, Result};
use crate::quad::{integrate, integrate_real, QuadTol};

/// Largest tolerated ratio between the peak series term and the sum.
pub(crate) const MAX_CANCELLATION: f64 = 1e2;

/// Gamma(x) / n! computed directly while both fit in f64.
fn gamma_over_factorial(x: f64, n: u64) -> f64 {
    if x < 170.0 && n <= 170 {
        gamma(x) / factorial(n)
    } else {
        (ln_gamma(x) - ln_gamma(n as f64 + 1.0)).exp()
    }
}

pub(crate) struct SeriesOut {
    pub value: Complex64,
    pub error: f64,
    pub loss: f64,
}

/// Power series for f (deriv = 0) or f' (deriv = 1).
pub(crate) fn power_series(u: Complex64, alpha: f64, deriv: u32, ctl: &SeriesControl) -> Result<SeriesOut> {
    let r = u.norm();
    let arg = u.arg();
    let norm = 1.0 / (PI * alpha);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut peak: f64 = 0.0;
    let mut abs_sum = 0.0;
    let mut last = f64::INFINITY;
    let start = deriv as usize;
    for n in start..ctl.max_terms {
        let nf = n as f64;
        let pow = 2 * n - deriv as usize;
        let mut c = gamma_over_factorial((2.0 * nf + 1.0) / alpha, 2 * n as u64) * norm;
        if deriv == 1 {
            c *= 2.0 * nf;
        }
        let mag = if pow == 0 { c } else { c * r.powi(pow as i32) };
        if !mag.is_finite() {
            return Err(FqmError::Overflow(format!("series term at |u| = {}", u.norm())));
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = Complex64::from_polar(sign * mag, pow as f64 * arg);
        sum += term;
        peak = peak.max(mag);
        abs_sum += mag;
        // past the peak and below tolerance
        if mag < last && mag <= ctl.rel_tol * 1e-3 * sum.norm() {
            let loss = if sum.norm() == 0.0 { 1.0 } else { peak / sum.norm() };
            let error = 4.0 * f64::EPSILON * abs_sum + mag;
            return Ok(SeriesOut { value: sum, error, loss });
        }
        if pow == 0 && r == 0.0 {
            return Ok(SeriesOut { value: sum, error: f64::EPSILON * peak, loss: 1.0 });
        }
        last = mag;
    }
    Err(FqmError::NonConvergence { what: "stable power series", estimate: sum.norm(), error: last })
}

/// Asymptotic tail series (algebraic part), valid for |u| large with Re u > 0.
pub(crate) fn asymptotic(u: Complex64, alpha: f64, deriv: u32, ctl: &SeriesControl) -> (Complex64, f64) {
    let lnu = u.norm().ln();
    let arg = u.arg();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 1..ctl.max_terms {
        let kf = k as f64;
        let expo = -(kf * alpha + 1.0) - deriv as f64;
        let mut mag = gamma_over_factorial(kf * alpha + 1.0, k as u64) / PI * (expo * lnu).exp();
        if deriv == 1 {
            mag *= kf * alpha + 1.0;
        }
        if mag >= prev && k > 1 {
            return (sum, prev);
        }
        let s = (kf * PI * alpha / 2.0).sin();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 } * if deriv == 1 { -1.0 } else { 1.0 };
        sum += Complex64::from_polar(sign * s * mag, expo * arg);
        if mag <= 1e-3 * ctl.rel_tol * sum.norm() {
            return (sum, mag);
        }
        prev = mag;
    }
    (sum, prev)
}

/// Zolotarev's non-oscillatory representation for real x > 0.
fn zolotarev(x: f64, alpha: f64, deriv: u32, rel: f64) -> Result<(f64, f64)> {
    let am1 = alpha - 1.0;
    let e = alpha / am1;
    let c = x.powf(e);
    let v = |th: f64| -> f64 {
        let s = (alpha * th).sin();
        let ct = th.cos();
        (ct / s).powf(e) * (am1 * th).cos() / ct
    };
    let tol = QuadTol { abs: 1e-300, rel: rel.min(1e-13), max_intervals: 4000 };
    let pre = alpha / (PI * am1);
    let (i1, e1) = integrate_real(
        |th| {
            let vv = v(th);
            vv * (-c * vv).exp()
        },
        0.0,
        FRAC_PI_2,
        tol,
    )?;
    let xp = x.powf(1.0 / am1);
    if deriv == 0 {
        return Ok((pre * xp * i1, pre * xp * e1));
    }
    let (i2, e2) = integrate_real(
        |th| {
            let vv = v(th);
            vv * vv * (-c * vv).exp()
        },
        0.0,
        FRAC_PI_2,
        tol,
    )?;
    let val = pre * ((1.0 / am1) * xp / x * i1 - e * xp * xp * i2);
    let err = pre * ((1.0 / am1) * xp / x * e1 + e * xp * xp * e2);
    Ok((val, err))
}

static CROSSOVER: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();

/// |u| beyond which the real-axis power series loses more than two digits.
/// Calibrated once per alpha and cached.
pub fn auto_crossover(alpha: f64) -> f64 {
    let map = CROSSOVER.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = map.lock().expect("crossover cache poisoned").get(&alpha.to_bits()) {
        return *c;
    }
    let ctl = SeriesControl::default();
    let bad = |u: f64| match power_series(Complex64::new(u, 0.0), alpha, 0, &ctl) {
        Ok(s) => s.loss > MAX_CANCELLATION,
        Err(_) => true,
    };
    let (mut lo, mut hi) = (0.5, 0.5);
    while !bad(hi) && hi < 200.0 {
        lo = hi;
        hi *= 1.5;
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if bad(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    map.lock().expect("crossover cache poisoned").insert(alpha.to_bits(), lo);
    lo
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(invalid("alpha", format!("{alpha} outside (1, 2]")))
    }
}

/// f (deriv 0) or f' (deriv 1) at real u.
pub(crate) fn eval_real(u: f64, alpha: f64, deriv: u32, ctl: &SeriesControl) -> Result<KernelValue> {
    check_alpha(alpha)?;
    let sgn = if deriv == 1 && u < 0.0 { -1.0 } else { 1.0 };
    let x = u.abs();
    let cross = ctl.crossover.unwrap_or_else(|| auto_crossover(alpha));
    let wrap = |v: f64, e: f64, regime| KernelValue { value: Complex64::new(sgn * v, 0.0), abs_error_estimate: e, regime };
    if x <= cross {
        if let Ok(s) = power_series(Complex64::new(x, 0.0), alpha, deriv, ctl) {
            if s.loss <= MAX_CANCELLATION {
                return Ok(wrap(s.value.re, s.error, Regime::PowerSeries));
            }
        }
    }
    if alpha < 2.0 {
        let (v, e) = asymptotic(Complex64::new(x, 0.0), alpha, deriv, ctl);
        if v.re != 0.0 && e <= ctl.rel_tol * v.re.abs() {
            return Ok(wrap(v.re, e, Regime::Asymptotic));
        }
    }
    let (v, e) = zolotarev(x, alpha, deriv, ctl.rel_tol)?;
    Ok(wrap(v, e, Regime::Quadrature))
}

/// f or f' on the sector edge u = rho e^{-i pi/(2 alpha)}, rho >= 0.
pub(crate) fn eval_edge(rho: f64, alpha: f64, deriv: u32, ctl: &SeriesControl) -> Result<KernelValue> {
    check_alpha(alpha)?;
    let u = Complex64::from_polar(rho, -FRAC_PI_2 / alpha);
    let cross = ctl.crossover.unwrap_or_else(|| auto_crossover(alpha)).min(6.0);
    if rho <= cross {
        if let Ok(s) = power_series(u, alpha, deriv, ctl) {
            if s.loss <= MAX_CANCELLATION {
                return Ok(KernelValue { value: s.value, abs_error_estimate: s.error, regime: Regime::PowerSeries });
            }
        }
    }
    let (value, error) = if deriv == 0 {
        let (a, ea) = contour::half_line(0, -rho, 1.0, alpha, ctl.rel_tol)?;
        let (b, eb) = contour::half_line(0, rho, 1.0, alpha, ctl.rel_tol)?;
        let pre = Complex64::from_polar(0.5 / PI, FRAC_PI_2 / alpha);
        (pre * (a.conj() + b.conj()), (ea + eb) * 0.5 / PI)
    } else {
        let (a, ea) = contour::half_line(1, -rho, 1.0, alpha, ctl.rel_tol)?;
        let (b, eb) = contour::half_line(1, rho, 1.0, alpha, ctl.rel_tol)?;
        let pre = -Complex64::from_polar(0.5 / PI, PI / alpha) / Complex64::new(0.0, 1.0);
        (pre * (a.conj() - b.conj()), (ea + eb) * 0.5 / PI)
    };
    Ok(KernelValue { value, abs_error_estimate: error, regime: Regime::Quadrature })
}

/// Direct quadrature of the defining integral for complex u strictly inside the sector.
fn eval_interior(u: Complex64, alpha: f64, deriv: u32, ctl: &SeriesControl) -> Result<KernelValue> {
    if let Ok(s) = power_series(u, alpha, deriv, ctl) {
        if s.loss <= MAX_CANCELLATION {
            return Ok(KernelValue { value: s.value, abs_error_estimate: s.error, regime: Regime::PowerSeries });
        }
    }
    let grow = u.im.abs();
    // e^{-q^a + q |Im u|} < e^{-50} beyond q_max
    let mut q_max: f64 = 50f64.powf(1.0 / alpha) + 1.0;
    while q_max.powf(alpha) - grow * q_max < 50.0 {
        q_max *= 1.2;
    }
    let pieces = ((q_max * u.re.abs()) / PI).ceil().max(1.0) as usize;
    let tol = QuadTol { abs: 1e-300, rel: ctl.rel_tol.min(1e-13), max_intervals: 4000 };
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for i in 0..pieces {
        let a = q_max * i as f64 / pieces as f64;
        let b = q_max * (i + 1) as f64 / pieces as f64;
        let r = integrate(
            |q| {
                let w = (-q.powf(alpha)).exp();
                if deriv == 0 {
                    (u * q).cos() * w
                } else {
                    -(u * q).sin() * q * w
                }
            },
            a,
            b,
            tol,
        )?;
        total += r.value;
        err += r.error;
    }
    Ok(KernelValue { value: total / PI, abs_error_estimate: err / PI, regime: Regime::Quadrature })
}

/// f or f' at complex u with |arg(+-u)| <= pi/(2 alpha).
pub(crate) fn eval(u: Complex64, alpha: f64, deriv: u32, ctl: &SeriesControl) -> Result<KernelValue> {
    check_alpha(alpha)?;
    if u.im == 0.0 {
        return eval_real(u.re, alpha, deriv, ctl);
    }
    // evenness (f even, f' odd), then conjugate symmetry
    let (w, flip) = if u.re < 0.0 { (-u, deriv == 1) } else { (u, false) };
    let (w, conj) = if w.im > 0.0 { (w.conj(), true) } else { (w, false) };
    let edge = FRAC_PI_2 / alpha;
    let th = -w.arg();
    if th > edge * (1.0 + 1e-12) {
        return Err(invalid("u", format!("arg {} outside the convergence sector", u.arg())));
    }
    let mut kv = if (th - edge).abs() <= 1e-12 * edge {
        eval_edge(w.norm(), alpha, deriv, ctl)?
    } else {
        eval_interior(w, alpha, deriv, ctl)?
    };
    if conj {
        kv.value = kv.value.conj();
    }
    if flip {
        kv.value = -kv.value;
    }
    Ok(kv)
}
