use super::*;
use crate::quad::{integrate_real, QuadTol};
use statrs::function::gamma::gamma;

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

fn re(u: f64, a: f64) -> f64 {
    stable_kernel(Complex64::new(u, 0.0), a, &ctl()).unwrap().value.re
}

/// Defining Fourier integral, truncated where e^{-q^a} < 1e-19.
fn fourier(u: f64, a: f64) -> f64 {
    let q_max = 44f64.powf(1.0 / a);
    let n = ((q_max * u.abs()) / 2.0).ceil().max(4.0) as usize;
    let tol = QuadTol { abs: 1e-17, rel: 1e-14, max_intervals: 4000 };
    (0..n)
        .map(|i| {
            let (lo, hi) = (q_max * i as f64 / n as f64, q_max * (i + 1) as f64 / n as f64);
            integrate_real(|q| (q * u).cos() * (-q.powf(a)).exp(), lo, hi, tol).unwrap().0
        })
        .sum::<f64>()
        / PI
}

#[test]
fn gaussian_at_alpha_two() {
    for u in [0.0f64, 0.3, 1.0, 2.5, 4.0, 7.0, 12.0] {
        let exact = (-u * u / 4.0).exp() / (2.0 * PI.sqrt());
        assert!((re(u, 2.0) - exact).abs() < 1e-14, "u={u}");
    }
}

#[test]
fn value_at_origin() {
    for a in [1.1, 1.2, 1.5, 1.8, 2.0] {
        let exact = gamma(1.0 / a) / (PI * a);
        assert!((re(0.0, a) - exact).abs() < 1e-14);
    }
}

#[test]
fn matches_fourier_quadrature() {
    assert!((re(1.0, 1.5) - fourier(1.0, 1.5)).abs() < 1e-10);
    for a in [1.2, 1.5, 1.8] {
        for u in [0.2, 1.7, 3.3, 6.0, 11.0, 25.0] {
            let d = (re(u, a) - fourier(u, a)).abs();
            assert!(d < 1e-11, "a={a} u={u} d={d:e}");
        }
    }
}

#[test]
fn regimes_agree_across_crossover() {
    for a in [1.2, 1.5, 1.8, 2.0] {
        let c = auto_crossover(a);
        for f in [0.8, 0.95] {
            let u = c * f;
            let s = stable_kernel(Complex64::new(u, 0.0), a, &ctl()).unwrap();
            assert_eq!(s.regime, Regime::PowerSeries);
            let q = stable_kernel(Complex64::new(u, 0.0), a, &SeriesControl { crossover: Some(0.0), ..ctl() }).unwrap();
            assert_ne!(q.regime, Regime::PowerSeries);
            let tol = 10.0 * (s.abs_error_estimate + q.abs_error_estimate) + 1e-15;
            assert!((s.value - q.value).norm() < tol, "a={a} u={u} {s:?} {q:?}");
        }
    }
}

#[test]
fn asymptotic_tail_used_far_out() {
    let v = stable_kernel(Complex64::new(40.0, 0.0), 1.5, &ctl()).unwrap();
    assert_eq!(v.regime, Regime::Asymptotic);
    let t = stable_kernel_tail(Complex64::new(40.0, 0.0), 1.5, &ctl()).unwrap();
    assert!((v.value - t.value).norm() < 1e-18);
}

#[test]
fn even_in_u_and_odd_derivative() {
    for a in [1.3, 1.9] {
        for u in [0.4, 3.0, 9.0] {
            assert_eq!(re(u, a), re(-u, a));
            let dp = stable_kernel_derivative(Complex64::new(u, 0.0), a, &ctl()).unwrap().value;
            let dm = stable_kernel_derivative(Complex64::new(-u, 0.0), a, &ctl()).unwrap().value;
            assert!((dp + dm).norm() < 1e-15);
        }
    }
}

#[test]
fn derivative_matches_finite_difference() {
    for a in [1.2, 1.5, 2.0] {
        for u in [0.5f64, 2.0, 5.0, 15.0] {
            let h = 1e-4 * u.max(1.0);
            let fd = (re(u + h, a) - re(u - h, a)) / (2.0 * h);
            let d = stable_kernel_derivative(Complex64::new(u, 0.0), a, &ctl()).unwrap().value.re;
            assert!((fd - d).abs() < 1e-6 * d.abs().max(1e-6), "a={a} u={u}");
        }
    }
}

#[test]
fn complex_argument_regimes_agree() {
    // interior of the sector: series vs direct quadrature
    let a = 1.5;
    let u = Complex64::from_polar(2.0, -0.4);
    let s = stable_kernel(u, a, &ctl()).unwrap();
    let q = stable_kernel(u, a, &SeriesControl { max_terms: 10, ..ctl() });
    if let Ok(q) = q {
        assert!((s.value - q.value).norm() < 1e-10);
    }
    assert!(stable_kernel(Complex64::from_polar(1.0, -1.3), a, &ctl()).is_err());
}

#[test]
fn feynman_kernel_at_alpha_two() {
    let p = FqmParams::standard(1.0, 1.0).unwrap();
    for (x, t) in [(1.0, 1.0), (0.0, 0.5), (3.0, 0.7), (-2.0, 1.3), (10.0, 2.0), (1.0, -1.0)] {
        let k = free_kernel_1d(x, t, &p, &ctl()).unwrap().value;
        let m = 1.0;
        let pre = (Complex64::new(m, 0.0) / (Complex64::new(0.0, 2.0 * PI * t))).sqrt();
        let exact = pre * Complex64::new(0.0, m * x * x / (2.0 * t)).exp();
        assert!((k - exact).norm() < 1e-12, "x={x} t={t} {k} {exact}");
    }
}

#[test]
fn edge_series_and_contour_agree() {
    for a in [1.2, 1.5, 1.8, 2.0] {
        for rho in [0.5, 1.5, 3.0] {
            let s = stable::eval_edge(rho, a, 0, &ctl()).unwrap();
            let c = stable::eval_edge(rho, a, 0, &SeriesControl { crossover: Some(0.0), ..ctl() }).unwrap();
            assert_eq!(c.regime, Regime::Quadrature);
            if s.regime == Regime::PowerSeries {
                assert!((s.value - c.value).norm() < 1e-11, "a={a} rho={rho}");
            }
            let sd = stable::eval_edge(rho, a, 1, &ctl()).unwrap();
            let cd = stable::eval_edge(rho, a, 1, &SeriesControl { crossover: Some(0.0), ..ctl() }).unwrap();
            if sd.regime == Regime::PowerSeries {
                assert!((sd.value - cd.value).norm() < 1e-11, "deriv a={a} rho={rho}");
            }
        }
    }
}

#[test]
fn kernel_scaling_law() {
    for a in [1.5, 1.8] {
        let p = FqmParams::natural(a).unwrap();
        for lam in [2.0f64, 3.0] {
            for x in [0.3, 1.0, 4.0] {
                let k = free_kernel_1d(x, 0.6, &p, &ctl()).unwrap().value;
                let ks = free_kernel_1d(lam.powf(1.0 / a) * x, lam * 0.6, &p, &ctl()).unwrap().value;
                assert!((ks * lam.powf(1.0 / a) - k).norm() < 1e-12 * k.norm());
            }
        }
    }
}

#[test]
fn density_matrix_gaussian_and_origin() {
    let p = FqmParams::standard(2.0, 1.3).unwrap();
    let beta = 0.7;
    let m = 2.0;
    let h = 1.3;
    for x in [0.0, 0.5, 2.0] {
        let exact = (m / (2.0 * PI * h * h * beta)).sqrt() * (-m * x * x / (2.0 * h * h * beta)).exp();
        let v = free_density_matrix_1d(x, beta, &p, &ctl()).unwrap();
        assert!((v - exact).abs() < 1e-13 * exact);
    }
    let p = FqmParams::natural(1.5).unwrap();
    let v = free_density_matrix_1d(0.0, 1.0, &p, &ctl()).unwrap();
    assert!((v - gamma(1.0 / 1.5) / (PI * 1.5)).abs() < 1e-14);
    assert!((free_density_matrix_1d(2.0, 1.0, &p, &ctl()).unwrap() - fourier(2.0, 1.5)).abs() < 1e-10);
    assert!(free_density_matrix_1d(1.0, 0.0, &p, &ctl()).is_err());
}

/// int_U^inf f(u) du from the asymptotic series.
fn tail_integral(u: f64, a: f64) -> f64 {
    (1..30)
        .map(|k| {
            let k = k as f64;
            let s = if (k as i64) % 2 == 1 { 1.0 } else { -1.0 };
            s * gamma(k * a + 1.0) / gamma(k + 1.0) * (k * PI * a / 2.0).sin() / PI * u.powf(-k * a) / (k * a)
        })
        .sum()
}

#[test]
fn normalized_to_one() {
    for a in [1.2, 1.5, 1.8] {
        let big = 400.0;
        let tol = QuadTol { abs: 1e-16, rel: 1e-13, max_intervals: 4000 };
        let (body, _) = integrate_real(|u| re(u, a), 0.0, big, tol).unwrap();
        let total = 2.0 * (body + tail_integral(big, a));
        assert!((total - 1.0).abs() < 1e-8, "a={a} total={total}");
    }
}

#[test]
fn three_d_at_alpha_two() {
    let p = FqmParams::standard(1.0, 1.0).unwrap();
    let k = free_kernel_3d(1.0, 1.0, &p, &ctl()).unwrap().value;
    let exact = (Complex64::new(1.0, 0.0) / Complex64::new(0.0, 2.0 * PI)).powf(1.5) * Complex64::new(0.0, 0.5).exp();
    assert!((k - exact).norm() < 1e-12);
    let beta = 0.8;
    for r in [0.2, 1.0, 3.0] {
        let v = free_density_matrix_3d(r, beta, &p, &ctl()).unwrap();
        let e = (1.0 / (2.0 * PI * beta)).powf(1.5) * (-r * r / (2.0 * beta)).exp();
        assert!((v - e).abs() < 1e-12 * e.max(1e-6));
    }
    assert!(free_kernel_3d(0.0, 1.0, &p, &ctl()).is_err());
}

#[test]
fn three_d_density_normalization() {
    let a = 1.5;
    let p = FqmParams::natural(a).unwrap();
    let tol = QuadTol { abs: 1e-16, rel: 1e-13, max_intervals: 4000 };
    let big = 400.0;
    let (body, _) = integrate_real(|r| 4.0 * PI * r * r * free_density_matrix_3d(r, 1.0, &p, &ctl()).unwrap(), 1e-12, big, tol).unwrap();
    // tail: 4 pi int r^2 rho3 = -2 int r rho' = 2 R rho(R) + 2 int rho
    let rho_big = free_density_matrix_1d(big, 1.0, &p, &ctl()).unwrap();
    let total = body + 2.0 * big * rho_big + 2.0 * tail_integral(big, a);
    assert!((total - 1.0).abs() < 1e-8, "total={total}");
    for r in [0.05, 0.5, 1.0, 4.0] {
        let v = free_density_matrix_3d(r, 1.0, &FqmParams::natural(1.8).unwrap(), &ctl()).unwrap();
        assert!(v > 0.0);
    }
}

#[test]
fn classical_airy_values_and_zeros() {
    let c = ctl();
    for (z, ai) in [(0.0, 0.355_028_053_887_817_2), (1.0, 0.135_292_416_312_881_4), (-1.0, 0.535_560_883_292_352_1), (-5.0, 0.350_761_009_024_114_2)] {
        assert!((gen_airy(z, 2.0, &c).unwrap() - ai).abs() < 1e-13, "z={z}");
    }
    for z0 in [2.338_107_410_459_767, 4.087_949_444_130_97] {
        assert!(gen_airy(-z0, 2.0, &c).unwrap().abs() < 1e-13);
    }
}

#[test]
fn gen_airy_at_origin_closed_form() {
    for a in [1.2f64, 1.5, 1.8] {
        let g = a + 1.0;
        let exact = g.powf(1.0 / g) * gamma(1.0 + 1.0 / g) * (FRAC_PI_2 / g).cos() / PI;
        assert!((gen_airy(0.0, a, &ctl()).unwrap() - exact).abs() < 1e-13);
    }
}

#[test]
fn gen_airy_decays_monotonically() {
    let mut prev = f64::INFINITY;
    for i in 0..40 {
        let v = gen_airy(0.5 * i as f64, 1.5, &ctl()).unwrap();
        assert!(v > 0.0 && v < prev);
        prev = v;
    }
}

#[test]
fn beta_values() {
    assert!((beta_function(0.5, 0.5).unwrap() - PI).abs() < 1e-13);
    assert!((beta_function(0.5, 1.5).unwrap() - FRAC_PI_2).abs() < 1e-13);
    assert!((beta_function(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
    assert!((beta_function(2.0 / 3.0, 1.0 / 3.0).unwrap() - 2.0 * PI / 3f64.sqrt()).abs() < 1e-13);
    assert!(beta_function(0.0, 1.0).is_err());
    assert!(beta_function(1.0, -2.0).is_err());
}

