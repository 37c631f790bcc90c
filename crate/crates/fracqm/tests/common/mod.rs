//! Reference values computed from the defining Fourier integrals with
//! fixed composite Gauss-Legendre rules. Nothing here calls the library.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

pub struct Rule {
    xs: Vec<f64>,
    ws: Vec<f64>,
}

impl Rule {
    pub fn new() -> Self {
        let (xs, ws) = gauss_legendre(20);
        Self { xs, ws }
    }

    /// Straight segment z0 -> z1 split into `panels` equal pieces.
    pub fn segment(&self, f: &impl Fn(Complex64) -> Complex64, z0: Complex64, z1: Complex64, panels: usize) -> Complex64 {
        let h = (z1 - z0) / panels as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..panels {
            let c = z0 + h * (k as f64 + 0.5);
            for (x, w) in self.xs.iter().zip(&self.ws) {
                total += f(c + h * (0.5 * x)) * (0.5 * w);
            }
        }
        total * h
    }

    /// [0, b] with panels shrinking geometrically toward 0, for p^alpha kinks.
    pub fn graded(&self, f: &impl Fn(Complex64) -> Complex64, b: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut hi = b;
        for _ in 0..60 {
            let lo = 0.5 * hi;
            total += self.segment(f, Complex64::new(lo, 0.0), Complex64::new(hi, 0.0), 1);
            hi = lo;
        }
        total
    }

    /// [0, b] on the real axis: graded on [0, 1], uniform panels of width <= h after.
    pub fn real_line(&self, f: &impl Fn(Complex64) -> Complex64, b: f64, h: f64) -> Complex64 {
        if b <= 1.0 {
            return self.graded(f, b);
        }
        let n = ((b - 1.0) / h).ceil() as usize;
        self.graded(f, 1.0) + self.segment(f, Complex64::new(1.0, 0.0), Complex64::new(b, 0.0), n.max(1))
    }

    /// Half-line p + s e^{i angle}, s >= 0, in doubling chunks.
    pub fn ray(&self, f: &impl Fn(Complex64) -> Complex64, p: f64, angle: f64) -> Complex64 {
        let base = Complex64::new(p, 0.0);
        let d = Complex64::from_polar(1.0, angle);
        let mut total = self.segment(f, base, base + d, 8);
        let (mut s0, mut s1) = (1.0, 2.0);
        for _ in 0..60 {
            let piece = self.segment(f, base + d * s0, base + d * s1, 16);
            total += piece;
            if piece.norm() < 1e-20 && f(base + d * s1).norm() < 1e-20 {
                break;
            }
            s0 = s1;
            s1 *= 2.0;
        }
        total
    }
}

/// int_0^inf exp(i (y p - c p^alpha)) dp for c > 0; the tail runs straight down.
fn oscillatory_half_line(rule: &Rule, y: f64, c: f64, alpha: f64) -> Complex64 {
    let f = |p: Complex64| (I * (p * y - p.powf(alpha) * c)).exp();
    // turn down well past the stationary point alpha c p^{alpha-1} = y
    let stat = if y > 0.0 { (y / (alpha * c)).powf(1.0 / (alpha - 1.0)) } else { 0.0 };
    let p = 1.5 * stat + 2.0;
    let h = (0.5 / (y.abs() + alpha * c * p.powf(alpha - 1.0))).min(0.25);
    rule.real_line(&f, p, h) + rule.ray(&f, p, -FRAC_PI_2)
}

/// Free propagator (1/2 pi hbar) int exp(i(p x - D |p|^alpha t)/hbar) dp, t > 0.
pub fn kernel(x: f64, t: f64, alpha: f64, d: f64, hbar: f64) -> Complex64 {
    let rule = Rule::new();
    // p = hbar q
    let y = x;
    let c = d * t * hbar.powf(alpha - 1.0);
    let plus = oscillatory_half_line(&rule, y, c, alpha);
    let minus = oscillatory_half_line(&rule, -y, c, alpha);
    (plus + minus) / (2.0 * PI)
}

/// Free density matrix (1/pi hbar) int_0^inf cos(p x/hbar) exp(-beta D p^alpha) dp.
pub fn density(x: f64, beta: f64, alpha: f64, d: f64, hbar: f64) -> f64 {
    let rule = Rule::new();
    let c = beta * d * hbar.powf(alpha);
    let f = |q: Complex64| (q * x).cos() * (-q.powf(alpha) * c).exp();
    let b = (60.0 / c).powf(1.0 / alpha);
    let h = (0.5 / (x.abs() + 1.0)).min(0.25);
    rule.real_line(&f, b, h).re / PI
}

/// Generalized Airy function (1/pi) int_0^inf cos(s z + s^{alpha+1}/(alpha+1)) ds.
pub fn gen_airy(z: f64, alpha: f64) -> f64 {
    let rule = Rule::new();
    let g = alpha + 1.0;
    let f = |s: Complex64| (I * (s * z + s.powf(g) / g)).exp();
    let p = 1.5 * (-z).max(0.0).powf(1.0 / alpha) + 2.0;
    let h = (0.5 / (z.abs() + p.powf(alpha))).min(0.25);
    // e^{i s^g} decays for 0 < arg s < pi/g; aim down the middle
    (rule.real_line(&f, p, h) + rule.ray(&f, p, FRAC_PI_2 / g)).re / PI
}

/// First n zeros of z -> gen_airy(-z, alpha), by scan and bisection.
pub fn gen_airy_zeros(n: usize, alpha: f64) -> Vec<f64> {
    let f = |z: f64| gen_airy(-z, alpha);
    let mut out = vec![];
    let step = 0.05;
    let mut a = 0.0;
    let mut fa = f(a);
    while out.len() < n {
        let b = a + step;
        let fb = f(b);
        if fa.signum() != fb.signum() {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                let fm = f(m);
                if fm.signum() == flo.signum() {
                    lo = m;
                    flo = fm;
                } else {
                    hi = m;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    out
}
