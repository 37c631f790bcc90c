use super::*;
use crate::grid::make_grid;
use crate::wavefunction::inner_product;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn well_reduces_to_textbook_box() {
    let p = FqmParams::standard(1.0, 1.0).unwrap();
    let s = infinite_well_levels(1.0, 5, &p).unwrap();
    for l in &s.levels {
        let exact = (l.n as f64 * PI / 2.0).powi(2) / 2.0;
        assert!(rel(l.energy, exact) < 1e-12);
    }
    assert!(rel(s.energy(1).unwrap(), PI * PI / 8.0) < 1e-14);
    // pi^2 hbar^2 n^2 / (8 m a^2) with m = 2, a = 0.7, hbar = 1.3
    let p = FqmParams::standard(2.0, 1.3).unwrap();
    let s = infinite_well_levels(0.7, 3, &p).unwrap();
    for l in &s.levels {
        let exact = PI * PI * 1.69 * (l.n * l.n) as f64 / (8.0 * 2.0 * 0.49);
        assert!(rel(l.energy, exact) < 1e-12);
    }
}

#[test]
fn fractional_well_levels() {
    let p = FqmParams::natural(1.5).unwrap();
    let s = infinite_well_levels(1.0, 4, &p).unwrap();
    assert!((s.energy(1).unwrap() - 1.968_701_243_215_769).abs() < 1e-12);
    for l in &s.levels {
        assert!(rel(l.energy / s.energy(1).unwrap(), (l.n as f64).powf(1.5)) < 1e-13);
    }
    assert!(s.is_strictly_increasing());
    assert_eq!(s.method, Method::ClosedForm);
    assert!(infinite_well_levels(-1.0, 3, &p).is_err());
    assert!(infinite_well_levels(1.0, 0, &p).is_err());
}

#[test]
fn well_eigenfunctions_are_orthonormal() {
    let g = make_grid(512, 2.0, 0.0).unwrap();
    let fs: Vec<_> = (1..=6).map(|n| infinite_well_eigenfunction(n, 1.0, g, 1.0).unwrap()).collect();
    for (i, a) in fs.iter().enumerate() {
        for (j, b) in fs.iter().enumerate() {
            let ip = inner_product(a, b).unwrap();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((ip - want).norm() < 1e-10, "{i} {j} {ip}");
        }
    }
    let g = make_grid(256, 4.0, 0.0).unwrap();
    let f1 = infinite_well_eigenfunction(1, 1.0, g, 1.0).unwrap();
    let f2 = infinite_well_eigenfunction(2, 1.0, g, 1.0).unwrap();
    assert_eq!(f1.values[g.index_of(1.0).unwrap()].norm(), 0.0);
    assert_eq!(f1.values[g.index_of(-1.0).unwrap()].norm(), 0.0);
    let mid = g.index_of(0.0).unwrap();
    assert!((f1.values[mid].re - 1.0).abs() < 1e-15);
    assert!(crate::riesz::parity_classify(&f1, 1e-12).unwrap() == crate::riesz::Parity::Even);
    assert!(crate::riesz::parity_classify(&f2, 1e-12).unwrap() == crate::riesz::Parity::Odd);
    assert!(infinite_well_eigenfunction(1, 3.0, g, 1.0).is_err());
}

#[test]
fn bohr_reduces_to_rydberg() {
    let (m, e2, h) = (1.3, 0.7, 1.1);
    let p = FqmParams::standard(m, h).unwrap();
    let atom = bohr_atom(1.0, e2, 4, &p).unwrap();
    assert!(rel(atom.bohr_radius, h * h / (m * e2)) < 1e-13);
    let ry = m * e2 * e2 / (2.0 * h * h);
    assert!(rel(atom.binding_energy, ry) < 1e-13);
    for (i, &e) in atom.energies.iter().enumerate() {
        let n = (i + 1) as f64;
        assert!(rel(e, -ry / (n * n)) < 1e-13);
        assert!(rel(atom.radii[i], atom.bohr_radius * n * n) < 1e-13);
    }
    assert!(rel(atom.transition(3, 2), (atom.energy(2) - atom.energy(3)) / h) < 1e-13);
}

#[test]
fn fractional_bohr_atom() {
    let p = FqmParams::natural(1.5).unwrap();
    let atom = bohr_atom(1.0, 1.0, 5, &p).unwrap();
    assert!((atom.bohr_radius - 2.25).abs() < 1e-14);
    assert!((atom.energy(1) + 0.5 / 3.375).abs() < 1e-14);
    for n in 1..=5 {
        assert!((1.5 * atom.kinetic(n) + atom.potential(n)).abs() < 1e-13 * atom.potential(n).abs());
        assert!(atom.energy(n) < 0.0);
    }
    assert!(atom.spectrum().is_strictly_increasing());
    assert!(bohr_atom(-1.0, 1.0, 3, &p).is_err());
}

#[test]
fn oscillator_reduces_to_harmonic() {
    let (m, q) = (0.8, 1.7);
    let p = FqmParams::standard(m, 1.0).unwrap();
    let s = oscillator_levels_semiclassical(q * q, 2.0, 5, &p).unwrap();
    let w = q * (2.0 / m).sqrt();
    for l in &s.levels {
        assert!(rel(l.energy, w * (l.n as f64 + 0.5)) < 1e-13);
    }
}

#[test]
fn oscillator_exponent_and_equidistance() {
    let p = FqmParams::natural(1.5).unwrap();
    let s = oscillator_levels_semiclassical(1.0, 1.5, 6, &p).unwrap();
    let e = s.energies();
    for (n, &en) in e.iter().enumerate() {
        assert!(rel(en / e[0], (2.0 * n as f64 + 1.0).powf(0.75)) < 1e-13);
    }
    assert!(e.windows(3).all(|w| w[2] - w[1] < w[1] - w[0]));
    let defect = |a: f64, b: f64| {
        let e = oscillator_levels_semiclassical(1.0, b, 3, &FqmParams::natural(a).unwrap()).unwrap().energies();
        (e[2] - 2.0 * e[1] + e[0]).abs()
    };
    assert!(defect(2.0, 2.0) < 1e-14);
    assert!(defect(2.0, 1.5) > 1e-3);
    assert!(defect(1.5, 2.0) > 1e-3);
    assert!(oscillator_levels_semiclassical(1.0, 2.5, 3, &p).is_err());
}

#[test]
fn delta_well_energy_values() {
    let (m, g, h) = (1.4, 0.9, 1.2);
    let e = delta_well_energy(g, &FqmParams::standard(m, h).unwrap()).unwrap();
    assert!(rel(e, -m * g * g / (2.0 * h * h)) < 1e-13);
    let e = delta_well_energy(1.0, &FqmParams::natural(1.5).unwrap()).unwrap();
    let b = 2.0 * PI / 3f64.sqrt();
    assert!(rel(e, -(b / (1.5 * PI)).powi(3)) < 1e-13);
    assert!(delta_well_energy(0.0, &FqmParams::natural(1.5).unwrap()).is_err());
}

#[test]
fn delta_well_state_alpha2_is_exponential() {
    // psi = sqrt(k) e^{-k|x|}, k = m gamma / hbar^2
    let p = FqmParams::standard(1.0, 1.0).unwrap();
    let g = make_grid(400, 40.0, 0.0).unwrap();
    let (_, psi) = delta_well_bound_state(1.0, &p, g).unwrap();
    for j in (0..400).step_by(7) {
        let x = g.x(j);
        assert!((psi.values[j].re - (-x.abs()).exp()).abs() < 1e-10, "x={x}");
    }
}

/// Independent oracle: real-axis Simpson on [0, S] plus two integration-by-parts tail terms.
fn profile_oracle(y: f64, alpha: f64) -> f64 {
    let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize| {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    let s_max = 2000.0;
    let g = |s: f64| 1.0 / (1.0 + s.powf(alpha));
    // s = u^2 removes the s^alpha kink at the origin
    let head = simpson(&|u: f64| 2.0 * u * (u * u * y).cos() * g(u * u), 0.0, 1.0, 2000);
    let body = simpson(&|s: f64| (s * y).cos() * g(s), 1.0, s_max, 400_000);
    let gp = -alpha * s_max.powf(alpha - 1.0) * g(s_max).powi(2);
    head + body - (s_max * y).sin() * g(s_max) / y - (s_max * y).cos() * gp / (y * y)
}

#[test]
fn delta_well_profile_matches_real_axis_oracle() {
    for y in [0.5, 1.0, 3.0] {
        let v = resolvent_profile(y, 1.5).unwrap();
        let o = profile_oracle(y, 1.5);
        assert!((v - o).abs() < 1e-8, "y={y}: {v} vs {o}");
    }
}

#[test]
fn fractional_delta_state_is_even_peaked_and_normalized() {
    let p = FqmParams::natural(1.5).unwrap();
    // the |x|^{alpha-1} cusp at the origin limits the grid sum to dx^{alpha}
    let defects: Vec<f64> = [512, 2048, 8192]
        .iter()
        .map(|&n| (delta_well_bound_state(1.0, &p, make_grid(n, 200.0, 0.0).unwrap()).unwrap().1.norm_sqr() - 1.0).abs())
        .collect();
    assert!(defects[1] < defects[0] / 6.0 && defects[2] < defects[1] / 6.0 && defects[2] < 5e-3, "{defects:?}");
    let g = make_grid(1024, 400.0, 0.0).unwrap();
    let (_, psi) = delta_well_bound_state(1.0, &p, g).unwrap();
    let mid = g.index_of(0.0).unwrap();
    assert!(crate::riesz::parity_classify(&psi, 1e-12).unwrap() == crate::riesz::Parity::Even);
    assert!(psi.values.iter().all(|v| v.re <= psi.values[mid].re));
}

#[test]
fn delta_state_energy_is_self_consistent() {
    // <psi, T psi> - gamma |psi(0)|^2 = E, up to the truncated momentum tail
    for alpha in [2.0, 1.8] {
        let p = FqmParams::natural(alpha).unwrap();
        let mut last = f64::INFINITY;
        for n in [2048, 8192] {
            let g = make_grid(n, 80.0, 0.0).unwrap();
            let (e, mut psi) = delta_well_bound_state(1.0, &p, g).unwrap();
            let psi0 = psi.values[g.index_of(0.0).unwrap()].re;
            let scale = 1.0 / psi.norm();
            psi.normalize();
            let t = inner_product(&psi, &crate::riesz::apply_kinetic(&psi, &p)).unwrap().re;
            let got = t - (psi0 * scale).powi(2);
            let err = rel(got, e);
            assert!(err < last);
            last = err;
        }
        assert!(last < 2e-2, "alpha={alpha}: {last}");
    }
}

#[test]
fn airy_zero_spectrum_at_alpha2() {
    let ctl = SeriesControl::default();
    let zeros = [2.338_107_410_459_767, 4.087_949_444_130_97, 5.520_559_828_095_551];
    let (m, f, h) = (0.9, 1.3, 1.1);
    let p = FqmParams::standard(m, h).unwrap();
    let s = linear_potential_levels(f, 3, &p, &ctl).unwrap();
    for (l, z) in s.levels.iter().zip(zeros) {
        let exact = z * (f * f * h * h / (2.0 * m)).powf(1.0 / 3.0);
        assert!(rel(l.energy, exact) < 1e-9, "{} vs {exact}", l.energy);
    }
    assert_eq!(s.method, Method::RootFinding);
}

#[test]
fn fractional_linear_levels() {
    let ctl = SeriesControl::default();
    let p = FqmParams::natural(1.5).unwrap();
    let s = linear_potential_levels(1.0, 4, &p, &ctl).unwrap();
    assert!(s.is_strictly_increasing() && s.levels[0].energy > 0.0);
    let z = gen_airy_zeros(3, 1.5, &ctl).unwrap();
    for &l in &z {
        assert!(gen_airy(-l, 1.5, &ctl).unwrap().abs() < 1e-9);
    }
    let g = make_grid(2048, 40.0, 0.0).unwrap();
    for n in 1..=3u32 {
        let psi = linear_potential_eigenfunction(n, 1.0, &p, g, &ctl).unwrap();
        let inside: Vec<f64> = (0..g.n_points()).filter(|&j| g.x(j) > 0.0 && g.x(j) < 12.0).map(|j| psi.values[j].re).collect();
        let nodes = inside.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
        assert_eq!(nodes as u32, n - 1, "n={n}");
        assert!(psi.values[g.index_of(0.0).unwrap() + 1].norm() < 0.05);
    }
    assert!(linear_potential_levels(-1.0, 3, &p, &ctl).is_err());
}

#[test]
fn spectrum_serializes_with_model_tag() {
    let s = infinite_well_levels(1.0, 2, &FqmParams::natural(1.5).unwrap()).unwrap();
    let j = serde_json::to_value(&s).unwrap();
    assert_eq!(j["model"]["model"], "infinite_well");
    assert_eq!(j["method"], "closed_form");
    assert_eq!(j["levels"][1]["n"], 2);
}
