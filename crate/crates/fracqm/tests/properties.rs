use std::f64::consts::PI;

use fracqm::dynamics::{evolve_free, evolve_splitstep, scaling_check};
use fracqm::eigensolve::{build_hamiltonian_matrix, eigenvalues};
use fracqm::foxh::{free_density_matrix_1d, free_kernel_1d, stable_kernel, thermal_scale, SeriesControl};
use fracqm::riesz::{apply_riesz, energy_expectation, parity_classify, random_smooth_field, Parity};
use fracqm::spectra::{bohr_atom, infinite_well_levels, oscillator_levels_semiclassical};
use fracqm::statmech::{bloch_propagate, free_density_matrix};
use fracqm::{inner_product, make_grid, FqmParams, Potential, WaveFunction};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn alpha() -> impl Strategy<Value = f64> {
    1.05f64..=2.0
}

fn l2(a: &WaveFunction, b: &WaveFunction) -> f64 {
    let (a, b) = (a.to_position(), b.to_position());
    let s: f64 = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm_sqr()).sum();
    (s * a.grid.dx()).sqrt()
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn momentum_spacing(log2n in 3u32..12, len in 0.5f64..200.0, hbar in 0.1f64..5.0) {
        let g = make_grid(1 << log2n, len, 0.0).unwrap();
        let dp = 2.0 * PI * hbar / len;
        prop_assert!((g.dp(hbar) - dp).abs() <= 1e-15 * dp);
        let ps = g.momenta_centered(hbar);
        prop_assert!(ps.windows(2).all(|w| ((w[1] - w[0]) - dp).abs() < 1e-12 * dp.max(1.0)));
    }

    #[test]
    fn parseval_and_round_trip(seed in any::<u64>(), log2n in 4u32..10, len in 2.0f64..60.0, hbar in 0.2f64..3.0) {
        let g = make_grid(1 << log2n, len, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_smooth_field(g, hbar, &mut rng);
        let phi = psi.to_momentum();
        prop_assert!((psi.norm_sqr() - phi.norm_sqr()).abs() < 1e-12 * psi.norm_sqr());
        prop_assert!(l2(&phi.to_position(), &psi) < 1e-12 * psi.norm());
    }

    #[test]
    fn riesz_plane_wave_eigenrelation(a in alpha(), k in 0usize..64, hbar in 0.3f64..2.0) {
        let g = make_grid(64, 7.0, 0.0).unwrap();
        let p = FqmParams::new(a, 1.0, hbar).unwrap();
        let psi = WaveFunction::plane_wave(g, hbar, k);
        let lam = -g.p(k, hbar).abs().powf(a);
        let got = apply_riesz(&psi, &p).to_position();
        let err = got.values.iter().zip(&psi.values).map(|(u, v)| (u - v * lam).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12 * lam.abs().max(1.0), "{err:e}");
    }

    #[test]
    fn riesz_commutes_with_reflection_and_is_nonpositive(a in alpha(), seed in any::<u64>()) {
        let g = make_grid(128, 10.0, 0.0).unwrap();
        let p = FqmParams::natural(a).unwrap();
        let psi = random_smooth_field(g, 1.0, &mut ChaCha8Rng::seed_from_u64(seed));
        let lhs = apply_riesz(&psi.reflected(), &p);
        let rhs = apply_riesz(&psi, &p).to_position().reflected();
        prop_assert!(l2(&lhs, &rhs) < 1e-11 * apply_riesz(&psi, &p).norm());
        let q = inner_product(&psi, &apply_riesz(&psi, &p)).unwrap();
        prop_assert!(q.re <= 1e-12 && q.im.abs() < 1e-10 * q.re.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn stable_density_is_even_and_positive(a in alpha(), u in 0.0f64..40.0) {
        let c = SeriesControl::default();
        let f = stable_kernel(Complex64::new(u, 0.0), a, &c).unwrap().value;
        let g = stable_kernel(Complex64::new(-u, 0.0), a, &c).unwrap().value;
        prop_assert!((f - g).norm() <= 1e-14 * f.norm());
        prop_assert!(f.re > 0.0 && f.im.abs() < 1e-12 * f.re);
    }

    #[test]
    fn time_kernel_is_even(a in 1.2f64..=2.0, x in 0.0f64..6.0, t in 0.2f64..2.0) {
        let p = FqmParams::natural(a).unwrap();
        let c = SeriesControl::default();
        let k1 = free_kernel_1d(x, t, &p, &c).unwrap().value;
        let k2 = free_kernel_1d(-x, t, &p, &c).unwrap().value;
        prop_assert!((k1 - k2).norm() <= 1e-12 * k1.norm());
    }

    #[test]
    fn kernel_scaling(a in 1.3f64..=2.0, lam in 0.3f64..3.0, t in 0.3f64..1.5) {
        let p = FqmParams::natural(a).unwrap();
        let d = scaling_check(&[0.0, 0.4, 1.1, 2.5], t, lam, &p, &SeriesControl::default()).unwrap();
        prop_assert!(d < 1e-9, "{d:e}");
    }

    #[test]
    fn wick_bridge(a in alpha(), x in 0.0f64..5.0, beta in 0.2f64..3.0) {
        // the thermal density is the stable density at the thermal scale
        let p = FqmParams::natural(a).unwrap();
        let c = SeriesControl::default();
        let s = thermal_scale(beta, &p);
        let rho = free_density_matrix_1d(x, beta, &p, &c).unwrap();
        let f = stable_kernel(Complex64::new(x / s, 0.0), a, &c).unwrap().value.re / s;
        prop_assert!((rho - f).abs() <= 1e-13 * f.abs().max(1e-300), "{rho} {f}");
    }

    #[test]
    fn free_evolution_is_unitary_and_a_group(a in alpha(), t1 in 0.0f64..3.0, t2 in 0.0f64..3.0, p0 in -3.0f64..3.0) {
        let g = make_grid(256, 40.0, 0.0).unwrap();
        let p = FqmParams::natural(a).unwrap();
        let psi = WaveFunction::gaussian(g, 1.0, -1.0, 1.0, p0);
        let a1 = evolve_free(&psi, t1, &p);
        prop_assert!((a1.norm() - 1.0).abs() < 1e-12);
        let two = evolve_free(&a1, t2, &p);
        let one = evolve_free(&psi, t1 + t2, &p);
        prop_assert!(l2(&two, &one) < 1e-11);
    }

    #[test]
    fn splitstep_conserves_norm_and_parity(a in alpha(), q2 in 0.1f64..2.0, b in 1.0f64..4.0, even in any::<bool>()) {
        let g = make_grid(128, 16.0, 0.0).unwrap();
        let p = FqmParams::natural(a).unwrap();
        let psi = if even {
            WaveFunction::from_fn(g, 1.0, |x| Complex64::new((-x * x).exp(), 0.0))
        } else {
            WaveFunction::from_fn(g, 1.0, |x| Complex64::new(x * (-x * x).exp(), 0.0))
        };
        let v = Potential::PowerLaw { q2, beta_exp: b };
        let out = evolve_splitstep(&psi, &v, 0.7, 70, &p).unwrap();
        prop_assert!((out.norm() - psi.norm()).abs() < 1e-12 * psi.norm());
        let want = if even { Parity::Even } else { Parity::Odd };
        prop_assert_eq!(parity_classify(&out.to_position(), 1e-10).unwrap(), want);
    }

    #[test]
    fn closed_form_spectra_increase(a in 1.05f64..=2.0, w in 0.2f64..5.0, beta_exp in 1.01f64..=2.0) {
        let p = FqmParams::natural(a).unwrap();
        let well = infinite_well_levels(w, 8, &p).unwrap();
        prop_assert!(well.is_strictly_increasing());
        for l in &well.levels {
            let want = well.levels[0].energy * (l.n as f64).powf(a);
            prop_assert!((l.energy - want).abs() <= 1e-12 * want);
        }
        prop_assert!(bohr_atom(1.0, 1.0, 8, &p).unwrap().spectrum().is_strictly_increasing());
        let osc = oscillator_levels_semiclassical(0.5, beta_exp, 8, &p).unwrap();
        prop_assert!(osc.is_strictly_increasing());
    }

    #[test]
    fn bohr_virial(a in 1.05f64..=2.0, z in 0.5f64..5.0, e2 in 0.2f64..3.0, n in 1u32..20) {
        let p = FqmParams::natural(a).unwrap();
        let atom = bohr_atom(z, e2, n, &p).unwrap();
        let (k, v) = (atom.kinetic(n), atom.potential(n));
        prop_assert!((a * k + v).abs() <= 1e-12 * v.abs());
        prop_assert!((k + v - atom.energy(n)).abs() <= 1e-12 * v.abs());
    }
}

proptest! {
    #![proptest_config(cfg(8))]

    #[test]
    fn variational_bound(a in alpha(), seed in any::<u64>()) {
        let g = make_grid(96, 14.0, 0.0).unwrap();
        let p = FqmParams::natural(a).unwrap();
        let h = build_hamiltonian_matrix(&Potential::harmonic(1.0), g, &p).unwrap();
        let e0 = eigenvalues(&h, 1).unwrap().energies()[0];
        let vs: Vec<Complex64> = h.potential_samples().iter().map(|&x| x.into()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..4 {
            let psi = random_smooth_field(g, 1.0, &mut rng);
            let e = energy_expectation(&psi, &vs, &p).unwrap().re;
            prop_assert!(e >= e0 - 1e-10, "{e} < {e0}");
        }
    }

    #[test]
    fn density_matrix_symmetric_positive_semigroup(a in 1.2f64..=2.0, b1 in 0.1f64..0.6, b2 in 0.1f64..0.6, q2 in 0.0f64..1.0) {
        let g = make_grid(64, 10.0, 0.0).unwrap();
        let p = FqmParams::natural(a).unwrap();
        let v = if q2 == 0.0 { Potential::Free } else { Potential::harmonic(q2) };
        let step = 0.05;
        // equal step sizes make the discrete propagator an exact semigroup
        let (n1, n2) = ((b1 / step).ceil() as usize, (b2 / step).ceil() as usize);
        let r1 = bloch_propagate(&v, g, n1 as f64 * step, n1, &p).unwrap();
        let r2 = bloch_propagate(&v, g, n2 as f64 * step, n2, &p).unwrap();
        let r12 = bloch_propagate(&v, g, (n1 + n2) as f64 * step, n1 + n2, &p).unwrap();
        let c = r1.compose(&r2).unwrap();
        prop_assert!(c.max_abs_diff(&r12) < 1e-8 * r12.kernel.amax());
        for r in [&r1, &r2, &r12] {
            prop_assert!(r.symmetry_defect() < 1e-12 * r.kernel.amax());
            prop_assert!(r.min_operator_eigenvalue() >= -1e-10);
        }
    }

    #[test]
    fn free_density_matrix_is_symmetric(a in 1.2f64..=2.0, beta in 0.3f64..2.0) {
        let g = make_grid(32, 8.0, 0.0).unwrap();
        let p = FqmParams::natural(a).unwrap();
        let r = free_density_matrix(g, beta, &p, &SeriesControl::default()).unwrap();
        prop_assert!(r.symmetry_defect() == 0.0);
        prop_assert!(r.kernel.iter().all(|v| *v > 0.0));
    }
}
