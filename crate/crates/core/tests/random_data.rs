use cylnlw::bessel::bessel_zeros;
use cylnlw::random::{pair_to_halfwave, rho_star, tail_probability, Ensemble, Flavor, TailFunctional};
use cylnlw::{build_modes, CoeffField, ModeSet, Transform};
use num_complex::Complex64;
use std::sync::Arc;

fn small_set() -> Arc<ModeSet> {
    Arc::new(build_modes(2, 1, None).unwrap())
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn complex_second_moments_and_phase_symmetry() {
    let modes = small_set();
    let ens = Ensemble::new(1.5, Flavor::ComplexHalfwave, Arc::clone(&modes), 0.0, 11).unwrap();
    let samples: Vec<CoeffField> = (0..100_000).map(|i| ens.sample_complex(i).unwrap()).collect();
    for (k, m) in modes.modes().iter().enumerate() {
        let sq: Vec<f64> = samples.iter().map(|f| f.values()[k].norm_sqr()).collect();
        let (mean, se) = mean_and_stderr(&sq);
        let want = m.z.powf(-3.0);
        assert!((mean - want).abs() <= 3.0 * se, "mode ({}, {}): {mean} vs {want} (se {se})", m.n, m.nprime);
        let re: Vec<f64> = samples.iter().map(|f| f.values()[k].re).collect();
        let im: Vec<f64> = samples.iter().map(|f| f.values()[k].im).collect();
        let (mr, sr) = mean_and_stderr(&re);
        let (mi, si) = mean_and_stderr(&im);
        assert!(Complex64::new(mr, mi).norm() <= 3.0 * sr.hypot(si));
    }
}

#[test]
fn samples_are_pure_functions_of_seed_and_index() {
    let modes = Arc::new(build_modes(6, 4, None).unwrap());
    let a = Ensemble::new(2.0, Flavor::ComplexHalfwave, Arc::clone(&modes), 0.0, 99).unwrap();
    let b = Ensemble::new(2.0, Flavor::ComplexHalfwave, Arc::clone(&modes), 0.0, 99).unwrap();
    assert_eq!(a.sample_complex(17).unwrap().values(), b.sample_complex(17).unwrap().values());
    assert_ne!(a.sample_complex(17).unwrap().values(), a.sample_complex(18).unwrap().values());
    let shuffled: Vec<_> = [5u64, 1, 3].iter().map(|&i| a.sample_complex(i).unwrap()).collect();
    assert_eq!(shuffled[1].values(), b.sample_complex(1).unwrap().values());
}

#[test]
fn cutoff_zeroes_exactly_the_low_modes() {
    let modes = Arc::new(build_modes(6, 6, None).unwrap());
    let ens = Ensemble::new(2.0, Flavor::ComplexHalfwave, Arc::clone(&modes), 8.0, 5).unwrap();
    let f = ens.sample_complex(0).unwrap();
    for (m, a) in modes.modes().iter().zip(f.values()) {
        assert_eq!(*a == Complex64::default(), m.z < 8.0, "mode ({}, {})", m.n, m.nprime);
    }
}

#[test]
fn real_pair_second_moment() {
    let modes = Arc::new(build_modes(4, 3, None).unwrap());
    let ens = Ensemble::new(2.0, Flavor::RealPair, Arc::clone(&modes), 0.0, 3).unwrap();
    for s in [0.0, 0.5] {
        let norms: Vec<f64> = (0..10_000).map(|i| ens.sample_real_pair(i).unwrap().0.hs_norm(s).powi(2)).collect();
        let (mean, se) = mean_and_stderr(&norms);
        let want = ens.expected_hs_squared(s);
        assert!((mean - want).abs() <= 3.0 * se, "s = {s}: {mean} vs {want} (se {se})");
    }
}

/// `Σ ⟨z⟩^{2s} z^{−2α}` over the full rectangle `n ≤ n_max`, `|n′| ≤ n_max`.
fn lattice_sum(lambdas: &[f64], n_max: usize, alpha: f64, s: f64) -> f64 {
    let mut total = 0.0;
    for &l in &lambdas[..n_max] {
        for np in -(n_max as i64)..=(n_max as i64) {
            let z2 = l * l + (np * np) as f64;
            total += (1.0 + z2).powf(s) * z2.powf(-alpha);
        }
    }
    total
}

#[test]
fn partial_sums_converge_below_the_threshold_and_diverge_at_it() {
    let alpha = 2.0;
    let lambdas = bessel_zeros(2048).unwrap();
    let ens = Ensemble::new(alpha, Flavor::RealPair, Arc::new(build_modes(16, 16, None).unwrap()), 0.0, 0).unwrap();
    let direct = lattice_sum(&lambdas, 16, alpha, 0.9);
    assert!((ens.expected_hs_squared(0.9) / direct - 1.0).abs() < 1e-12);

    let below: Vec<f64> =
        [16, 32, 64, 128, 256, 512, 1024, 2048].iter().map(|&n| lattice_sum(&lambdas, n, alpha, alpha - 1.1)).collect();
    let changes: Vec<f64> = below.windows(2).map(|w| w[1] / w[0] - 1.0).collect();
    assert!(changes.windows(2).all(|w| w[1] < w[0]));
    assert!(*changes.last().unwrap() < 0.05, "{changes:?}");

    let at = [16, 32].map(|n| lattice_sum(&lambdas, n, alpha, alpha - 1.0));
    assert!(at[1] / at[0] - 1.0 > 0.2);
}

#[test]
fn pair_to_halfwave_examples() {
    let modes = small_set();
    let phi = CoeffField::zeros(Arc::clone(&modes)).map(|m, _| Complex64::new(m.z.sin(), 0.0));
    let zero = CoeffField::zeros(Arc::clone(&modes));
    assert_eq!(pair_to_halfwave(&phi, &zero).unwrap().values(), phi.values());
    let z = modes.modes()[3].z;
    let mut psi = zero.clone();
    psi.values_mut()[3] = Complex64::new(z, 0.0);
    let u = pair_to_halfwave(&zero, &psi).unwrap();
    assert!((u.values()[3] - Complex64::i()).norm() < 1e-15);
    let mixed = pair_to_halfwave(&phi, &psi).unwrap();
    for (a, b) in mixed.values().iter().zip(phi.values()) {
        assert_eq!(a.re, b.re);
    }
}

#[test]
fn rho_star_examples() {
    assert_eq!(rho_star(2.0, 0.75).unwrap(), 8.0);
    assert_eq!(rho_star(2.0, 0.0).unwrap(), f64::INFINITY);
    assert_eq!(rho_star(1.25, 0.0).unwrap(), 8.0);
    assert!(rho_star(2.0, 1.0).is_err());
}

#[test]
fn scalar_gaussian_tail() {
    let modes = Arc::new(build_modes(1, 0, None).unwrap());
    let alpha = 1.5;
    let ens = Ensemble::new(alpha, Flavor::RealPair, Arc::clone(&modes), 0.0, 21).unwrap();
    let tr = Transform::for_modes(Arc::clone(&modes), 2.0).unwrap();
    let sigma = modes.modes()[0].z.powf(-alpha);
    let grid: Vec<f64> = (0..8).map(|k| sigma * (2.0 + 0.25 * k as f64)).collect();
    let report = tail_probability(&ens, &TailFunctional::SpatialLp { s: 0.0, p: 2.0 }, &tr, &grid, 100_000).unwrap();
    assert!(report.empirical_prob.windows(2).all(|w| w[1] <= w[0]));
    let exact = 1.0 / (2.0 * sigma * sigma);
    assert!((report.fitted_c / exact - 1.0).abs() < 0.2, "{} vs {exact}", report.fitted_c);
    assert!(report.warnings.is_empty());
}
