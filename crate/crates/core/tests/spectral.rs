use approx::assert_abs_diff_eq;
use cylnlw::bessel::{bessel_j, bessel_zero, bessel_zeros};
use cylnlw::field::{read_snapshot, write_snapshot};
use cylnlw::modes::multiplicity_histogram;
use cylnlw::transform::{eigenfunction_eval, eigenfunction_lp_norm, RadialEigenfunction};
use cylnlw::{build_modes, CoeffField, Grid, ModeSet, PhysicalField, Transform};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn table(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split(',').map(|v| v.trim().parse().unwrap()).collect())
        .collect()
}

#[test]
fn bessel_matches_reference_table() {
    let rows = table(include_str!("data/bessel_j01.csv"));
    assert!(rows.len() > 300);
    let mut worst: f64 = 0.0;
    for row in &rows {
        let (x, j0, j1) = (row[0], row[1], row[2]);
        worst = worst.max((bessel_j(0, x).unwrap() - j0).abs());
        worst = worst.max((bessel_j(1, x).unwrap() - j1).abs());
    }
    assert!(worst <= 1e-13, "max abs error {worst:e}");
}

#[test]
fn zeros_match_reference_table() {
    let rows = table(include_str!("data/j0_zeros.csv"));
    let zeros = bessel_zeros(rows.len()).unwrap();
    for (row, &z) in rows.iter().zip(&zeros) {
        let n = row[0] as usize;
        assert!((z - row[1]).abs() <= 1e-13 * row[1].max(1.0), "n = {n}: {z} vs {}", row[1]);
        assert!(bessel_j(0, z).unwrap().abs() <= 1e-13);
    }
    assert!(zeros.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn zeros_interlace_with_j1_sign_changes() {
    let zeros = bessel_zeros(60).unwrap();
    for w in zeros.windows(2) {
        let (a, b) = (bessel_j(1, w[0]).unwrap(), bessel_j(1, w[1]).unwrap());
        assert!(a * b < 0.0, "J1 must change sign between consecutive J0 zeros");
    }
}

#[test]
fn zero_asymptotics() {
    let l100 = bessel_zero(100).unwrap();
    assert!((l100 - (100.0 * PI - PI / 4.0)).abs() < 1e-3);
    let worst =
        (1..=200).map(|n| n as f64 * (bessel_zero(n).unwrap() - (n as f64 * PI - PI / 4.0)).abs()).fold(0.0, f64::max);
    assert!(worst <= 0.05, "{worst}");
    assert!(bessel_zero(0).is_err());
}

#[test]
fn eigenfunctions_are_normalized_and_vanish_on_the_boundary() {
    let grid = Grid::new(256, 1).unwrap();
    for n in [1, 2, 7, 30, 64] {
        assert!(eigenfunction_eval(n, 1.0).unwrap().abs() < 1e-10);
        let l2 = eigenfunction_lp_norm(n, 2.0, &grid).unwrap();
        assert_abs_diff_eq!(l2, 1.0, epsilon = 1e-10);
    }
    assert_abs_diff_eq!(eigenfunction_eval(1, 0.0).unwrap(), 1.0867616361, epsilon = 1e-10);
    assert!(eigenfunction_eval(1, 1.5).is_err());
}

#[test]
fn gram_matrix_is_identity() {
    let grid = Grid::new(512, 1).unwrap();
    let rows: Vec<Vec<f64>> = (1..=64)
        .map(|n| {
            let e = RadialEigenfunction::new(n).unwrap();
            grid.r_nodes().iter().map(|&r| e.eval(r)).collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for (m, a) in rows.iter().enumerate() {
        for (n, b) in rows.iter().enumerate() {
            let ip: f64 = a.iter().zip(b).zip(grid.r_weights()).map(|((x, y), w)| x * y * w).sum();
            worst = worst.max((ip - if m == n { 1.0 } else { 0.0 }).abs());
        }
    }
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn lp_norms_at_p3_stay_bounded() {
    let grid = Grid::new(400, 1).unwrap();
    let a = eigenfunction_lp_norm(25, 3.0, &grid).unwrap();
    let b = eigenfunction_lp_norm(50, 3.0, &grid).unwrap();
    assert!((b / a - 1.0).abs() < 0.2, "{a} {b}");
}

#[test]
fn lp_norm_growth_at_p8() {
    let grid = Grid::new(800, 1).unwrap();
    let ns: Vec<usize> = (20..=200).step_by(10).collect();
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = ns.iter().map(|&n| eigenfunction_lp_norm(n, 8.0, &grid).unwrap().ln()).collect();
    let slope = fit_slope(&xs, &ys);
    assert!((slope - 0.25).abs() <= 0.05, "{slope}");
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn build_modes_examples() {
    let one = build_modes(1, 0, None).unwrap();
    assert_eq!(one.len(), 1);
    assert_abs_diff_eq!(one.modes()[0].z, 2.404825557695773, epsilon = 1e-14);
    let six = build_modes(2, 1, None).unwrap();
    assert_eq!(six.len(), 6);
    let m = six.modes()[six.index_of(1, 1).unwrap()];
    assert_abs_diff_eq!(m.z, 2.6044550222545185, epsilon = 1e-14);
    for m in six.modes() {
        assert_eq!(m.z, (m.lambda * m.lambda + (m.nprime * m.nprime) as f64).sqrt());
        assert!(m.z > 0.0);
    }
    let ball = build_modes(10, 10, Some(12.0)).unwrap();
    assert!(ball.modes().iter().all(|m| m.z <= 12.0));
    assert!(ball.len() < 10 * 21);
}

fn brute_force_histogram(k_max: usize) -> Vec<u64> {
    let bound = (k_max + 1) as f64;
    let mut counts = vec![0u64; k_max + 1];
    let mut n = 1;
    loop {
        let lambda = bessel_zero(n).unwrap();
        if lambda >= bound {
            break;
        }
        let mut np: i64 = 0;
        loop {
            let z = (lambda * lambda + (np * np) as f64).sqrt();
            if z >= bound {
                break;
            }
            let k = z.floor() as usize;
            counts[k] += if np == 0 { 1 } else { 2 };
            np += 1;
        }
        n += 1;
    }
    counts
}

#[test]
fn multiplicity_matches_brute_force() {
    let k_max = 300;
    let set = cylnlw::modes::covering_mode_set(k_max).unwrap();
    let hist = multiplicity_histogram(&set, k_max).unwrap();
    assert_eq!(hist, brute_force_histogram(k_max));
    assert_eq!(&hist[..3], &[0, 0, 3]);
}

#[test]
fn transform_of_e1_and_constant_fields() {
    let modes = Arc::new(build_modes(8, 4, None).unwrap());
    let tr = Transform::for_modes(Arc::clone(&modes), 2.0).unwrap();
    let e1 = RadialEigenfunction::new(1).unwrap();
    let field = PhysicalField::from_fn(Arc::clone(tr.grid()), |r, _| Complex64::new(e1.eval(r), 0.0));
    let c = tr.analyze(&field).unwrap();
    for (m, a) in modes.modes().iter().zip(c.values()) {
        let want = if (m.n, m.nprime) == (1, 0) { 1.0 } else { 0.0 };
        assert!((a - want).norm() <= 1e-10, "({}, {}): {a}", m.n, m.nprime);
    }
    let radial = PhysicalField::from_fn(Arc::clone(tr.grid()), |r, _| Complex64::new(1.0 - r * r, 0.0));
    let c = tr.analyze(&radial).unwrap();
    for (m, a) in modes.modes().iter().zip(c.values()) {
        if m.nprime != 0 {
            assert!(a.norm() <= 1e-12);
        }
    }
    let zero = tr.synthesize(&CoeffField::zeros(Arc::clone(&modes))).unwrap();
    assert!(zero.values().iter().all(|v| *v == Complex64::default()));
}

#[test]
fn delta_synthesizes_pointwise() {
    let modes = Arc::new(build_modes(6, 3, None).unwrap());
    let tr = Transform::for_modes(Arc::clone(&modes), 2.0).unwrap();
    let f = tr.synthesize(&CoeffField::delta(Arc::clone(&modes), 4, -2).unwrap()).unwrap();
    let e = RadialEigenfunction::new(4).unwrap();
    let grid = tr.grid();
    for (i, &r) in grid.r_nodes().iter().enumerate() {
        for (j, &x) in grid.x3_nodes().iter().enumerate() {
            let want = Complex64::cis(2.0 * PI * -2.0 * x) * e.eval(r);
            assert!((f.at(i, j) - want).norm() <= 1e-10);
        }
    }
}

#[test]
fn snapshot_file_round_trip() {
    let modes = Arc::new(build_modes(5, 3, Some(14.0)).unwrap());
    let f = CoeffField::zeros(Arc::clone(&modes)).map(|m, _| Complex64::new(m.z, -(m.n as f64)));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.bin");
    write_snapshot(&f, std::fs::File::create(&path).unwrap()).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), 32 + 16 * 5 * 7);
    assert_eq!(&bytes[..8], b"CYLNLWCF");
    let back = read_snapshot(Arc::clone(&modes), std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back.values(), f.values());
    let other = Arc::new(ModeSet::new(5, 2, None).unwrap());
    assert!(read_snapshot(other, std::fs::File::open(&path).unwrap()).is_err());
}

fn coeffs_strategy(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip_and_parseval(values in coeffs_strategy(7 * 9)) {
        let modes = Arc::new(build_modes(7, 4, None).unwrap());
        let tr = Transform::for_modes(Arc::clone(&modes), 2.0).unwrap();
        let f = CoeffField::from_values(
            Arc::clone(&modes),
            values.iter().map(|&(a, b)| Complex64::new(a, b)).collect(),
        ).unwrap();
        let phys = tr.synthesize(&f).unwrap();
        let back = tr.analyze(&phys).unwrap();
        let scale = f.l2_norm().max(1e-300);
        prop_assert!(back.distance(&f).unwrap() / scale <= 1e-9);
        prop_assert!((phys.lp_norm(2.0) - f.l2_norm()).abs() <= 1e-8 * scale.max(1.0));
    }

    #[test]
    fn synthesis_is_linear(
        a in coeffs_strategy(4 * 5),
        b in coeffs_strategy(4 * 5),
        s in -2.0f64..2.0,
        t in -2.0f64..2.0,
    ) {
        let modes = Arc::new(build_modes(4, 2, None).unwrap());
        let tr = Transform::for_modes(Arc::clone(&modes), 2.0).unwrap();
        let mk = |v: &[(f64, f64)]| CoeffField::from_values(
            Arc::clone(&modes),
            v.iter().map(|&(x, y)| Complex64::new(x, y)).collect(),
        ).unwrap();
        let (fa, fb) = (mk(&a), mk(&b));
        let combo = fa.scale(Complex64::new(s, 0.0)).add(&fb.scale(Complex64::new(t, 0.0))).unwrap();
        let lhs = tr.synthesize(&combo).unwrap();
        let (pa, pb) = (tr.synthesize(&fa).unwrap(), tr.synthesize(&fb).unwrap());
        for ((l, x), y) in lhs.values().iter().zip(pa.values()).zip(pb.values()) {
            prop_assert!((l - (x * s + y * t)).norm() <= 1e-12);
        }
    }
}
