use std::f64::consts::{PI, SQRT_2};

use hwm::momenta::mean_charge;
use hwm::num_complex::Complex64;
use hwm::specfun::{mathieu_eigen, Parity};
use hwm::spectral::*;
use hwm::waves::*;
use hwm::HwmError;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn profile(m: usize, theta: f64, f: impl Fn(f64) -> Complex64) -> RingSpectrum {
    let samples = (0..m).map(|i| f(ring_azimuth(i, m))).collect();
    RingSpectrum::new(1.0, theta, samples).unwrap()
}

fn bessel_grid(n: i32, window_lengths: f64, per_wavelength: f64) -> FieldGrid {
    let (k, theta) = (1.0, 0.5);
    let lt = 2.0 * PI / (k * f64::sin(theta));
    let dx = lt / per_wavelength;
    let side = (window_lengths * per_wavelength).round() as usize;
    let l = LabelSetBessel::new(k, theta, n).unwrap();
    sample_grid(
        &Wave::Bessel(l),
        &GridSpec::centered(side, side, dx, dx, 0.0),
    )
    .unwrap()
}

#[test]
fn bessel_grid_ring_is_a_pure_helix() {
    let g = bessel_grid(2, 20.0, 8.0);
    let ring = ring_spectrum_from_grid(&g, 1024, Window::Hann).unwrap();
    let mags: Vec<f64> = ring.samples.iter().map(|v| v.norm()).collect();
    let mean = mags.iter().sum::<f64>() / mags.len() as f64;
    assert!(mags.iter().all(|m| (m / mean - 1.0).abs() < 0.02));

    let offset =
        |i: usize| (ring.samples[i] * Complex64::from_polar(1.0, -2.0 * ring.azimuth(i))).arg();
    let base = offset(0);
    for i in 0..ring.len() {
        let d = (offset(i) - base + PI).rem_euclid(2.0 * PI) - PI;
        assert!(d.abs() < 0.05, "m={i} d={d}");
    }

    let oam = oam_spectrum(&ring, -40, 40).unwrap();
    assert!(oam.coeff(2).norm_sqr() / oam.norm >= 0.99);
    assert!((mean_charge(&oam).unwrap() - 2.0).abs() < 1e-3);
}

#[test]
fn zero_field_has_zero_spectrum() {
    let g = bessel_grid(1, 4.0, 8.0).map(|_| c(0.0, 0.0));
    let ring = ring_spectrum_from_grid(&g, 256, Window::None).unwrap();
    assert!(ring.samples.iter().all(|v| *v == c(0.0, 0.0)));
    let oam = oam_spectrum(&ring, -5, 5).unwrap();
    assert_eq!(oam.norm, 0.0);
    assert!(matches!(mean_charge(&oam), Err(HwmError::UndefinedMean)));
}

#[test]
fn plane_wave_ring_peaks_at_its_azimuth() {
    let l = LabelSetPlane::new(1.0, 0.6, PI / 4.0).unwrap();
    let g = sample_grid(&Wave::Plane(l), &GridSpec::centered(96, 96, 0.8, 0.8, 0.0)).unwrap();
    let ring = ring_spectrum_from_grid(&g, 512, Window::None).unwrap();
    let (best, _) = ring
        .samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .unwrap();
    let nearest = ((PI / 4.0 + PI) * 512.0 / (2.0 * PI)).round() as usize;
    assert_eq!(best, nearest);
}

#[test]
fn helical_profile_has_a_single_charge() {
    let ring = profile(256, 0.9, |p| Complex64::from_polar(1.0, 3.0 * p));
    let oam = oam_spectrum(&ring, -20, 20).unwrap();
    for (n, v) in oam.charges() {
        if n != 3 {
            assert!(v.norm() <= 1e-12, "n={n}");
        }
    }
}

#[test]
fn ce2_profile_decomposes_into_its_cosine_series() {
    let theta = 0.9;
    let e = mathieu_eigen(Parity::Even, 2, 1.0).unwrap();
    let ring = profile(1024, theta, |p| c(e.angular(p), 0.0));
    let oam = oam_spectrum(&ring, -20, 20).unwrap();
    // ∫ cos jφ e^{-inφ} dφ = π(δ_{n,j} + δ_{n,-j}), 2π at j = 0.
    let pre = theta.sin().sqrt() / (2.0 * PI).sqrt();
    for n in -20..=20i32 {
        let j = n.unsigned_abs() as usize;
        let a = if j < e.coeffs.len() { e.coeffs[j] } else { 0.0 };
        let want = if j == 0 {
            pre * 2.0 * PI * a
        } else {
            pre * PI * a
        };
        assert!((oam.coeff(n) - c(want, 0.0)).norm() < 1e-12, "n={n}");
        assert!((oam.coeff(n) - oam.coeff(-n)).norm() < 1e-15);
        if n % 2 != 0 {
            assert!(oam.coeff(n).norm() < 1e-14);
        }
    }

    let helix = profile(1024, theta, |p| Complex64::from_polar(1.0, 2.0 * p));
    let overlap = plancherel_overlap(&ring, &helix).unwrap();
    assert!((overlap - c(PI * e.coeffs[2], 0.0)).norm() < 1e-12);
}

#[test]
fn overlap_is_conjugate_symmetric_and_cone_checked() {
    let a = profile(256, 0.7, |p| c(p.cos(), p.sin().powi(3)));
    let b = profile(256, 0.7, |p| {
        Complex64::from_polar(1.0 + 0.2 * p.sin(), 2.0 * p)
    });
    let ab = plancherel_overlap(&a, &b).unwrap();
    let ba = plancherel_overlap(&b, &a).unwrap();
    assert!((ab - ba.conj()).norm() < 1e-14);
    let other = profile(256, 0.71, |_| c(1.0, 0.0));
    assert!(matches!(
        plancherel_overlap(&a, &other),
        Err(HwmError::ConeMismatch { .. })
    ));
}

#[test]
fn analytic_bessel_round_trip() {
    for n in -40..=40 {
        let l = LabelSetBessel::new(1.3, 1.0, n).unwrap();
        let ring = analytic_ft_bessel(&l, 1024).unwrap();
        let oam = oam_spectrum(&ring, -100, 100).unwrap();
        let above: Vec<i32> = oam
            .charges()
            .filter(|(_, v)| v.norm() > 1e-12)
            .map(|(n, _)| n)
            .collect();
        assert_eq!(above, vec![n]);
        // Unit amplitude: (2π)^{-1/2}(sinθ)^{1/2} · 2π · (2π sinθ)^{-1/2}.
        assert!((oam.coeff(n).norm() - 1.0).abs() < 1e-12);
    }
    let l = LabelSetBessel::new(1.0, 1.0, 1).unwrap();
    let ring = analytic_ft_bessel(&l, 256).unwrap();
    assert!((ring.samples[0] + ring.samples[128]).norm() < 1e-15);
}

#[test]
fn analytic_mathieu_matches_two_sided_coefficients() {
    for (parity, n, q) in [
        (Parity::Even, 0, 0.5_f64),
        (Parity::Even, 2, 1.0),
        (Parity::Even, 3, 5.0),
        (Parity::Odd, 1, 1.0),
        (Parity::Odd, 4, 5.0),
    ] {
        let (k, theta) = (1.0, 0.8);
        let f = 2.0 * q.sqrt() / (k * f64::sin(theta));
        let l = LabelSetMathieu::new(k, theta, n, parity, f).unwrap();
        let ring = analytic_ft_mathieu(&l, 1024).unwrap();
        let e = mathieu_eigen(parity, n, l.q()).unwrap();
        let two = bessel_coeffs_of_mathieu(&e, k, theta).two_sided;
        let top = -two.n_min;
        let oam = oam_spectrum(&ring, -top, top).unwrap();
        for j in -top..=top {
            assert!(
                (oam.coeff(j) - two.coeff(j)).norm() < 1e-8,
                "{parity} n={n} j={j}"
            );
        }
        assert!((two.norm - 1.0).abs() < 1e-12);
        assert!(mean_charge(&two).unwrap().abs() < 1e-10);
    }
}

#[test]
fn mathieu_coefficient_forms() {
    let e = mathieu_eigen(Parity::Even, 0, 0.0).unwrap();
    let both = bessel_coeffs_of_mathieu(&e, 1.0, 1.0);
    let nonzero: Vec<i32> = both
        .two_sided
        .charges()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(n, _)| n)
        .collect();
    assert_eq!(nonzero, vec![0]);

    let e = mathieu_eigen(Parity::Even, 2, 1.0).unwrap();
    let both = bessel_coeffs_of_mathieu(&e, 1.0, 1.0);
    for (j, a) in e.coeffs.iter().enumerate() {
        assert!((both.one_sided.coeff(j as i32) - c(a / SQRT_2, 0.0)).norm() < 1e-16);
    }
    assert_eq!(both.two_sided.coeff(2), both.two_sided.coeff(-2));

    let e = mathieu_eigen(Parity::Odd, 3, 2.0).unwrap();
    let two = bessel_coeffs_of_mathieu(&e, 1.0, 1.0).two_sided;
    for j in 1..e.coeffs.len() as i32 {
        assert_eq!(two.coeff(-j), two.coeff(j).conj());
    }
}

#[test]
fn nyquist_and_range_errors() {
    let l = LabelSetBessel::new(4.0, 1.2, 0).unwrap();
    let g = sample_grid(&Wave::Bessel(l), &GridSpec::centered(32, 32, 1.0, 1.0, 0.0)).unwrap();
    let err = ring_spectrum_from_grid(&g, 256, Window::None).unwrap_err();
    assert!(matches!(err, HwmError::Range { .. }), "{err}");

    let ring = profile(256, 1.0, |_| c(1.0, 0.0));
    assert!(matches!(
        oam_spectrum(&ring, -128, 128),
        Err(HwmError::Range { .. })
    ));
    assert!(oam_spectrum(&ring, -128, 127).is_ok());
    assert!(RingSpectrum::new(1.0, 1.0, vec![c(0.0, 0.0); 300]).is_err());
    assert!(RingSpectrum::new(1.0, 1.0, vec![c(0.0, 0.0); 128]).is_err());
}

fn grid_from(values: Vec<Complex64>) -> FieldGrid {
    let meta = FieldMeta {
        k: 1.0,
        theta: 0.7,
        z_plane: 0.3,
        description: "random".into(),
    };
    FieldGrid::new(16, 16, 0.5, 0.6, -4.0, -4.5, values, meta).unwrap()
}

fn values() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b)), 256)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_extraction_is_linear(
        u in values(),
        v in values(),
        (ar, ai, br, bi) in (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64),
    ) {
        let (alpha, beta) = (c(ar, ai), c(br, bi));
        let mixed: Vec<Complex64> = u.iter().zip(&v).map(|(a, b)| alpha * a + beta * b).collect();
        let ru = ring_spectrum_from_grid(&grid_from(u), 256, Window::None).unwrap();
        let rv = ring_spectrum_from_grid(&grid_from(v), 256, Window::None).unwrap();
        let rm = ring_spectrum_from_grid(&grid_from(mixed), 256, Window::None).unwrap();
        let combined = ru.combine(alpha, &rv, beta).unwrap();
        let scale = rm.samples.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for (a, b) in rm.samples.iter().zip(&combined.samples) {
            prop_assert!((a - b).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn parseval_holds_for_any_ring(samples in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c(a, b)), 256), theta in 0.1..3.0f64) {
        let ring = RingSpectrum::new(1.0, theta, samples).unwrap();
        let oam = oam_spectrum(&ring, -128, 127).unwrap();
        let want = theta.sin() * parseval_norm(&ring);
        prop_assert!((oam.norm - want).abs() <= 1e-12 * want);
    }
}
