use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use hwm::specfun::*;
use hwm::HwmError;

fn eig(parity: Parity, n: u32, q: f64) -> MathieuEigen {
    mathieu_eigen(parity, n, q).unwrap()
}

/// Relative ODE residual of the angular equation on a 256-point grid.
fn angular_residual(e: &MathieuEigen) -> f64 {
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    let mut residuals = Vec::new();
    for i in 0..256 {
        let eta = 2.0 * PI * i as f64 / 256.0;
        let y = e.angular(eta);
        let ypp = e.angular_second_derivative(eta);
        let pot = (e.char_value - 2.0 * e.q * (2.0 * eta).cos()) * y;
        residuals.push((ypp + pot).abs());
        scale = scale.max(ypp.abs()).max(pot.abs());
    }
    for r in residuals {
        worst = worst.max(r / scale);
    }
    worst
}

#[test]
fn q_zero_limits() {
    for n in 0..=8u32 {
        let ce = eig(Parity::Even, n, 0.0);
        assert!((ce.char_value - (n * n) as f64).abs() < 1e-10);
        for i in 0..32 {
            let eta = -PI + i as f64 * 0.2;
            let want = if n == 0 {
                1.0 / SQRT_2
            } else {
                (n as f64 * eta).cos()
            };
            assert!((ce.angular(eta) - want).abs() < 1e-10);
        }
        if n > 0 {
            let se = eig(Parity::Odd, n, 0.0);
            assert!((se.char_value - (n * n) as f64).abs() < 1e-10);
            for i in 0..32 {
                let eta = -PI + i as f64 * 0.2;
                assert!((se.angular(eta) - (n as f64 * eta).sin()).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn even_order_two_at_q_zero_is_a_unit_vector() {
    let e = eig(Parity::Even, 2, 0.0);
    assert_eq!(e.char_value, 4.0);
    for (j, c) in e.coeffs.iter().enumerate() {
        let want = if j == 2 { 1.0 } else { 0.0 };
        assert_eq!(*c, want, "j={j}");
    }
}

#[test]
fn characteristic_values_converge_under_truncation() {
    // Two independent truncations of the recurrence matrix.
    let a0_small = mathieu_eigen_with_truncation(Parity::Even, 0, 1.0, 50).unwrap();
    let a0_large = mathieu_eigen_with_truncation(Parity::Even, 0, 1.0, 200).unwrap();
    assert!((a0_small.char_value - a0_large.char_value).abs() < 1e-10);
    let b1_small = mathieu_eigen_with_truncation(Parity::Odd, 1, 1.0, 50).unwrap();
    let b1_large = mathieu_eigen_with_truncation(Parity::Odd, 1, 1.0, 200).unwrap();
    assert!((b1_small.char_value - b1_large.char_value).abs() < 1e-10);

    // Regression anchors frozen from the N = 200 runs above.
    assert!((a0_large.char_value - -0.455_138_604_107_414_2).abs() < 1e-12);
    assert!((b1_large.char_value - -0.110_248_816_992_095_2).abs() < 1e-12);

    let a1 = eig(Parity::Even, 1, 1.0).char_value;
    assert!(a0_large.char_value < b1_large.char_value && b1_large.char_value < a1);
}

#[test]
fn characteristic_values_interlace() {
    for &q in &[0.5, 1.0, 5.0, 25.0] {
        let mut seq = vec![eig(Parity::Even, 0, q).char_value];
        for n in 1..=10 {
            seq.push(eig(Parity::Odd, n, q).char_value);
            seq.push(eig(Parity::Even, n, q).char_value);
        }
        // For high orders at small q the gap a_n - b_n ~ 2(q/4)^n/((n-1)!)^2
        // drops below one ulp; there the pair may only tie.
        for w in seq.windows(2) {
            let ulps = 4.0 * f64::EPSILON * w[1].abs();
            assert!(w[0] < w[1] || (w[0] - w[1]).abs() <= ulps, "q={q}: {seq:?}");
        }
    }
}

#[test]
fn normalization_and_sign_conventions() {
    for &q in &[0.0, 0.5, 1.0, 5.0, 25.0] {
        for n in 0..=10u32 {
            for parity in [Parity::Even, Parity::Odd] {
                if parity == Parity::Odd && n == 0 {
                    continue;
                }
                let e = eig(parity, n, q);
                let mut sum: f64 = e.coeffs.iter().map(|c| c * c).sum();
                if parity == Parity::Even && n % 2 == 0 {
                    sum += e.coeffs[0] * e.coeffs[0];
                }
                assert!((sum - 1.0).abs() < 1e-12, "{parity} n={n} q={q}: {sum}");

                let first = e.class.first_harmonic() as usize;
                for (j, c) in e.coeffs.iter().enumerate() {
                    if j < first || (j - first) % 2 == 1 {
                        assert_eq!(*c, 0.0);
                    }
                }
                let peak = e
                    .coeffs
                    .iter()
                    .cloned()
                    .fold(0.0_f64, |m, c| m.max(c.abs()));
                let at = e.coeffs.iter().position(|c| c.abs() == peak).unwrap();
                assert!(e.coeffs[at] > 0.0);
                let last = e.coeffs[e.truncation.min(e.coeffs.len()) - 1].abs();
                assert!(last < TAIL_TOLERANCE * peak || last == 0.0);
            }
        }
    }
}

#[test]
fn coefficient_vectors_are_orthogonal_within_a_class() {
    for &q in &[0.5, 5.0] {
        for parity in [Parity::Even, Parity::Odd] {
            let start = if parity == Parity::Even { 0 } else { 2 };
            let orders: Vec<u32> = (start..=10).step_by(2).collect();
            let all: Vec<_> = orders.iter().map(|&n| eig(parity, n, q)).collect();
            for i in 0..all.len() {
                for k in i + 1..all.len() {
                    let len = all[i].coeffs.len().min(all[k].coeffs.len());
                    let mut dot: f64 = (0..len).map(|j| all[i].coeffs[j] * all[k].coeffs[j]).sum();
                    if parity == Parity::Even {
                        dot += all[i].coeffs[0] * all[k].coeffs[0];
                    }
                    assert!(dot.abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn angular_ode_residual() {
    for &q in &[0.5, 1.0, 5.0, 25.0] {
        for n in 0..=10u32 {
            let ce = eig(Parity::Even, n, q);
            assert!(angular_residual(&ce) < 1e-8, "ce_{n} q={q}");
            if n > 0 {
                let se = eig(Parity::Odd, n, q);
                assert!(angular_residual(&se) < 1e-8, "se_{n} q={q}");
            }
        }
    }
}

#[test]
fn sine_functions_vanish_at_zero() {
    for n in 1..=6 {
        for &q in &[0.0, 0.5, 3.0] {
            assert_eq!(mathieu_se(n, q, 0.0).unwrap(), 0.0);
            assert_eq!(mathieu_se_radial(n, q, 0.0).unwrap(), 0.0);
        }
    }
}

#[test]
fn angular_functions_have_period_two_pi() {
    let e = eig(Parity::Odd, 3, 2.0);
    for i in 0..20 {
        let eta = i as f64 * 0.37;
        assert!((e.angular(eta) - e.angular(eta + 2.0 * PI)).abs() < 1e-13);
    }
}

#[test]
fn ce2_squared_integrates_to_pi() {
    let e = eig(Parity::Even, 2, 1.0);
    let nodes = 4096;
    let h = 2.0 * PI / nodes as f64;
    let integral: f64 = (0..nodes)
        .map(|i| e.angular(i as f64 * h).powi(2))
        .sum::<f64>()
        * h;
    assert!((integral - PI).abs() < 1e-8);
}

#[test]
fn angular_derivative_against_finite_differences() {
    assert_eq!(
        mathieu_angular_derivative(Parity::Even, 1, 0.0, 0.0).unwrap(),
        0.0
    );
    assert!((mathieu_angular_derivative(Parity::Odd, 1, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-15);

    let e = eig(Parity::Even, 3, 1.0);
    let h = 1e-5;
    let fd = (e.angular(FRAC_PI_2 + h) - e.angular(FRAC_PI_2 - h)) / (2.0 * h);
    let exact = e.angular_derivative(FRAC_PI_2);
    assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0));
}

#[test]
fn radial_small_q_limit() {
    let v = mathieu_ce_radial(2, 1e-12, 1.0).unwrap();
    assert!((v - 2.0_f64.cosh()).abs() < 1e-8);
}

/// Classic RK4 on `y'' = (a - 2q cosh 2ξ) y`.
fn march_radial(a: f64, q: f64, y0: f64, dy0: f64, xi_end: f64) -> f64 {
    let steps = 20_000;
    let h = xi_end / steps as f64;
    let f = |xi: f64, y: f64| (a - 2.0 * q * (2.0 * xi).cosh()) * y;
    let (mut y, mut v) = (y0, dy0);
    for i in 0..steps {
        let xi = i as f64 * h;
        let k1y = v;
        let k1v = f(xi, y);
        let k2y = v + 0.5 * h * k1v;
        let k2v = f(xi + 0.5 * h, y + 0.5 * h * k1y);
        let k3y = v + 0.5 * h * k2v;
        let k3v = f(xi + 0.5 * h, y + 0.5 * h * k2y);
        let k4y = v + h * k3v;
        let k4v = f(xi + h, y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    y
}

#[test]
fn radial_series_matches_ode_marching() {
    let e = eig(Parity::Even, 0, 1.0);
    let series = e.radial(1.0).unwrap();
    let marched = march_radial(e.char_value, 1.0, e.angular(0.0), 0.0, 1.0);
    assert!((series - marched).abs() < 1e-6 * marched.abs());

    let s = eig(Parity::Odd, 3, 2.0);
    let series = s.radial(1.2).unwrap();
    let marched = march_radial(
        s.char_value,
        2.0,
        0.0,
        s.radial_derivative(0.0).unwrap(),
        1.2,
    );
    assert!((series - marched).abs() < 1e-6 * marched.abs());
}

#[test]
fn radial_ode_residual_over_supported_range() {
    for &q in &[1e-6, 0.5, 1.0, 5.0, 25.0] {
        for n in 0..=6u32 {
            for parity in [Parity::Even, Parity::Odd] {
                if parity == Parity::Odd && n == 0 {
                    continue;
                }
                let e = eig(parity, n, q);
                let xi_max = e.radial_xi_max();
                let mut res = Vec::new();
                let mut scale = 0.0_f64;
                for i in 0..=64 {
                    let xi = xi_max * i as f64 / 64.0;
                    let y = e.radial(xi).unwrap();
                    let ypp = e.radial_second_derivative(xi).unwrap();
                    let pot = (e.char_value - 2.0 * q * (2.0 * xi).cosh()) * y;
                    res.push((ypp - pot).abs());
                    scale = scale.max(ypp.abs()).max(pot.abs());
                }
                let worst = res.iter().fold(0.0_f64, |m, r| m.max(*r)) / scale;
                assert!(worst < 1e-6, "{parity} n={n} q={q}: {worst:e}");
            }
        }
    }
}

#[test]
fn radial_range_is_enforced() {
    let e = eig(Parity::Even, 0, 1.0);
    let max = e.radial_xi_max();
    assert!(e.radial(max).is_ok());
    assert!(matches!(e.radial(max + 1e-9), Err(HwmError::Range { .. })));
    assert!(matches!(e.radial(-0.1), Err(HwmError::Range { .. })));
    assert!(radial_xi_max(1e-9) <= RADIAL_XI_CAP);
}

#[test]
fn norm_constant_c0_has_a_small_q_limit() {
    let vals: Vec<f64> = [1e-6, 1e-8, 1e-10]
        .iter()
        .map(|&q| mathieu_norm_constant(Parity::Even, 0, q).unwrap())
        .collect();
    assert!((vals[0] - vals[1]).abs() < 1e-5);
    assert!((vals[1] - vals[2]).abs() < 1e-7);
    assert!((vals[2] - 1.0 / SQRT_2).abs() < 1e-9);
}

#[test]
fn norm_constant_s1_is_stable_under_truncation_doubling() {
    let s = |dim| {
        mathieu_eigen_with_truncation(Parity::Odd, 1, 1.0, dim)
            .unwrap()
            .norm_constant()
            .unwrap()
    };
    assert!((s(40) - s(80)).abs() < 1e-8);
    assert!((s(80) - mathieu_norm_constant(Parity::Odd, 1, 1.0).unwrap()).abs() < 1e-8);
}

#[test]
fn norm_constant_c2_recomposes_from_angular_values() {
    let q = 0.5;
    let ce0 = mathieu_ce(2, q, 0.0).unwrap();
    let ce_half = mathieu_ce(2, q, FRAC_PI_2).unwrap();
    let a0 = eig(Parity::Even, 2, q).coeffs[0];
    let want = ce0 * ce_half / a0;
    let got = mathieu_norm_constant(Parity::Even, 2, q).unwrap();
    assert!((got - want).abs() < 1e-12 * want.abs());
    assert!(got.is_finite() && got != 0.0);
}

#[test]
fn norm_constants_are_finite_for_positive_q() {
    for n in 0..=6u32 {
        for parity in [Parity::Even, Parity::Odd] {
            if parity == Parity::Odd && n == 0 {
                continue;
            }
            for &q in &[0.1, 1.0, 5.0] {
                let c = mathieu_norm_constant(parity, n, q).unwrap();
                assert!(c.is_finite() && c != 0.0, "{parity} n={n} q={q}");
            }
        }
    }
}

#[test]
fn norm_constants_with_inverse_root_q_reject_zero() {
    assert!(matches!(
        mathieu_norm_constant(Parity::Even, 1, 0.0),
        Err(HwmError::Domain(_))
    ));
    assert!(matches!(
        mathieu_norm_constant(Parity::Odd, 1, 0.0),
        Err(HwmError::Domain(_))
    ));
    assert!(matches!(
        mathieu_norm_constant(Parity::Odd, 2, 0.0),
        Err(HwmError::Domain(_))
    ));
}

#[test]
fn invalid_arguments() {
    assert!(matches!(
        mathieu_eigen(Parity::Odd, 0, 1.0),
        Err(HwmError::InvalidParameter(_))
    ));
    assert!(matches!(
        mathieu_eigen(Parity::Even, 0, -1.0),
        Err(HwmError::Range { .. })
    ));
}
