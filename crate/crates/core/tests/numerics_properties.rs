use proptest::prelude::*;
use squeezed_np::numerics::{
    erf, find_root, gaussian_tail, gaussian_tail_below, integrate, inv_erf, maximize_scalar,
    Interval, Region,
};

/// Composite Simpson rule for (2/sqrt(pi)) * integral_0^x exp(-t^2) dt.
fn erf_simpson(x: f64) -> f64 {
    let n = 20_000;
    let h = x / n as f64;
    let f = |t: f64| (-t * t).exp();
    let mut sum = f(0.0) + f(x);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(i as f64 * h);
    }
    std::f64::consts::FRAC_2_SQRT_PI * sum * h / 3.0
}

#[test]
fn erf_against_simpson_oracle() {
    for i in 0..=30 {
        let x = 0.2 * i as f64;
        assert!((erf(x) - erf_simpson(x)).abs() < 1e-13, "x={x}");
    }
}

#[test]
fn erf_is_odd_on_dense_grid() {
    for i in 0..1000 {
        let x = -6.0 + 12.0 * i as f64 / 999.0;
        assert!((erf(-x) + erf(x)).abs() <= 1e-14);
        assert!(erf(x).abs() <= 1.0);
    }
}

#[test]
fn erf_is_monotone() {
    let mut prev = -1.0;
    for i in 0..4000 {
        let x = -6.0 + 12.0 * i as f64 / 3999.0;
        let v = erf(x);
        assert!(v >= prev, "x={x}");
        prev = v;
    }
}

proptest! {
    #[test]
    fn inv_erf_round_trip(x in -3.0f64..3.0) {
        let back = inv_erf(erf(x)).unwrap();
        prop_assert!((back - x).abs() <= 1e-10, "x={} back={}", x, back);
    }

    #[test]
    fn inv_erf_relative_accuracy(p in -0.999_999f64..0.999_999) {
        let y = inv_erf(p).unwrap();
        let rel = (erf(y) - p).abs() / p.abs().max(1e-300);
        prop_assert!(rel <= 1e-12, "p={} rel={}", p, rel);
    }

    #[test]
    fn inv_erf_monotone(p in -0.99f64..0.99, dp in 1e-6f64..0.009) {
        prop_assert!(inv_erf(p + dp).unwrap() > inv_erf(p).unwrap());
    }

    #[test]
    fn tail_complement(x0 in -10.0f64..10.0, m in -3.0f64..3.0, s in 0.05f64..4.0) {
        let total = gaussian_tail(x0, m, s).unwrap() + gaussian_tail_below(x0, m, s).unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn quadrature_reproduces_tail(x0 in -4.0f64..4.0, m in -2.0f64..2.0, s in 0.1f64..3.0) {
        let tol = 1e-10;
        let density = |x: f64| {
            let z = (x - m) / s;
            (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
        };
        // The mapping scale has to reach the bulk of the mass.
        let scale = s + (m - x0).max(0.0);
        let q = integrate(density, Region::Above { lo: x0, scale }, tol).unwrap();
        prop_assert!((q - gaussian_tail(x0, m, s).unwrap()).abs() <= 10.0 * tol);
    }

    #[test]
    fn root_and_max_are_bit_deterministic(c in 0.1f64..0.9) {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let r1 = find_root(|x| x * x * x - c, iv, 1e-12).unwrap();
        let r2 = find_root(|x| x * x * x - c, iv, 1e-12).unwrap();
        prop_assert_eq!(r1.to_bits(), r2.to_bits());
        let m1 = maximize_scalar(|x| -(x - c).powi(2), iv, 1e-12).unwrap();
        let m2 = maximize_scalar(|x| -(x - c).powi(2), iv, 1e-12).unwrap();
        prop_assert_eq!(m1.arg.to_bits(), m2.arg.to_bits());
        prop_assert!((m1.arg - c).abs() < 1e-9);
    }
}

#[test]
fn gaussian_convolution_identity() {
    let (a, sigma, spread) = (0.8, 0.45, 0.6);
    let g = |x: f64, m: f64, s: f64| {
        (-(x - m) * (x - m) / (2.0 * s * s)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
    };
    for i in 0..25 {
        let x = -2.0 + 0.2 * i as f64;
        let conv = integrate(
            |b| g(x, b, sigma) * g(b, a, spread),
            Region::Whole {
                center: a,
                scale: spread,
            },
            1e-12,
        )
        .unwrap();
        let exact = g(x, a, sigma.hypot(spread));
        assert!((conv - exact).abs() < 1e-10, "x={x}");
    }
}
