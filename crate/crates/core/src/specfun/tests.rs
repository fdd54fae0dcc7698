use super::*;
use proptest::prelude::*;

// reference values from 40-digit mpmath evaluations
include!("oracle_values.rs");

/// |got - want| relative to the local oscillation envelope sqrt(2/(pi x)),
/// so points near a zero are judged on an absolute scale.
fn env_err(got: f64, want: f64, x: f64) -> f64 {
    let envelope = (2.0 / (std::f64::consts::PI * x)).sqrt().min(1.0);
    (got - want).abs() / want.abs().max(envelope)
}

#[test]
fn order_zero_and_one_match_reference() {
    for &(x, rj0, ry0, rj1, ry1) in &J0Y0J1Y1 {
        assert!(env_err(j0(x), rj0, x) < 1e-13, "j0({x}) = {} vs {rj0}", j0(x));
        assert!(env_err(y0(x), ry0, x) < 1e-13, "y0({x}) = {} vs {ry0}", y0(x));
        assert!(env_err(j1(x), rj1, x) < 1e-13, "j1({x}) = {} vs {rj1}", j1(x));
        assert!(env_err(y1(x), ry1, x) < 1e-13, "y1({x}) = {} vs {ry1}", y1(x));
    }
}

#[test]
fn integer_order_matches_reference() {
    for &(n, x, want) in &JN {
        let got = jn(n, x);
        let err = (got - want).abs() / want.abs();
        assert!(err < 1e-12, "J_{n}({x}) = {got} vs {want} (rel {err:e})");
    }
}

#[test]
fn j0_origin_values() {
    assert_eq!(bessel_j(0, 0.0), (1.0, 0.0));
    let (v, _) = bessel_j(3, 0.0);
    assert_eq!(v, 0.0);
}

#[test]
fn j0_first_zero() {
    assert!(j0(2.404825557695773).abs() < 1e-13);
}

#[test]
fn y0_small_argument_singularity() {
    let x = 1e-6;
    let euler = 0.5772156649015329;
    let asym = 2.0 / std::f64::consts::PI * ((x / 2.0f64).ln() + euler);
    assert!((y0(x) - asym).abs() < 1e-8);
}

#[test]
fn y0_rejects_nonpositive() {
    assert!(matches!(bessel_y0(0.0), Err(SpecFunError::Domain(_))));
    assert!(matches!(bessel_y0(-1.0), Err(SpecFunError::Domain(_))));
    assert!(bessel_y0(f64::NAN).is_err());
}

#[test]
fn wronskian_j0_y0() {
    for &x in &[0.5, 5.0, 50.0, 500.0] {
        let (j, dj) = bessel_j(0, x);
        let (y, dy) = bessel_y0(x).unwrap();
        let w = j * dy - dj * y;
        let want = 2.0 / (std::f64::consts::PI * x);
        assert!((w - want).abs() < 1e-12 * want.max(1e-3), "x={x}: {w} vs {want}");
    }
}

#[test]
fn y0_first_zero_by_bisection() {
    let (mut a, mut b) = (0.5, 1.5);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if y0(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let root = 0.5 * (a + b);
    assert!((root - Y0_FIRST_ZERO).abs() < 1e-12, "{root}");
    let located = find_zeros(|x| (y0(x), -y1(x)), 0.5, 0.25, 1)[0];
    assert!((located - root).abs() < 1e-12);
}

#[test]
fn j1_at_five_matches_series() {
    // power series with exact rational coefficients, summed until negligible
    let x = 5.0f64;
    let mut term = x / 2.0;
    let mut sum = term;
    for k in 1..60 {
        term *= -(x * x / 4.0) / (k as f64 * (k + 1) as f64);
        sum += term;
    }
    assert!((j1(x) - sum).abs() < 1e-13, "{} vs {}", j1(x), sum);
    // Wronskian J1 Y0 - J0 Y1 = 2/(pi x) ties the pair together
    let w = j1(x) * y0(x) - j0(x) * y1(x);
    assert!((w - 2.0 / (std::f64::consts::PI * x)).abs() < 1e-14);
}

#[test]
fn zero_tables_match_reference() {
    for &(m, k, want) in &ZEROS {
        let table = bessel_zeros(m, k);
        assert_eq!(table.zeros.len(), k);
        let got = table.zeros[k - 1];
        assert!((got - want).abs() < 1e-13 * want, "j_{m},{k} = {got} vs {want}");
    }
    assert_eq!(bessel_zeros(0, 1).zeros[0], 2.404825557695773);
}

#[test]
fn second_zero_of_j0_by_bisection() {
    let (mut a, mut b) = (5.0, 6.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (j0(m) < 0.0) == (j0(a) < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    assert!((bessel_zeros(0, 2).zeros[1] - 5.520078110286311).abs() < 1e-13);
    assert!((a - 5.520078110286311).abs() < 1e-13);
}

#[test]
fn half_order_zero_is_pi() {
    let j_half = |x: f64| {
        let c = (2.0 / std::f64::consts::PI).sqrt();
        let v = c * x.sin() / x.sqrt();
        let d = c * (x.cos() / x.sqrt() - 0.5 * x.sin() / x.powf(1.5));
        (v, d)
    };
    let z = find_zeros(j_half, 0.5, 1.0, 2);
    assert!((z[0] - std::f64::consts::PI).abs() < 1e-14);
    assert!((z[1] - 2.0 * std::f64::consts::PI).abs() < 1e-14);
}

#[test]
fn zeros_vanish_and_interlace() {
    for m in 0..12u32 {
        let a = bessel_zeros(m, 8).zeros;
        let b = bessel_zeros(m + 1, 8).zeros;
        for k in 0..8 {
            assert!(jn(m, a[k]).abs() < 1e-13, "J_{m}({}) = {}", a[k], jn(m, a[k]));
            let (_, d) = bessel_j(m, a[k]);
            assert!((d + jn(m + 1, a[k])).abs() < 1e-12);
            if k > 0 {
                assert!(a[k] > a[k - 1]);
            }
            // j_{m,k} < j_{m+1,k} < j_{m,k+1}
            assert!(a[k] < b[k]);
            if k + 1 < 8 {
                assert!(b[k] < a[k + 1]);
            }
        }
    }
}

proptest! {
    #[test]
    fn three_term_recurrence(m in 1u32..60, x in 0.05f64..120.0) {
        let lhs = jn(m - 1, x) + jn(m + 1, x);
        let rhs = 2.0 * m as f64 / x * jn(m, x);
        let scale = jn(m - 1, x).abs().max(jn(m + 1, x).abs()).max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-3 * (2.0 / x).sqrt().min(1.0)),
            "m={} x={} lhs={} rhs={}", m, x, lhs, rhs);
    }

    #[test]
    fn derivatives_match_central_differences(m in 0u32..30, x in 0.2f64..80.0) {
        let h = 1e-6;
        let (_, d) = bessel_j(m, x);
        let fd = (jn(m, x + h) - jn(m, x - h)) / (2.0 * h);
        prop_assert!((d - fd).abs() < 1e-7);
        let (_, dy) = bessel_y0(x).unwrap();
        let fdy = (y0(x + h) - y0(x - h)) / (2.0 * h);
        prop_assert!((dy - fdy).abs() < 1e-7 * dy.abs().max(1.0));
    }
}
