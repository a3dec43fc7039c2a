use std::f64::consts::PI;

use hermite_core::basis::{
    bspline, eval_generator, eval_generator_deriv, fourier_generator, interlaced, measure_support, Generator,
};
use hermite_core::quadrature;
use num_complex::Complex64;
use proptest::prelude::*;

/// β of order `order` as the `order`-fold convolution of the unit box, by
/// nested Gauss quadrature split at the kinks.
fn box_convolution(order: u32, t: f64) -> f64 {
    if order == 1 {
        return if (0.0..1.0).contains(&t) { 1.0 } else { 0.0 };
    }
    // ∫_0^1 β_{order-1}(t - s) ds, integrand has kinks where t - s is an integer
    let frac = t - t.floor();
    let mut breaks = vec![0.0];
    if frac > 0.0 {
        breaks.push(frac);
    }
    breaks.push(1.0);
    quadrature::over_breaks(&breaks, |s| box_convolution(order - 1, t - s))
}

#[test]
fn cox_de_boor_matches_box_convolution() {
    for order in 1..=4 {
        for i in 0..=40 {
            let t = -0.5 + i as f64 * 0.1237;
            let a = bspline::value(order, t);
            let b = box_convolution(order, t);
            assert!((a - b).abs() < 1e-13, "order {order}, t {t}: {a} vs {b}");
        }
    }
    assert!((box_convolution(4, 2.0) - 2.0 / 3.0).abs() < 1e-14);
}

#[test]
fn bspline_derivative_finite_difference() {
    let h = 1e-6;
    let fd = (eval_generator(Generator::BSpline(4), 1.0 + h).unwrap()
        - eval_generator(Generator::BSpline(4), 1.0 - h).unwrap())
        / (2.0 * h);
    assert!((eval_generator_deriv(Generator::BSpline(4), 1.0).unwrap() - 0.5).abs() < 1e-15);
    assert!((fd - 0.5).abs() < 1e-5);
}

fn quadrature_transform(g: Generator, omega: f64) -> Complex64 {
    let (lo, hi, panels) = match g {
        Generator::Phi1 | Generator::Phi2 => (-1.0, 1.0, 2 * (1 + omega.abs() as usize)),
        Generator::BSpline(l) => (0.0, l as f64, l as usize * (1 + omega.abs() as usize)),
        _ => (-40.0, 40.0, 80 * (1 + omega.abs() as usize / 4)),
    };
    let re = quadrature::composite(lo, hi, panels, |t| eval_generator(g, t).unwrap() * (omega * t).cos());
    let im = quadrature::composite(lo, hi, panels, |t| -eval_generator(g, t).unwrap() * (omega * t).sin());
    Complex64::new(re, im)
}

#[test]
fn fourier_matches_quadrature_oracle() {
    let ids = [
        Generator::Phi1,
        Generator::Phi2,
        Generator::BSpline(3),
        Generator::BSpline(4),
        Generator::Interlaced1,
        Generator::Interlaced2,
    ];
    for g in ids {
        for i in -100..=100 {
            let w = i as f64 * 0.5 + 0.013;
            let a = fourier_generator(g, w);
            let b = quadrature_transform(g, w);
            assert!((a - b).norm() < 1e-10, "{g:?} at {w}: {a} vs {b}");
        }
    }
}

#[test]
fn hermite_transform_dc_and_taylor() {
    assert!((fourier_generator(Generator::Phi1, 0.0).re - 1.0).abs() < 1e-15);
    assert_eq!(fourier_generator(Generator::Phi2, 0.0).norm(), 0.0);
    // 1 - ω²/15 + ω⁴/560 and -j(ω/15 - ω³/315)
    let w = 1e-3;
    assert!((fourier_generator(Generator::Phi1, w).re - (1.0 - w * w / 15.0 + w.powi(4) / 560.0)).abs() < 1e-16);
    assert!((fourier_generator(Generator::Phi2, w).im + (w / 15.0 - w.powi(3) / 315.0)).abs() < 1e-17);
}

#[test]
fn interlaced_dc_value_from_time_domain() {
    let area = quadrature::composite(-40.0, 40.0, 160, |t| eval_generator(Generator::Interlaced1, t).unwrap());
    assert!((area - 2.0).abs() < 1e-12);
    assert!((fourier_generator(Generator::Interlaced1, 0.0).re - 2.0).abs() < 1e-13);
    // the printed closed form integrates to 3/2
    assert!((interlaced::printed_fourier(0, 1e-4).re - 1.5).abs() < 1e-8);
}

#[test]
fn interlaced_partition_of_unity() {
    for i in 0..=200 {
        let t = -1.0 + i as f64 * 0.01;
        let s: f64 = (-30..=30).map(|k| eval_generator(Generator::Interlaced1, t - 2.0 * k as f64).unwrap()).sum();
        assert!((s - 1.0).abs() < 1e-12, "t {t}: {s}");
    }
}

#[test]
fn partition_of_unity_hermite() {
    for i in 0..=2000 {
        let t = -1.0 + i as f64 * 1e-3;
        let s: f64 = (-5..=5).map(|k| eval_generator(Generator::Phi1, t - k as f64).unwrap()).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
}

#[test]
fn measured_supports() {
    let s = measure_support(Generator::Phi1, 1e-12).unwrap();
    assert_eq!((s.lo, s.hi), (-1.0, 1.0));
    let b = measure_support(Generator::BSpline(4), 1e-12).unwrap();
    assert_eq!((b.lo, b.hi), (0.0, 4.0));
    let i = measure_support(Generator::Interlaced1, 1e-8).unwrap();
    assert!(i.len() > 8.0 && i.len() < 40.0);
}

proptest! {
    #[test]
    fn hermite_transforms_have_parity(w in -60.0f64..60.0) {
        let a = fourier_generator(Generator::Phi1, w);
        let b = fourier_generator(Generator::Phi1, -w);
        prop_assert!(a.im.abs() < 1e-12 && (a - b).norm() < 1e-12);
        let c = fourier_generator(Generator::Phi2, w);
        let d = fourier_generator(Generator::Phi2, -w);
        prop_assert!(c.re.abs() < 1e-12 && (c + d).norm() < 1e-12);
    }

    #[test]
    fn generators_vanish_outside_support(t in 1.0f64..50.0) {
        prop_assert_eq!(eval_generator(Generator::Phi1, t).unwrap(), 0.0);
        prop_assert_eq!(eval_generator(Generator::Phi2, -t).unwrap(), 0.0);
        prop_assert_eq!(eval_generator(Generator::BSpline(4), 3.0 + t).unwrap(), 0.0);
        prop_assert_eq!(eval_generator(Generator::BSpline(4), -t).unwrap(), 0.0);
    }

    #[test]
    fn interlaced_transform_conjugate_symmetric(w in 0.0f64..40.0) {
        for i in 0..2 {
            let a = interlaced::fourier(i, w);
            let b = interlaced::fourier(i, -w);
            prop_assert!((a - b.conj()).norm() < 1e-12);
        }
        let _ = PI;
    }
}
