use hermite_core::basis::{interlaced, Interval};
use hermite_core::quadrature;
use hermite_core::schemes::{tabulate_interlaced, Approximant, SchemeKind, SchemeSpec};
use proptest::prelude::*;

/// Σ a_i exp(-(t - c_i)²/(2 s_i²)) and its derivative.
#[derive(Debug, Clone)]
struct Mixture(Vec<(f64, f64, f64)>);

impl Mixture {
    fn value(&self, t: f64) -> f64 {
        self.0.iter().map(|&(a, c, s)| a * (-0.5 * ((t - c) / s).powi(2)).exp()).sum()
    }

    fn deriv(&self, t: f64) -> f64 {
        self.0.iter().map(|&(a, c, s)| -a * (t - c) / (s * s) * (-0.5 * ((t - c) / s).powi(2)).exp()).sum()
    }
}

fn mixture() -> impl Strategy<Value = Mixture> {
    proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0, 0.3f64..1.5), 1..4).prop_map(Mixture)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn hermite_interpolates_values_and_derivatives(m in mixture(), step in 0.1f64..0.6) {
        let f = |t: f64| m.value(t);
        let df = |t: f64| m.deriv(t);
        let a = Approximant::new(&SchemeSpec::hermite(), step, Interval::new(-4.0, 4.0), &f, Some(&df)).unwrap();
        for k in -(3.0 / step) as i64..=(3.0 / step) as i64 {
            let t = k as f64 * step;
            prop_assert!((a.reconstruct(t) - f(t)).abs() < 1e-13);
            prop_assert!((a.reconstruct_deriv(t) - df(t)).abs() < 1e-13);
        }
    }
}

#[test]
fn monomials_are_reproduced() {
    for kind in SchemeKind::ALL {
        let tol = if kind == SchemeKind::Interlaced { 1e-6 } else { 1e-8 };
        for ell in 0..=3i32 {
            let f = move |t: f64| t.powi(ell);
            let df = move |t: f64| if ell == 0 { 0.0 } else { ell as f64 * t.powi(ell - 1) };
            let a = Approximant::new(&kind.spec(), 1.0, Interval::new(-8.0, 8.0), &f, Some(&df)).unwrap();
            for i in 0..=300 {
                let t = -3.0 + i as f64 * 0.02;
                assert!((a.reconstruct(t) - f(t)).abs() < tol, "{kind:?} degree {ell} at {t}");
                assert!((a.reconstruct_deriv(t) - df(t)).abs() < 10.0 * tol, "{kind:?} degree {ell} at {t}");
            }
        }
    }
}

#[test]
fn scaling_consistency() {
    let s = 1.7;
    let f = |t: f64| (-(t - 0.3).powi(2)).exp();
    let df = |t: f64| -2.0 * (t - 0.3) * f(t);
    let g = |t: f64| f(t / s);
    let dg = |t: f64| df(t / s) / s;
    for kind in [SchemeKind::Hermite, SchemeKind::Bspline] {
        let step = 0.2;
        let a = Approximant::new(&kind.spec(), step, Interval::new(-6.0, 6.0), &f, Some(&df)).unwrap();
        let b = Approximant::new(&kind.spec(), s * step, Interval::new(-6.0 * s, 6.0 * s), &g, Some(&dg)).unwrap();
        for i in 0..=100 {
            let t = -3.0 + i as f64 * 0.06;
            assert!((a.reconstruct(t) - b.reconstruct(s * t)).abs() < 1e-12, "{kind:?} at {t}");
        }
    }
}

#[test]
fn tabulated_value_matches_inverse_transform() {
    let tab = tabulate_interlaced(5e-3, 20.0).unwrap();
    // (1/2π) ∫ φ̂1(ω) dω over a range where |φ̂1| < 1e-13
    let integral =
        quadrature::composite(-400.0, 400.0, 1600, |w| interlaced::fourier(0, w).re) / (2.0 * std::f64::consts::PI);
    assert!((tab.eval(0, 0.0) - integral).abs() < 1e-6, "{} vs {integral}", tab.eval(0, 0.0));
    assert!((tab.eval(0, 0.0) - 1.0).abs() < 1e-13);
}

#[test]
fn tabulation_tail_from_two_radii() {
    let small = tabulate_interlaced(1e-2, 16.0).unwrap();
    let large = tabulate_interlaced(1e-2, 30.0).unwrap();
    let beyond = large
        .values
        .iter()
        .flat_map(|v| {
            v.iter()
                .enumerate()
                .filter(|(j, _)| (-30.0 + *j as f64 * large.resolution).abs() > 16.0)
                .map(|(_, x)| x.abs())
        })
        .fold(0.0, f64::max);
    assert!(beyond < 1e-8 && beyond <= small.tail_bound);
}

#[test]
fn tabulated_partition_of_unity() {
    let tab = tabulate_interlaced(1e-2, 20.0).unwrap();
    for i in 0..=100 {
        let t = -1.0 + i as f64 * 0.0237;
        let s: f64 = (-12..=12).map(|k| tab.eval(0, t - 2.0 * k as f64)).sum();
        assert!((s - 1.0).abs() < 1e-6, "t {t}: {s}");
    }
}
