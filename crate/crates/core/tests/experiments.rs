use hermite_core::experiments::{
    approximate, decay_experiment, geometric_steps, l2_error, sobolev_seminorm, spectral_seminorm,
    time_domain_seminorm, ApproximationReport, TestFunction, DEFAULT_DOMAIN,
};
use hermite_core::kernel::{predicted_error, ErrorKernel, Mode};
use hermite_core::schemes::{SchemeKind, SchemeSpec};
use hermite_core::Error;

#[test]
fn gaussian_seminorm_closed_form_matches_quadrature() {
    for sigma in [0.7, 1.0, 1.5] {
        let f = TestFunction::Gaussian { sigma };
        for n in 0..=4u32 {
            let closed = sobolev_seminorm(&f, n as f64).unwrap();
            let quad = time_domain_seminorm(&f, n).unwrap();
            assert!((closed / quad - 1.0).abs() < 1e-10, "σ {sigma} n {n}: {closed} vs {quad}");
        }
    }
    // ‖g⁽⁴⁾‖ for σ = 1 is Γ(9/2)^{1/2} = (105√π/16)^{1/2}
    let g = sobolev_seminorm(&TestFunction::Gaussian { sigma: 1.0 }, 4.0).unwrap();
    assert!((g - (105.0 * std::f64::consts::PI.sqrt() / 16.0).sqrt()).abs() < 1e-12);
}

#[test]
fn parseval_for_seminorms() {
    for f in [TestFunction::Gaussian { sigma: 0.8 }, TestFunction::SineWindow { k: 2.0 }] {
        for n in 0..=4u32 {
            let a = spectral_seminorm(&f, n as f64).unwrap();
            let b = time_domain_seminorm(&f, n).unwrap();
            assert!((a / b - 1.0).abs() < 1e-9, "{} n {n}: {a} vs {b}", f.name());
        }
    }
    assert!(matches!(spectral_seminorm(&TestFunction::Bump { radius: 3.0 }, 2.0), Err(Error::MissingSpectrum(_))));
}

#[test]
fn halving_the_step_divides_the_error() {
    let f = TestFunction::default();
    for kind in [SchemeKind::Hermite, SchemeKind::Bspline] {
        let spec = kind.spec();
        let err = |t: f64, mode| l2_error(&f, &approximate(&f, &spec, t, DEFAULT_DOMAIN).unwrap(), mode).unwrap();
        let r = err(0.1, Mode::Function) / err(0.05, Mode::Function);
        assert!((r - 16.0).abs() < 0.5, "{kind:?} function ratio {r}");
        let r = err(0.1, Mode::Derivative) / err(0.05, Mode::Derivative);
        assert!((r - 8.0).abs() < 0.3, "{kind:?} derivative ratio {r}");
    }
}

#[test]
fn kernel_prediction_matches_measurement() {
    let f = TestFunction::default();
    let spectrum = |w: f64| f.spectrum(w).unwrap();
    let spec = SchemeSpec::hermite();
    for mode in [Mode::Function, Mode::Derivative] {
        let step = 0.05;
        let measured = l2_error(&f, &approximate(&f, &spec, step, DEFAULT_DOMAIN).unwrap(), mode).unwrap();
        let predicted = predicted_error(&spectrum, &ErrorKernel::new(&spec, mode), step).unwrap();
        assert!((predicted / measured - 1.0).abs() < 0.03, "{mode:?}: {predicted} vs {measured}");
    }
}

#[test]
fn decay_report_roundtrips_through_json() {
    let report =
        decay_experiment(&SchemeSpec::bspline(), &TestFunction::default(), &geometric_steps(0.2, 5), Mode::Function)
            .unwrap();
    assert!((report.slope - 4.0).abs() < 0.1);
    let text = serde_json::to_string(&report).unwrap();
    let back: ApproximationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}

#[test]
fn decay_experiment_rejects_bad_grids() {
    let f = TestFunction::default();
    let spec = SchemeSpec::hermite();
    let bad = [
        geometric_steps(0.2, 4),
        vec![0.2, 0.1, 0.05, 0.05, 0.01],
        vec![0.2, 0.1, 0.04, 0.02, 0.01],
        geometric_steps(2.0, 5),
    ];
    for steps in bad {
        assert!(
            matches!(decay_experiment(&spec, &f, &steps, Mode::Function), Err(Error::InvalidArgument(_))),
            "{steps:?}"
        );
    }
}
