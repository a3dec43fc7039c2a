//! Test functions, L2 and Sobolev norms, convergence experiments and the
//! audits behind the comparison table.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{eval_generator, measure_support, Generator, GeneratorSet, Interval};
use crate::error::{Error, Result};
use crate::kernel::{self, asymptotic_constant, ErrorKernel, Mode};
use crate::quadrature;
use crate::schemes::{Approximant, SamplingFunctional, SchemeKind, SchemeSpec};
use crate::sequences::{hermite_reproduction, ReproductionTarget};

/// Smooth, effectively compactly supported test functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    /// `exp(-t² / 2σ²)`.
    Gaussian { sigma: f64 },
    /// `exp(1 - 1/(1 - (t/r)²))` on `|t| < r`.
    Bump { radius: f64 },
    /// `sin(kt) exp(-t²/2)`.
    SineWindow { k: f64 },
}

impl Default for TestFunction {
    fn default() -> Self {
        TestFunction::Gaussian { sigma: 1.0 }
    }
}

/// Level below which a test function counts as zero.
const NEGLIGIBLE: f64 = 1e-14;

/// Probabilists' Hermite polynomial `He_n(x)`.
fn hermite_poly(n: u32, x: Complex64) -> Complex64 {
    let (mut a, mut b) = (Complex64::new(1.0, 0.0), x);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = x * b - a * k as f64;
        a = b;
        b = c;
    }
    b
}

impl TestFunction {
    pub fn name(&self) -> String {
        match self {
            TestFunction::Gaussian { sigma } => format!("gaussian(sigma={sigma})"),
            TestFunction::Bump { radius } => format!("bump(r={radius})"),
            TestFunction::SineWindow { k } => format!("sine_window(k={k})"),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match *self {
            TestFunction::Gaussian { sigma } => (-0.5 * (t / sigma).powi(2)).exp(),
            TestFunction::Bump { radius } => {
                let u = t / radius;
                if u.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            }
            TestFunction::SineWindow { k } => (k * t).sin() * (-0.5 * t * t).exp(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            TestFunction::Bump { radius } => {
                let u = t / radius;
                if u.abs() < 1.0 {
                    let d = 1.0 - u * u;
                    self.value(t) * (-2.0 * u / radius) / (d * d)
                } else {
                    0.0
                }
            }
            _ => self.nth_derivative(1, t).expect("analytic derivatives"),
        }
    }

    /// `f^{(n)}(t)` where a closed form exists.
    pub fn nth_derivative(&self, n: u32, t: f64) -> Result<f64> {
        match *self {
            TestFunction::Gaussian { sigma } => {
                let x = t / sigma;
                let he = hermite_poly(n, Complex64::new(x, 0.0)).re;
                Ok((-1.0 / sigma).powi(n as i32) * he * self.value(t))
            }
            TestFunction::SineWindow { k } => {
                // f = Im e^{-k²/2} e^{-(t - jk)²/2}
                let z = Complex64::new(t, -k);
                let g = (-0.5 * z * z).exp() * (-0.5 * k * k).exp();
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                Ok((sign * hermite_poly(n, z) * g).im)
            }
            TestFunction::Bump { .. } => match n {
                0 => Ok(self.value(t)),
                1 => Ok(self.derivative(t)),
                _ => Err(Error::UnsupportedOperation(format!("derivative of order {n} of {}", self.name()))),
            },
        }
    }

    /// `|f̂(ω)|`, if available in closed form.
    pub fn spectrum(&self, omega: f64) -> Option<f64> {
        let root = (2.0 * PI).sqrt();
        match *self {
            TestFunction::Gaussian { sigma } => Some(sigma * root * (-0.5 * (sigma * omega).powi(2)).exp()),
            TestFunction::SineWindow { k } => {
                let a = (-0.5 * (omega - k).powi(2)).exp();
                let b = (-0.5 * (omega + k).powi(2)).exp();
                Some(0.5 * root * (a - b).abs())
            }
            TestFunction::Bump { .. } => None,
        }
    }

    /// `|f(t)| < 1e-14` for `|t| > radius`.
    pub fn radius(&self) -> f64 {
        let decay = (2.0 * (1.0 / NEGLIGIBLE).ln()).sqrt();
        match *self {
            TestFunction::Gaussian { sigma } => sigma * decay,
            TestFunction::Bump { radius } => radius,
            TestFunction::SineWindow { .. } => decay,
        }
    }
}

impl std::str::FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(TestFunction::Gaussian { sigma: 1.0 }),
            "bump" => Ok(TestFunction::Bump { radius: 3.0 }),
            "sine_window" | "sine-window" => Ok(TestFunction::SineWindow { k: 2.0 }),
            other => Err(Error::InvalidArgument(format!("unknown test function '{other}'"))),
        }
    }
}

/// Default evaluation domain of the experiments.
pub const DEFAULT_DOMAIN: Interval = Interval { lo: -10.0, hi: 10.0 };

/// Approximation of `f` by `scheme` at step `step` on `domain`.
pub fn approximate(f: &TestFunction, scheme: &SchemeSpec, step: f64, domain: Interval) -> Result<Approximant> {
    let value = |t: f64| f.value(t);
    let deriv = |t: f64| f.derivative(t);
    Approximant::new(scheme, step, domain, &value, Some(&deriv))
}

/// `‖f - Q_T f‖` or `‖f' - (Q_T f)'‖` on the approximant's domain.
pub fn l2_error(f: &TestFunction, a: &Approximant, mode: Mode) -> Result<f64> {
    let r = f.radius();
    if a.domain.lo > -r || a.domain.hi < r {
        return Err(Error::DomainCoverage { lo: a.domain.lo, hi: a.domain.hi, radius: r });
    }
    let knots = a.knots();
    let sq = quadrature::over_breaks(&knots, |t| {
        let d = match mode {
            Mode::Function => f.value(t) - a.reconstruct(t),
            Mode::Derivative => f.derivative(t) - a.reconstruct_deriv(t),
        };
        d * d
    });
    Ok(sq.sqrt())
}

/// `‖f^{(γ)}‖_{L2}`, fractional orders included.
pub fn sobolev_seminorm(f: &TestFunction, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidArgument(format!("order must be >= 0, got {gamma}")));
    }
    match *f {
        TestFunction::Gaussian { sigma } => Ok((libm::tgamma(gamma + 0.5) * sigma.powf(1.0 - 2.0 * gamma)).sqrt()),
        _ => spectral_seminorm(f, gamma),
    }
}

/// `((1/2π) ∫ |ω|^{2γ} |f̂(ω)|² dω)^{1/2}` by quadrature.
pub fn spectral_seminorm(f: &TestFunction, gamma: f64) -> Result<f64> {
    if f.spectrum(0.0).is_none() {
        return Err(Error::MissingSpectrum(f.name()));
    }
    let density = |w: f64| w.abs().powf(2.0 * gamma) * f.spectrum(w).unwrap_or(0.0).powi(2);
    let mut cutoff: f64 = 8.0;
    while density(cutoff) + density(-cutoff) > 1e-40 {
        cutoff *= 1.5;
    }
    let panels = (8.0 * cutoff).ceil() as usize;
    // the kink of |ω|^{2γ} sits on a panel boundary
    let half =
        quadrature::composite(0.0, cutoff, panels, density) + quadrature::composite(-cutoff, 0.0, panels, density);
    Ok((half / (2.0 * PI)).sqrt())
}

/// `‖f^{(n)}‖_{L2}` by time-domain quadrature.
pub fn time_domain_seminorm(f: &TestFunction, n: u32) -> Result<f64> {
    let r = f.radius() + 2.0;
    let mut err = None;
    let v = quadrature::composite(-r, r, 64, |t| match f.nth_derivative(n, t) {
        Ok(d) => d * d,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(v.sqrt()),
    }
}

/// Outcome of a convergence experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    pub scheme: String,
    pub mode: Mode,
    pub function: String,
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `log error` against `log T`.
    pub slope: f64,
    /// `error / (‖f⁽⁴⁾‖ T^L)` at the smallest step.
    pub constant: f64,
    /// Kernel constant of the scheme.
    pub reference_constant: f64,
    /// Kernel constant of the orthogonal projection.
    pub optimal_constant: f64,
    /// `reference_constant / optimal_constant`.
    pub ratio_to_optimal: f64,
    /// Local order from the two smallest steps.
    pub richardson_order: f64,
}

/// `n` steps `first, first·q, ...` with `q = 1/2`.
pub fn geometric_steps(first: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| first * 0.5f64.powi(i as i32)).collect()
}

/// Measures the error decay of `scheme` on `f`.
pub fn decay_experiment(
    scheme: &SchemeSpec,
    f: &TestFunction,
    steps: &[f64],
    mode: Mode,
) -> Result<ApproximationReport> {
    if steps.len() < 5 {
        return Err(Error::InvalidArgument(format!("need at least 5 steps, got {}", steps.len())));
    }
    if steps.iter().any(|&t| !(t > 0.0)) || steps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("steps must be positive and strictly decreasing".into()));
    }
    let q = steps[1] / steps[0];
    if steps.windows(2).any(|w| ((w[1] / w[0]) / q - 1.0).abs() > 1e-9) {
        return Err(Error::InvalidArgument("steps must form a geometric sequence".into()));
    }
    if 2.0 * f.radius() / steps[0] < 20.0 {
        return Err(Error::InvalidArgument(format!(
            "largest step {} does not resolve {} (fewer than 20 nodes)",
            steps[0],
            f.name()
        )));
    }
    let errors: Vec<f64> = steps
        .par_iter()
        .map(|&t| approximate(f, scheme, t, DEFAULT_DOMAIN).and_then(|a| l2_error(f, &a, mode)))
        .collect::<Result<_>>()?;
    if errors.windows(2).any(|w| !(w[1] < w[0])) || errors.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::ExperimentInvalid(format!("errors are not strictly decreasing: {errors:?}")));
    }
    let xs: Vec<f64> = steps.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let slope = kernel::least_squares(&xs, &ys, 2)[1];
    let rate = mode.rate(scheme.order());
    let norm = sobolev_seminorm(f, scheme.order() as f64)?;
    let n = steps.len();
    let constant = errors[n - 1] / (norm * steps[n - 1].powi(rate as i32));
    let richardson_order = (errors[n - 2] / errors[n - 1]).ln() / (steps[n - 2] / steps[n - 1]).ln();
    let reference = asymptotic_constant(&ErrorKernel::new(scheme, mode), rate)?.constant;
    let optimal = asymptotic_constant(&ErrorKernel::dual(scheme, mode), rate)?.constant;
    Ok(ApproximationReport {
        scheme: scheme.name().into(),
        mode,
        function: f.name(),
        steps: steps.to_vec(),
        errors,
        slope,
        constant,
        reference_constant: reference,
        optimal_constant: optimal,
        ratio_to_optimal: reference / optimal,
        richardson_order,
    })
}

// ---------------------------------------------------------------------------
// interpolation and support measurements

/// Largest mismatch between the functionals of `f` and of `Q_T f` at the
/// sample points inside `[-4, 4]`, for a Gaussian at `T = 0.25`.
pub fn interpolation_deviation(scheme: &SchemeSpec) -> Result<f64> {
    let f = TestFunction::default();
    let step = 0.25;
    let a = approximate(&f, scheme, step, Interval::new(-6.0, 6.0))?;
    let n = scheme.stride() as f64;
    let mut worst = 0.0f64;
    for functional in &scheme.sampling {
        for k in -8i64..=8 {
            let dev = match functional {
                SamplingFunctional::DiracComb { shift, .. } => {
                    let t = step * (n * k as f64 + shift);
                    (a.reconstruct(t) - f.value(t)).abs()
                }
                SamplingFunctional::DiracDerivComb { shift, .. } => {
                    let t = step * (n * k as f64 + shift);
                    step * (a.reconstruct_deriv(t) - f.derivative(t)).abs()
                }
            };
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

/// Whether the measured support of every generator stays the same when the
/// threshold drops from 1e-14 to the smallest positive double.
pub fn has_finite_support(basis: &GeneratorSet) -> Result<bool> {
    for &g in &basis.generators {
        let a = measure_support(g, 1e-14)?;
        let b = measure_support(g, f64::MIN_POSITIVE)?;
        if a != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Measured supports and reproduction residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportAudit {
    pub threshold: f64,
    pub phi1: Interval,
    pub phi2: Interval,
    pub beta2: Interval,
    pub beta3: Interval,
    pub hermite_sum: f64,
    pub bspline_sum: f64,
    pub beta2_residual: f64,
    pub beta3_residual: f64,
}

pub fn support_audit() -> Result<SupportAudit> {
    let threshold = 1e-12;
    let phi1 = measure_support(Generator::Phi1, threshold)?;
    let phi2 = measure_support(Generator::Phi2, threshold)?;
    let beta2 = measure_support(Generator::BSpline(3), threshold)?;
    let beta3 = measure_support(Generator::BSpline(4), threshold)?;
    let r2 = hermite_reproduction(ReproductionTarget::Beta2)?;
    let r3 = hermite_reproduction(ReproductionTarget::Beta3)?;
    Ok(SupportAudit {
        threshold,
        phi1,
        phi2,
        beta2,
        beta3,
        hermite_sum: phi1.len() + phi2.len(),
        bspline_sum: beta2.len() + beta3.len(),
        beta2_residual: r2.residual(-1.0, 4.0, 1e-3),
        beta3_residual: r3.residual(-1.0, 5.0, 1e-3),
    })
}

/// One scheme of the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub scheme: String,
    pub interpolating: bool,
    pub interpolation_deviation: f64,
    pub finite_support: bool,
    /// Decay order of the function kernel at the origin, halved.
    pub rate: u32,
    pub constant: f64,
    pub derivative_constant: f64,
    pub optimal_constant: f64,
    pub optimal_derivative_constant: f64,
    /// Scheme constant over optimal constant (about √(10/3)).
    pub ratio_to_optimal: f64,
    /// Optimal constant over scheme constant (about √(3/10)).
    pub optimal_over_actual: f64,
    pub derivative_ratio_to_optimal: f64,
    /// Constant measured on a Gaussian at the smallest step.
    pub measured_constant: f64,
    pub measured_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
}

/// Local decay order of `E` between two small frequencies.
pub fn kernel_decay_order(kernel: &ErrorKernel) -> Result<f64> {
    let (a, b) = (0.05, 0.1);
    let ea = kernel.eval(a)?.e;
    let eb = kernel.eval(b)?.e;
    Ok((eb / ea).ln() / (b / a).ln())
}

pub fn table1_row(kind: SchemeKind) -> Result<Table1Row> {
    let scheme = kind.spec();
    let fit = |mode: Mode, dual: bool| -> Result<f64> {
        let k = if dual { ErrorKernel::dual(&scheme, mode) } else { ErrorKernel::new(&scheme, mode) };
        Ok(asymptotic_constant(&k, mode.rate(scheme.order()))?.constant)
    };
    let constant = fit(Mode::Function, false)?;
    let derivative_constant = fit(Mode::Derivative, false)?;
    let optimal_constant = fit(Mode::Function, true)?;
    let optimal_derivative_constant = fit(Mode::Derivative, true)?;
    let deviation = interpolation_deviation(&scheme)?;
    let order = kernel_decay_order(&ErrorKernel::new(&scheme, Mode::Function))?;
    let f = TestFunction::default();
    let decay = decay_experiment(&scheme, &f, &geometric_steps(0.2, 5), Mode::Function)?;
    Ok(Table1Row {
        scheme: kind.name().into(),
        interpolating: deviation < 1e-9,
        interpolation_deviation: deviation,
        finite_support: has_finite_support(&scheme.basis)?,
        rate: (order / 2.0).round() as u32,
        constant,
        derivative_constant,
        optimal_constant,
        optimal_derivative_constant,
        ratio_to_optimal: constant / optimal_constant,
        optimal_over_actual: optimal_constant / constant,
        derivative_ratio_to_optimal: derivative_constant / optimal_derivative_constant,
        measured_constant: decay.constant,
        measured_slope: decay.slope,
    })
}

pub fn table1_report() -> Result<Table1Report> {
    let rows = SchemeKind::ALL.par_iter().map(|&k| table1_row(k)).collect::<Result<_>>()?;
    Ok(Table1Report { rows })
}

/// Value of `(2|t|+1)(|t|-1)²`-type partition sums, `Σ_k φ1(t - k)`.
pub fn hermite_partition_residual() -> f64 {
    (0..=2000)
        .map(|i| {
            let t = -1.0 + i as f64 * 1e-3;
            let s: f64 = (-5..=5).map(|k| eval_generator(Generator::Phi1, t - k as f64).unwrap_or(0.0)).sum();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// verification suite

/// Outcome of one audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.into(), passed, detail }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

fn check_interpolation_conditions() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for k in -3i32..=3 {
        let t = k as f64;
        let d = if k == 0 { 1.0 } else { 0.0 };
        worst = worst
            .max((eval_generator(Generator::Phi1, t)? - d).abs())
            .max(eval_generator(Generator::Phi2, t)?.abs())
            .max(crate::basis::eval_generator_deriv(Generator::Phi1, t)?.abs())
            .max((crate::basis::eval_generator_deriv(Generator::Phi2, t)? - d).abs());
    }
    Ok((worst < 1e-13, format!("max deviation {worst:.3e} for k in -3..=3")))
}

fn check_reproduction() -> Result<(bool, String)> {
    let a = support_audit()?;
    let worst = a.beta2_residual.max(a.beta3_residual);
    Ok((worst < 1e-10, format!("beta2 residual {:.3e}, beta3 residual {:.3e}", a.beta2_residual, a.beta3_residual)))
}

fn check_supports() -> Result<(bool, String)> {
    let a = support_audit()?;
    Ok((
        a.hermite_sum == 4.0 && a.bspline_sum == 7.0,
        format!("|supp phi1| + |supp phi2| = {}, |supp beta2| + |supp beta3| = {}", a.hermite_sum, a.bspline_sum),
    ))
}

/// Largest interior residual when reproducing `t^ℓ`, `ℓ <= 3`.
pub fn monomial_reproduction_residual(scheme: &SchemeSpec) -> Result<f64> {
    let mut worst = 0.0f64;
    for ell in 0..=3i32 {
        let f = move |t: f64| t.powi(ell);
        let df = move |t: f64| if ell == 0 { 0.0 } else { ell as f64 * t.powi(ell - 1) };
        let a = Approximant::new(scheme, 0.5, Interval::new(-5.0, 5.0), &f, Some(&df))?;
        for i in 0..=400 {
            let t = -2.0 + i as f64 * 0.01;
            worst = worst.max((a.reconstruct(t) - f(t)).abs());
        }
    }
    Ok(worst)
}

fn check_monomials() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in SchemeKind::ALL {
        let r = monomial_reproduction_residual(&kind.spec())?;
        let tol = if kind == SchemeKind::Interlaced { 1e-6 } else { 1e-8 };
        ok &= r < tol;
        parts.push(format!("{} {r:.3e}", kind.name()));
    }
    Ok((ok, parts.join(", ")))
}

fn check_gram() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for kind in SchemeKind::ALL {
        let basis = kind.spec().basis;
        for &w in &[0.0, 0.7, 1.3, 2.9] {
            let g = kernel::gram(&basis, w)?;
            let h = kernel::gram(&basis, w + 2.0 * PI)?;
            for i in 0..g.len() {
                for j in 0..g.len() {
                    worst = worst.max((g[i][j] - g[j][i].conj()).norm()).max((g[i][j] - h[i][j]).norm());
                }
            }
        }
    }
    Ok((worst < 1e-10, format!("max Hermitian/periodicity defect {worst:.3e}")))
}

fn check_kernel_positivity() -> Result<(bool, String)> {
    let mut lowest = f64::INFINITY;
    let mut at_zero = 0.0f64;
    for kind in SchemeKind::ALL {
        for mode in [Mode::Function, Mode::Derivative] {
            let k = ErrorKernel::new(&kind.spec(), mode);
            at_zero = at_zero.max(k.eval(0.0)?.e.abs());
            for i in 1..=64 {
                let v = k.eval(i as f64 * PI / 16.0)?;
                lowest = lowest.min(v.e).min(v.e_min).min(v.e_res);
            }
        }
    }
    Ok((lowest >= -1e-10 && at_zero < 1e-14, format!("min over grid {lowest:.3e}, max |E(0)| {at_zero:.3e}")))
}

fn check_parseval() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for f in [TestFunction::default(), TestFunction::Gaussian { sigma: 0.7 }, TestFunction::SineWindow { k: 2.0 }] {
        let spectral = spectral_seminorm(&f, 0.0)?;
        let time = time_domain_seminorm(&f, 0)?;
        worst = worst.max((spectral / time - 1.0).abs());
    }
    Ok((worst < 1e-8, format!("max relative gap {worst:.3e}")))
}

/// B-spline scheme whose inverse filter is truncated and perturbed.
pub fn perturbed_bspline_scheme() -> SchemeSpec {
    use crate::schemes::Prefilter;
    use crate::sequences::CoefSequence;
    let mut taps: Vec<f64> =
        Prefilter::CubicInterpolation.taps().into_iter().filter(|(m, _)| m.abs() <= 10).map(|(_, v)| v).collect();
    taps[11] += 0.01;
    let mut scheme = SchemeSpec::bspline();
    scheme.sampling[0] =
        SamplingFunctional::DiracComb { shift: 2.0, prefilter: Some(Prefilter::Fir(CoefSequence::new(taps, -10))) };
    scheme
}

fn check_quasi_biorthonormality() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for kind in SchemeKind::ALL {
        for m in kernel::quasi_biorthonormality_audit(&kind.spec(), 4)? {
            worst = worst.max(m.deviation);
        }
    }
    let control = kernel::quasi_biorthonormality_audit(&perturbed_bspline_scheme(), 4)?;
    let control_dev = control.iter().fold(0.0f64, |m, a| m.max(a.deviation));
    Ok((
        worst < 1e-6 && control_dev > 1e-3,
        format!("max moment deviation {worst:.3e}; perturbed filter {control_dev:.3e}"),
    ))
}

fn check_riesz() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for kind in SchemeKind::ALL {
        let r = kernel::riesz_bounds(&kind.spec().basis)?;
        ok &= r.a > 0.0 && r.b >= r.a;
        parts.push(format!("{} A={:.6} B={:.6}", kind.name(), r.a, r.b));
    }
    Ok((ok, parts.join(", ")))
}

fn check_sign_convention() -> Result<(bool, String)> {
    let basis = GeneratorSet::cubic_bspline();
    let (plus, minus) = kernel::printed_min_forms(&basis, 0.0)?;
    let residual = kernel::kernel_min(&basis, 0.0)?;
    Ok((
        minus.abs() < 1e-14 && residual.abs() < 1e-14,
        format!("E_min(0): '1 + phi^H G^-1 phi' = {plus:.3}, '1 - phi^H G^-1 phi' = {minus:.3e}; using the minus sign"),
    ))
}

fn check_interlaced_basis() -> Result<(bool, String)> {
    use crate::basis::interlaced;
    let derived = interlaced::fourier(0, 0.0).re;
    let printed = interlaced::printed_fourier(0, 0.0).re;
    // Σ_k φ1(t - 2k) = 1 requires φ̂1(0) = 2 and φ̂1(π) = 0
    let printed_alias = interlaced::printed_fourier(0, PI).norm();
    let derived_alias = interlaced::fourier(0, PI).norm();
    let deviation = interpolation_deviation(&SchemeSpec::interlaced())?;
    let tab = crate::schemes::tabulate_interlaced(1e-2, 16.0)?;
    Ok((
        (derived - 2.0).abs() < 1e-12 && derived_alias < 1e-12 && deviation < 1e-9,
        format!(
            "derived basis: phi1^(0) = {derived:.6}, |phi1^(pi)| = {derived_alias:.1e}, interpolation deviation {deviation:.1e}, \
             tabulation tail {:.1e}; printed closed form: phi1^(0) = {printed:.6}, |phi1^(pi)| = {printed_alias:.3} (not a partition of unity)",
            tab.tail_bound
        ),
    ))
}

fn check_partition_of_unity() -> Result<(bool, String)> {
    let r = hermite_partition_residual();
    Ok((r < 1e-12, format!("max |sum_k phi1(t - k) - 1| = {r:.3e}")))
}

type Audit = fn() -> Result<(bool, String)>;

/// Runs every audit.
pub fn verify() -> Vec<Check> {
    let checks: Vec<(&str, Audit)> = vec![
        ("interpolation conditions", check_interpolation_conditions),
        ("partition of unity", check_partition_of_unity),
        ("B-spline reproduction", check_reproduction),
        ("support sums", check_supports),
        ("monomial reproduction", check_monomials),
        ("Gram Hermitian and periodic", check_gram),
        ("kernel nonnegative, E(0) = 0", check_kernel_positivity),
        ("Parseval", check_parseval),
        ("quasi-biorthonormality", check_quasi_biorthonormality),
        ("Riesz bounds", check_riesz),
        ("sign convention of E_min", check_sign_convention),
        ("interlaced basis", check_interlaced_basis),
    ];
    checks.par_iter().map(|(name, f)| Check::from_result(name, f())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let f = TestFunction::default();
        let h = 1e-5;
        for n in 0..4 {
            for &t in &[-1.3, 0.2, 2.1] {
                let fd = (f.nth_derivative(n, t + h).unwrap() - f.nth_derivative(n, t - h).unwrap()) / (2.0 * h);
                assert!((f.nth_derivative(n + 1, t).unwrap() - fd).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn sine_window_derivative() {
        let f = TestFunction::SineWindow { k: 2.0 };
        let t = 0.7f64;
        let g = (-0.5 * t * t).exp();
        let expect = 2.0 * (2.0 * t).cos() * g - t * (2.0 * t).sin() * g;
        assert!((f.derivative(t) - expect).abs() < 1e-14);
        assert!((f.nth_derivative(0, t).unwrap() - f.value(t)).abs() < 1e-15);
    }

    #[test]
    fn bump_is_compact() {
        let f = TestFunction::Bump { radius: 3.0 };
        assert_eq!(f.value(3.0), 0.0);
        assert!((f.value(0.0) - 1.0).abs() < 1e-15);
        assert!(matches!(sobolev_seminorm(&f, 1.5), Err(Error::MissingSpectrum(_))));
        assert!(f.nth_derivative(2, 0.0).is_err());
    }

    #[test]
    fn gaussian_seminorm_at_zero() {
        let v = sobolev_seminorm(&TestFunction::default(), 0.0).unwrap();
        assert!((v - PI.powf(0.25)).abs() < 1e-14);
    }

    #[test]
    fn domain_coverage_checked() {
        let f = TestFunction::default();
        let a = approximate(&f, &SchemeSpec::hermite(), 0.5, Interval::new(-3.0, 3.0)).unwrap();
        assert!(matches!(l2_error(&f, &a, Mode::Function), Err(Error::DomainCoverage { .. })));
    }

    #[test]
    fn decay_experiment_validates_steps() {
        let f = TestFunction::default();
        let s = SchemeSpec::hermite();
        assert!(decay_experiment(&s, &f, &[0.2, 0.1, 0.05], Mode::Function).is_err());
        assert!(decay_experiment(&s, &f, &[0.2, 0.1, 0.05, 0.03, 0.01], Mode::Function).is_err());
        assert!(decay_experiment(&s, &f, &geometric_steps(2.0, 5), Mode::Function).is_err());
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = ApproximationReport {
            scheme: "hermite".into(),
            mode: Mode::Derivative,
            function: TestFunction::default().name(),
            steps: vec![0.1, 0.05],
            errors: vec![1e-3, 1.25e-4],
            slope: 3.0,
            constant: 5.75e-3,
            reference_constant: 5.75e-3,
            optimal_constant: 5.75e-3,
            ratio_to_optimal: 1.0,
            richardson_order: 3.0,
        };
        let back: ApproximationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn partition_of_unity() {
        assert!(hermite_partition_residual() < 1e-12);
    }
}
