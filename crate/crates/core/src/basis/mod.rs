//! Generators of the reconstruction spaces: the cubic Hermite pair, causal
//! B-splines and the interlaced-derivative pair, in time and Fourier domain.

pub mod bspline;
pub mod interlaced;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        (self.lo..=self.hi).contains(&t)
    }
}

/// A single generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `(2|t|+1)(|t|-1)²` on `[-1, 1]`.
    Phi1,
    /// `t(|t|-1)²` on `[-1, 1]`.
    Phi2,
    /// Causal B-spline of the given order, supported on `[0, order]`.
    BSpline(u32),
    /// Value-cardinal generator of the interlaced scheme.
    Interlaced1,
    /// Derivative-cardinal generator of the interlaced scheme.
    Interlaced2,
}

/// Radius beyond which the interlaced generators are below 1e-13.
pub const INTERLACED_RADIUS: f64 = 24.0;

impl Generator {
    fn validate(self) -> Result<Self> {
        match self {
            Generator::BSpline(l) if l == 0 || l > bspline::MAX_ORDER => {
                Err(Error::InvalidArgument(format!("B-spline order {l} outside 1..={}", bspline::MAX_ORDER)))
            }
            g => Ok(g),
        }
    }

    /// Support interval; for the interlaced pair this is the effective
    /// support used for truncation.
    pub fn support(self) -> Interval {
        match self {
            Generator::Phi1 | Generator::Phi2 => Interval::new(-1.0, 1.0),
            Generator::BSpline(l) => Interval::new(0.0, l as f64),
            Generator::Interlaced1 | Generator::Interlaced2 => Interval::new(-INTERLACED_RADIUS, INTERLACED_RADIUS),
        }
    }

    pub fn is_compact(self) -> bool {
        !matches!(self, Generator::Interlaced1 | Generator::Interlaced2)
    }

    /// Approximation order of the family the generator belongs to.
    pub fn order(self) -> u32 {
        match self {
            Generator::BSpline(l) => l,
            _ => 4,
        }
    }

    pub fn name(self) -> String {
        match self {
            Generator::Phi1 => "phi1".into(),
            Generator::Phi2 => "phi2".into(),
            Generator::BSpline(l) => format!("bspline{l}"),
            Generator::Interlaced1 => "interlaced1".into(),
            Generator::Interlaced2 => "interlaced2".into(),
        }
    }
}

/// Pointwise value of a generator.
pub fn eval_generator(g: Generator, t: f64) -> Result<f64> {
    Ok(match g.validate()? {
        Generator::Phi1 => {
            let a = t.abs();
            if a < 1.0 {
                (2.0 * a + 1.0) * (a - 1.0) * (a - 1.0)
            } else {
                0.0
            }
        }
        Generator::Phi2 => {
            let a = t.abs();
            if a < 1.0 {
                t * (a - 1.0) * (a - 1.0)
            } else {
                0.0
            }
        }
        Generator::BSpline(l) => bspline::value(l, t),
        Generator::Interlaced1 => interlaced::table().value(0, t),
        Generator::Interlaced2 => interlaced::table().value(1, t),
    })
}

/// Right-continuous first derivative of a piecewise-polynomial generator.
pub fn eval_generator_deriv(g: Generator, t: f64) -> Result<f64> {
    Ok(match g.validate()? {
        Generator::Phi1 => {
            let a = t.abs();
            if (-1.0..1.0).contains(&t) {
                6.0 * t * (a - 1.0)
            } else {
                0.0
            }
        }
        Generator::Phi2 => {
            let a = t.abs();
            if (-1.0..1.0).contains(&t) {
                (a - 1.0) * (3.0 * a - 1.0)
            } else {
                0.0
            }
        }
        Generator::BSpline(l) => bspline::derivative(l, t),
        Generator::Interlaced1 | Generator::Interlaced2 => {
            return Err(Error::UnsupportedOperation(format!(
                "{} has no closed-form time-domain derivative; use the interlaced tabulation",
                g.name()
            )))
        }
    })
}

/// Below this |ω| the Hermite transforms use their moment series.
const HERMITE_SERIES_SWITCH: f64 = 1.0;

/// `Σ_k (-1)^k ω^(2k+p) / (2k+p)! · m(k)` until the terms vanish.
fn moment_series(omega: f64, parity: i32, moment: impl Fn(f64) -> f64) -> f64 {
    let w2 = omega * omega;
    let mut term = if parity == 0 { 1.0 } else { omega };
    let mut sum = 0.0;
    for k in 0..40 {
        let n = (2 * k + parity) as f64;
        let contrib = term * moment(k as f64);
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
        term *= -w2 / ((n + 1.0) * (n + 2.0));
    }
    sum
}

fn hermite1_hat(omega: f64) -> f64 {
    if omega.abs() < HERMITE_SERIES_SWITCH {
        moment_series(omega, 0, |k| 2.0 * (2.0 / (2.0 * k + 4.0) - 3.0 / (2.0 * k + 3.0) + 1.0 / (2.0 * k + 1.0)))
    } else {
        12.0 * (2.0 - 2.0 * omega.cos() - omega * omega.sin()) / omega.powi(4)
    }
}

/// `φ̂2(ω) = -j · hermite2_sine(ω)`.
fn hermite2_sine(omega: f64) -> f64 {
    if omega.abs() < HERMITE_SERIES_SWITCH {
        moment_series(omega, 1, |k| 2.0 * (1.0 / (2.0 * k + 5.0) - 2.0 / (2.0 * k + 4.0) + 1.0 / (2.0 * k + 3.0)))
    } else {
        4.0 * (omega * (omega.cos() + 2.0) - 3.0 * omega.sin()) / omega.powi(4)
    }
}

/// `∫ g(t) e^{-jωt} dt`.
pub fn fourier_generator(g: Generator, omega: f64) -> Complex64 {
    match g {
        Generator::Phi1 => Complex64::new(hermite1_hat(omega), 0.0),
        Generator::Phi2 => Complex64::new(0.0, -hermite2_sine(omega)),
        Generator::BSpline(l) => bspline::fourier(l, omega),
        Generator::Interlaced1 => interlaced::fourier(0, omega),
        Generator::Interlaced2 => interlaced::fourier(1, omega),
    }
}

/// Grid resolution of [`measure_support`].
const SUPPORT_STEPS_PER_UNIT: f64 = 1000.0;
const SUPPORT_SEARCH_RADIUS: f64 = 64.0;

/// Smallest grid-aligned interval outside which `|g| < threshold`.
///
/// Each endpoint is the grid boundary of the outermost cell that contains a
/// significant grid value, which resolves integer endpoints exactly.
pub fn measure_support(g: Generator, threshold: f64) -> Result<Interval> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument(format!("threshold must be > 0, got {threshold}")));
    }
    g.validate()?;
    let n = (SUPPORT_SEARCH_RADIUS * SUPPORT_STEPS_PER_UNIT) as i64;
    let at = |j: i64| j as f64 / SUPPORT_STEPS_PER_UNIT;
    let significant = |j: i64| -> Result<bool> { Ok(eval_generator(g, at(j))?.abs() >= threshold) };
    for edge in [-n, n] {
        if significant(edge)? {
            return Err(Error::MeasurementFailed { threshold, at: at(edge) });
        }
    }
    let mut first = None;
    for j in -n..=n {
        if significant(j)? {
            first = Some(j);
            break;
        }
    }
    let Some(first) = first else {
        return Ok(Interval::new(0.0, 0.0));
    };
    let mut last = first;
    for j in (first..=n).rev() {
        if significant(j)? {
            last = j;
            break;
        }
    }
    Ok(Interval::new(at(first - 1), at(last + 1)))
}

/// Generators shifted on the lattice `stride · ℤ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub generators: Vec<Generator>,
    pub stride: usize,
}

impl GeneratorSet {
    pub fn new(generators: Vec<Generator>, stride: usize) -> Result<Self> {
        if generators.is_empty() || generators.len() > 2 {
            return Err(Error::InvalidArgument(format!("expected 1 or 2 generators, got {}", generators.len())));
        }
        if !(1..=2).contains(&stride) {
            return Err(Error::InvalidArgument(format!("stride must be 1 or 2, got {stride}")));
        }
        for g in &generators {
            g.validate()?;
        }
        Ok(Self { generators, stride })
    }

    /// `φ1(· - k)`, `φ2(· - k)`: two degrees of freedom per node.
    pub fn hermite() -> Self {
        Self { generators: vec![Generator::Phi1, Generator::Phi2], stride: 1 }
    }

    pub fn cubic_bspline() -> Self {
        Self { generators: vec![Generator::BSpline(4)], stride: 1 }
    }

    pub fn interlaced() -> Self {
        Self { generators: vec![Generator::Interlaced1, Generator::Interlaced2], stride: interlaced::STRIDE }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.generators.iter().map(|g| g.order()).min().unwrap_or(0)
    }

    /// Transforms of all generators at `omega`.
    pub fn fourier(&self, omega: f64) -> Vec<Complex64> {
        self.generators.iter().map(|&g| fourier_generator(g, omega)).collect()
    }
}
