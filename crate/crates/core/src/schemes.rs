//! Approximation operators `Q_T`: sampling, coefficient computation and
//! reconstruction for the Hermite, cubic B-spline and interlaced schemes.
//!
//! A scheme pairs a [`GeneratorSet`] shifted on `stride · ℤ` with one sampling
//! functional per generator. At step `T` the coefficients are
//! `c_i[k] = ⟨f, (1/T) φ̃_i(·/T - stride·k)⟩` and the approximation is
//! `Σ_i Σ_k c_i[k] φ_i(t/T - stride·k)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{bspline, eval_generator, eval_generator_deriv, interlaced, Generator, GeneratorSet, Interval};
use crate::error::{Error, Result};
use crate::sequences::{bspline_prefilter, Boundary, CoefSequence, CUBIC_POLE};

/// Digital filter applied to the raw samples of a Dirac comb.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Prefilter {
    /// The direct cubic B-spline filter `(b³)^{-1}`, mirror boundaries.
    CubicInterpolation,
    /// Arbitrary FIR filter, zero boundaries.
    Fir(CoefSequence),
}

impl Prefilter {
    /// `P(ω) = Σ_m p[m] e^{-jωm}`.
    pub fn response(&self, omega: f64) -> Complex64 {
        match self {
            Prefilter::CubicInterpolation => Complex64::new(1.0 / (2.0 / 3.0 + omega.cos() / 3.0), 0.0),
            Prefilter::Fir(p) => p.iter().map(|(m, v)| Complex64::from_polar(v, -omega * m as f64)).sum(),
        }
    }

    /// Impulse response `p[m]`, truncated to `|m| <= 64` for the IIR filter.
    pub fn taps(&self) -> Vec<(i64, f64)> {
        match self {
            Prefilter::CubicInterpolation => {
                let gain = -6.0 * CUBIC_POLE / (1.0 - CUBIC_POLE * CUBIC_POLE);
                (-64i64..=64).map(|m| (m, gain * CUBIC_POLE.powi(m.abs() as i32))).collect()
            }
            Prefilter::Fir(p) => p.iter().collect(),
        }
    }

    fn apply(&self, raw: &CoefSequence) -> Result<CoefSequence> {
        match self {
            Prefilter::CubicInterpolation => bspline_prefilter(raw, Boundary::Mirror),
            Prefilter::Fir(p) => {
                let full = raw.convolve(p);
                Ok(CoefSequence::new(raw.indices().map(|k| full.get(k)).collect(), raw.offset))
            }
        }
    }
}

/// One analysis functional, written on the unit lattice (`T = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SamplingFunctional {
    /// `δ(· - shift)`, optionally followed by a digital filter.
    DiracComb { shift: f64, prefilter: Option<Prefilter> },
    /// `sign · δ'(· - shift)`; `sign = -1` measures `+f'(shift)`.
    DiracDerivComb { shift: f64, sign: f64 },
}

impl SamplingFunctional {
    pub fn needs_derivative(&self) -> bool {
        matches!(self, SamplingFunctional::DiracDerivComb { .. })
    }

    /// Fourier transform of the analysis function.
    ///
    /// A filtered comb `c = p * f(· + shift)` is the functional
    /// `Σ_m p[m] δ(· - shift + m)`, whose transform is `e^{-jω shift} P(ω)*`.
    pub fn fourier(&self, omega: f64) -> Complex64 {
        match self {
            SamplingFunctional::DiracComb { shift, prefilter } => {
                let e = Complex64::from_polar(1.0, -omega * shift);
                match prefilter {
                    None => e,
                    Some(p) => e * p.response(omega).conj(),
                }
            }
            SamplingFunctional::DiracDerivComb { shift, sign } => {
                Complex64::new(0.0, sign * omega) * Complex64::from_polar(1.0, -omega * shift)
            }
        }
    }

    /// `∫ t^ℓ φ̃(t) dt`, in closed form.
    pub fn moment(&self, ell: u32) -> f64 {
        let l = ell as i32;
        match self {
            SamplingFunctional::DiracComb { shift, prefilter } => match prefilter {
                None => shift.powi(l),
                Some(p) => p.taps().into_iter().map(|(m, v)| v * (shift - m as f64).powi(l)).sum(),
            },
            SamplingFunctional::DiracDerivComb { shift, sign } => {
                if ell == 0 {
                    0.0
                } else {
                    -sign * ell as f64 * shift.powi(l - 1)
                }
            }
        }
    }
}

/// Which of the three schemes a [`SchemeSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Hermite,
    Bspline,
    Interlaced,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Hermite, SchemeKind::Bspline, SchemeKind::Interlaced];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Hermite => "hermite",
            SchemeKind::Bspline => "bspline",
            SchemeKind::Interlaced => "interlaced",
        }
    }

    pub fn spec(self) -> SchemeSpec {
        match self {
            SchemeKind::Hermite => SchemeSpec::hermite(),
            SchemeKind::Bspline => SchemeSpec::bspline(),
            SchemeKind::Interlaced => SchemeSpec::interlaced(),
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hermite" => Ok(SchemeKind::Hermite),
            "bspline" => Ok(SchemeKind::Bspline),
            "interlaced" => Ok(SchemeKind::Interlaced),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

/// A basis together with its sampling functionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub basis: GeneratorSet,
    pub sampling: Vec<SamplingFunctional>,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind, basis: GeneratorSet, sampling: Vec<SamplingFunctional>) -> Result<Self> {
        if basis.len() != sampling.len() {
            return Err(Error::InvalidArgument(format!(
                "{} generators but {} sampling functionals",
                basis.len(),
                sampling.len()
            )));
        }
        Ok(Self { kind, basis, sampling })
    }

    /// Samples `f(k)` and `f'(k)` on nodes spaced by `T`.
    pub fn hermite() -> Self {
        Self {
            kind: SchemeKind::Hermite,
            basis: GeneratorSet::hermite(),
            sampling: vec![
                SamplingFunctional::DiracComb { shift: 0.0, prefilter: None },
                SamplingFunctional::DiracDerivComb { shift: 0.0, sign: -1.0 },
            ],
        }
    }

    /// Cubic B-spline interpolation. The causal `β³(t - k)` peaks at `k + 2`,
    /// hence the comb shift.
    pub fn bspline() -> Self {
        Self {
            kind: SchemeKind::Bspline,
            basis: GeneratorSet::cubic_bspline(),
            sampling: vec![SamplingFunctional::DiracComb {
                shift: 2.0,
                prefilter: Some(Prefilter::CubicInterpolation),
            }],
        }
    }

    /// `f(2k)` and `f'(2k + 1/2)`.
    pub fn interlaced() -> Self {
        Self {
            kind: SchemeKind::Interlaced,
            basis: GeneratorSet::interlaced(),
            sampling: vec![
                SamplingFunctional::DiracComb { shift: 0.0, prefilter: None },
                SamplingFunctional::DiracDerivComb { shift: interlaced::DERIVATIVE_OFFSET, sign: -1.0 },
            ],
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn stride(&self) -> usize {
        self.basis.stride
    }

    pub fn order(&self) -> u32 {
        self.basis.order()
    }

    /// Sampling transforms at `omega`.
    pub fn sampling_fourier(&self, omega: f64) -> Vec<Complex64> {
        self.sampling.iter().map(|s| s.fourier(omega)).collect()
    }

    /// Half-width (in lattice units) of the sample padding around a domain.
    fn padding_units(&self) -> f64 {
        let extent =
            self.basis.generators.iter().map(|g| g.support().lo.abs().max(g.support().hi.abs())).fold(0.0, f64::max);
        (8.0 * self.stride() as f64).max(15.0) + extent
    }
}

/// A real function of one variable.
pub type RealFn<'a> = &'a (dyn Fn(f64) -> f64 + Sync);

/// Coefficients of `scheme` at step `step` for every shift influencing
/// `domain`.
pub fn sample(
    f: RealFn,
    f_deriv: Option<RealFn>,
    scheme: &SchemeSpec,
    step: f64,
    domain: Interval,
) -> Result<Vec<CoefSequence>> {
    check_step(step)?;
    let n = scheme.stride() as f64;
    let pad = scheme.padding_units() * step;
    let k_lo = ((domain.lo - pad) / (n * step)).floor() as i64;
    let k_hi = ((domain.hi + pad) / (n * step)).ceil() as i64;
    scheme
        .sampling
        .iter()
        .enumerate()
        .map(|(index, functional)| {
            let at = |k: i64, shift: f64| step * (n * k as f64 + shift);
            match functional {
                SamplingFunctional::DiracComb { shift, prefilter } => {
                    let raw = CoefSequence::new((k_lo..=k_hi).map(|k| f(at(k, *shift))).collect(), k_lo);
                    match prefilter {
                        None => Ok(raw),
                        Some(p) => p.apply(&raw),
                    }
                }
                SamplingFunctional::DiracDerivComb { shift, sign } => {
                    let d = f_deriv.ok_or(Error::MissingDerivative { index })?;
                    Ok(CoefSequence::new((k_lo..=k_hi).map(|k| -sign * step * d(at(k, *shift))).collect(), k_lo))
                }
            }
        })
        .collect()
}

/// Samples of `f` (and optionally `f'`) on `origin + i·spacing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformSamples {
    pub origin: f64,
    pub spacing: f64,
    pub values: Vec<f64>,
    pub derivatives: Option<Vec<f64>>,
}

impl UniformSamples {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Span of the table.
    pub fn interval(&self) -> Interval {
        Interval::new(self.origin, self.origin + (self.len().saturating_sub(1)) as f64 * self.spacing)
    }
}

/// Smallest step `T` whose functionals all land on rows of a table with the
/// given spacing.
pub fn grid_step(scheme: &SchemeSpec, spacing: f64) -> f64 {
    let mut m = 1.0;
    while scheme.sampling.iter().any(|s| {
        let shift = match s {
            SamplingFunctional::DiracComb { shift, .. } | SamplingFunctional::DiracDerivComb { shift, .. } => *shift,
        };
        (m * shift).fract() != 0.0
    }) {
        m += 1.0;
    }
    m * spacing
}

/// Coefficients of `scheme` at step `step` from tabulated samples. Lattice
/// index 0 sits at the first row; shifts whose functional falls outside the
/// table are left out.
pub fn coefficients_from_grid(scheme: &SchemeSpec, step: f64, grid: &UniformSamples) -> Result<Vec<CoefSequence>> {
    check_step(step)?;
    if !(grid.spacing > 0.0) || grid.is_empty() {
        return Err(Error::InvalidArgument("sample table must be non-empty with positive spacing".into()));
    }
    if grid.derivatives.as_ref().is_some_and(|d| d.len() != grid.len()) {
        return Err(Error::InvalidArgument("value and derivative columns differ in length".into()));
    }
    let ratio = step / grid.spacing;
    if (ratio - ratio.round()).abs() > 1e-9 * ratio || ratio.round() < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "step {step} is not a multiple of the sample spacing {}",
            grid.spacing
        )));
    }
    let m = ratio.round();
    let n = scheme.stride() as f64;
    let last = (grid.len() - 1) as f64;
    scheme
        .sampling
        .iter()
        .enumerate()
        .map(|(index, functional)| {
            let shift = match functional {
                SamplingFunctional::DiracComb { shift, .. } | SamplingFunctional::DiracDerivComb { shift, .. } => {
                    *shift
                }
            };
            if (m * shift).fract() != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "functional {index} at offset {shift}T does not fall on the sample grid"
                )));
            }
            let k_lo = (-shift / n).ceil() as i64;
            let k_hi = ((last / m - shift) / n).floor() as i64;
            if k_hi < k_lo {
                return Err(Error::InvalidArgument("sample table too short for this step".into()));
            }
            let row = |k: i64| (m * (n * k as f64 + shift)).round() as usize;
            match functional {
                SamplingFunctional::DiracComb { prefilter, .. } => {
                    let raw = CoefSequence::new((k_lo..=k_hi).map(|k| grid.values[row(k)]).collect(), k_lo);
                    match prefilter {
                        None => Ok(raw),
                        Some(p) => p.apply(&raw),
                    }
                }
                SamplingFunctional::DiracDerivComb { sign, .. } => {
                    let d = grid.derivatives.as_ref().ok_or(Error::MissingDerivative { index })?;
                    Ok(CoefSequence::new((k_lo..=k_hi).map(|k| -sign * step * d[row(k)]).collect(), k_lo))
                }
            }
        })
        .collect()
}

fn check_step(step: f64) -> Result<()> {
    if step.is_finite() && step > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("step must be positive, got {step}")))
    }
}

/// `Q_T f` in coefficient form.
#[derive(Debug, Clone)]
pub struct Approximant {
    pub scheme: SchemeSpec,
    pub step: f64,
    pub coefs: Vec<CoefSequence>,
    pub domain: Interval,
    /// Position of lattice index 0.
    pub origin: f64,
    /// Interlaced schemes: the equivalent centred cubic spline coefficients
    /// on the knots `origin + jT`.
    spline: Option<CoefSequence>,
}

impl Approximant {
    /// Samples `f` and builds the approximation on `domain`.
    pub fn new(scheme: &SchemeSpec, step: f64, domain: Interval, f: RealFn, f_deriv: Option<RealFn>) -> Result<Self> {
        let coefs = sample(f, f_deriv, scheme, step, domain)?;
        Self::from_coefs(scheme, step, coefs, domain, 0.0)
    }

    pub fn from_coefs(
        scheme: &SchemeSpec,
        step: f64,
        coefs: Vec<CoefSequence>,
        domain: Interval,
        origin: f64,
    ) -> Result<Self> {
        check_step(step)?;
        if coefs.len() != scheme.basis.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficient sequences for {} generators",
                coefs.len(),
                scheme.basis.len()
            )));
        }
        let spline = if scheme.basis.generators.iter().any(|g| !g.is_compact()) {
            Some(interlaced_spline(scheme, &coefs)?)
        } else {
            None
        };
        Ok(Self { scheme: scheme.clone(), step, coefs, domain, origin, spline })
    }

    /// `(Q_T f)(t)`.
    pub fn reconstruct(&self, t: f64) -> f64 {
        let u = (t - self.origin) / self.step;
        match &self.spline {
            Some(a) => spline_eval(a, u, bspline::centered_cubic),
            None => self.synth(u, |g, x| eval_generator(g, x).unwrap_or(0.0)),
        }
    }

    /// `(Q_T f)'(t)`.
    pub fn reconstruct_deriv(&self, t: f64) -> f64 {
        let u = (t - self.origin) / self.step;
        let d = match &self.spline {
            Some(a) => spline_eval(a, u, bspline::centered_cubic_deriv),
            None => self.synth(u, |g, x| eval_generator_deriv(g, x).unwrap_or(0.0)),
        };
        d / self.step
    }

    fn synth(&self, u: f64, eval: impl Fn(Generator, f64) -> f64) -> f64 {
        let n = self.scheme.stride() as f64;
        let mut sum = 0.0;
        for (g, c) in self.scheme.basis.generators.iter().zip(&self.coefs) {
            let s = g.support();
            let k_lo = ((u - s.hi) / n).floor() as i64;
            let k_hi = ((u - s.lo) / n).ceil() as i64;
            for k in k_lo.max(c.offset)..=k_hi.min(c.end() - 1) {
                let v = c.get(k);
                if v != 0.0 {
                    sum += v * eval(*g, u - n * k as f64);
                }
            }
        }
        sum
    }

    /// Knot positions of the reconstruction inside the domain, including both
    /// domain endpoints.
    pub fn knots(&self) -> Vec<f64> {
        let lo = ((self.domain.lo - self.origin) / self.step).ceil() as i64;
        let hi = ((self.domain.hi - self.origin) / self.step).floor() as i64;
        let mut out = vec![self.domain.lo];
        for j in lo..=hi {
            let x = self.origin + j as f64 * self.step;
            if x > *out.last().unwrap() + 1e-12 * self.step && x < self.domain.hi {
                out.push(x);
            }
        }
        out.push(self.domain.hi);
        out
    }
}

fn spline_eval(a: &CoefSequence, u: f64, kernel: fn(f64) -> f64) -> f64 {
    let lo = ((u - 2.0).ceil() as i64).max(a.offset);
    let hi = ((u + 2.0).floor() as i64).min(a.end() - 1);
    (lo..=hi).map(|j| a.get(j) * kernel(u - j as f64)).sum()
}

/// `a[j] = Σ_i Σ_k c_i[k] h_i[j - stride·k]`.
fn interlaced_spline(scheme: &SchemeSpec, coefs: &[CoefSequence]) -> Result<CoefSequence> {
    let table = interlaced::table();
    let n = scheme.stride() as i64;
    let r = table.radius;
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for c in coefs.iter().filter(|c| !c.is_empty()) {
        lo = lo.min(n * c.offset - r);
        hi = hi.max(n * (c.end() - 1) + r);
    }
    if lo > hi {
        return Ok(CoefSequence::new(Vec::new(), 0));
    }
    let mut a = vec![0.0; (hi - lo + 1) as usize];
    for (g, c) in scheme.basis.generators.iter().zip(coefs) {
        let index = match g {
            Generator::Interlaced1 => 0,
            Generator::Interlaced2 => 1,
            other => {
                return Err(Error::UnsupportedOperation(format!(
                    "{} cannot be mixed with interlaced generators",
                    other.name()
                )))
            }
        };
        for (k, v) in c.iter() {
            for m in -r..=r {
                a[(n * k + m - lo) as usize] += v * table.get(index, m);
            }
        }
    }
    Ok(CoefSequence::new(a, lo))
}

/// Time-domain samples of the interlaced generators and their derivatives.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterlacedTable {
    pub resolution: f64,
    pub radius: f64,
    /// Bound on `|φ_i(t)|` for `|t| > radius`.
    pub tail_bound: f64,
    pub values: [Vec<f64>; 2],
    pub derivatives: [Vec<f64>; 2],
}

/// Largest tail the tabulation accepts.
pub const TABULATION_TAIL_TOLERANCE: f64 = 1e-8;

/// Samples both interlaced generators on `[-radius, radius]`.
pub fn tabulate_interlaced(resolution: f64, radius: f64) -> Result<InterlacedTable> {
    if !(resolution > 0.0 && resolution <= 1e-2) {
        return Err(Error::InvalidArgument(format!("resolution must be in (0, 1e-2], got {resolution}")));
    }
    if !(radius >= 10.0) {
        return Err(Error::InvalidArgument(format!("radius must be >= 10, got {radius}")));
    }
    let table = interlaced::table();
    let tail = table.tail_bound(radius);
    if tail > TABULATION_TAIL_TOLERANCE {
        return Err(Error::RadiusTooSmall { radius, tail });
    }
    let n = (2.0 * radius / resolution).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|j| -radius + 2.0 * radius * j as f64 / n as f64).collect();
    let values = [0, 1].map(|i| grid.iter().map(|&t| table.value(i, t)).collect());
    let derivatives = [0, 1].map(|i| grid.iter().map(|&t| table.derivative(i, t)).collect());
    Ok(InterlacedTable { resolution: 2.0 * radius / n as f64, radius, tail_bound: tail, values, derivatives })
}

impl InterlacedTable {
    /// Piecewise cubic Hermite interpolation of the table; 0 beyond the radius.
    pub fn eval(&self, index: usize, t: f64) -> f64 {
        if t.abs() > self.radius {
            return 0.0;
        }
        let x = (t + self.radius) / self.resolution;
        let last = self.values[index].len() - 1;
        let j = (x.floor() as usize).min(last - 1);
        let s = x - j as f64;
        let (y0, y1) = (self.values[index][j], self.values[index][j + 1]);
        let (d0, d1) = (self.derivatives[index][j] * self.resolution, self.derivatives[index][j + 1] * self.resolution);
        let h = |v: f64| eval_generator(Generator::Phi1, v).unwrap_or(0.0);
        let g = |v: f64| eval_generator(Generator::Phi2, v).unwrap_or(0.0);
        y0 * h(s) + y1 * h(s - 1.0) + d0 * g(s) + d1 * g(s - 1.0)
    }
}
