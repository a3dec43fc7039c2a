//! Fourier-domain error kernels.
//!
//! For a basis `φ` shifted on `Nℤ` and analysis transforms `s(ω)`, the mean
//! squared error of `Q_T f` is `(1/2π) ∫ |f̂(ω)|² E(Tω) dω` with
//!
//! ```text
//! E(ω) = |1 - s(ω)^H φ̂(ω)/N|² + Σ_{n≠0} |s(ω)^H φ̂(ω_n)/N|²,   ω_n = ω + 2πn/N.
//! ```
//!
//! The Gram matrix is `G(ω) = (1/N) Σ_n φ̂(ω_n) φ̂(ω_n)^H`, the dual analysis
//! transform `s_d = G^{-1} φ̂`, and
//! `E = E_min + E_res` with `E_min = E(s_d) = 1 - φ̂^H G^{-1} φ̂ / N` and
//! `E_res = (1/N)(s - s_d)^H G (s - s_d)`.
//!
//! `E_min` is evaluated in the residual form above rather than as
//! `1 - φ̂^H G^{-1} φ̂`, which loses all significant digits below `ω ≈ 0.2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::GeneratorSet;
use crate::error::{Error, Result};
use crate::quadrature::{self, KahanSum};
use crate::schemes::{RealFn, SchemeSpec};

/// Dense complex matrix, row major; dimensions are 1 or 2 here.
pub type CMatrix = Vec<Vec<Complex64>>;

/// Which quantity the kernel measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `‖f - Q_T f‖`.
    Function,
    /// `‖f' - (Q_T f)'‖`.
    Derivative,
}

impl Mode {
    /// Approximation order observed in this mode for an order-`order` basis.
    pub fn rate(self, order: u32) -> u32 {
        match self {
            Mode::Function => order,
            Mode::Derivative => order - 1,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" | "function" => Ok(Mode::Function),
            "fprime" | "derivative" => Ok(Mode::Derivative),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}' (expected f or fprime)"))),
        }
    }
}

/// Analysis functions used with the scheme's basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Analysis {
    /// The scheme's own sampling functionals.
    Sampling,
    /// The dual functions of the basis (orthogonal projection `P_T`).
    Dual,
}

// ---------------------------------------------------------------------------
// periodized sums

const ALIAS_START: i64 = 16;
const ALIAS_MAX: i64 = 1 << 15;
const ALIAS_TOLERANCE: f64 = 1e-12;

/// `Σ_{n∈ℤ} term(n)` for a vector-valued term decaying at least like `n^{-4}`.
///
/// Partial sums over `|n| <= K` are computed for doubling `K`, and the limit
/// is extrapolated with Aitken's Δ² on the last three partial sums.
fn alias_sum(dim: usize, skip_zero: bool, mut term: impl FnMut(i64, &mut [f64])) -> Vec<f64> {
    let mut acc = vec![KahanSum::default(); dim];
    let mut buf = vec![0.0; dim];
    let mut add = |n: i64, acc: &mut [KahanSum]| {
        buf.iter_mut().for_each(|b| *b = 0.0);
        term(n, &mut buf);
        for (a, &b) in acc.iter_mut().zip(&buf) {
            a.add(b);
        }
    };
    if !skip_zero {
        add(0, &mut acc);
    }
    let mut k_done = 0i64;
    let mut history: Vec<Vec<f64>> = Vec::new();
    let mut previous: Option<Vec<f64>> = None;
    let mut k = ALIAS_START;
    loop {
        for n in k_done + 1..=k {
            add(n, &mut acc);
            add(-n, &mut acc);
        }
        k_done = k;
        history.push(acc.iter().map(|a| a.value()).collect());
        if history.len() >= 3 {
            let [s0, s1, s2] = [&history[history.len() - 3], &history[history.len() - 2], &history[history.len() - 1]];
            let est: Vec<f64> = (0..dim)
                .map(|i| {
                    let d1 = s1[i] - s0[i];
                    let d2 = s2[i] - s1[i];
                    let denom = d2 - d1;
                    if denom.abs() <= 1e-300 || d2.abs() <= 1e-300 || (d2 / d1).abs() >= 1.0 {
                        s2[i]
                    } else {
                        s2[i] - d2 * d2 / denom
                    }
                })
                .collect();
            let scale = est.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if let Some(prev) = &previous {
                let change = est.iter().zip(prev).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                if change <= ALIAS_TOLERANCE * scale || scale == 0.0 || k >= ALIAS_MAX {
                    return est;
                }
            }
            previous = Some(est);
        }
        k *= 2;
    }
}

fn basis_vector(basis: &GeneratorSet, mode: Mode, omega: f64) -> Vec<Complex64> {
    let v = basis.fourier(omega);
    match mode {
        Mode::Function => v,
        Mode::Derivative => v.into_iter().map(|x| x * Complex64::new(0.0, omega)).collect(),
    }
}

fn aliased(omega: f64, stride: usize, n: i64) -> f64 {
    omega + 2.0 * PI * n as f64 / stride as f64
}

fn gram_mode(basis: &GeneratorSet, mode: Mode, omega: f64) -> CMatrix {
    let d = basis.len();
    let stride = basis.stride;
    let flat = alias_sum(2 * d * d, false, |n, out| {
        let v = basis_vector(basis, mode, aliased(omega, stride, n));
        for i in 0..d {
            for j in 0..d {
                let p = v[i] * v[j].conj();
                out[2 * (i * d + j)] = p.re;
                out[2 * (i * d + j) + 1] = p.im;
            }
        }
    });
    let inv_n = 1.0 / stride as f64;
    let mut g: CMatrix = (0..d)
        .map(|i| (0..d).map(|j| Complex64::new(flat[2 * (i * d + j)], flat[2 * (i * d + j) + 1]) * inv_n).collect())
        .collect();
    // enforce exact Hermitian symmetry
    for i in 0..d {
        g[i][i].im = 0.0;
        for j in 0..i {
            let avg = 0.5 * (g[i][j] + g[j][i].conj());
            g[i][j] = avg;
            g[j][i] = avg.conj();
        }
    }
    g
}

/// Gram matrix `(1/N) Σ_n φ̂(ω + 2πn/N) φ̂(ω + 2πn/N)^H`.
pub fn gram(basis: &GeneratorSet, omega: f64) -> Result<CMatrix> {
    let g = gram_mode(basis, Mode::Function, omega);
    let (lo, _) = eigenvalues(&g);
    if lo < 1e-8 {
        return Err(Error::DegenerateBasis { omega, lambda_min: lo });
    }
    Ok(g)
}

/// Eigenvalues `(λ_min, λ_max)` of a 1×1 or 2×2 Hermitian matrix.
pub fn eigenvalues(g: &CMatrix) -> (f64, f64) {
    match g.len() {
        1 => (g[0][0].re, g[0][0].re),
        2 => {
            let (a, d) = (g[0][0].re, g[1][1].re);
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + g[0][1].norm_sqr()).sqrt();
            (mean - r, mean + r)
        }
        n => panic!("eigenvalues: unsupported dimension {n}"),
    }
}

fn solve(g: &CMatrix, b: &[Complex64], omega: f64) -> Result<Vec<Complex64>> {
    let (lo, hi) = eigenvalues(g);
    if !(lo > 1e-13 * hi) {
        return Err(Error::DegenerateBasis { omega, lambda_min: lo });
    }
    Ok(match g.len() {
        1 => vec![b[0] / g[0][0]],
        _ => {
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            vec![(g[1][1] * b[0] - g[0][1] * b[1]) / det, (g[0][0] * b[1] - g[1][0] * b[0]) / det]
        }
    })
}

/// Minimum-norm least-squares solution; directions with eigenvalue below
/// `1e-13 λ_max` are dropped. Needed in derivative mode at `ω ∈ 2πℤ`, where
/// one aliased term of `jω φ̂` vanishes.
fn solve_pinv(g: &CMatrix, b: &[Complex64], omega: f64) -> Result<Vec<Complex64>> {
    let (lo, hi) = eigenvalues(g);
    if lo > 1e-13 * hi {
        return solve(g, b, omega);
    }
    if !(hi > 0.0) {
        return Ok(vec![Complex64::new(0.0, 0.0); b.len()]);
    }
    if g.len() == 1 {
        return Ok(vec![b[0] / g[0][0]]);
    }
    let (a, d, c) = (g[0][0].re, g[1][1].re, g[0][1]);
    let v1 = [c, Complex64::new(hi - a, 0.0)];
    let v2 = [Complex64::new(hi - d, 0.0), c.conj()];
    let pick = if v1[0].norm_sqr() + v1[1].norm_sqr() >= v2[0].norm_sqr() + v2[1].norm_sqr() { v1 } else { v2 };
    let norm = (pick[0].norm_sqr() + pick[1].norm_sqr()).sqrt();
    let v = [pick[0] / norm, pick[1] / norm];
    let coef = inner(&v, b) / hi;
    Ok(vec![v[0] * coef, v[1] * coef])
}

fn quad_form(g: &CMatrix, x: &[Complex64]) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..x.len() {
        for j in 0..x.len() {
            s += x[i].conj() * g[i][j] * x[j];
        }
    }
    s.re
}

fn inner(s: &[Complex64], v: &[Complex64]) -> Complex64 {
    s.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Transforms of the dual functions, `G(ω)^{-1} φ̂(ω)`.
pub fn dual_fourier(basis: &GeneratorSet, omega: f64) -> Result<Vec<Complex64>> {
    let g = gram(basis, omega)?;
    solve(&g, &basis.fourier(omega), omega)
}

// ---------------------------------------------------------------------------
// kernels

/// Kernel components at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub omega: f64,
    pub e_min: f64,
    pub e_res: f64,
    pub e: f64,
}

/// Error kernel of a scheme in function or derivative mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorKernel {
    pub scheme: SchemeSpec,
    pub mode: Mode,
    pub analysis: Analysis,
}

impl ErrorKernel {
    pub fn new(scheme: &SchemeSpec, mode: Mode) -> Self {
        Self { scheme: scheme.clone(), mode, analysis: Analysis::Sampling }
    }

    /// Kernel of the orthogonal projection on the scheme's basis (and of its
    /// derivative in derivative mode).
    pub fn dual(scheme: &SchemeSpec, mode: Mode) -> Self {
        Self { scheme: scheme.clone(), mode, analysis: Analysis::Dual }
    }

    /// Decay order `2L` of the kernel at the origin.
    pub fn vanishing_order(&self) -> u32 {
        2 * self.mode.rate(self.scheme.order())
    }

    /// Analysis transforms acting on the measured function (`f` or `f'`).
    fn analysis_vector(&self, omega: f64) -> Result<Vec<Complex64>> {
        let s = match self.analysis {
            Analysis::Sampling => self.scheme.sampling_fourier(omega),
            Analysis::Dual => dual_fourier(&self.scheme.basis, omega)?,
        };
        Ok(match self.mode {
            Mode::Function => s,
            // integration by parts moves the derivative onto f
            Mode::Derivative => s.into_iter().map(|x| -x / Complex64::new(0.0, omega)).collect(),
        })
    }

    pub fn eval(&self, omega: f64) -> Result<KernelValue> {
        if self.mode == Mode::Derivative && omega == 0.0 {
            return Ok(KernelValue { omega, e_min: 0.0, e_res: 0.0, e: 0.0 });
        }
        let basis = &self.scheme.basis;
        let stride = basis.stride;
        let inv_n = 1.0 / stride as f64;
        let g = gram_mode(basis, self.mode, omega);
        let v0 = basis_vector(basis, self.mode, omega);
        let dual = match self.mode {
            Mode::Function => solve(&g, &v0, omega)?,
            Mode::Derivative => solve_pinv(&g, &v0, omega)?,
        };
        let s = self.analysis_vector(omega)?;

        let aliases = alias_sum(2, true, |n, out| {
            let v = basis_vector(basis, self.mode, aliased(omega, stride, n));
            out[0] = (inner(&s, &v) * inv_n).norm_sqr();
            out[1] = (inner(&dual, &v) * inv_n).norm_sqr();
        });
        let e = (Complex64::new(1.0, 0.0) - inner(&s, &v0) * inv_n).norm_sqr() + aliases[0];
        let e_min = (Complex64::new(1.0, 0.0) - inner(&dual, &v0) * inv_n).norm_sqr() + aliases[1];
        let diff: Vec<Complex64> = s.iter().zip(&dual).map(|(a, b)| a - b).collect();
        let e_res = inv_n * quad_form(&g, &diff);
        if e_res < -1e-9 {
            return Err(Error::Inconsistency { omega, value: e_res });
        }
        Ok(KernelValue { omega, e_min: e_min.clamp(0.0, 1.0), e_res: e_res.max(0.0), e })
    }
}

/// `E_min(ω)` of a basis in function mode.
pub fn kernel_min(basis: &GeneratorSet, omega: f64) -> Result<f64> {
    let g = gram(basis, omega)?;
    let v0 = basis.fourier(omega);
    let dual = solve(&g, &v0, omega)?;
    let inv_n = 1.0 / basis.stride as f64;
    let stride = basis.stride;
    let alias = alias_sum(1, true, |n, out| {
        out[0] = (inner(&dual, &basis.fourier(aliased(omega, stride, n))) * inv_n).norm_sqr();
    });
    let raw = (Complex64::new(1.0, 0.0) - inner(&dual, &v0) * inv_n).norm_sqr() + alias[0];
    Ok(raw.clamp(0.0, 1.0))
}

/// `E_min`, `E_res` and `E` of a scheme.
pub fn kernel_total(scheme: &SchemeSpec, mode: Mode, omega: f64) -> Result<KernelValue> {
    ErrorKernel::new(scheme, mode).eval(omega)
}

/// The same error kernel in the printed `1 ± φ̂^H G^{-1} φ̂` forms at `ω`,
/// for the sign-convention report.
pub fn printed_min_forms(basis: &GeneratorSet, omega: f64) -> Result<(f64, f64)> {
    let g = gram(basis, omega)?;
    let v0 = basis.fourier(omega);
    let x = solve(&g, &v0, omega)?;
    let q = inner(&v0, &x).re / basis.stride as f64;
    Ok((1.0 + q, 1.0 - q))
}

// ---------------------------------------------------------------------------
// asymptotic constants

/// Default frequency window of the constant fit.
pub const FIT_WINDOW: (f64, f64) = (0.05, 0.4);
const FIT_POINTS: usize = 32;
const FIT_TOLERANCE: f64 = 1e-3;

/// Result of [`asymptotic_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantFit {
    /// `√(E^{(2L)}(0) / (2L)!)`.
    pub constant: f64,
    /// Fitted coefficients of `E(ω)/ω^{2L} ≈ c0 + c1 ω² + c2 ω⁴`.
    pub coefficients: [f64; 3],
    /// RMS fit residual relative to `c0`.
    pub residual: f64,
    pub window: (f64, f64),
}

/// Least-squares fit of `E(ω) / ω^{2L}` against `{1, ω², ω⁴}`.
pub fn asymptotic_constant(kernel: &ErrorKernel, order: u32) -> Result<ConstantFit> {
    asymptotic_constant_in(kernel, order, FIT_WINDOW)
}

pub fn asymptotic_constant_in(kernel: &ErrorKernel, order: u32, window: (f64, f64)) -> Result<ConstantFit> {
    let (lo, hi) = window;
    if !(0.0 < lo && lo < hi) {
        return Err(Error::InvalidArgument(format!("bad fit window [{lo}, {hi}]")));
    }
    let p = 2 * order as i32;
    let mut xs = Vec::with_capacity(FIT_POINTS);
    let mut ys = Vec::with_capacity(FIT_POINTS);
    for i in 0..FIT_POINTS {
        let w = lo + (hi - lo) * i as f64 / (FIT_POINTS - 1) as f64;
        xs.push(w * w);
        ys.push(kernel.eval(w)?.e / w.powi(p));
    }
    let c = least_squares(&xs, &ys, 3);
    let coefficients = [c[0], c[1], c[2]];
    let model = |x: f64| c[0] + c[1] * x + c[2] * x * x;
    let rms = (xs.iter().zip(&ys).map(|(&x, &y)| (y - model(x)).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
    let residual = if c[0] > 0.0 { rms / c[0] } else { f64::INFINITY };
    if !(residual <= FIT_TOLERANCE) {
        return Err(Error::FitFailed { residual });
    }
    Ok(ConstantFit { constant: c[0].sqrt(), coefficients, residual, window })
}

/// Polynomial least squares in `x` of the given number of terms, by normal
/// equations on centred and scaled abscissae.
pub fn least_squares(xs: &[f64], ys: &[f64], terms: usize) -> Vec<f64> {
    let n = xs.len() as f64;
    let mid = xs.iter().sum::<f64>() / n;
    let half = xs.iter().fold(0.0f64, |m, x| m.max((x - mid).abs())).max(1e-300);
    let z: Vec<f64> = xs.iter().map(|x| (x - mid) / half).collect();
    let mut a = vec![vec![0.0; terms + 1]; terms];
    for (zi, yi) in z.iter().zip(ys) {
        let pw: Vec<f64> = (0..terms).map(|k| zi.powi(k as i32)).collect();
        for r in 0..terms {
            for c in 0..terms {
                a[r][c] += pw[r] * pw[c];
            }
            a[r][terms] += pw[r] * yi;
        }
    }
    let b = gauss_solve(a);
    // expand Σ b_k ((x - mid)/half)^k into powers of x
    let mut out = vec![0.0; terms];
    for (k, bk) in b.iter().enumerate() {
        for j in 0..=k {
            let binom = binomial(k, j) as f64;
            out[j] += bk * binom * (-mid).powi((k - j) as i32) / half.powi(k as i32);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn gauss_solve(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..=n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (a[i][n] - s) / a[i][i];
    }
    x
}

// ---------------------------------------------------------------------------
// predicted error

/// Relative tolerance of the panel doubling in [`predicted_error`]; the
/// interlaced kernel carries about 1e-8 relative cancellation noise.
const QUAD_TOLERANCE: f64 = 1e-6;

/// `((1/2π) ∫ |f̂(ω)|² E(Tω) dω)^{1/2}`, where `spectrum` returns `|f̂(ω)|`.
///
/// In derivative mode the spectrum of `f'` is used, i.e. the integrand carries
/// an extra `ω²`.
pub fn predicted_error(spectrum: RealFn, kernel: &ErrorKernel, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let weight = |w: f64| match kernel.mode {
        Mode::Function => 1.0,
        Mode::Derivative => w * w,
    };
    let density = |w: f64| spectrum(w).powi(2) * weight(w);
    let peak = (0..=64)
        .map(|i| density(i as f64 * 0.25))
        .chain((0..=64).map(|i| density(-i as f64 * 0.25)))
        .fold(0.0, f64::max);
    if !peak.is_finite() {
        return Err(Error::NonIntegrable("spectrum is not finite".into()));
    }
    if peak == 0.0 {
        return Ok(0.0);
    }
    let mut cutoff = 4.0;
    while density(cutoff).max(density(-cutoff)) > 1e-30 * peak {
        cutoff *= 1.5;
        if cutoff > 1e5 {
            return Err(Error::NonIntegrable(format!("spectrum does not decay (|ω| > {:e})", 1e5)));
        }
    }
    // panels resolve both the spectrum and the 2π/T structure of the kernel
    let width = 2.0f64.min(PI / (4.0 * step));
    let mut panels = ((2.0 * cutoff) / width).ceil() as usize;
    let integrate = |panels: usize| -> Result<f64> {
        use rayon::prelude::*;
        let h = 2.0 * cutoff / panels as f64;
        let parts: Vec<f64> = (0..panels)
            .into_par_iter()
            .map(|p| {
                let lo = -cutoff + p as f64 * h;
                let mut err = None;
                let v = quadrature::composite(lo, lo + h, 1, |w| match kernel.eval(step * w) {
                    Ok(k) => density(w) * k.e,
                    Err(e) => {
                        err.get_or_insert(e);
                        0.0
                    }
                });
                err.map_or(Ok(v), Err)
            })
            .collect::<Result<_>>()?;
        let mut sum = KahanSum::default();
        parts.into_iter().for_each(|v| sum.add(v));
        Ok(sum.value())
    };
    let mut coarse = integrate(panels)?;
    for _ in 0..4 {
        panels *= 2;
        let fine = integrate(panels)?;
        if (fine - coarse).abs() <= QUAD_TOLERANCE * fine.abs() {
            return Ok((fine / (2.0 * PI)).sqrt());
        }
        coarse = fine;
    }
    Err(Error::NonIntegrable(format!("quadrature did not reach relative tolerance {QUAD_TOLERANCE:e}")))
}

// ---------------------------------------------------------------------------
// Riesz bounds

/// Extreme Gram eigenvalues over one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszBounds {
    pub a: f64,
    pub b: f64,
}

pub const RIESZ_GRID: usize = 4096;

pub fn riesz_bounds(basis: &GeneratorSet) -> Result<RieszBounds> {
    use rayon::prelude::*;
    let (a, b, at) = (0..RIESZ_GRID)
        .into_par_iter()
        .map(|i| {
            let w = 2.0 * PI * i as f64 / RIESZ_GRID as f64;
            let (lo, hi) = eigenvalues(&gram_mode(basis, Mode::Function, w));
            (lo, hi, w)
        })
        .reduce(
            || (f64::INFINITY, f64::NEG_INFINITY, 0.0),
            |x, y| {
                let (lo, at) = if x.0 <= y.0 { (x.0, x.2) } else { (y.0, y.2) };
                (lo, x.1.max(y.1), at)
            },
        );
    if a < 1e-8 {
        return Err(Error::DegenerateBasis { omega: at, lambda_min: a });
    }
    Ok(RieszBounds { a, b })
}

// ---------------------------------------------------------------------------
// quasi-biorthonormality

/// Moments of order `ell` for every channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentAudit {
    pub ell: u32,
    pub sampling: Vec<f64>,
    pub dual: Vec<f64>,
    /// `max_i |sampling_i - dual_i|`.
    pub deviation: f64,
}

const MOMENT_STEP: f64 = 0.05;
const MOMENT_STENCIL: i32 = 5;

/// Compares `∫ t^ℓ φ̃_i` with `∫ t^ℓ φ_{d,i}` for `ℓ < order`.
pub fn quasi_biorthonormality_audit(scheme: &SchemeSpec, order: u32) -> Result<Vec<MomentAudit>> {
    let offsets: Vec<f64> = (-MOMENT_STENCIL..=MOMENT_STENCIL).map(|i| i as f64).collect();
    let samples: Vec<Vec<Complex64>> =
        offsets.iter().map(|&x| dual_fourier(&scheme.basis, x * MOMENT_STEP)).collect::<Result<_>>()?;
    (0..order)
        .map(|ell| {
            let w = fornberg_weights(&offsets, ell as usize);
            let scale = MOMENT_STEP.powi(ell as i32);
            let jl = Complex64::i().powi(ell as i32);
            let dual: Vec<f64> = (0..scheme.basis.len())
                .map(|i| {
                    let d: Complex64 = samples.iter().zip(&w).map(|(s, wk)| s[i] * wk).sum::<Complex64>() / scale;
                    (jl * d).re
                })
                .collect();
            let sampling: Vec<f64> = scheme.sampling.iter().map(|s| s.moment(ell)).collect();
            let deviation = sampling.iter().zip(&dual).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            Ok(MomentAudit { ell, sampling, dual, deviation })
        })
        .collect()
}

/// Finite-difference weights for the `order`-th derivative at 0 on the given
/// nodes (Fornberg's recursion).
pub fn fornberg_weights(nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}
