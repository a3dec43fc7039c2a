//! Finitely supported coefficient sequences, reproduction sequences for the
//! Hermite pair, and the direct cubic B-spline filter.
//!
//! The direct filter is written `(b¹₃)^{-1}` in some references; it is the
//! inverse of the sampled cubic B-spline `b³ = {1/6, 2/3, 1/6}`.

use serde::{Deserialize, Serialize};

use crate::basis::{eval_generator, eval_generator_deriv, Generator};
use crate::error::{Error, Result};

/// Real sequence `values[i]` stored at index `offset + i`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefSequence {
    pub values: Vec<f64>,
    pub offset: i64,
    /// When false, the first and last values are non-zero.
    pub trimmed: bool,
}

impl CoefSequence {
    /// Sequence whose boundary values may be zero.
    pub fn new(values: Vec<f64>, offset: i64) -> Self {
        Self { values, offset, trimmed: true }
    }

    pub fn zeros(len: usize, offset: i64) -> Self {
        Self::new(vec![0.0; len], offset)
    }

    pub fn impulse(at: i64) -> Self {
        Self::new(vec![1.0], at)
    }

    /// Drops zero values at both ends.
    pub fn trim(mut self) -> Self {
        let first = self.values.iter().position(|&v| v != 0.0);
        match first {
            None => Self { values: Vec::new(), offset: 0, trimmed: false },
            Some(first) => {
                let last = self.values.iter().rposition(|&v| v != 0.0).unwrap();
                self.values = self.values[first..=last].to_vec();
                self.offset += first as i64;
                self.trimmed = false;
                self
            }
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First index past the stored values.
    pub fn end(&self) -> i64 {
        self.offset + self.values.len() as i64
    }

    pub fn get(&self, k: i64) -> f64 {
        let i = k - self.offset;
        if i < 0 || i >= self.values.len() as i64 {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.offset..self.end()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.offset + i as i64, v))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Full linear convolution.
    pub fn convolve(&self, other: &CoefSequence) -> CoefSequence {
        if self.is_empty() || other.is_empty() {
            return CoefSequence::new(Vec::new(), self.offset + other.offset);
        }
        let mut out = vec![0.0; self.len() + other.len() - 1];
        for (i, &a) in self.values.iter().enumerate() {
            for (j, &b) in other.values.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CoefSequence::new(out, self.offset + other.offset)
    }

    /// `Σ_k |k|^3 |c[k]|`.
    pub fn cubic_moment_mass(&self) -> f64 {
        self.iter().map(|(k, v)| (k.abs() as f64).powi(3) * v.abs()).sum()
    }
}

/// Function reproduced by a pair of Hermite sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReproductionTarget {
    /// Causal quadratic B-spline β² (order 3).
    Beta2,
    /// Causal cubic B-spline β³ (order 4).
    Beta3,
    /// `t^ℓ`.
    Monomial(u32),
}

/// Weights of `φ1(· - k)` (`seq1`) and `φ2(· - k)` (`seq2`) reproducing `target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproductionSequences {
    pub target: ReproductionTarget,
    pub seq1: CoefSequence,
    pub seq2: CoefSequence,
}

impl ReproductionSequences {
    /// `Σ_k seq1[k] φ1(t - k) + seq2[k] φ2(t - k)`.
    pub fn synthesize(&self, t: f64) -> f64 {
        let lo = (t - 1.0).floor() as i64;
        let hi = (t + 1.0).ceil() as i64;
        (lo..=hi)
            .map(|k| {
                let u = t - k as f64;
                self.seq1.get(k) * eval_generator(Generator::Phi1, u).unwrap_or(0.0)
                    + self.seq2.get(k) * eval_generator(Generator::Phi2, u).unwrap_or(0.0)
            })
            .sum()
    }

    /// Target function value.
    pub fn target_value(&self, t: f64) -> f64 {
        match self.target {
            ReproductionTarget::Beta2 => eval_generator(Generator::BSpline(3), t).unwrap_or(0.0),
            ReproductionTarget::Beta3 => eval_generator(Generator::BSpline(4), t).unwrap_or(0.0),
            ReproductionTarget::Monomial(l) => t.powi(l as i32),
        }
    }

    /// Sup-norm residual on a grid of step `step` over `[lo, hi]`.
    pub fn residual(&self, lo: f64, hi: f64, step: f64) -> f64 {
        let n = ((hi - lo) / step).round() as i64;
        (0..=n)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / n as f64;
                (self.synthesize(t) - self.target_value(t)).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.seq1.is_finite() && self.seq2.is_finite()
    }
}

/// Hermite weights of the causal β² or β³.
///
/// Hermite interpolation is exact on C¹ piecewise cubics with integer knots,
/// so the weights are the samples of the target and of its derivative.
pub fn hermite_reproduction(target: ReproductionTarget) -> Result<ReproductionSequences> {
    let order = match target {
        ReproductionTarget::Beta2 => 3,
        ReproductionTarget::Beta3 => 4,
        ReproductionTarget::Monomial(_) => {
            return Err(Error::InvalidArgument("use polynomial_reproduction for monomials".into()))
        }
    };
    let g = Generator::BSpline(order);
    let ks = 1..order as i64;
    let values: Result<Vec<f64>> = ks.clone().map(|k| eval_generator(g, k as f64)).collect();
    let derivs: Result<Vec<f64>> = ks.map(|k| eval_generator_deriv(g, k as f64)).collect();
    Ok(ReproductionSequences { target, seq1: CoefSequence::new(values?, 1), seq2: CoefSequence::new(derivs?, 1) })
}

/// Weights `k^ℓ` and `ℓ k^{ℓ-1}` over `k_range` (inclusive) reproducing `t^ℓ`
/// on `[k_lo, k_hi]`.
pub fn polynomial_reproduction(degree: u32, k_range: (i64, i64)) -> Result<ReproductionSequences> {
    if degree > 3 {
        return Err(Error::OrderExceeded { degree, max: 3 });
    }
    let (lo, hi) = k_range;
    if hi < lo {
        return Err(Error::InvalidArgument(format!("empty index range {lo}..={hi}")));
    }
    let l = degree as i32;
    let seq1 = (lo..=hi).map(|k| (k as f64).powi(l)).collect();
    let seq2 = (lo..=hi).map(|k| if l == 0 { 0.0 } else { l as f64 * (k as f64).powi(l - 1) }).collect();
    Ok(ReproductionSequences {
        target: ReproductionTarget::Monomial(degree),
        seq1: CoefSequence::new(seq1, lo),
        seq2: CoefSequence::new(seq2, lo),
    })
}

/// Extension of a finite signal beyond its ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Boundary {
    /// Whole-sample symmetric: `s[-k] = s[k]`, `s[n-1+k] = s[n-1-k]`.
    #[default]
    Mirror,
    /// Zero outside the signal.
    ZeroPad,
}

/// Pole of the direct cubic B-spline filter.
pub const CUBIC_POLE: f64 = -0.267_949_192_431_122_8; // √3 - 2

/// The sampled cubic B-spline `{1/6, 2/3, 1/6}` centred at index 0.
pub fn cubic_kernel() -> CoefSequence {
    CoefSequence::new(vec![1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], -1)
}

/// Coefficients `c` with `Σ_k c[k] b³[n-k] = samples[n]`, by the causal /
/// anti-causal recursive filter with pole `√3 - 2`.
pub fn bspline_prefilter(samples: &CoefSequence, boundary: Boundary) -> Result<CoefSequence> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample sequence".into()));
    }
    let s = &samples.values;
    let n = s.len();
    let z = CUBIC_POLE;
    if n == 1 {
        let gain = match boundary {
            Boundary::Mirror => 1.0,
            Boundary::ZeroPad => 1.5,
        };
        return Ok(CoefSequence::new(vec![s[0] * gain], samples.offset));
    }
    let mut cp = vec![0.0; n];
    cp[0] = match boundary {
        Boundary::Mirror => {
            // exact sum over the 2n-2 periodic mirror extension
            let zn = z.powi(n as i32 - 1);
            let z2n = zn * zn;
            let mut sum = s[0] + zn * s[n - 1];
            let mut zk = z;
            let mut zr = z2n / z;
            for &v in &s[1..n - 1] {
                sum += (zk + zr) * v;
                zk *= z;
                zr /= z;
            }
            sum / (1.0 - z2n)
        }
        Boundary::ZeroPad => s[0],
    };
    for k in 1..n {
        cp[k] = s[k] + z * cp[k - 1];
    }
    let mut cm = vec![0.0; n];
    cm[n - 1] = match boundary {
        Boundary::Mirror => z / (z * z - 1.0) * (cp[n - 1] + z * cp[n - 2]),
        Boundary::ZeroPad => -z / (1.0 - z * z) * cp[n - 1],
    };
    for k in (0..n - 1).rev() {
        cm[k] = z * (cm[k + 1] - cp[k]);
    }
    Ok(CoefSequence::new(cm.into_iter().map(|v| 6.0 * v).collect(), samples.offset))
}

/// Same coefficients by a banded (tridiagonal) solve of the interpolation
/// system with mirror boundary rows.
pub fn bspline_prefilter_banded(samples: &CoefSequence) -> Result<CoefSequence> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample sequence".into()));
    }
    let n = samples.len();
    if n == 1 {
        return Ok(samples.clone());
    }
    let (a, b) = (1.0 / 6.0, 2.0 / 3.0);
    // rows: sub[i] c[i-1] + diag[i] c[i] + sup[i] c[i+1] = s[i]
    let mut sub = vec![a; n];
    let mut sup = vec![a; n];
    let diag = vec![b; n];
    sub[0] = 0.0;
    sup[0] = 2.0 * a;
    sub[n - 1] = 2.0 * a;
    sup[n - 1] = 0.0;
    // Thomas algorithm
    let mut cprime = vec![0.0; n];
    let mut dprime = vec![0.0; n];
    cprime[0] = sup[0] / diag[0];
    dprime[0] = samples.values[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * cprime[i - 1];
        cprime[i] = sup[i] / m;
        dprime[i] = (samples.values[i] - sub[i] * dprime[i - 1]) / m;
    }
    let mut c = vec![0.0; n];
    c[n - 1] = dprime[n - 1];
    for i in (0..n - 1).rev() {
        c[i] = dprime[i] - cprime[i] * c[i + 1];
    }
    Ok(CoefSequence::new(c, samples.offset))
}
