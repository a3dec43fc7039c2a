//! Generators for interlaced derivative sampling.
//!
//! The reconstruction space is the cubic spline space with knots on ℤ, shifted
//! on the lattice 2ℤ. The two generators are cardinal for the functionals
//! `f(2k)` and `f'(2k + 1/2)`:
//!
//! ```text
//! φ1(2k) = δ[k],  φ1'(2k + 1/2) = 0,
//! φ2(2k) = 0,     φ2'(2k + 1/2) = δ[k].
//! ```
//!
//! Writing `φ̂_i(ω) = H_i(ω) β̂³(ω)` with `H_i` 2π-periodic, the conditions form
//! a 2×2 polyphase system in `(H_i(ω), H_i(ω + π))` whose determinant stays
//! within `[1, 1.0035]` in modulus, so the generators decay exponentially.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::bspline;

/// Position of the derivative sample inside one lattice cell.
pub const DERIVATIVE_OFFSET: f64 = 0.5;

/// Shift stride of the interlaced scheme.
pub const STRIDE: usize = 2;

/// Spline coefficients are kept for |m| <= this radius.
const TABLE_RADIUS: i64 = 48;
const DFT_POINTS: usize = 1024;

fn dtft_of_samples<F: Fn(f64) -> f64>(g: F, offset: f64, omega: f64) -> Complex64 {
    (-3i64..=3)
        .map(|k| {
            let v = g(k as f64 + offset);
            Complex64::from_polar(v, -omega * k as f64)
        })
        .sum()
}

/// `Σ_k β³(k) e^{-jωk}`.
fn value_symbol(omega: f64) -> Complex64 {
    dtft_of_samples(bspline::centered_cubic, 0.0, omega)
}

/// `Σ_k β³'(k + 1/2) e^{-jωk}`.
fn derivative_symbol(omega: f64) -> Complex64 {
    dtft_of_samples(bspline::centered_cubic_deriv, DERIVATIVE_OFFSET, omega)
}

/// Periodic factors `(H_1(ω), H_2(ω))`.
pub fn polyphase_factors(omega: f64) -> [Complex64; 2] {
    let s0 = value_symbol(omega);
    let s0_pi = value_symbol(omega + PI);
    let d = derivative_symbol(omega);
    let d_pi = derivative_symbol(omega + PI);
    let det = 0.25 * (s0 * d_pi - s0_pi * d);
    [d_pi / (2.0 * det), -s0_pi / (2.0 * det)]
}

/// Fourier transform of generator `index` (0 or 1).
pub fn fourier(index: usize, omega: f64) -> Complex64 {
    polyphase_factors(omega)[index] * bspline::sinc(0.5 * omega).powi(4)
}

/// The closed forms as printed for the interlaced bases.
///
/// These describe the cardinal basis for `f(2k), f'(2k)` instead, which is
/// singular at every multiple of π; they are kept for audit only.
pub fn printed_fourier(index: usize, omega: f64) -> Complex64 {
    let j = Complex64::i();
    let e1 = (j * omega).exp();
    let e2m = (-2.0 * j * omega).exp();
    let w4 = omega.powi(4);
    if index == 0 {
        if omega.abs() < 1e-2 {
            let x = 0.5 * omega;
            return Complex64::new(1.5 * bspline::sinc(x).powi(4), 0.0);
        }
        3.0 * e2m * (e1 - 1.0).powi(4) / (2.0 * w4)
    } else {
        e2m * (e1 - 1.0).powi(4) * (1.0 + e1 * (e1 - 4.0)) / ((2.0 - 2.0 * (2.0 * j * omega).exp()) * w4)
    }
}

/// Spline coefficients `h_i[m]` with `φ_i(t) = Σ_m h_i[m] β³(t - m)`.
#[derive(Debug, Clone)]
pub struct SplineCoefficients {
    pub radius: i64,
    pub coefs: [Vec<f64>; 2],
}

impl SplineCoefficients {
    /// Inverse DFT of the periodic factors on `points` samples of `[0, 2π)`.
    pub fn compute(radius: i64, points: usize) -> Self {
        let samples: Vec<[Complex64; 2]> =
            (0..points).map(|j| polyphase_factors(2.0 * PI * j as f64 / points as f64)).collect();
        let coef = |i: usize, m: i64| -> f64 {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, h)| h[i] * Complex64::from_polar(1.0, 2.0 * PI * (j as f64) * m as f64 / points as f64))
                .sum();
            sum.re / points as f64
        };
        let coefs = [0, 1].map(|i| (-radius..=radius).map(|m| coef(i, m)).collect());
        Self { radius, coefs }
    }

    pub fn get(&self, index: usize, m: i64) -> f64 {
        if m.abs() > self.radius {
            0.0
        } else {
            self.coefs[index][(m + self.radius) as usize]
        }
    }

    pub fn value(&self, index: usize, t: f64) -> f64 {
        self.synth(index, t, bspline::centered_cubic)
    }

    pub fn derivative(&self, index: usize, t: f64) -> f64 {
        self.synth(index, t, bspline::centered_cubic_deriv)
    }

    fn synth(&self, index: usize, t: f64, kernel: fn(f64) -> f64) -> f64 {
        let lo = (t - 2.0).ceil() as i64;
        let hi = (t + 2.0).floor() as i64;
        (lo..=hi).map(|m| self.get(index, m) * kernel(t - m as f64)).sum()
    }

    /// Bound on `|φ_i(t)|` for `|t| >= r`, from the coefficient tail.
    pub fn tail_bound(&self, r: f64) -> f64 {
        let start = (r - 2.0).floor() as i64;
        let tail = |i: usize| -> f64 {
            (start.max(-self.radius)..=self.radius)
                .filter(|m| m.abs() >= start)
                .map(|m| self.get(i, m).abs())
                .sum::<f64>()
        };
        // Coefficients beyond the stored radius decay geometrically; the last
        // stored magnitude bounds them up to a factor < 2.
        let beyond = |i: usize| 2.0 * self.get(i, self.radius).abs().max(self.get(i, -self.radius).abs());
        (0..2).map(|i| (2.0 / 3.0) * (tail(i) + beyond(i))).fold(0.0, f64::max)
    }
}

/// Shared coefficient table used for time-domain evaluation.
pub fn table() -> &'static SplineCoefficients {
    static TABLE: OnceLock<SplineCoefficients> = OnceLock::new();
    TABLE.get_or_init(|| SplineCoefficients::compute(TABLE_RADIUS, DFT_POINTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinal_conditions() {
        let t = table();
        for k in -5i64..=5 {
            let x = 2.0 * k as f64;
            let d = if k == 0 { 1.0 } else { 0.0 };
            assert!((t.value(0, x) - d).abs() < 1e-13, "phi1({x})");
            assert!(t.value(1, x).abs() < 1e-13, "phi2({x})");
            let y = x + DERIVATIVE_OFFSET;
            assert!(t.derivative(0, y).abs() < 1e-13, "phi1'({y})");
            assert!((t.derivative(1, y) - d).abs() < 1e-13, "phi2'({y})");
        }
    }

    #[test]
    fn determinant_bounded_away_from_zero() {
        for i in 0..4096 {
            let w = 2.0 * PI * i as f64 / 4096.0;
            let s0 = value_symbol(w);
            let s0_pi = value_symbol(w + PI);
            let d = derivative_symbol(w);
            let d_pi = derivative_symbol(w + PI);
            let det = s0 * d_pi - s0_pi * d;
            let m = det.norm();
            assert!(m > 1.0 - 1e-12 && m < 1.0035, "|det| = {m} at {w}");
        }
    }

    #[test]
    fn coefficients_decay() {
        let t = table();
        // roughly a factor 0.2 per step until the DFT round-off floor
        assert!(t.get(0, 10).abs() < 1e-5);
        assert!(t.get(0, 30).abs() < 1e-15);
        assert!(t.get(1, -30).abs() < 1e-15);
        assert!(t.tail_bound(20.0) < 1e-10);
    }

    #[test]
    fn printed_forms_differ_from_cardinal_basis() {
        assert!((printed_fourier(0, 0.0).re - 1.5).abs() < 1e-15);
        assert!((fourier(0, 0.0).re - 2.0).abs() < 1e-13);
        // real pole of the printed second generator at ω = π
        assert!(printed_fourier(1, PI - 1e-6).norm() > 1e4);
    }
}
