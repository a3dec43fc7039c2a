//! Causal polynomial B-splines on the integer knots `0, 1, ..., L`.

use num_complex::Complex64;

/// Largest supported order (degree 5).
pub const MAX_ORDER: u32 = 6;

/// Causal B-spline of order `order` (degree `order - 1`), Cox–de Boor recursion.
///
/// Intervals are half-open, so the function is right-continuous.
pub fn value(order: u32, t: f64) -> f64 {
    debug_assert!((1..=MAX_ORDER).contains(&order));
    let l = order as usize;
    if !(0.0..l as f64).contains(&t) {
        return 0.0;
    }
    let span = t.floor() as usize;
    // Degree-0 pieces B_{i,1} for i = 0..l-1; only the active span is 1.
    let mut b = [0.0f64; MAX_ORDER as usize + 1];
    b[span] = 1.0;
    for k in 2..=l {
        let denom = (k - 1) as f64;
        for i in 0..=(l - k) {
            let left = (t - i as f64) / denom * b[i];
            let right = ((i + k) as f64 - t) / denom * b[i + 1];
            b[i] = left + right;
        }
    }
    b[0]
}

/// Right-continuous derivative: `β_L'(t) = β_{L-1}(t) - β_{L-1}(t - 1)`.
pub fn derivative(order: u32, t: f64) -> f64 {
    if order <= 1 {
        return 0.0;
    }
    value(order - 1, t) - value(order - 1, t - 1.0)
}

/// `sin(x)/x` with a series branch around the origin.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

/// Fourier transform `((1 - e^{-jω}) / (jω))^L = e^{-jωL/2} sinc(ω/2)^L`.
pub fn fourier(order: u32, omega: f64) -> Complex64 {
    let mag = sinc(0.5 * omega).powi(order as i32);
    Complex64::from_polar(1.0, -0.5 * omega * order as f64) * mag
}

/// Centered cubic B-spline (support `[-2, 2]`).
pub fn centered_cubic(t: f64) -> f64 {
    value(4, t + 2.0)
}

pub fn centered_cubic_deriv(t: f64) -> f64 {
    derivative(4, t + 2.0)
}
