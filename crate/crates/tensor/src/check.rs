//! Numeric verification helpers shared by gradient test suites.

/// Relative error with an absolute floor so near-zero pairs compare sanely.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / (a.abs() + b.abs()).max(1e-8)
}

/// Central finite difference of a scalar function at `x0`.
pub fn central_difference<F: FnMut(f64) -> f64>(mut f: F, x0: f64, step: f64) -> f64 {
    (f(x0 + step) - f(x0 - step)) / (2.0 * step)
}
