/// Symmetric difference `(f(x+h) - f(x-h)) / 2h`. Truncation error is
/// `h² f'''(ξ) / 6`, so accuracy is O(h²) until roundoff (~ε|f|/h) takes over.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
