/// Fourth-order centered difference with step `step_rel·max(|x|, 1)`.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, step_rel: f64) -> f64 {
    let h = step_rel * x.abs().max(1.0);
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Fourth-order centered second difference.
pub fn second_derivative<F: Fn(f64) -> f64>(f: F, x: f64, step_rel: f64) -> f64 {
    let h = step_rel * x.abs().max(1.0);
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}
