//! Finite-difference checks for the analytic gradient.

use crate::error::Result;

/// Central differences `(f(x + h e_i) - f(x - h e_i)) / 2h` for every `i`.
pub fn central_difference<F>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut probe = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = f(&probe)?;
        probe[i] = x[i] - h;
        let down = f(&probe)?;
        probe[i] = x[i];
        out.push((up - down) / (2.0 * h));
    }
    Ok(out)
}

/// `max_i |g_i - fd_i| / max(||g||_inf, 1e-8)`.
pub fn gradient_deviation(analytic: &[f64], numeric: &[f64]) -> f64 {
    assert_eq!(analytic.len(), numeric.len(), "gradient lengths differ");
    let scale = analytic.iter().fold(0.0_f64, |m, g| m.max(g.abs())).max(1e-8);
    analytic.iter().zip(numeric).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
}

/// Relative mismatch between `f(x + eps d) - f(x)` and `eps <grad, d>`.
pub fn directional_check<F>(f: F, grad: &[f64], x: &[f64], d: &[f64], eps: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let moved: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + eps * di).collect();
    let actual = f(&moved)? - f(x)?;
    let predicted = eps * grad.iter().zip(d).map(|(g, di)| g * di).sum::<f64>();
    Ok((actual - predicted).abs() / predicted.abs().max(f64::MIN_POSITIVE))
}
