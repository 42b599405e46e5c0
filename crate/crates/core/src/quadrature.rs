//! Trapezoidal weights on uniform and logarithmic grids.

/// Trapezoid weights for `n` uniformly spaced nodes with spacing `h`.
pub fn uniform_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    if n >= 2 {
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
    } else if n == 1 {
        w[0] = 0.0;
    }
    w
}

/// Weight of node `k` of an `n`-node uniform trapezoid rule.
#[inline]
pub fn uniform_weight(k: usize, n: usize, h: f64) -> f64 {
    if k == 0 || k + 1 == n {
        0.5 * h
    } else {
        h
    }
}

/// Trapezoid rule in `ln x` for nodes `x_k = a * exp(k * h)`: the weight of
/// node `k` in `∫ f(x) dx ≈ Σ w_k f(x_k)` is `x_k * h`, halved at both ends.
pub fn log_weights(nodes: &[f64], log_step: f64) -> Vec<f64> {
    let n = nodes.len();
    nodes
        .iter()
        .enumerate()
        .map(|(k, &x)| x * uniform_weight(k, n, log_step))
        .collect()
}

/// `∫_a^b f(x) dx` by the trapezoid rule on `n` log-spaced nodes.
pub fn integrate_log<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(a > 0.0 && b > a && n >= 2);
    let h = (b / a).ln() / (n - 1) as f64;
    (0..n)
        .map(|k| {
            let x = a * (k as f64 * h).exp();
            uniform_weight(k, n, h) * x * f(x)
        })
        .sum()
}

/// `∫_a^b f(x) dx` by the trapezoid rule on `n` uniform nodes.
pub fn integrate_uniform<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(b > a && n >= 2);
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|k| uniform_weight(k, n, h) * f(a + k as f64 * h))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_rule_is_exact_for_linear() {
        let v = integrate_uniform(|x| 3.0 * x + 1.0, 0.0, 2.0, 17);
        assert!((v - 8.0).abs() < 1e-13);
    }

    #[test]
    fn log_rule_converges_on_gaussian_moment() {
        // ∫_0^∞ x^3 exp(-x^2) dx = 1/2
        let v = integrate_log(|x| x.powi(3) * (-x * x).exp(), 1e-4, 20.0, 2000);
        assert!((v - 0.5).abs() < 1e-10, "{v}");
    }

    #[test]
    fn weights_match_rule() {
        let w = uniform_weights(4, 0.5);
        assert_eq!(w, vec![0.25, 0.5, 0.5, 0.25]);
        let nodes = [1.0, 2.0, 4.0];
        let lw = log_weights(&nodes, 2f64.ln());
        assert!((lw[1] - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!((lw[2] - 2.0 * 2f64.ln()).abs() < 1e-15);
    }
}
