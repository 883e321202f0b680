//! Fixed-order Gauss-Legendre rules.

use std::sync::OnceLock;

pub const GL_ORDER: usize = 16;

/// Nodes and weights of the 16-point rule on `[-1, 1]`, ascending.
pub fn gauss_legendre_16() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule::<GL_ORDER>())
}

fn legendre_rule<const N: usize>() -> ([f64; N], [f64; N]) {
    let mut nodes = [0.0; N];
    let mut weights = [0.0; N];
    for i in 0..N {
        // Newton iteration from the Chebyshev-like initial guess
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(N, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(N, x);
        dp = if d != 0.0 { d } else { dp };
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `int_lo^hi f` with the 16-point rule.
pub fn integrate<F: Fn(f64) -> f64>(lo: f64, hi: f64, f: F) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let (nodes, weights) = gauss_legendre_16();
    let (c, h) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(c + h * x);
    }
    acc * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weights_sum_to_two() {
        let (nodes, weights) = gauss_legendre_16();
        assert_abs_diff_eq!(weights.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        assert_abs_diff_eq!(nodes[15], 0.989400934991649932596, epsilon = 1e-15);
    }

    #[test]
    fn exact_for_degree_31() {
        for k in 0..=31 {
            let got = integrate(0.0, 1.0, |x| x.powi(k));
            assert_abs_diff_eq!(got, 1.0 / (k as f64 + 1.0), epsilon = 1e-14);
        }
    }
}
