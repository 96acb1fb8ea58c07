//! Legendre polynomial roots by safeguarded Newton iteration.

use super::KnotError;

const MAX_ITER: usize = 100;
const RESIDUAL_TOL: f64 = 1e-14;

/// `(P_n(x), P_n'(x))` from the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    // n (x P_n - P_{n-1}) / (x^2 - 1), with the endpoint limit n(n+1)/2 * (±1)^(n+1)
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < f64::EPSILON {
        let sign = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        sign * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * p - p_prev) / (x * x - 1.0)
    };
    (p, dp)
}

/// Roots of `P_n` in ascending order.
///
/// Only the non-negative half is iterated; the rest follows by `x -> -x`.
/// Each root `cos(theta_i)` is kept inside its Bruns bracket
/// `(i - 1/2) pi / (n + 1/2) < theta_i < i pi / (n + 1)`, and any Newton step
/// leaving the bracket is replaced by bisection.
pub fn legendre_roots(n: usize) -> Result<Vec<f64>, KnotError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let nf = n as f64;
    let pi = std::f64::consts::PI;
    let mut positive = Vec::with_capacity(n.div_ceil(2));
    for i in 1..=n / 2 {
        let fi = i as f64;
        let mut lo = (fi * pi / (nf + 1.0)).cos();
        let mut hi = ((fi - 0.5) * pi / (nf + 0.5)).cos();
        let mut x = (pi * (fi - 0.25) / (nf + 0.5)).cos();
        let p_lo = legendre_with_derivative(n, lo).0;
        let mut converged = false;
        for _ in 0..MAX_ITER {
            let (p, dp) = legendre_with_derivative(n, x);
            if p.abs() < RESIDUAL_TOL {
                converged = true;
                break;
            }
            if (p > 0.0) == (p_lo > 0.0) {
                lo = x;
            } else {
                hi = x;
            }
            let newton = x - p / dp;
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            let step = (next - x).abs();
            x = next;
            if step <= 4.0 * f64::EPSILON * x.abs() {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(KnotError::ConvergenceFailure { degree: n, index: i });
        }
        positive.push(x);
    }
    let mut roots: Vec<f64> = positive.iter().map(|x| -x).collect();
    if n % 2 == 1 {
        roots.push(0.0);
    }
    roots.extend(positive.iter().rev());
    Ok(roots)
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(points: usize) -> Result<(Vec<f64>, Vec<f64>), KnotError> {
    let nodes = legendre_roots(points)?;
    let weights = nodes
        .iter()
        .map(|&x| {
            let (_, dp) = legendre_with_derivative(points, x);
            2.0 / ((1.0 - x * x) * dp * dp)
        })
        .collect();
    Ok((nodes, weights))
}
