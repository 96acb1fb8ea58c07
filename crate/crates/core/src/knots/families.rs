//! Generators for the standard stretched families.

use super::legendre::legendre_roots;
use super::{from_unit_positions, KnotError, KnotSequence};

fn check_domain(a: f64, b: f64) -> Result<(), KnotError> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(KnotError::InvalidParameter(format!("domain [{a}, {b}] must be finite with a < b")))
    }
}

/// Unit-frame positions from cumulative interval lengths.
fn positions_from_lengths(lengths: &[f64]) -> Vec<f64> {
    let total: f64 = lengths.iter().sum();
    let mut acc = 0.0;
    let mut unit = Vec::with_capacity(lengths.len() + 1);
    unit.push(0.0);
    for &h in lengths {
        acc += h;
        unit.push(acc / total);
    }
    unit
}

/// `n + 1` equally spaced knots.
pub fn gen_uniform(n: usize, a: f64, b: f64) -> Result<KnotSequence, KnotError> {
    check_domain(a, b)?;
    if n == 0 {
        return Err(KnotError::InvalidParameter("uniform family needs n >= 1".into()));
    }
    Ok(from_unit_positions(&positions_from_lengths(&vec![1.0; n]), a, b))
}

/// `big_n` internal knots whose interval lengths grow by the factor `q`
/// from each end towards the midpoint.
///
/// For an odd number of intervals `n = 2m - 1` the middle interval continues
/// the progression once more, `q^(m-1) h_1`.
pub fn gen_geometric(big_n: usize, q: f64, a: f64, b: f64) -> Result<KnotSequence, KnotError> {
    check_domain(a, b)?;
    if !(q >= 1.0) || !q.is_finite() {
        return Err(KnotError::InvalidRatio(q));
    }
    let n = big_n + 1;
    let half: Vec<f64> = (0..n / 2).map(|i| q.powi(i as i32)).collect();
    let mut lengths = half.clone();
    if n % 2 == 1 {
        lengths.push(q.powi((n / 2) as i32));
    }
    lengths.extend(half.iter().rev());
    Ok(from_unit_positions(&positions_from_lengths(&lengths), a, b))
}

/// Internal knots at the roots of the degree-`big_n` Chebyshev polynomial,
/// `-cos((2k - 1) pi / (2N))`, mapped from `[-1, 1]`.
pub fn gen_chebyshev(big_n: usize, a: f64, b: f64) -> Result<KnotSequence, KnotError> {
    check_domain(a, b)?;
    if big_n == 0 {
        return Err(KnotError::InvalidParameter("Chebyshev family needs N >= 1".into()));
    }
    let nf = big_n as f64;
    let mut unit = vec![0.0];
    unit.extend((1..=big_n).map(|k| {
        let phi = (2.0 * k as f64 - 1.0) * std::f64::consts::PI / (2.0 * nf);
        0.5 * (1.0 - phi.cos())
    }));
    unit.push(1.0);
    Ok(from_unit_positions(&unit, a, b))
}

/// Internal knots at the roots of the degree-`big_n` Legendre polynomial.
pub fn gen_legendre(big_n: usize, a: f64, b: f64) -> Result<KnotSequence, KnotError> {
    check_domain(a, b)?;
    if big_n == 0 {
        return Err(KnotError::InvalidParameter("Legendre family needs N >= 1".into()));
    }
    let roots = legendre_roots(big_n)?;
    let mut unit = vec![0.0];
    unit.extend(roots.iter().map(|r| 0.5 * (1.0 + r)));
    unit.push(1.0);
    Ok(from_unit_positions(&unit, a, b))
}
