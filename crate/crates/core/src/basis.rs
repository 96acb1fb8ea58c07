//! Non-normalized C¹ cubic B-spline basis `D_1..D_{2n+2}`.
//!
//! `D_{2k-1}` and `D_{2k}` share the support `[x_{k-2}, x_k]` and are given
//! on it in closed form by truncated powers:
//!
//! ```text
//! D_{2k-1}(t) = a_k (x_k - t)^3_+ + b_k (x_{k-1} - t)^3_+ + c_k (x_{k-1} - t)^2_+
//! D_{2k}(t)   = α_k (x_k - t)^3_+ + β_k (x_k - t)^2_+ + γ_k (x_{k-1} - t)^3_+ + η_k (x_{k-1} - t)^2_+
//! ```
//!
//! The phantom knots `x_{-1} = 2x_0 - x_1`, `x_{n+1} = 2x_n - x_{n-1}` fix the
//! boundary integrals at 1/16 and 3/16; every interior member integrates to 1/4.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::knots::{json_array, KnotSequence};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("index {index} outside {min}..={max}")]
    IndexOutOfRange { index: usize, min: usize, max: usize },
    #[error("spline needs {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
}

/// Closed-form coefficients of the pair `D_{2k-1}`, `D_{2k}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl BasisCoefficients {
    /// Coefficients from `h_{k-1}` (`prev`) and `h_k` (`cur`).
    pub fn from_lengths(prev: f64, cur: f64) -> Self {
        let sum = cur + prev;
        Self {
            a: 1.0 / (cur * cur * sum * sum),
            b: (2.0 * cur - prev) / (prev.powi(3) * cur * cur),
            c: -3.0 / (prev * prev * cur),
            alpha: (-3.0 * cur - 2.0 * prev) / (sum * sum * cur.powi(3)),
            beta: 3.0 / (sum * cur * cur),
            gamma: (2.0 * prev - cur) / (prev * prev * cur.powi(3)),
            eta: 3.0 / (prev * cur * cur),
        }
    }
}

fn check(index: usize, min: usize, max: usize) -> Result<(), BasisError> {
    if (min..=max).contains(&index) {
        Ok(())
    } else {
        Err(BasisError::IndexOutOfRange { index, min, max })
    }
}

/// Coefficients for `k` in `1..=n+1`.
pub fn coefficients(knots: &KnotSequence, k: usize) -> Result<BasisCoefficients, BasisError> {
    check(k, 1, knots.n() + 1)?;
    let k = k as isize;
    Ok(BasisCoefficients::from_lengths(knots.h(k - 1), knots.h(k)))
}

#[inline]
fn pos(u: f64) -> f64 {
    u.max(0.0)
}

/// `D_j(t)` for `j` in `1..=2n+2`. Zero outside `[x_{k-2}, x_k]`.
pub fn eval_d(knots: &KnotSequence, j: usize, t: f64) -> Result<f64, BasisError> {
    check(j, 1, 2 * knots.n() + 2)?;
    let k = j.div_ceil(2);
    let c = coefficients(knots, k)?;
    let k = k as isize;
    let (left, mid, right) = (knots.x(k - 2), knots.x(k - 1), knots.x(k));
    if t < left || t > right {
        return Ok(0.0);
    }
    let r = pos(right - t);
    let m = pos(mid - t);
    let value = if j % 2 == 1 {
        c.a * r * r * r + c.b * m * m * m + c.c * m * m
    } else {
        c.alpha * r * r * r + c.beta * r * r + c.gamma * m * m * m + c.eta * m * m
    };
    Ok(value)
}

/// `D_j'(t)`, same conventions as [`eval_d`].
pub fn eval_d_derivative(knots: &KnotSequence, j: usize, t: f64) -> Result<f64, BasisError> {
    check(j, 1, 2 * knots.n() + 2)?;
    let k = j.div_ceil(2);
    let c = coefficients(knots, k)?;
    let k = k as isize;
    let (left, mid, right) = (knots.x(k - 2), knots.x(k - 1), knots.x(k));
    if t < left || t > right {
        return Ok(0.0);
    }
    let r = pos(right - t);
    let m = pos(mid - t);
    let value = if j % 2 == 1 {
        -3.0 * c.a * r * r - 3.0 * c.b * m * m - 2.0 * c.c * m
    } else {
        -3.0 * c.alpha * r * r - 2.0 * c.beta * r - 3.0 * c.gamma * m * m - 2.0 * c.eta * m
    };
    Ok(value)
}

/// `∫_a^b D_j`.
pub fn integral_d(knots: &KnotSequence, j: usize) -> Result<f64, BasisError> {
    let last = 2 * knots.n() + 2;
    check(j, 1, last)?;
    Ok(if j == 1 || j == last {
        1.0 / 16.0
    } else if j == 2 || j == last - 1 {
        3.0 / 16.0
    } else {
        0.25
    })
}

/// Bernstein control values `(q0, q1, q2, q3)` of `D_{2k-1} - D_{2k}` on
/// `[x_{k-2}, x_{k-1}]`, for `k` in `2..=n/2+1`.
///
/// Built from the Hermite data of the difference at the interval ends, so it
/// exercises the basis formulas rather than restating the closed form.
pub fn bezier_difference_controls(knots: &KnotSequence, k: usize) -> Result<[f64; 4], BasisError> {
    check(k, 2, knots.n() / 2 + 1)?;
    let (odd, even) = (2 * k - 1, 2 * k);
    let ki = k as isize;
    let (left, right) = (knots.x(ki - 2), knots.x(ki - 1));
    let h = right - left;
    let q = |t: f64| -> Result<f64, BasisError> { Ok(eval_d(knots, odd, t)? - eval_d(knots, even, t)?) };
    let dq = |t: f64| -> Result<f64, BasisError> {
        Ok(eval_d_derivative(knots, odd, t)? - eval_d_derivative(knots, even, t)?)
    };
    let q0 = q(left)?;
    let q3 = q(right)?;
    let q1 = q0 + h * dq(left)? / 3.0;
    let q2 = q3 - h * dq(right)? / 3.0;
    Ok([q0, q1, q2, q3])
}

/// A member of the C¹ cubic spline space, as coordinates over the D-basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpline")]
pub struct SplineFunction {
    knots: KnotSequence,
    coeffs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSpline {
    knots: KnotSequence,
    coeffs: Vec<f64>,
}

impl TryFrom<RawSpline> for SplineFunction {
    type Error = BasisError;

    fn try_from(raw: RawSpline) -> Result<Self, Self::Error> {
        Self::new(raw.knots, raw.coeffs)
    }
}

impl SplineFunction {
    pub fn new(knots: KnotSequence, coeffs: Vec<f64>) -> Result<Self, BasisError> {
        let expected = 2 * knots.n() + 2;
        if coeffs.len() != expected {
            return Err(BasisError::CoefficientCount { expected, got: coeffs.len() });
        }
        Ok(Self { knots, coeffs })
    }

    pub fn zero(knots: KnotSequence) -> Self {
        let dim = 2 * knots.n() + 2;
        Self { knots, coeffs: vec![0.0; dim] }
    }

    /// The basis function `D_j` itself.
    pub fn unit(knots: KnotSequence, j: usize) -> Result<Self, BasisError> {
        let dim = 2 * knots.n() + 2;
        check(j, 1, dim)?;
        let mut coeffs = vec![0.0; dim];
        coeffs[j - 1] = 1.0;
        Ok(Self { knots, coeffs })
    }

    pub fn knots(&self) -> &KnotSequence {
        &self.knots
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn negated(&self) -> Self {
        Self { knots: self.knots.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn to_json(&self) -> String {
        format!("{{\"knots\":{},\"coeffs\":{}}}", self.knots.to_json(), json_array(&self.coeffs))
    }
}

/// `Σ_j coeffs_j D_j(t)`. Only the four functions alive on the interval
/// containing `t` are touched.
pub fn eval_spline(s: &SplineFunction, t: f64) -> f64 {
    let k = s.knots.interval_of(t);
    // D_{2k-1}..D_{2k+2} are the ones supported on [x_{k-1}, x_k]
    (2 * k - 1..=2 * k + 2)
        .map(|j| s.coeffs[j - 1] * eval_d(&s.knots, j, t).expect("index in range"))
        .sum()
}

/// `Σ_j coeffs_j ∫ D_j`.
pub fn exact_integral(s: &SplineFunction) -> f64 {
    s.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * integral_d(&s.knots, i + 1).expect("index in range"))
        .sum()
}
