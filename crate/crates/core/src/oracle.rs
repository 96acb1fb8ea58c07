//! Ground truth that does not go through the rule construction:
//! seeded random splines and knot sequences, composite Gauss–Legendre
//! reference integrals, and natural cubic (C²) spline interpolants.

use serde::Serialize;

use crate::basis::SplineFunction;
use crate::knots::legendre::gauss_legendre;
use crate::knots::{from_unit_positions, KnotSequence};
use crate::rule::QuadratureRule;

/// Node count per piece for integrands that are not splines.
pub const DEFAULT_PER_PIECE_POINTS: usize = 5;

/// 64-bit linear congruential generator,
/// `state <- 6364136223846793005 * state + 1442695040888963407 (mod 2^64)`.
/// A draw advances the state once and returns its top 53 bits scaled to
/// `[0, 1)`. The initial state is the seed.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
    pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Spline with coefficients drawn uniformly from `[-1, 1)`.
pub fn random_spline(knots: &KnotSequence, seed: u64) -> SplineFunction {
    let mut rng = Lcg64::new(seed);
    let coeffs = (0..2 * knots.n() + 2).map(|_| rng.uniform(-1.0, 1.0)).collect();
    SplineFunction::new(knots.clone(), coeffs).expect("dimension matches")
}

/// Random symmetrically stretched sequence with `n` intervals on `[a, b]`.
///
/// Left-half lengths start at 1 and grow by factors in `[1, 1 + max_growth)`;
/// about one step in five keeps the length unchanged so equal neighbours are
/// exercised too.
pub fn random_stretched(n: usize, seed: u64, a: f64, b: f64, max_growth: f64) -> KnotSequence {
    assert!(n >= 1 && a < b);
    let mut rng = Lcg64::new(seed);
    let mut half = Vec::with_capacity(n / 2);
    let mut h = 1.0;
    for _ in 0..n / 2 {
        half.push(h);
        let u = rng.next_f64();
        h *= if u < 0.2 { 1.0 } else { 1.0 + max_growth * rng.next_f64() };
    }
    let mut lengths = half.clone();
    if n % 2 == 1 {
        lengths.push(h);
    }
    lengths.extend(half.iter().rev());
    let total: f64 = lengths.iter().sum();
    let mut acc = 0.0;
    let mut unit = vec![0.0];
    for l in &lengths {
        acc += l;
        unit.push(acc / total);
    }
    from_unit_positions(&unit, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralMethod {
    BasisLinearity,
    PiecewiseGauss,
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceIntegral {
    pub value: f64,
    pub method: IntegralMethod,
}

/// Composite Gauss–Legendre over arbitrary sorted breakpoints.
pub fn composite_gauss<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], points: usize) -> f64 {
    let (x, w) = gauss_legendre(points.max(1)).expect("Gauss-Legendre nodes converge");
    breakpoints
        .windows(2)
        .map(|seg| {
            let half = 0.5 * (seg[1] - seg[0]);
            let mid = 0.5 * (seg[1] + seg[0]);
            x.iter().zip(&w).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
        })
        .sum()
}

/// Composite Gauss–Legendre with `per_piece_points` nodes on every knot
/// interval; exact for piecewise polynomials of degree `2 p - 1`.
pub fn reference_integral<F: Fn(f64) -> f64>(
    f: F,
    knots: &KnotSequence,
    per_piece_points: usize,
) -> ReferenceIntegral {
    assert!(per_piece_points >= 2, "per_piece_points must be >= 2");
    ReferenceIntegral {
        value: composite_gauss(f, knots.knots(), per_piece_points),
        method: IntegralMethod::PiecewiseGauss,
    }
}

/// `I(f) - Q(f)` with `I` from [`reference_integral`] on the rule's knots.
pub fn remainder<F: Fn(f64) -> f64>(f: F, rule: &QuadratureRule, per_piece_points: usize) -> f64 {
    let reference = reference_integral(&f, rule.knots(), per_piece_points).value;
    reference - rule.apply(&f)
}

/// Natural cubic spline interpolant (C², zero end curvature).
#[derive(Debug, Clone)]
pub struct NaturalCubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl NaturalCubicSpline {
    /// Interpolates `ys` at `xs` (strictly increasing, at least 2 points).
    pub fn interpolate(xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len() - 1;
        assert!(n >= 1 && ys.len() == xs.len());
        let mut m = vec![0.0; n + 1];
        if n >= 2 {
            // Thomas algorithm on the interior moments
            let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
            let size = n - 1;
            let mut diag = vec![0.0; size];
            let mut upper = vec![0.0; size];
            let mut rhs = vec![0.0; size];
            for i in 0..size {
                diag[i] = 2.0 * (h[i] + h[i + 1]);
                upper[i] = h[i + 1];
                rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h[i + 1] - (ys[i + 1] - ys[i]) / h[i]);
            }
            for i in 1..size {
                let factor = h[i] / diag[i - 1];
                diag[i] -= factor * upper[i - 1];
                rhs[i] -= factor * rhs[i - 1];
            }
            m[size] = rhs[size - 1] / diag[size - 1];
            for i in (0..size - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Self { xs: xs.to_vec(), ys: ys.to_vec(), m }
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.xs.len() - 1;
        let k = self.xs.partition_point(|&x| x <= t).clamp(1, n);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let h = x1 - x0;
        let (l, r) = (x1 - t, t - x0);
        self.m[k - 1] * l.powi(3) / (6.0 * h)
            + self.m[k] * r.powi(3) / (6.0 * h)
            + (self.ys[k - 1] / h - self.m[k - 1] * h / 6.0) * l
            + (self.ys[k] / h - self.m[k] * h / 6.0) * r
    }

    /// Closed-form integral over the whole range.
    pub fn integral(&self) -> f64 {
        self.xs
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let h = w[1] - w[0];
                0.5 * h * (self.ys[i] + self.ys[i + 1]) - h.powi(3) / 24.0 * (self.m[i] + self.m[i + 1])
            })
            .sum()
    }
}

/// Natural cubic spline through random values in `[-1, 1)` at the knots.
pub fn random_c2_spline(knots: &KnotSequence, seed: u64) -> NaturalCubicSpline {
    let mut rng = Lcg64::new(seed);
    let ys: Vec<f64> = knots.knots().iter().map(|_| rng.uniform(-1.0, 1.0)).collect();
    NaturalCubicSpline::interpolate(knots.knots(), &ys)
}
