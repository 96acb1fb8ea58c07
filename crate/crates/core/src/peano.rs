//! Order-4 Peano kernel of a rule and its remainder constant.
//!
//! For `f` with an integrable fourth derivative,
//! `I(f) - Q(f) = ∫ K(t) f''''(t) dt` with
//! `K(t) = (t - a)^4 / 24 - (1/6) Σ ω_k (t - τ_k)^3_+`.
//! The kernel is nonnegative for these rules, so the remainder equals
//! `c f''''(ξ)` with `c = ∫ K`.

use serde::Serialize;

use crate::knots::fmt17;
use crate::rule::QuadratureRule;

/// 3-point Gauss–Legendre on `[-1, 1]`, exact through degree 5.
const GL3_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GL3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Agreement required between two routes to the same constant, relative.
pub const CONSTANT_REL_TOL: f64 = 1e-12;

fn gl3(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    GL3_NODES.iter().zip(GL3_WEIGHTS).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// `K(t)` from the closed form over all nodes.
pub fn kernel_eval(rule: &QuadratureRule, t: f64) -> f64 {
    let a = rule.a();
    let sum: f64 = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&tau, &w)| w * (t - tau).max(0.0).powi(3))
        .sum();
    (t - a).powi(4) / 24.0 - sum / 6.0
}

/// `K(t)` from the interval containing `t` only.
///
/// `g(s) = (t - s)^3_+ / 6` agrees with its piecewise cubic Hermite
/// interpolant everywhere except on the interval holding `t`, and the rule
/// integrates the interpolant exactly, so `K(t)` is the remainder of the
/// interpolation error on that single interval. No large terms cancel, so
/// this stays accurate next to the double zeros at the knots.
pub fn kernel_eval_local(rule: &QuadratureRule, t: f64) -> f64 {
    kernel_eval_local_in(rule, t, rule.knots().interval_of(t))
}

/// Local form on knot interval `k` (valid for `t` in `[x_{k-1}, x_k]`).
fn kernel_eval_local_in(rule: &QuadratureRule, t: f64, k: usize) -> f64 {
    let knots = rule.knots();
    let (lo, hi) = (knots.knots()[k - 1], knots.knots()[k]);
    if t <= lo || t >= hi {
        return 0.0;
    }
    let h = hi - lo;
    let g = |s: f64| (t - s).max(0.0).powi(3) / 6.0;
    let dg = |s: f64| -0.5 * (t - s).max(0.0).powi(2);
    let (g0, g1, d0, d1) = (g(lo), g(hi), dg(lo), dg(hi));
    let hermite = |s: f64| {
        let u = (s - lo) / h;
        let (u2, u3) = (u * u, u * u * u);
        (2.0 * u3 - 3.0 * u2 + 1.0) * g0
            + (u3 - 2.0 * u2 + u) * h * d0
            + (-2.0 * u3 + 3.0 * u2) * g1
            + (u3 - u2) * h * d1
    };
    let err = |s: f64| g(s) - hermite(s);
    let t_in = t.clamp(lo, hi);
    let integral = gl3(lo, t_in, err) + gl3(t_in, hi, err);
    let quad: f64 = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .filter(|(&tau, _)| tau >= lo && tau <= hi)
        .map(|(&tau, &w)| w * err(tau))
        .sum();
    integral - quad
}

/// `∫_a^b K`, exact: between consecutive breakpoints (nodes and knots) the
/// kernel is a quartic, integrated with 3-point Gauss–Legendre. Uses the
/// local kernel form so fine meshes keep full relative accuracy.
pub fn constant_numeric(rule: &QuadratureRule) -> f64 {
    let mut breaks: Vec<f64> = rule.knots().knots().to_vec();
    breaks.extend_from_slice(rule.nodes());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
        .windows(2)
        .map(|w| {
            // evaluate each segment on the knot interval that contains it
            let mid = 0.5 * (w[0] + w[1]);
            gl3(w[0], w[1], |t| kernel_eval_local_in(rule, t, rule.knots().interval_of(mid)))
        })
        .sum()
}

/// `(∫ t^4 - Q(t^4)) / 24`, evaluated as the remainder of
/// `t^4 - H(t) = (t - x_{k-1})^2 (t - x_k)^2`, where `H` is the C¹ cubic
/// Hermite interpolant of `t^4` at the knots. The rule integrates `H`
/// exactly, and this form avoids the cancellation that rounding of the
/// stored weights causes in the direct `t^4` remainder on fine meshes.
pub fn quartic_oracle(rule: &QuadratureRule) -> f64 {
    let knots = rule.knots();
    let exact: f64 = knots.intervals().iter().map(|h| h.powi(5) / 30.0).sum();
    let quad: f64 = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&t, &w)| {
            let k = knots.interval_of(t);
            let (lo, hi) = (knots.x(k as isize - 1), knots.x(k as isize));
            w * ((t - lo) * (t - hi)).powi(2)
        })
        .sum();
    (exact - quad) / 24.0
}

/// The remainder constant computed three ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorConstant {
    pub closed_form: f64,
    pub numeric: f64,
    pub quartic_oracle: f64,
}

impl ErrorConstant {
    pub fn of(rule: &QuadratureRule) -> Self {
        Self {
            closed_form: constant_closed_form(rule).symmetric,
            numeric: constant_numeric(rule),
            quartic_oracle: quartic_oracle(rule),
        }
    }

    pub fn numeric_matches_oracle(&self) -> bool {
        rel_close(self.numeric, self.quartic_oracle)
    }
}

fn rel_close(x: f64, y: f64) -> bool {
    (x - y).abs() <= CONSTANT_REL_TOL * x.abs().max(y.abs())
}

/// Readings of the closed-form constant built from interval lengths and
/// node offsets, next to the numeric value.
///
/// Three readings of the closed form
/// `(1/720) Σ_{k=0}^{[(n+1)/2]} (x_{k+1} - x_k)^5 - (1/12) Σ_{k=1}^{[(n+1)/2]} ω_k (x_{k-1} - τ_k)^2 (x_k - τ_k)^2`.
/// `literal` evaluates it with the ranges as written (dropping any `x_{k+1}` past
/// `b`), `doubled` is twice that, and `symmetric` takes the first sum over
/// every interval, which is what the Hermite-interpolation argument gives
/// (the second sum already counts both mirrored halves through its 1/12).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormReport {
    pub literal: f64,
    pub doubled: f64,
    pub symmetric: f64,
    pub numeric: f64,
    pub length_sum: f64,
    pub node_sum: f64,
    pub literal_matches: bool,
    pub doubled_matches: bool,
    pub symmetric_matches: bool,
}

pub fn constant_closed_form(rule: &QuadratureRule) -> ClosedFormReport {
    let xs = rule.knots().knots();
    let n = xs.len() - 1;
    let upper = n.div_ceil(2);
    let half_lengths: f64 = (0..=upper).filter(|&k| k < n).map(|k| (xs[k + 1] - xs[k]).powi(5)).sum();
    let all_lengths: f64 = xs.windows(2).map(|w| (w[1] - w[0]).powi(5)).sum();
    let node_sum: f64 = (1..=upper)
        .map(|k| {
            let (tau, w) = (rule.nodes()[k - 1], rule.weights()[k - 1]);
            w * (xs[k - 1] - tau).powi(2) * (xs[k] - tau).powi(2)
        })
        .sum();
    let literal = half_lengths / 720.0 - node_sum / 12.0;
    let symmetric = all_lengths / 720.0 - node_sum / 12.0;
    let numeric = constant_numeric(rule);
    ClosedFormReport {
        literal,
        doubled: 2.0 * literal,
        symmetric,
        numeric,
        length_sum: all_lengths / 720.0,
        node_sum: node_sum / 12.0,
        literal_matches: rel_close(literal, numeric),
        doubled_matches: rel_close(2.0 * literal, numeric),
        symmetric_matches: rel_close(symmetric, numeric),
    }
}

/// Result of scanning the kernel on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignScan {
    pub samples: usize,
    pub min_value: f64,
    pub min_location: f64,
    /// Refined location of each cluster of near-zero samples.
    pub near_zeros: Vec<f64>,
    /// Clusters whose refined minimum is not close to any knot.
    pub stray_zeros: Vec<f64>,
    pub nonnegative: bool,
    pub zeros_at_knots: bool,
}

impl SignScan {
    pub fn passed(&self) -> bool {
        self.nonnegative && self.zeros_at_knots
    }
}

pub const SIGN_TOL: f64 = 1e-13;
pub const NEAR_ZERO_TOL: f64 = 1e-10;
pub const KNOT_DISTANCE_TOL: f64 = 1e-6;

/// Samples `K` on every segment between consecutive breakpoints
/// `a, τ_1, ..., b` (endpoints included, `samples_per_segment` cells each).
///
/// Passes when `min K >= -1e-13 (b-a)^4` and each run of samples with
/// `|K| < 1e-10 (b-a)^4`, refined to its local minimum, sits within
/// `1e-6 (b-a)` of a knot.
pub fn kernel_sign_scan(rule: &QuadratureRule, samples_per_segment: usize) -> SignScan {
    let per = samples_per_segment.max(8);
    let (a, b) = (rule.a(), rule.b());
    let len = b - a;
    let scale = len.powi(4);
    let mut breaks = vec![a];
    breaks.extend_from_slice(rule.nodes());
    breaks.push(b);
    let mut grid = Vec::with_capacity(per * (breaks.len() - 1) + 1);
    for w in breaks.windows(2) {
        for i in 0..per {
            grid.push(w[0] + (w[1] - w[0]) * i as f64 / per as f64);
        }
    }
    grid.push(b);
    let values: Vec<f64> = grid.iter().map(|&t| kernel_eval(rule, t)).collect();

    let (min_idx, &min_value) = values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("grid is non-empty");

    let knots = rule.knots().knots();
    let mut near_zeros = Vec::new();
    let mut stray_zeros = Vec::new();
    let mut i = 0;
    while i < values.len() {
        if values[i].abs() >= NEAR_ZERO_TOL * scale {
            i += 1;
            continue;
        }
        let start = i;
        while i < values.len() && values[i].abs() < NEAR_ZERO_TOL * scale {
            i += 1;
        }
        let lo = grid[start.saturating_sub(1)];
        let hi = grid[i.min(grid.len() - 1)];
        let at = refine_minimum(rule, lo, hi);
        near_zeros.push(at);
        let near_knot = knots.iter().any(|&x| (x - at).abs() <= KNOT_DISTANCE_TOL * len);
        if !near_knot {
            stray_zeros.push(at);
        }
    }
    SignScan {
        samples: grid.len(),
        min_value,
        min_location: grid[min_idx],
        nonnegative: min_value >= -SIGN_TOL * scale,
        zeros_at_knots: stray_zeros.is_empty(),
        near_zeros,
        stray_zeros,
    }
}

/// Minimiser of `|K|` on `[lo, hi]`. Knots inside the bracket are tried
/// first since that is where the zeros are expected; otherwise golden-section
/// search on the local kernel form.
fn refine_minimum(rule: &QuadratureRule, mut lo: f64, mut hi: f64) -> f64 {
    let f = |t: f64| kernel_eval_local(rule, t).abs();
    let mut best = None::<(f64, f64)>;
    for &x in rule.knots().knots().iter().filter(|&&x| x >= lo && x <= hi) {
        let v = f(x);
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((x, v));
        }
    }
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - golden * (hi - lo);
    let mut d = lo + golden * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if hi - lo <= 1e-15 * (rule.b() - rule.a()) {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - golden * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + golden * (hi - lo);
            fd = f(d);
        }
    }
    let t = 0.5 * (lo + hi);
    match best {
        Some((x, v)) if v <= f(t) => x,
        _ => t,
    }
}

/// `t,K4` rows on `grid + 1` equally spaced points, preceded by a comment
/// line carrying the numeric constant.
pub fn kernel_csv(rule: &QuadratureRule, grid: usize) -> String {
    let (a, b) = (rule.a(), rule.b());
    let mut out = format!("# c_numeric={}\nt,K4\n", fmt17(constant_numeric(rule)));
    for i in 0..=grid {
        let t = if i == grid { b } else { a + (b - a) * i as f64 / grid as f64 };
        out.push_str(&format!("{},{}\n", fmt17(t), fmt17(kernel_eval_local(rule, t))));
    }
    out
}
