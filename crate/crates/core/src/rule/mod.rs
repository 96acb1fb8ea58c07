//! Explicit Gaussian rule for C¹ cubic splines over stretched knots.
//!
//! The left half of the rule is built interval by interval, starting from
//! the closed-form first node and solving two exactness conditions per step.
//! The middle is closed according to the parity of `n` and the right half is
//! the exact mirror image. The `n = 1` space is plain cubics and uses the
//! classical two-point Gauss–Legendre rule.

mod cubic;

pub use cubic::Cubic;

use thiserror::Error;

use crate::basis::{coefficients, eval_d, integral_d, BasisError};
use crate::knots::{fmt17, json_array, KnotSequence};

/// Relative slack (to the interval length) allowed when checking that a
/// node offset lies inside its interval.
const OFFSET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error("recursion needs at least 2 intervals, got {0}")]
    DomainTooSmall(usize),
    #[error("recursion breakdown at node {index}: {reason}")]
    RecursionBreakdown { index: usize, reason: String },
    #[error("no root of the closing cubic in (0, {width}) for node {index}")]
    NoRootInInterval { index: usize, width: f64 },
    #[error(transparent)]
    Basis(#[from] BasisError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Running quantities after node `index` has been fixed.
///
/// `odd_residual` and `even_residual` are what remains of `∫ D_{2k+1}` and
/// `∫ D_{2k+2}` (both 1/4) after subtracting node `k`'s contribution; node
/// `k + 1` has to supply exactly that much.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionState {
    pub index: usize,
    /// `x_k - τ_k`
    pub theta: f64,
    /// `x_{k+1} - τ_k`
    pub rho: f64,
    pub weight: f64,
    pub odd_residual: f64,
    pub even_residual: f64,
}

impl RecursionState {
    fn new(knots: &KnotSequence, index: usize, theta: f64, weight: f64) -> Result<Self, RuleError> {
        let next = coefficients(knots, index + 1)?;
        let rho = theta + knots.h(index as isize + 1);
        let (t2, t3) = (theta * theta, theta * theta * theta);
        let (r2, r3) = (rho * rho, rho * rho * rho);
        let odd_residual = 0.25 - weight * (next.a * r3 + next.b * t3 + next.c * t2);
        let even_residual =
            0.25 - weight * (next.alpha * r3 + next.beta * r2 + next.gamma * t3 + next.eta * t2);
        Ok(Self { index, theta, rho, weight, odd_residual, even_residual })
    }

    /// `x_i - θ_i`, kept inside `[x_{i-1}, x_i]`: offsets below the knot
    /// spacing resolution can otherwise round across the knot.
    pub fn node(&self, knots: &KnotSequence) -> f64 {
        let i = self.index as isize;
        (knots.x(i) - self.theta).clamp(knots.x(i - 1), knots.x(i))
    }
}

fn check_offset(index: usize, theta: f64, width: f64) -> Result<(), RuleError> {
    let slack = OFFSET_TOL * width;
    if theta.is_finite() && theta > -slack && theta < width + slack {
        Ok(())
    } else {
        Err(RuleError::RecursionBreakdown {
            index,
            reason: format!("node offset {theta:e} outside (0, {width:e})"),
        })
    }
}

fn check_weight(index: usize, weight: f64) -> Result<(), RuleError> {
    if weight.is_finite() && weight > 0.0 {
        Ok(())
    } else {
        Err(RuleError::RecursionBreakdown { index, reason: format!("non-positive weight {weight:e}") })
    }
}

/// Node and weight in the first interval: `θ_1 = 3h_1/4`, `ω_1 = 16h_1/27`.
pub fn first_node(knots: &KnotSequence) -> Result<(RecursionState, f64, f64), RuleError> {
    let n = knots.n();
    if n < 2 {
        return Err(RuleError::DomainTooSmall(n));
    }
    let h1 = knots.h(1);
    let theta = 0.75 * h1;
    let weight = 16.0 / 27.0 * h1;
    let state = RecursionState::new(knots, 1, theta, weight)?;
    Ok((state, state.node(knots), weight))
}

/// Advances from node `i` to node `i + 1`, valid for `i <= n/2 - 1`.
pub fn step(state: &RecursionState, knots: &KnotSequence) -> Result<(RecursionState, f64, f64), RuleError> {
    let i = state.index;
    let next = i + 1;
    if next > knots.n() / 2 {
        return Err(RuleError::RecursionBreakdown { index: next, reason: "step past the middle".into() });
    }
    let c = coefficients(knots, next)?;
    let (a_res, b_res) = (state.odd_residual, state.even_residual);
    let denom = c.a * b_res - c.alpha * a_res;
    if denom == 0.0 || !denom.is_finite() {
        return Err(RuleError::RecursionBreakdown { index: next, reason: "vanishing denominator".into() });
    }
    let theta = a_res * c.beta / denom;
    check_offset(next, theta, knots.h(next as isize))?;
    let weight = a_res / (c.a * theta.powi(3));
    check_weight(next, weight)?;
    let new_state = RecursionState::new(knots, next, theta, weight)?;
    Ok((new_state, new_state.node(knots), weight))
}

/// Middle node for `n = 2m`: `τ_{m+1} = (a + b) / 2`, given the state at `m`.
pub fn close_even(state: &RecursionState, knots: &KnotSequence) -> Result<(f64, f64), RuleError> {
    let m = state.index;
    if knots.n() != 2 * m {
        return Err(RuleError::RecursionBreakdown {
            index: m + 1,
            reason: format!("even closure needs n = {}, got {}", 2 * m, knots.n()),
        });
    }
    let c = coefficients(knots, m + 1)?;
    let tau = knots.midpoint();
    let theta = knots.x(m as isize + 1) - tau;
    let weight = (state.odd_residual + state.even_residual - 0.25) / (c.a * theta.powi(3));
    check_weight(m + 1, weight)?;
    Ok((tau, weight))
}

/// The closing cubic in `θ_m` for `n = 2m - 1`, given the state at `m - 1`,
/// with `ρ_m = θ_m + h_{m+1}` substituted and expanded.
pub fn closing_cubic(state: &RecursionState, knots: &KnotSequence) -> Result<Cubic, RuleError> {
    let m = state.index + 1;
    let cm = coefficients(knots, m)?;
    let cn = coefficients(knots, m + 1)?;
    let (a_res, b_res) = (state.odd_residual, state.even_residual);
    let h = knots.h(m as isize + 1);
    let t3 = a_res * (cm.alpha + cn.b) - b_res * (cm.a + cn.gamma);
    let t2 = a_res * (cm.beta + cn.c) - b_res * cn.eta;
    let r3 = a_res * cn.a - b_res * cn.alpha;
    let r2 = -b_res * cn.beta;
    // t3 θ³ + t2 θ² + r3 (θ + h)³ + r2 (θ + h)²
    Ok(Cubic([
        r3 * h * h * h + r2 * h * h,
        3.0 * r3 * h * h + 2.0 * r2 * h,
        t2 + 3.0 * r3 * h + r2,
        t3 + r3,
    ]))
}

/// The left node of the middle pair for `n = 2m - 1`.
pub fn close_odd(state: &RecursionState, knots: &KnotSequence) -> Result<(f64, f64), RuleError> {
    let m = state.index + 1;
    if knots.n() != 2 * m - 1 {
        return Err(RuleError::RecursionBreakdown {
            index: m,
            reason: format!("odd closure needs n = {}, got {}", 2 * m - 1, knots.n()),
        });
    }
    let width = knots.h(m as isize);
    let cubic = closing_cubic(state, knots)?;
    // same slack as the recursion steps, for sequences stretched only to tolerance
    let theta = cubic
        .largest_root_in(0.0, width * (1.0 + OFFSET_TOL))
        .ok_or(RuleError::NoRootInInterval { index: m, width })?
        .min(width);
    let cm = coefficients(knots, m)?;
    let cn = coefficients(knots, m + 1)?;
    let rho = theta + knots.h(m as isize + 1);
    let denom = (cn.gamma + cm.a) * theta.powi(3)
        + cn.eta * theta * theta
        + cn.alpha * rho.powi(3)
        + cn.beta * rho * rho;
    let weight = state.odd_residual / denom;
    check_weight(m, weight)?;
    Ok((knots.x(m as isize) - theta, weight))
}

/// An `n + 1`-point rule, exact on the C¹ cubic spline space over `knots`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    knots: KnotSequence,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    parity: Parity,
}

impl QuadratureRule {
    pub fn knots(&self) -> &KnotSequence {
        &self.knots
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn a(&self) -> f64 {
        self.knots.a()
    }

    pub fn b(&self) -> f64 {
        self.knots.b()
    }

    /// Nodes up to and including the middle: `n/2 + 1` of them.
    pub fn left_half_len(&self) -> usize {
        self.knots.n() / 2 + 1
    }

    /// `Σ ω_i f(τ_i)`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }

    /// Copy with `delta` added to weight `i` (1-based). Used to show that
    /// verification notices a corrupted rule.
    pub fn with_perturbed_weight(&self, i: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.weights[i - 1] += delta;
        out
    }

    /// Copy with weight `i` (1-based) set to zero.
    pub fn without_node(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.weights[i - 1] = 0.0;
        out
    }

    pub fn to_json(&self) -> String {
        format!(
            "{{\"knots\":{},\"nodes\":{},\"weights\":{}}}",
            json_array(self.knots.knots()),
            json_array(&self.nodes),
            json_array(&self.weights)
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,tau,omega\n");
        for (i, (t, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, fmt17(*t), fmt17(*w)));
        }
        out
    }
}

/// Two-point Gauss–Legendre rule on `[a, b]`.
pub fn classical_two_point(a: f64, b: f64) -> QuadratureRule {
    let knots = KnotSequence::validate(&[a, b], a, b).expect("a < b");
    two_point_on(knots)
}

fn two_point_on(knots: KnotSequence) -> QuadratureRule {
    let (a, b) = (knots.a(), knots.b());
    let mid = 0.5 * (a + b);
    let offset = (b - a) / (2.0 * 3f64.sqrt());
    let left = mid - offset;
    QuadratureRule {
        nodes: vec![left, a + b - left],
        weights: vec![0.5 * (b - a); 2],
        parity: Parity::Odd,
        knots,
    }
}

/// Builds the Gaussian rule for a validated sequence.
pub fn compute_rule(knots: &KnotSequence) -> Result<QuadratureRule, RuleError> {
    let n = knots.n();
    if n == 1 {
        return Ok(two_point_on(knots.clone()));
    }
    let (mut state, tau, weight) = first_node(knots)?;
    let mut nodes = vec![tau];
    let mut weights = vec![weight];
    let parity = if n.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
    let last_step = match parity {
        Parity::Even => n / 2,
        Parity::Odd => n.div_ceil(2) - 1,
    };
    while state.index < last_step {
        let (next, tau, weight) = step(&state, knots)?;
        nodes.push(tau);
        weights.push(weight);
        state = next;
    }
    let (tau, weight) = match parity {
        Parity::Even => close_even(&state, knots)?,
        Parity::Odd => close_odd(&state, knots)?,
    };
    nodes.push(tau);
    weights.push(weight);

    let reflect_from = match parity {
        Parity::Even => nodes.len() - 1,
        Parity::Odd => nodes.len(),
    };
    let ab = knots.a() + knots.b();
    for i in (0..reflect_from).rev() {
        nodes.push(ab - nodes[i]);
        weights.push(weights[i]);
    }
    debug_assert_eq!(nodes.len(), n + 1);
    if let Some(i) = nodes.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(RuleError::RecursionBreakdown { index: i + 2, reason: "nodes out of order".into() });
    }
    Ok(QuadratureRule { knots: knots.clone(), nodes, weights, parity })
}

/// `|Σ ω_i D_j(τ_i) - ∫ D_j|` for `j = 1..=2n+2`.
pub fn exactness_residuals(rule: &QuadratureRule) -> Vec<f64> {
    let knots = rule.knots();
    (1..=2 * knots.n() + 2)
        .map(|j| {
            let q = rule.apply(|t| eval_d(knots, j, t).expect("index in range"));
            (q - integral_d(knots, j).expect("index in range")).abs()
        })
        .collect()
}

/// Nodes counted per open interval, plus the knot indices hit exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLayout {
    pub per_interval: Vec<usize>,
    pub on_knots: Vec<usize>,
    /// Knots that a node rounded onto in floating point; such nodes are
    /// counted in the adjacent interval on the middle side.
    pub collapsed: Vec<usize>,
}

impl NodeLayout {
    pub fn of(rule: &QuadratureRule) -> Self {
        let xs = rule.knots().knots();
        let n = xs.len() - 1;
        let mut per_interval = vec![0; n];
        let mut on_knots = Vec::new();
        let mut collapsed = Vec::new();
        for &t in rule.nodes() {
            match xs.iter().position(|&x| x == t) {
                Some(k) if 2 * k == n => on_knots.push(k),
                Some(k) if 2 * k < n => {
                    collapsed.push(k);
                    per_interval[k] += 1;
                }
                Some(k) => {
                    collapsed.push(k);
                    per_interval[k - 1] += 1;
                }
                None => {
                    let k = xs.partition_point(|&x| x < t);
                    if (1..=n).contains(&k) {
                        per_interval[k - 1] += 1;
                    }
                }
            }
        }
        Self { per_interval, on_knots, collapsed }
    }

    /// One node per interval plus one at the middle knot for even `n`; one
    /// node per interval except two in the middle interval for odd `n`.
    pub fn matches_expected(&self) -> bool {
        let n = self.per_interval.len();
        if n.is_multiple_of(2) {
            self.per_interval.iter().all(|&c| c == 1) && self.on_knots == [n / 2]
        } else {
            let middle = n.div_ceil(2) - 1;
            self.on_knots.is_empty()
                && self
                    .per_interval
                    .iter()
                    .enumerate()
                    .all(|(k, &c)| c == if k == middle { 2 } else { 1 })
        }
    }
}

/// Whether weights strictly increase from the boundary up to the middle.
/// Reported, never enforced.
pub fn weights_increase_to_middle(rule: &QuadratureRule) -> bool {
    let upto = (rule.knots().n() + 2) / 2;
    rule.weights()[..upto].windows(2).all(|w| w[0] < w[1])
}
