//! Symmetrically stretched knot sequences.
//!
//! A sequence `a = x_0 < x_1 < ... < x_n = b` is accepted when it is
//! symmetric about `(a + b) / 2` and its interval lengths do not decrease
//! towards the midpoint. Every knot implicitly carries multiplicity two, so
//! the spline space built over it is C¹ piecewise cubic.

mod families;
pub mod legendre;

pub use families::{gen_chebyshev, gen_geometric, gen_legendre, gen_uniform};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Symmetry tolerance, relative to `b - a`.
pub const SYM_TOL: f64 = 1e-12;
/// Stretching tolerance, relative to `b - a`.
pub const STRETCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KnotError {
    #[error("knot sequence needs at least 2 entries, got {0}")]
    TooFew(usize),
    #[error("knot {index} is not finite")]
    NonFinite { index: usize },
    #[error("endpoint mismatch: knots run from {first} to {last}, domain is [{a}, {b}]")]
    EndpointMismatch { first: f64, last: f64, a: f64, b: f64 },
    #[error("knots not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("knots not symmetric at index {index} (deviation {deviation:e})")]
    NotSymmetric { index: usize, deviation: f64 },
    #[error("knots not stretched at index {index} (x_k - 2x_(k+1) + x_(k+2) = {value:e})")]
    NotStretched { index: usize, value: f64 },
    #[error("stretching ratio must be >= 1, got {0}")]
    InvalidRatio(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Legendre root {index} of degree {degree} did not converge")]
    ConvergenceFailure { degree: usize, index: usize },
}

/// Validated breakpoints with the two phantom knots `x_{-1}` and `x_{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotSequence {
    a: f64,
    b: f64,
    knots: Vec<f64>,
    extended_left: f64,
    extended_right: f64,
    intervals: Vec<f64>,
}

impl KnotSequence {
    /// Checks `knots` against the stretched-sequence conditions on `[a, b]`.
    pub fn validate(knots: &[f64], a: f64, b: f64) -> Result<Self, KnotError> {
        if knots.len() < 2 {
            return Err(KnotError::TooFew(knots.len()));
        }
        if let Some(index) = knots.iter().position(|x| !x.is_finite()) {
            return Err(KnotError::NonFinite { index });
        }
        let n = knots.len() - 1;
        if knots[0] != a || knots[n] != b || !(a < b) {
            return Err(KnotError::EndpointMismatch { first: knots[0], last: knots[n], a, b });
        }
        if let Some(index) = knots.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(KnotError::NotIncreasing { index });
        }
        let len = b - a;
        for k in 0..=n {
            let deviation = ((knots[k] - a) - (b - knots[n - k])).abs();
            if deviation > SYM_TOL * len {
                return Err(KnotError::NotSymmetric { index: k, deviation });
            }
        }
        for k in 0..(n / 2).saturating_sub(1) {
            let value = knots[k] - 2.0 * knots[k + 1] + knots[k + 2];
            if value < -STRETCH_TOL * len {
                return Err(KnotError::NotStretched { index: k, value });
            }
        }
        Ok(Self::from_checked(knots.to_vec()))
    }

    fn from_checked(knots: Vec<f64>) -> Self {
        let n = knots.len() - 1;
        let a = knots[0];
        let b = knots[n];
        let extended_left = 2.0 * knots[0] - knots[1];
        let extended_right = 2.0 * knots[n] - knots[n - 1];
        let intervals = knots.windows(2).map(|w| w[1] - w[0]).collect();
        Self { a, b, knots, extended_left, extended_right, intervals }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// Number of intervals `n`.
    pub fn n(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn extended_left(&self) -> f64 {
        self.extended_left
    }

    pub fn extended_right(&self) -> f64 {
        self.extended_right
    }

    /// Interval lengths `h_1..h_n`.
    pub fn intervals(&self) -> &[f64] {
        &self.intervals
    }

    /// Knot `x_k` for `k` in `-1..=n+1`, phantom knots included.
    pub fn x(&self, k: isize) -> f64 {
        let n = self.n() as isize;
        match k {
            -1 => self.extended_left,
            k if k == n + 1 => self.extended_right,
            k if (0..=n).contains(&k) => self.knots[k as usize],
            _ => panic!("knot index {k} outside -1..={}", n + 1),
        }
    }

    /// `h_k = x_k - x_{k-1}` for `k` in `0..=n+1`, computed from the stored
    /// (extended) knots.
    pub fn h(&self, k: isize) -> f64 {
        self.x(k) - self.x(k - 1)
    }

    /// Index `k` of the closed interval `[x_{k-1}, x_k]` containing `t`,
    /// preferring the right-hand interval at interior knots. Points outside
    /// `[a, b]` are clamped to the first or last interval.
    pub fn interval_of(&self, t: f64) -> usize {
        let pos = self.knots.partition_point(|&x| x <= t);
        pos.clamp(1, self.n())
    }

    /// Same breakpoints affinely mapped to `[0, 1]`.
    pub fn normalized(&self) -> Self {
        self.mapped(0.0, 1.0)
    }

    /// Same breakpoints affinely mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Self {
        let len = self.b - self.a;
        let n = self.n();
        let mut knots: Vec<f64> = self
            .knots
            .iter()
            .map(|&x| a + (b - a) * ((x - self.a) / len))
            .collect();
        knots[0] = a;
        knots[n] = b;
        Self::from_checked(knots)
    }

    pub fn to_json(&self) -> String {
        format!(
            "{{\"a\":{},\"b\":{},\"knots\":{}}}",
            fmt17(self.a),
            fmt17(self.b),
            json_array(&self.knots)
        )
    }

    pub fn from_json(text: &str) -> Result<Self, KnotFileError> {
        let raw: RawKnots = serde_json::from_str(text)?;
        Ok(Self::validate(&raw.knots, raw.a, raw.b)?)
    }
}

#[derive(Serialize, Deserialize)]
struct RawKnots {
    a: f64,
    b: f64,
    knots: Vec<f64>,
}

impl Serialize for KnotSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawKnots { a: self.a, b: self.b, knots: self.knots.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KnotSequence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawKnots::deserialize(deserializer)?;
        Self::validate(&raw.knots, raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error)]
pub enum KnotFileError {
    #[error("malformed knot file: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] KnotError),
}

/// Parses a knot list from text: either a JSON object
/// `{"a":..,"b":..,"knots":[..]}` or reals separated by whitespace and/or
/// commas. Lines starting with `#` are ignored. For plain lists the domain
/// is taken from the first and last entries.
pub fn parse_knot_text(text: &str) -> Result<KnotSequence, KnotFileError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return KnotSequence::from_json(trimmed);
    }
    let mut values = Vec::new();
    for line in text.lines().filter(|l| !l.trim_start().starts_with('#')) {
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let v = tok
                .parse::<f64>()
                .map_err(|_| KnotFileError::Parse(format!("not a number: {tok:?}")))?;
            values.push(v);
        }
    }
    if values.len() < 2 {
        return Err(KnotError::TooFew(values.len()).into());
    }
    let (a, b) = (values[0], values[values.len() - 1]);
    Ok(KnotSequence::validate(&values, a, b)?)
}

/// Maps unit-frame positions `u_0 = 0 < ... < u_n = 1` onto `[a, b]` and
/// makes the result exactly mirror-symmetric.
pub(crate) fn from_unit_positions(unit: &[f64], a: f64, b: f64) -> KnotSequence {
    let n = unit.len() - 1;
    let mut knots: Vec<f64> = unit.iter().map(|&u| a + (b - a) * u).collect();
    knots[0] = a;
    knots[n] = b;
    symmetrize(&mut knots);
    KnotSequence::from_checked(knots)
}

/// Averages each left-half knot with the mirror image of its partner and
/// writes the right half as `a + b - x`. When `a` and `b` allow it, the left
/// half is first rounded to a fixed-point grid on which mirroring and
/// differencing are exact, so mirrored interval lengths agree bit for bit.
pub(crate) fn symmetrize(knots: &mut [f64]) {
    let n = knots.len() - 1;
    let (a, b) = (knots[0], knots[n]);
    let grid = mirror_grid(a, b);
    for k in 1..=(n - 1) / 2 {
        let mut left = 0.5 * (knots[k] + (a + b - knots[n - k]));
        if let Some(u) = grid {
            left = (left / u).round() * u;
        }
        knots[k] = left;
        knots[n - k] = a + b - left;
    }
    if n.is_multiple_of(2) && n > 0 {
        knots[n / 2] = 0.5 * (a + b);
    }
}

/// Spacing `u` such that every multiple of `u` up to `|a| + |b|` in
/// magnitude is representable, provided `a` and `b` are multiples of it.
fn mirror_grid(a: f64, b: f64) -> Option<f64> {
    let span = a.abs() + b.abs();
    if !span.is_normal() {
        return None;
    }
    let u = 2f64.powi(span.log2().ceil() as i32 - 53);
    let on_grid = |x: f64| (x / u).fract() == 0.0;
    (u.is_normal() && on_grid(a) && on_grid(b)).then_some(u)
}

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    format!("{x:.16e}")
}

pub(crate) fn json_array(xs: &[f64]) -> String {
    let body: Vec<String> = xs.iter().map(|&x| fmt17(x)).collect();
    format!("[{}]", body.join(","))
}
