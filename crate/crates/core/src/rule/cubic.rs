//! Real roots of a cubic on a bounded open interval.

/// `c[0] + c[1] x + c[2] x^2 + c[3] x^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic(pub [f64; 4]);

const GRID: usize = 64;
const RESIDUAL_REL: f64 = 1e-14;
const WIDTH_REL: f64 = 1e-15;
const MAX_ITER: usize = 200;

impl Cubic {
    pub fn eval(&self, x: f64) -> f64 {
        let c = &self.0;
        ((c[3] * x + c[2]) * x + c[1]) * x + c[0]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let c = &self.0;
        (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1]
    }

    fn scale(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Largest root in `(lo, hi)` among those isolated by sign changes on a
    /// 64-cell grid, refined by safeguarded Newton. `hi` is returned when
    /// Newton's distance estimate from it is below the refinement width: a
    /// root that close to the end can lose its sign change to rounding.
    pub fn largest_root_in(&self, lo: f64, hi: f64) -> Option<f64> {
        let step = (hi - lo) / GRID as f64;
        let width = WIDTH_REL * (hi - lo);
        let f_hi = self.eval(hi);
        let d_hi = self.derivative(hi);
        if f_hi == 0.0 || (d_hi != 0.0 && (f_hi / d_hi).abs() <= width) {
            return Some(hi);
        }
        let mut right = hi;
        let mut f_right = f_hi;
        for i in (0..GRID).rev() {
            let left = if i == 0 { lo } else { lo + step * i as f64 };
            let f_left = self.eval(left);
            if f_right == 0.0 && right < hi {
                return Some(right);
            }
            if (f_left < 0.0) != (f_right < 0.0) && f_left != 0.0 {
                return Some(self.refine(left, right, f_left, width));
            }
            right = left;
            f_right = f_left;
        }
        None
    }

    /// Safeguarded Newton inside a sign-change bracket. Stops once the
    /// residual is below `1e-14 * max|coef|` and the root is pinned to within
    /// `width` (bracket width, or Newton's distance estimate).
    fn refine(&self, mut lo: f64, mut hi: f64, f_lo: f64, width: f64) -> f64 {
        let tol_f = RESIDUAL_REL * self.scale();
        let lo_negative = f_lo < 0.0;
        let mut x = 0.5 * (lo + hi);
        for _ in 0..MAX_ITER {
            let fx = self.eval(x);
            if fx == 0.0 {
                return x;
            }
            if (fx < 0.0) == lo_negative {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.derivative(x);
            let newton = if d != 0.0 { x - fx / d } else { f64::NAN };
            let pinned = hi - lo <= width || (newton - x).abs() <= 0.5 * width;
            if fx.abs() <= tol_f && pinned {
                break;
            }
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if next == x {
                break;
            }
            x = next;
        }
        x
    }
}
