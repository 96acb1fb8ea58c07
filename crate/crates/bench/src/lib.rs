//! Fixtures shared by the benchmarks.

use spline_gauss::{gen_chebyshev, gen_geometric, gen_uniform, KnotSequence};

/// Named knot sequences of increasing size on `[0, 1]`.
pub fn fixtures() -> Vec<(String, KnotSequence)> {
    let mut out = Vec::new();
    for big_n in [9, 39, 199] {
        out.push((format!("chebyshev/N={big_n}"), gen_chebyshev(big_n, 0.0, 1.0).unwrap()));
    }
    out.push(("geometric-q1.1/N=40".into(), gen_geometric(40, 1.1, 0.0, 1.0).unwrap()));
    out.push(("uniform/n=1000".into(), gen_uniform(1000, 0.0, 1.0).unwrap()));
    out
}
