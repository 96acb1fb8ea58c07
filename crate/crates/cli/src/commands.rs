use std::fmt::Debug;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::Serialize;
use serde_json::json;
use spline_gauss::oracle::{random_spline, Lcg64};
use spline_gauss::peano::{constant_closed_form, kernel_csv, kernel_sign_scan, ErrorConstant, SignScan};
use spline_gauss::rule::{weights_increase_to_middle, NodeLayout};
use spline_gauss::{
    compute_rule, eval_spline, exact_integral, gen_chebyshev, gen_geometric, gen_legendre, gen_uniform,
    parse_knot_text, KnotError, KnotFileError, KnotSequence, QuadratureRule,
};
use thiserror::Error;

use crate::args::{Family, Format, KnotArgs};

pub const SEED_ENV: &str = "SPLINE_GAUSS_SEED";
const EXACTNESS_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{name}: {message}")]
    Invalid { name: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Variant name of an error, taken from its `Debug` form.
fn error_name<E: Debug>(e: &E) -> String {
    format!("{e:?}").chars().take_while(|c| c.is_alphanumeric()).collect()
}

fn invalid<E: Debug + std::fmt::Display>(e: E) -> CliError {
    CliError::Invalid { name: error_name(&e), message: e.to_string() }
}

fn from_generator(e: KnotError) -> CliError {
    match e {
        KnotError::TooFew(_) | KnotError::InvalidRatio(_) | KnotError::InvalidParameter(_) => {
            CliError::Usage(e.to_string())
        }
        other => invalid(other),
    }
}

fn from_file(e: KnotFileError) -> CliError {
    match e {
        KnotFileError::Invalid(inner) => invalid(inner),
        other => invalid(other),
    }
}

fn io_error(path: &str) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_string(), source }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn write_out(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(io_error(&path.display().to_string())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io_error("<stdout>")),
    }
}

fn domain(args: &KnotArgs) -> (f64, f64) {
    match args.domain.as_deref() {
        Some([a, b]) => (*a, *b),
        _ => (0.0, 1.0),
    }
}

/// Internal-knot count `N`, from `--N` or `--n` (= N + 1).
fn internal_count(args: &KnotArgs) -> Result<usize, CliError> {
    match (args.big_n, args.n) {
        (Some(_), Some(_)) => Err(usage("give either --N or --n, not both")),
        (Some(big_n), None) => Ok(big_n),
        (None, Some(0)) => Err(usage("--n must be at least 1")),
        (None, Some(n)) => Ok(n - 1),
        (None, None) => Err(usage("missing --N (internal knots) or --n (intervals)")),
    }
}

fn family(args: &KnotArgs) -> Result<Family, CliError> {
    match (args.family, &args.knots_file) {
        (Some(Family::File) | None, Some(_)) => Ok(Family::File),
        (Some(f), Some(_)) => Err(usage(format!("--knots-file conflicts with --family {f:?}").to_lowercase())),
        (Some(Family::File), None) => Err(usage("--family file needs --knots-file")),
        (Some(f), None) => Ok(f),
        (None, None) => Err(usage("missing knot source: --family or --knots-file")),
    }
}

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io_error("<stdin>"))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(io_error(path))
    }
}

fn geometric(big_n: usize, q: f64, a: f64, b: f64) -> Result<KnotSequence, CliError> {
    gen_geometric(big_n, q, a, b).map_err(from_generator)
}

pub fn load_knots(args: &KnotArgs) -> Result<KnotSequence, CliError> {
    let fam = family(args)?;
    if args.q.is_some() && fam != Family::Geometric {
        return Err(usage("--q only applies to --family geometric"));
    }
    let (a, b) = domain(args);
    let knots = match fam {
        Family::File => {
            if args.big_n.is_some() || args.n.is_some() || args.domain.is_some() {
                return Err(usage("--N, --n and --domain do not apply to knot files"));
            }
            let path = args.knots_file.as_deref().expect("checked by family()");
            parse_knot_text(&read_source(path)?).map_err(from_file)?
        }
        Family::Uniform => gen_uniform(internal_count(args)? + 1, a, b).map_err(from_generator)?,
        Family::Chebyshev => gen_chebyshev(internal_count(args)?, a, b).map_err(from_generator)?,
        Family::Legendre => gen_legendre(internal_count(args)?, a, b).map_err(from_generator)?,
        Family::Geometric => {
            let q = args.q.ok_or_else(|| usage("--family geometric needs --q"))?;
            geometric(internal_count(args)?, q, a, b)?
        }
    };
    Ok(if args.normalize { knots.normalized() } else { knots })
}

fn build_rule(knots: &KnotSequence) -> Result<QuadratureRule, CliError> {
    compute_rule(knots).map_err(invalid)
}

fn join_shortest(xs: &[f64], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn gen_knots(args: &KnotArgs, format: Format, output: Option<&Path>) -> Result<ExitCode, CliError> {
    let knots = load_knots(args)?;
    let text = match format {
        Format::Pretty => format!("{}\n", join_shortest(knots.knots(), ",")),
        Format::Json => format!("{}\n", knots.to_json()),
        Format::Csv => {
            let mut out = String::from("k,x\n");
            for (k, x) in knots.knots().iter().enumerate() {
                out.push_str(&format!("{k},{x}\n"));
            }
            out
        }
    };
    write_out(output, &text)?;
    Ok(ExitCode::SUCCESS)
}

/// Left half including the middle node, six decimals.
fn pretty_rule(rule: &QuadratureRule) -> String {
    rule.nodes()
        .iter()
        .zip(rule.weights())
        .take(rule.left_half_len())
        .map(|(t, w)| format!("{t:.6} {w:.6}\n"))
        .collect()
}

pub fn rule(args: &KnotArgs, format: Format, output: Option<&Path>) -> Result<ExitCode, CliError> {
    let rule = build_rule(&load_knots(args)?)?;
    let text = match format {
        Format::Pretty => pretty_rule(&rule),
        Format::Json => format!("{}\n", rule.to_json()),
        Format::Csv => rule.to_csv(),
    };
    write_out(output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn effective_seed(seed: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("{SEED_ENV} is not an unsigned integer: {v:?}"))),
        Err(_) => Ok(seed),
    }
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    #[serde(flatten)]
    detail: serde_json::Value,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    passed: bool,
    failures: Vec<&'static str>,
    n: usize,
    a: f64,
    b: f64,
    seed: u64,
    trials: usize,
    perturb: Option<f64>,
    checks: Vec<Check>,
    weights_increase_to_middle: bool,
}

fn exactness_check(rule: &QuadratureRule, seed: u64, trials: usize) -> Check {
    let mut rng = Lcg64::new(seed);
    let knots = rule.knots();
    let mut worst: f64 = 0.0;
    let mut failed = 0;
    for _ in 0..trials {
        let s = random_spline(knots, rng.next_u64());
        let exact = exact_integral(&s);
        let err = (rule.apply(|t| eval_spline(&s, t)) - exact).abs() / (1.0 + exact.abs());
        worst = worst.max(err);
        failed += usize::from(!(err <= EXACTNESS_TOL));
    }
    Check {
        name: "exactness",
        passed: failed == 0,
        detail: json!({ "trials": trials, "failed_trials": failed, "max_error": worst, "tolerance": EXACTNESS_TOL }),
    }
}

fn kernel_check(scan: &SignScan) -> Check {
    Check {
        name: "kernel_sign",
        passed: scan.passed(),
        detail: json!({
            "samples": scan.samples,
            "min_value": scan.min_value,
            "min_location": scan.min_location,
            "near_zeros": scan.near_zeros,
            "stray_zeros": scan.stray_zeros,
        }),
    }
}

pub fn verify(
    args: &KnotArgs,
    seed: u64,
    trials: usize,
    perturb: Option<f64>,
    output: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let seed = effective_seed(seed)?;
    let knots = load_knots(args)?;
    let mut rule = build_rule(&knots)?;
    if let Some(delta) = perturb {
        rule = rule.with_perturbed_weight(1, delta);
    }

    let mut checks = vec![exactness_check(&rule, seed, trials)];
    checks.push(Check {
        name: "weight_positivity",
        passed: rule.weights().iter().all(|&w| w > 0.0),
        detail: json!({ "min_weight": rule.weights().iter().copied().fold(f64::INFINITY, f64::min) }),
    });
    let layout = NodeLayout::of(&rule);
    checks.push(Check {
        name: "node_layout",
        passed: layout.matches_expected(),
        detail: json!({
            "per_interval": layout.per_interval,
            "on_knots": layout.on_knots,
            "collapsed": layout.collapsed,
        }),
    });
    let samples = 10_000usize.div_ceil(rule.nodes().len() + 1);
    checks.push(kernel_check(&kernel_sign_scan(&rule, samples)));
    let constant = ErrorConstant::of(&rule);
    let closed = constant_closed_form(&rule);
    checks.push(Check {
        name: "error_constant",
        passed: constant.numeric > 0.0 && constant.numeric_matches_oracle(),
        detail: json!({
            "numeric": constant.numeric,
            "quartic_oracle": constant.quartic_oracle,
            "closed_form": closed,
        }),
    });

    let failures: Vec<&'static str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let report = VerifyReport {
        passed: failures.is_empty(),
        failures,
        n: knots.n(),
        a: knots.a(),
        b: knots.b(),
        seed,
        trials,
        perturb,
        weights_increase_to_middle: weights_increase_to_middle(&rule),
        checks,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    write_out(output, &text)?;
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn parse_sweep(range: &str) -> Result<Vec<f64>, CliError> {
    let bad = || usage(format!("--q-sweep expects START:END:STEP, got {range:?}"));
    let parts: Vec<f64> = range.split(':').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let [start, end, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + step * i as f64).collect())
}

fn trend(values: &[f64]) -> &'static str {
    if values.windows(2).all(|w| w[1] > w[0]) {
        "increasing"
    } else if values.windows(2).all(|w| w[1] < w[0]) {
        "decreasing"
    } else {
        "non-monotone"
    }
}

pub fn kernel(
    args: &KnotArgs,
    grid: usize,
    q_sweep: Option<&str>,
    output_dir: &Path,
    output: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let Some(range) = q_sweep else {
        let rule = build_rule(&load_knots(args)?)?;
        write_out(output, &kernel_csv(&rule, grid))?;
        return Ok(ExitCode::SUCCESS);
    };
    if !matches!(args.family, None | Some(Family::Geometric)) || args.knots_file.is_some() || args.q.is_some() {
        return Err(usage("--q-sweep applies to geometric knots and replaces --q"));
    }
    let qs = parse_sweep(range)?;
    let big_n = internal_count(args)?;
    let (a, b) = domain(args);
    std::fs::create_dir_all(output_dir).map_err(io_error(&output_dir.display().to_string()))?;
    let mut constants = Vec::with_capacity(qs.len());
    let mut files: Vec<PathBuf> = Vec::with_capacity(qs.len());
    for &q in &qs {
        let mut knots = geometric(big_n, q, a, b)?;
        if args.normalize {
            knots = knots.normalized();
        }
        let rule = build_rule(&knots)?;
        let csv = kernel_csv(&rule, grid);
        let path = output_dir.join(format!("kernel_q{q:.4}.csv"));
        write_out(Some(&path), &csv)?;
        constants.push(ErrorConstant::of(&rule).numeric);
        files.push(path);
    }
    let summary = json!({
        "N": big_n,
        "q": qs,
        "constant": constants,
        "trend": trend(&constants),
        "files": files,
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    write_out(output, &text)?;
    Ok(ExitCode::SUCCESS)
}
