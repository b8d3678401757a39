//! The `apollonius` command-line tool.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input, 3 search
//! failure or calibration without a straddling bracket.

pub mod format;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::diophantine::{
    geometric_family, pythagorean_family, quadratic_form_family, verify_identity, FamilyKind,
};
use crate::error::Error;
use crate::fourpoint::{
    cross_ratio_euclid, cross_ratio_hyper, find_witness_euclid, find_witness_hyper, FourConfig,
};
use crate::locus::{
    classify, classify_exact, coefficients, euclidean_locus, sample_curve, EuclideanLocus,
    TripleConfig, DEFAULT_CLASSIFY_EPS,
};
use crate::probability::{
    calibration_report, estimate_pe, estimate_ph, pe_closed_form, pe_quadrature,
    ph_closed_form_printed, ph_quadrature, HyperProbSetup, PH_PRINTED,
};
use format::{fmt_f64, to_json};
use svg::{render_svg, Viewport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SEARCH: i32 = 3;

const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "apollonius",
    version,
    about = "Hyperbolic Apollonius loci, four-point cross-ratio tests and geometric probabilities"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report to this file instead of standard output.
    #[arg(short = 'o', long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,

    /// Also write an SVG plot to PATH (sample only).
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Worker threads for Monte Carlo runs; results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quartic coefficients and regime of the locus for heights a > b > c.
    Classify {
        #[command(flatten)]
        heights: Heights,
        /// Relative tolerance for the boundary regimes.
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_EPS)]
        eps: f64,
        /// Classify with exact integer arithmetic (heights must be integers).
        #[arg(long)]
        exact: bool,
    },
    /// Sample the locus in polar coordinates.
    Sample {
        #[command(flatten)]
        heights: Heights,
        /// Number of polar angles.
        #[arg(short = 'n', default_value_t = 256)]
        n: usize,
    },
    /// Euclidean Apollonius circle (or line) for heights a > b > c.
    EuclidLocus {
        #[command(flatten)]
        heights: Heights,
    },
    /// Cross-ratio existence test for four heights a > b > c > d.
    Fourpoint {
        #[arg(long, value_enum, default_value_t = GeometryArg::Hyper)]
        geometry: GeometryArg,
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: f64,
        #[arg(short = 'b', allow_hyphen_values = true)]
        b: f64,
        #[arg(short = 'c', allow_hyphen_values = true)]
        c: f64,
        #[arg(short = 'd', allow_hyphen_values = true)]
        d: f64,
        /// Also locate a witness point.
        #[arg(long)]
        witness: bool,
    },
    /// Probability that a witness exists for random points.
    Prob(ProbArgs),
    /// Integer triples on the boundary regimes.
    Dioph {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Inclusive range LO:HI for m (p for the geometric family).
        #[arg(long, value_name = "LO:HI", allow_hyphen_values = true, default_value = "1:5")]
        m_range: String,
        /// Inclusive range LO:HI for n (q for the geometric family).
        #[arg(long, value_name = "LO:HI", allow_hyphen_values = true, default_value = "1:5")]
        n_range: String,
        /// Common factor k of the geometric family.
        #[arg(short = 'k', default_value_t = 1)]
        k: i64,
    },
}

#[derive(Debug, Args)]
struct Heights {
    #[arg(short = 'a', allow_hyphen_values = true)]
    a: f64,
    #[arg(short = 'b', allow_hyphen_values = true)]
    b: f64,
    #[arg(short = 'c', allow_hyphen_values = true)]
    c: f64,
}

#[derive(Debug, Args)]
struct ProbArgs {
    #[arg(value_enum)]
    kind: ProbKind,
    /// Number of Monte Carlo samples.
    #[arg(short = 'n', default_value_t = 1_000_000)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Endpoint ratio a/d of the hyperbolic segment.
    #[arg(long, default_value_t = 2.0)]
    ratio: f64,
    /// Include the quadrature value.
    #[arg(long)]
    quadrature: bool,
    /// Search for the ratio reproducing --target instead of sampling (ph only).
    #[arg(long)]
    calibrate: bool,
    #[arg(long, default_value_t = PH_PRINTED)]
    target: f64,
    /// Ratio bracket LO:HI for --calibrate.
    #[arg(long, value_name = "LO:HI", default_value = "1.01:1000")]
    bracket: String,
    /// Tolerance for declaring the target reproduced.
    #[arg(long, default_value_t = 1e-6)]
    match_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeometryArg {
    Euclid,
    Hyper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbKind {
    Pe,
    Ph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Quadratic,
    Geometric,
    Harmonic,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Quadratic => FamilyKind::QuadraticMean,
            FamilyArg::Geometric => FamilyKind::GeometricMean,
            FamilyArg::Harmonic => FamilyKind::HarmonicQuadratic,
        }
    }
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(flag: &str, reason: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: format!("invalid value for {flag}: {reason}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchFailure(_) | Error::NoStraddle { .. } => EXIT_SEARCH,
            Error::EmptyInput => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

/// What a subcommand produced: text for the main output and optionally an
/// exit code other than success.
struct Report {
    text: String,
    code: i32,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, code: EXIT_OK }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let report = match cli.threads {
        Some(0) => return Err(Failure::invalid("--threads", "must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure {
                    code: EXIT_INTERNAL,
                    message: e.to_string(),
                })?;
            pool.install(|| dispatch(cli))?
        }
        None => dispatch(cli)?,
    };
    match &cli.output {
        Some(path) => fs::write(path, &report.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(report.text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(report.code)
}

fn requested_format(cli: &Cli, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let f = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        default
    };
    if !allowed.contains(&f) {
        let flag = if f == Format::Json { "--json" } else { "--csv" };
        return Err(Failure::invalid(flag, "format not supported by this command"));
    }
    Ok(f)
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    if cli.svg.is_some() && !matches!(cli.command, Command::Sample { .. }) {
        return Err(Failure::invalid("--svg", "only the sample command draws plots"));
    }
    match &cli.command {
        Command::Classify { heights, eps, exact } => {
            requested_format(cli, Format::Json, &[Format::Json])?;
            run_classify(heights, *eps, *exact)
        }
        Command::Sample { heights, n } => {
            requested_format(cli, Format::Csv, &[Format::Csv])?;
            run_sample(cli, heights, *n)
        }
        Command::EuclidLocus { heights } => {
            requested_format(cli, Format::Json, &[Format::Json])?;
            run_euclid_locus(heights)
        }
        Command::Fourpoint {
            geometry,
            a,
            b,
            c,
            d,
            witness,
        } => {
            requested_format(cli, Format::Json, &[Format::Json])?;
            run_fourpoint(*geometry, [*a, *b, *c, *d], *witness)
        }
        Command::Prob(args) => {
            requested_format(cli, Format::Json, &[Format::Json])?;
            run_prob(args)
        }
        Command::Dioph {
            family,
            m_range,
            n_range,
            k,
        } => {
            requested_format(cli, Format::Csv, &[Format::Csv])?;
            run_dioph(*family, m_range, n_range, *k)
        }
    }
}

/// Checks each flag in order so the message names the offending one.
fn validate_heights(flags: &[(&str, f64)], positive_last: bool) -> CliResult<()> {
    for (flag, v) in flags {
        if !v.is_finite() {
            return Err(Failure::invalid(flag, "must be finite"));
        }
    }
    for w in flags.windows(2) {
        if !(w[0].1 > w[1].1) {
            return Err(Failure::invalid(
                w[1].0,
                format!("must be less than {} ({} >= {})", w[0].0, w[1].1, w[0].1),
            ));
        }
    }
    if positive_last {
        let (flag, v) = flags[flags.len() - 1];
        if !(v > 0.0) {
            return Err(Failure::invalid(flag, format!("must be positive, got {v}")));
        }
    }
    Ok(())
}

fn triple(h: &Heights) -> CliResult<TripleConfig> {
    validate_heights(&[("-a", h.a), ("-b", h.b), ("-c", h.c)], true)?;
    Ok(TripleConfig::new(h.a, h.b, h.c)?)
}

#[derive(Serialize)]
struct ClassifyJson {
    a: f64,
    b: f64,
    c: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    class: &'static str,
}

fn as_integer(flag: &str, v: f64) -> CliResult<BigInt> {
    if v.fract() != 0.0 || v.abs() > 9.007_199_254_740_992e15 {
        return Err(Failure::invalid(flag, format!("--exact needs an integer, got {v}")));
    }
    Ok(BigInt::from(v as i64))
}

fn run_classify(h: &Heights, eps: f64, exact: bool) -> CliResult<Report> {
    let cfg = triple(h)?;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Failure::invalid("--eps", "must be a non-negative number"));
    }
    let class = if exact {
        classify_exact(
            &as_integer("-a", h.a)?,
            &as_integer("-b", h.b)?,
            &as_integer("-c", h.c)?,
        )?
    } else {
        classify(&cfg, eps)
    };
    let k = coefficients(&cfg);
    Ok(Report::ok(to_json(&ClassifyJson {
        a: cfg.a(),
        b: cfg.b(),
        c: cfg.c(),
        alpha: k.alpha,
        beta: k.beta,
        gamma: k.gamma,
        class: class.name(),
    })))
}

fn run_sample(cli: &Cli, h: &Heights, n: usize) -> CliResult<Report> {
    let cfg = triple(h)?;
    if n < 2 {
        return Err(Failure::invalid("-n", format!("need at least 2 angles, got {n}")));
    }
    let samples = sample_curve(&cfg, n)?;
    if let Some(path) = &cli.svg {
        let doc = render_svg(&samples, Viewport::default()).map_err(|e| match e {
            Error::EmptyInput => Failure {
                code: EXIT_INTERNAL,
                message: "the curve has no points on this grid".into(),
            },
            e => e.into(),
        })?;
        fs::write(path, doc)?;
        if !cli.csv && cli.output.is_none() {
            return Ok(Report::ok(String::new()));
        }
    }
    let mut text = String::from("theta,r,x,y\n");
    for s in &samples {
        text.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(s.theta),
            fmt_f64(s.r),
            fmt_f64(s.point.x),
            fmt_f64(s.point.y)
        ));
    }
    Ok(Report::ok(text))
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum EuclidLocusShape {
    Line { height: f64 },
    Circle { center_y: f64, radius: f64 },
}

#[derive(Serialize)]
struct EuclidLocusJson {
    a: f64,
    b: f64,
    c: f64,
    locus: EuclidLocusShape,
}

fn run_euclid_locus(h: &Heights) -> CliResult<Report> {
    let cfg = triple(h)?;
    let locus = match euclidean_locus(&cfg) {
        EuclideanLocus::HorizontalLine { height } => EuclidLocusShape::Line { height },
        EuclideanLocus::Circle { center_y, radius } => {
            EuclidLocusShape::Circle { center_y, radius }
        }
    };
    Ok(Report::ok(to_json(&EuclidLocusJson {
        a: cfg.a(),
        b: cfg.b(),
        c: cfg.c(),
        locus,
    })))
}

#[derive(Serialize)]
struct PointJson {
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct FourpointJson {
    geometry: &'static str,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    cross_ratio: f64,
    exists: bool,
    witness: Option<PointJson>,
}

fn run_fourpoint(geometry: GeometryArg, h: [f64; 4], want_witness: bool) -> CliResult<Report> {
    let flags = [("-a", h[0]), ("-b", h[1]), ("-c", h[2]), ("-d", h[3])];
    validate_heights(&flags, geometry == GeometryArg::Hyper)?;
    let (cfg, cross_ratio, witness) = match geometry {
        GeometryArg::Euclid => {
            let cfg = FourConfig::euclid(h[0], h[1], h[2], h[3])?;
            let w = if want_witness { find_witness_euclid(&cfg)? } else { None };
            (cfg, cross_ratio_euclid(&cfg)?, w)
        }
        GeometryArg::Hyper => {
            let cfg = FourConfig::hyper(h[0], h[1], h[2], h[3])?;
            let w = if want_witness { find_witness_hyper(&cfg)? } else { None };
            (cfg, cross_ratio_hyper(&cfg)?, w)
        }
    };
    Ok(Report::ok(to_json(&FourpointJson {
        geometry: cfg.geometry.name(),
        a: cfg.a,
        b: cfg.b,
        c: cfg.c,
        d: cfg.d,
        cross_ratio,
        exists: cross_ratio < crate::fourpoint::CROSS_RATIO_BOUND,
        witness: witness.map(|w| PointJson { x: w.x, y: w.y }),
    })))
}

#[derive(Serialize)]
struct ProbJson {
    kind: &'static str,
    n: u64,
    seed: u64,
    ratio: Option<f64>,
    mean: f64,
    stderr: f64,
    closed_form: f64,
    quadrature: Option<f64>,
}

#[derive(Serialize)]
struct CandidateJson {
    ratio: f64,
    value: f64,
}

#[derive(Serialize)]
struct CalibrationJson {
    kind: &'static str,
    target: f64,
    bracket: [f64; 2],
    ratio: Option<f64>,
    value: Option<f64>,
    reproduces: bool,
    match_tol: f64,
    candidates: Vec<CandidateJson>,
}

fn parse_range<T: std::str::FromStr>(flag: &str, s: &str) -> CliResult<(T, T)> {
    let parsed = s
        .split_once(':')
        .and_then(|(lo, hi)| Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?)));
    parsed.ok_or_else(|| Failure::invalid(flag, format!("expected LO:HI, got {s:?}")))
}

fn run_prob(args: &ProbArgs) -> CliResult<Report> {
    if args.n == 0 {
        return Err(Failure::invalid("-n", "need at least one sample"));
    }
    match args.kind {
        ProbKind::Pe => {
            if args.calibrate {
                return Err(Failure::invalid("--calibrate", "only applies to ph"));
            }
            let est = estimate_pe(args.n, args.seed)?;
            let quadrature = args
                .quadrature
                .then(|| pe_quadrature(QUADRATURE_TOL))
                .transpose()?;
            Ok(Report::ok(to_json(&ProbJson {
                kind: "pe",
                n: est.n,
                seed: est.seed,
                ratio: None,
                mean: est.mean,
                stderr: est.stderr,
                closed_form: pe_closed_form(),
                quadrature,
            })))
        }
        ProbKind::Ph if args.calibrate => {
            let (lo, hi): (f64, f64) = parse_range("--bracket", &args.bracket)?;
            if !(lo > 1.0 && hi > lo && hi.is_finite()) {
                return Err(Failure::invalid("--bracket", "need 1 < LO < HI"));
            }
            if !(args.match_tol > 0.0) {
                return Err(Failure::invalid("--match-tol", "must be positive"));
            }
            let report = calibration_report(args.target, (lo, hi), args.match_tol)?;
            let code = if report.ratio.is_some() { EXIT_OK } else { EXIT_SEARCH };
            let text = to_json(&CalibrationJson {
                kind: "ph-calibration",
                target: report.target,
                bracket: [lo, hi],
                ratio: report.ratio,
                value: report.value,
                reproduces: report.reproduces,
                match_tol: report.match_tol,
                candidates: report
                    .candidates
                    .iter()
                    .map(|&(ratio, value)| CandidateJson { ratio, value })
                    .collect(),
            });
            if code != EXIT_OK {
                eprintln!("error: no ratio in [{lo}, {hi}] reaches the target {}", args.target);
            }
            Ok(Report { text, code })
        }
        ProbKind::Ph => {
            let setup = HyperProbSetup::new(args.ratio)
                .map_err(|_| Failure::invalid("--ratio", format!("must be > 1, got {}", args.ratio)))?;
            let est = estimate_ph(args.n, args.seed, &setup)?;
            let quadrature = args
                .quadrature
                .then(|| ph_quadrature(&setup, QUADRATURE_TOL))
                .transpose()?;
            Ok(Report::ok(to_json(&ProbJson {
                kind: "ph",
                n: est.n,
                seed: est.seed,
                ratio: Some(setup.ratio()),
                mean: est.mean,
                stderr: est.stderr,
                closed_form: ph_closed_form_printed(),
                quadrature,
            })))
        }
    }
}

fn run_dioph(family: FamilyArg, m_range: &str, n_range: &str, k: i64) -> CliResult<Report> {
    let (m_lo, m_hi): (i64, i64) = parse_range("--m-range", m_range)?;
    let (n_lo, n_hi): (i64, i64) = parse_range("--n-range", n_range)?;
    for (flag, lo, hi) in [("--m-range", m_lo, m_hi), ("--n-range", n_lo, n_hi)] {
        if lo > hi {
            return Err(Failure::invalid(flag, "LO must not exceed HI"));
        }
        if lo.abs().max(hi.abs()) > 1_000_000_000 {
            return Err(Failure::invalid(flag, "bounds must lie within ±1e9"));
        }
    }
    if family == FamilyArg::Geometric && k <= 0 {
        return Err(Failure::invalid("-k", "must be positive"));
    }
    let kind = FamilyKind::from(family);
    let mut text = String::from("m,n,a,b,c,kind,verified\n");
    for m in m_lo..=m_hi {
        for n in n_lo..=n_hi {
            let triple = match family {
                FamilyArg::Quadratic => pythagorean_family(m, n),
                FamilyArg::Geometric => geometric_family(m, n, k),
                FamilyArg::Harmonic => quadratic_form_family(m, n),
            };
            // Degenerate parameter pairs produce no row.
            let Ok(t) = triple else { continue };
            text.push_str(&format!(
                "{m},{n},{},{},{},{},{}\n",
                t.a,
                t.b,
                t.c,
                kind.name(),
                verify_identity(&t, kind)
            ));
        }
    }
    Ok(Report::ok(text))
}
