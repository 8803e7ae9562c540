//! Command-line front end.
//!
//! Every subcommand prints `{"meta": {...}, "result": ...}` in JSON mode, with
//! big integers as decimal strings and rationals as `"p/q"`. Exit codes: 0 ok,
//! 1 failed verification, 2 usage or domain error, 3 budget exceeded.

use std::fmt::Write as _;
use std::io::Write as _;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::critical::{bootstrap_diagnostics, linearize, solve_critical, DEFAULT_TOL};
use crate::cube::Dim;
use crate::error::Error;
use crate::expansion::{expand_amplitude_with, expand_mu_with, expand_z_with, CountSource};
use crate::lace::pi::{pi_as_n_polynomial, pi_by_lace_size, universal_table};
use crate::saw::{bubble, count_saw_by_endpoint, expected_length, EnumConfig, Truncation};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "cubesaw", version, about = "Self-avoiding walks and the lace expansion on the hypercube")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CUBESAW_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = ScalarMode::Exact)]
    pub scalar_mode: ScalarMode,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Maximum number of search nodes or walks.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Z,
    Mu,
    Amplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Builtin,
    Enumerated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LaceView {
    /// `π_m^{(M)}(x)` by Hamming weight on `Q^N`.
    Profile,
    /// `π_{k,δ}^{(M)}`.
    Universal,
    /// `π_k^{(M)}(N)` as polynomials.
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    Recursion,
    Resummation,
    Walsh,
    Inequalities,
    Goldens,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase", tag = "subcommand")]
pub enum Command {
    /// SAW counts by length and endpoint weight, optionally χ(z).
    Enumerate {
        #[arg(long)]
        n_dim: u32,
        /// Defaults to V - 1 (every count).
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        z: Option<String>,
        /// Include the per-weight endpoint profile.
        #[arg(long)]
        profile: bool,
    },
    /// Critical point z_N(λ), μ_N and, with --p, the linearization and bootstrap functions.
    Critical {
        #[arg(long)]
        n_dim: u32,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long)]
        p: Option<String>,
    },
    /// Lace-expansion coefficients.
    Lace {
        #[arg(long, value_enum, default_value_t = LaceView::Profile)]
        view: LaceView,
        #[arg(long)]
        n_dim: Option<u32>,
        /// m for profiles, k for the universal counts and polynomials.
        #[arg(long)]
        max_steps: u32,
        /// Restrict to one lace size.
        #[arg(long)]
        big_m: Option<usize>,
    },
    /// 1/N expansion coefficients.
    Expand {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Source::Builtin)]
        source: Source,
    },
    /// Built-in verification suites.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        n_dim: Option<u32>,
        #[arg(long)]
        max_steps: Option<u32>,
    },
    /// Bubble diagram B(z) = Σ_x G_z(x)^2.
    Bubble {
        #[arg(long)]
        n_dim: u32,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        z: String,
    },
    /// Expected length z χ'(z) / χ(z).
    Length {
        #[arg(long)]
        n_dim: u32,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        z: String,
    },
}

/// Why a run stopped early.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Lib(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            Failure::Lib(Error::Invariant(_)) | Failure::Lib(Error::Inexact(_)) => EXIT_VERIFY_FAILED,
            Failure::Io(_) => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Lib(e) => (e.kind(), e.to_string()),
            Failure::Io(e) => ("io", e.to_string()),
        };
        json!({"error": {"kind": kind, "message": message}})
    }
}

/// Parses a rational from `"p/q"`, an integer or a decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Ok(q) = BigRational::from_str(s) {
        return Some(q);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = BigInt::from_str(&format!("{int}{frac}")).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(digits * sign, denom))
}

fn rational_arg(name: &str, s: &str) -> Result<BigRational, Failure> {
    parse_rational(s).ok_or_else(|| Failure::Usage(format!("--{name} {s:?} is not a rational number")))
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// A rational in the configured scalar mode.
fn scalar(mode: ScalarMode, q: &BigRational) -> Value {
    match mode {
        ScalarMode::Exact => Value::String(q.to_string()),
        ScalarMode::Float => json!(to_f64(q)),
    }
}

fn steps_for(dim: Dim, max_steps: Option<usize>) -> Result<usize, Failure> {
    Ok(match max_steps {
        Some(n) => n,
        None => Truncation::Full.max_steps(dim)?,
    })
}

/// The rendered result in each format.
struct Output {
    json: Value,
    /// Header and rows for CSV; tables only.
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    text: String,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, table: None, text }
    }
}

fn enumerate_cmd(g: &Global, cfg: &EnumConfig, n_dim: u32, max_steps: Option<usize>, z: Option<&str>, profile: bool) -> Result<Output, Failure> {
    let dim = Dim::new(n_dim)?;
    let steps = steps_for(dim, max_steps)?;
    let counts = count_saw_by_endpoint(dim, steps, cfg)?;
    let series = counts.series();
    let coeffs = strings(series.coefficients());
    let mut result = json!({"n_dim": n_dim, "max_steps": steps, "full": series.is_full(), "counts": coeffs});
    let mut text = format!("Q^{n_dim}, n <= {steps}\n");
    for (n, c) in coeffs.iter().enumerate() {
        let _ = writeln!(text, "c_{n} = {c}");
    }
    if profile {
        let rows: Vec<Vec<String>> = counts.rows().iter().map(|r| strings(r)).collect();
        result["profile"] = json!(rows);
    }
    if let Some(z) = z {
        let z = rational_arg("z", z)?;
        let chi = series.susceptibility(&z);
        result["z"] = Value::String(z.to_string());
        result["susceptibility"] = scalar(g.scalar_mode, &chi);
        let _ = writeln!(text, "χ({z}) = {} ≈ {}", chi, to_f64(&chi));
    }
    let mut rows = Vec::new();
    for (n, row) in counts.rows().iter().enumerate() {
        for (w, c) in row.iter().enumerate() {
            rows.push(vec![n.to_string(), w.to_string(), c.to_string()]);
        }
    }
    Ok(Output {
        json: result,
        table: Some((vec!["n", "weight", "count"], rows)),
        text,
    })
}

fn critical_cmd(g: &Global, cfg: &EnumConfig, n_dim: u32, max_steps: Option<usize>, lambda: &str, p: Option<&str>) -> Result<Output, Failure> {
    let dim = Dim::new(n_dim)?;
    let lambda = rational_arg("lambda", lambda)?;
    let steps = steps_for(dim, max_steps)?;
    let profile = count_saw_by_endpoint(dim, steps, cfg)?;
    let series = profile.series();
    let cp = solve_critical(&series, &lambda, DEFAULT_TOL)?;
    let mode = g.scalar_mode;
    let mut result = json!({
        "n_dim": n_dim,
        "lambda": lambda.to_string(),
        "z_n": scalar(mode, &cp.z_exact),
        "z_n_float": cp.z,
        "mu_n": if cp.mu.is_finite() { json!(cp.mu) } else { json!("inf") },
        "tolerance": cp.tol,
        "bracket": [scalar(mode, &cp.bracket.0), scalar(mode, &cp.bracket.1)],
        "relative_residual": cp.relative_residual,
        "max_steps": cp.max_steps,
        "full": cp.full,
    });
    let mut text = format!("z_N = {:.15}\nμ_N = {:.15}\nresidual = {:e}\n", cp.z, cp.mu, cp.relative_residual);
    if let Some(p) = p {
        let p = rational_arg("p", p)?;
        let lin = linearize(&series, &cp, &p)?;
        let zeta = lin.zeta_p.value.clone();
        let boot = bootstrap_diagnostics(&cp, &profile, &zeta)?;
        result["p"] = Value::String(p.to_string());
        result["zeta_p"] = scalar(mode, &zeta);
        result["zeta_p_exact"] = json!(lin.zeta_p.exact);
        result["linearization"] = json!({
            "f_at": scalar(mode, &lin.f_at),
            "f_prime_at": scalar(mode, &lin.f_prime_at),
            "alpha": scalar(mode, &lin.alpha),
            "beta": scalar(mode, &lin.beta),
            "amplitude": scalar(mode, &lin.amplitude),
            "growth_ratio": scalar(mode, &lin.growth_ratio),
            "growth_over_mu": lin.growth_over_mu(&cp),
        });
        result["bootstrap"] = serde_json::to_value(&boot).expect("plain floats");
        let _ = writeln!(
            text,
            "ζ_p = {:.15}\nA_N = {:.15}\nβ/α = {:.15}\nf_1 = {:.6}, f_2 = {:.6}, f_3 = {:.6}",
            to_f64(&zeta),
            to_f64(&lin.amplitude),
            to_f64(&lin.growth_ratio),
            boot.f1,
            boot.f2,
            boot.f3
        );
    }
    Ok(Output::new(result, text))
}

fn lace_cmd(cfg: &EnumConfig, view: LaceView, n_dim: Option<u32>, steps: u32, big_m: Option<usize>) -> Result<Output, Failure> {
    let sizes = |max: usize| -> Vec<usize> { big_m.map_or_else(|| (1..=max).collect(), |m| vec![m]) };
    match view {
        LaceView::Profile => {
            let n_dim = n_dim.ok_or_else(|| Failure::Usage("--n-dim is required for lace profiles".into()))?;
            let dim = Dim::new(n_dim)?;
            let all = pi_by_lace_size(dim, steps, cfg)?;
            let mut entries = Vec::new();
            let mut rows = Vec::new();
            let mut text = String::new();
            for size in sizes(steps as usize) {
                let Some(p) = all.get(size) else { continue };
                entries.push(json!({"big_m": size, "by_weight": strings(&p.by_weight), "total": p.total().to_string()}));
                let _ = writeln!(text, "π_{steps}^({size}) by weight: [{}]", strings(&p.by_weight).join(", "));
                for (w, v) in p.by_weight.iter().enumerate() {
                    rows.push(vec![size.to_string(), w.to_string(), v.to_string()]);
                }
            }
            Ok(Output {
                json: json!({"n_dim": n_dim, "m": steps, "pi": entries}),
                table: Some((vec!["big_m", "weight", "value"], rows)),
                text,
            })
        }
        LaceView::Universal => {
            let table = universal_table(steps, 1)?;
            let mut entries = Vec::new();
            let mut rows = Vec::new();
            let mut text = String::new();
            for delta in 1..steps {
                for size in sizes(steps as usize) {
                    let c = table.get(delta, size).unwrap_or(0);
                    if c == 0 {
                        continue;
                    }
                    entries.push(json!({"delta": delta, "big_m": size, "count": c.to_string()}));
                    rows.push(vec![delta.to_string(), size.to_string(), c.to_string()]);
                    let _ = writeln!(text, "π_({steps},{delta})^({size}) = {c}");
                }
            }
            Ok(Output {
                json: json!({"k": steps, "nonzero": entries}),
                table: Some((vec!["delta", "big_m", "count"], rows)),
                text,
            })
        }
        LaceView::Poly => {
            let mut entries = Vec::new();
            let mut text = String::new();
            for size in sizes(steps as usize) {
                let poly = pi_as_n_polynomial(steps, size)?;
                entries.push(json!({"big_m": size, "coefficients": strings(poly.coeffs()), "display": poly.to_string()}));
                let _ = writeln!(text, "π_{steps}^({size})(N) = {poly}");
            }
            Ok(Output::new(json!({"k": steps, "polynomials": entries}), text))
        }
    }
}

fn expand_cmd(target: Target, order: usize, source: Source) -> Result<Output, Failure> {
    let source = match source {
        Source::Builtin => CountSource::Builtin,
        Source::Enumerated => CountSource::Enumerated,
    };
    Ok(match target {
        Target::Z => {
            let c = strings(&expand_z_with(order, source)?);
            let text = format!("z_N: [{}]\n", c.join(", "));
            Output::new(json!({"target": "z", "order": order, "first_power": 1, "coefficients": c}), text)
        }
        Target::Amplitude => {
            let c = strings(&expand_amplitude_with(order, source)?);
            let text = format!("A_N: [{}]\n", c.join(", "));
            Output::new(json!({"target": "amplitude", "order": order, "first_power": 0, "coefficients": c}), text)
        }
        Target::Mu => {
            let mu = expand_mu_with(order, source)?;
            let text = format!("μ_N = {}\n", mu.series);
            Output::new(
                json!({
                    "target": "mu",
                    "order": order,
                    "first_power": -1,
                    "coefficients": strings(&mu.coefficients),
                    "series": mu.series.to_string(),
                }),
                text,
            )
        }
    })
}

fn observable_cmd(g: &Global, cfg: &EnumConfig, n_dim: u32, max_steps: Option<usize>, z: &str, is_bubble: bool) -> Result<Output, Failure> {
    let dim = Dim::new(n_dim)?;
    let z = rational_arg("z", z)?;
    if z < BigRational::zero() {
        return Err(Failure::Usage("--z must be nonnegative".into()));
    }
    let steps = steps_for(dim, max_steps)?;
    let profile = count_saw_by_endpoint(dim, steps, cfg)?;
    let (name, value) = if is_bubble {
        ("bubble", bubble(&profile, &z)?)
    } else {
        ("expected_length", expected_length(&profile.series(), &z)?)
    };
    let text = format!("{name}({z}) = {} ≈ {}\n", value, to_f64(&value));
    Ok(Output::new(
        json!({"n_dim": n_dim, "z": z.to_string(), "max_steps": steps, "full": profile.is_full(), name: scalar(g.scalar_mode, &value)}),
        text,
    ))
}

fn verify_cmd(cfg: &EnumConfig, suite: SuiteArg, n_dim: Option<u32>, max_steps: Option<u32>) -> Result<(Output, bool), Failure> {
    let suite = match suite {
        SuiteArg::Recursion => Suite::Recursion,
        SuiteArg::Resummation => Suite::Resummation,
        SuiteArg::Walsh => Suite::Walsh,
        SuiteArg::Inequalities => Suite::Inequalities,
        SuiteArg::Goldens => Suite::Goldens,
    };
    let report = run_suite(suite, n_dim, max_steps, cfg)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for c in &report.checks {
        let _ = writeln!(text, "{} {}{}", if c.passed { "PASS" } else { "FAIL" }, c.name, if c.passed { String::new() } else { format!(": {}", c.detail) });
        rows.push(vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]);
    }
    let passed = report.passed();
    let mut json = serde_json::to_value(&report).expect("plain report");
    json["passed"] = json!(passed);
    Ok((
        Output {
            json,
            table: Some((vec!["check", "passed", "detail"], rows)),
            text,
        },
        passed,
    ))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(config: &RunConfig, out: &Output) -> Result<String, Failure> {
    Ok(match config.global.format {
        Format::Json => {
            let doc = json!({
                "meta": {
                    "tool_version": env!("CARGO_PKG_VERSION"),
                    "config_echo": serde_json::to_value(config).expect("plain config"),
                },
                "result": out.json,
            });
            serde_json::to_string_pretty(&doc).expect("valid json") + "\n"
        }
        Format::Text => out.text.clone(),
        Format::Csv => {
            let (header, rows) = out
                .table
                .as_ref()
                .ok_or_else(|| Failure::Usage("this output is not tabular; use --format json or text".into()))?;
            let mut s = header.join(",") + "\n";
            for row in rows {
                s += &row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
                s.push('\n');
            }
            s
        }
    })
}

fn execute(config: &RunConfig) -> Result<i32, Failure> {
    let g = &config.global;
    let mut cfg = EnumConfig::default();
    if let Some(b) = g.budget {
        cfg.budget = b;
    }
    let mut code = EXIT_OK;
    let output = match &config.command {
        Command::Enumerate { n_dim, max_steps, z, profile } => enumerate_cmd(g, &cfg, *n_dim, *max_steps, z.as_deref(), *profile)?,
        Command::Critical { n_dim, max_steps, lambda, p } => critical_cmd(g, &cfg, *n_dim, *max_steps, lambda, p.as_deref())?,
        Command::Lace { view, n_dim, max_steps, big_m } => lace_cmd(&cfg, *view, *n_dim, *max_steps, *big_m)?,
        Command::Expand { target, order, source } => expand_cmd(*target, *order, *source)?,
        Command::Verify { suite, n_dim, max_steps } => {
            let (out, passed) = verify_cmd(&cfg, *suite, *n_dim, *max_steps)?;
            if !passed {
                code = EXIT_VERIFY_FAILED;
            }
            out
        }
        Command::Bubble { n_dim, max_steps, z } => observable_cmd(g, &cfg, *n_dim, *max_steps, z, true)?,
        Command::Length { n_dim, max_steps, z } => observable_cmd(g, &cfg, *n_dim, *max_steps, z, false)?,
    };
    let rendered = render(config, &output)?;
    match &g.out {
        Some(path) => std::fs::write(path, rendered).map_err(Failure::Io)?,
        None => std::io::stdout().write_all(rendered.as_bytes()).map_err(Failure::Io)?,
    }
    Ok(code)
}

fn report(f: &Failure) -> i32 {
    eprintln!("{}", f.to_json());
    f.exit_code()
}

/// Runs a parsed configuration and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    if let Some(threads) = config.global.threads {
        if threads == 0 {
            return report(&Failure::Usage("--threads must be positive".into()));
        }
        // only the first pool per process can be installed; later calls keep it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match execute(config) {
        Ok(code) => code,
        Err(f) => report(&f),
    }
}

/// Parses `args` (including the program name) and runs.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            report(&Failure::Usage(first))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("1/4"), Some(BigRational::new(1.into(), 4.into())));
        assert_eq!(parse_rational("0.25"), Some(BigRational::new(1.into(), 4.into())));
        assert_eq!(parse_rational("-1.5"), Some(BigRational::new((-3).into(), 2.into())));
        assert_eq!(parse_rational("3"), Some(BigRational::from_integer(3.into())));
        assert_eq!(parse_rational(".5"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["cubesaw", "expand", "--target", "z", "--order", "5", "--out", "/dev/null"]), EXIT_OK);
        assert_eq!(main_with_args(["cubesaw", "expand", "--target", "nope"]), EXIT_USAGE);
        assert_eq!(main_with_args(["cubesaw", "critical", "--n-dim", "2", "--lambda", "1/4"]), EXIT_USAGE);
        assert_eq!(
            main_with_args(["cubesaw", "enumerate", "--n-dim", "4", "--max-steps", "10", "--budget", "10", "--out", "/dev/null"]),
            EXIT_BUDGET
        );
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
